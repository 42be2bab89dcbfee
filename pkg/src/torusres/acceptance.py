"""The acceptance suite: one callable per criterion, each with a full and a
quick variant.  Every check is deterministic (fixed seeds per criterion), so
recorded constants reproduce bit-for-bit across reruns.

Used by ``tests/test_acceptance.py`` and by the CLI ``verify`` subcommand.
"""

from __future__ import annotations

import math
import time
import zlib
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import gowers as gw
from . import lattice as lat
from . import parallelograms as par
from . import resonance as res
from . import schrodinger as sch
from . import solver as sol

TWO_PI = 2.0 * math.pi

# recorded empirical constants (frozen from the reference corpus; reruns are
# deterministic so these are stability assertions, not tuning knobs)
INCIDENCE_CONSTANT = 4.0        # covers both rich-line and incidence ratios
KERNEL_RATIO_CONSTANT = 32.0    # peak/bound over the kernel corpus


def rng_for(seed: int, tag: str) -> np.random.Generator:
    """Counter-style generator keyed on (seed, tag)."""
    return np.random.default_rng([seed, zlib.crc32(tag.encode())])


@dataclass
class CheckResult:
    index: int
    name: str
    passed: bool
    detail: str
    seconds: float


def _result(index: int, name: str, passed: bool, detail: str, t0: float) -> CheckResult:
    return CheckResult(index, name, bool(passed), detail, time.time() - t0)


# --- 1 -----------------------------------------------------------------

def check_l4_identity(quick: bool = False, seed: int = 0) -> CheckResult:
    t0 = time.time()
    rng = rng_for(seed, "l4-identity")
    n_states = 12 if quick else 50
    worst = 0.0
    for _ in range(n_states):
        kmax = int(rng.integers(4, 65))
        n_modes = int(rng.integers(2, min(201, (2 * kmax + 1) ** 2)))
        state = sch.random_state(rng, n_modes, kmax)
        hist = sch.state_histogram(state)
        for t in rng.uniform(0.0, TWO_PI, 4 if quick else 20):
            a = sch.quartic_density(state, float(t), histogram=hist)
            b = sch.quartic_density(state, float(t), method="quadrature")
            worst = max(worst, abs(a - b) / max(abs(a), abs(b), 1e-300))
    return _result(1, "L4 combinatorial vs quadrature", worst <= 1e-8,
                   f"{n_states} states, worst rel {worst:.2e} (tol 1e-8)", t0)


# --- 2 -----------------------------------------------------------------

def check_two_mode(quick: bool = False, seed: int = 0) -> CheckResult:
    t0 = time.time()
    state = sch.FourierState({(0, 0): 1.0, (1, 0): 1.0})
    hist = sch.state_histogram(state)
    target = 6.0 * TWO_PI ** 2
    worst = 0.0
    for t in np.linspace(0.0, TWO_PI, 40):
        worst = max(worst, abs(sch.quartic_density(state, float(t), histogram=hist) - target))
    worst /= target
    return _result(2, "two-mode closed form 6(2pi)^2", worst <= 1e-10,
                   f"worst rel {worst:.2e} (tol 1e-10)", t0)


# --- 3 -----------------------------------------------------------------

def check_coprime_density(quick: bool = False, seed: int = 0) -> CheckResult:
    t0 = time.time()
    r = 10_000
    density = lat.coprime_density(r)
    target = 0.6079271
    err = abs(density - target)
    return _result(3, "coprime density 6/pi^2", err <= 5e-4,
                   f"count/(pi R^2) = {density:.7f}, |err| {err:.2e} (tol 5e-4)", t0)


# --- 4 -----------------------------------------------------------------

def check_inverse_square_slope(quick: bool = False, seed: int = 0) -> CheckResult:
    t0 = time.time()
    radii = [2.0 ** k for k in range(8, 13 if quick else 15)]
    vals = lat.coprime_inverse_square_ladder(radii)
    slope, _ = lat.fit_log_slope(radii, vals)
    target = 12.0 / math.pi
    rel = abs(slope - target) / target
    return _result(4, "inverse-square slope 12/pi", rel <= 0.02,
                   f"slope {slope:.5f} vs {target:.5f}, rel {rel:.4f} (tol 2%)", t0)


# --- 5 -----------------------------------------------------------------

def check_resonant_constant(quick: bool = False, seed: int = 0) -> CheckResult:
    t0 = time.time()
    ws = [2.0 ** k for k in range(6, 11 if quick else 13)]
    alpha, beta = res.fit_resonant_constant(ws)
    return _result(5, "resonant constant alpha -> 3", 2.7 <= alpha <= 3.3,
                   f"R(0,W)/W^2 ~ {alpha:.4f} ln W + {beta:.3f} over W in {{{int(ws[0])}..{int(ws[-1])}}}", t0)


# --- 6 -----------------------------------------------------------------

def check_eta_decomposition(quick: bool = False, seed: int = 0) -> CheckResult:
    t0 = time.time()
    cases = ([(6.0, (0, 0)), (6.0, (2, 3)), (4.0, (-1, 1))] if quick else
             [(w, xi) for w in (4.0, 6.0, 8.0)
              for xi in [(0, 0), (1, 0), (2, 3), (-1, 1), (0, 5)]])
    worst = 0.0
    for w, xi in cases:
        a = res.resonant_sum(xi, w)
        b = res.resonant_sum_bruteforce(xi, w)
        worst = max(worst, abs(a - b) / abs(b))
    return _result(6, "eta decomposition vs brute force", worst <= 1e-6,
                   f"{len(cases)} cases, worst rel {worst:.2e} (tol 1e-6)", t0)


# --- 7 -----------------------------------------------------------------

def check_gowers(quick: bool = False, seed: int = 0) -> CheckResult:
    t0 = time.time()
    rng = rng_for(seed, "gowers")
    n_funcs = 30 if quick else 100
    worst_pair = 0.0
    mono_ok = True
    for _ in range(n_funcs):
        n = int(rng.integers(2, 33))
        k = int(rng.integers(1, 5))
        f = gw.BoxFunction(1, n, np.exp(1j * rng.uniform(0, TWO_PI, 2 * n + 1)))
        a = gw.gowers_norm_explicit(f, k)
        b = gw.gowers_norm_recursive(f, k)
        worst_pair = max(worst_pair, abs(a - b) / max(a, b, 1e-300))
        prof = gw.gowers_group_profile(f, 4)
        mono_ok &= all(prof[i] <= prof[i + 1] * (1 + 1e-12) for i in range(3))
    worst_poly = 0.0
    for _ in range(6 if quick else 12):
        n = int(rng.integers(3, 9))
        k = int(rng.integers(1, 5))
        coefs = rng.normal(size=k + 1)
        f = gw.BoxFunction.from_callable(
            1, n, lambda x: np.exp(1j * sum(c * x ** j for j, c in enumerate(coefs))))
        worst_poly = max(worst_poly, abs(gw.gowers_norm_explicit(f, k + 1) - 1.0))
    ok = worst_pair <= 1e-10 and mono_ok and worst_poly <= 1e-9
    return _result(7, "Gowers norms (dual route, monotone, polynomial phases)", ok,
                   f"{n_funcs} funcs: route gap {worst_pair:.2e} (1e-10), "
                   f"monotone {mono_ok}, poly gap {worst_poly:.2e} (1e-9)", t0)


# --- 8 -----------------------------------------------------------------

def check_rect_machinery(quick: bool = False, seed: int = 0) -> CheckResult:
    t0 = time.time()
    rng = rng_for(seed, "rect")
    worst_tensor = 0.0
    for _ in range(5 if quick else 20):
        n = int(rng.integers(2, 9))
        g = rng.normal(size=2 * n + 1) + 1j * rng.normal(size=2 * n + 1)
        h = rng.normal(size=2 * n + 1) + 1j * rng.normal(size=2 * n + 1)
        lhs = gw.rect_norm(gw.tensor_box(g, h, n))
        rhs = float(np.linalg.norm(g) * np.linalg.norm(h))
        worst_tensor = max(worst_tensor, abs(lhs - rhs) / rhs)
    worst_mult = 0.0
    pairs = [((1, 1), (1, 2)), ((2, 1), (1, 1)), ((1, 2), (2, 1)), ((0, 1), (1, 1))]
    for i in range(5 if quick else 20):
        n = int(rng.integers(3, 7))
        side = 2 * n + 1
        vals = (rng.integers(-3, 4, size=(side, side))
                + 1j * rng.integers(-3, 4, size=(side, side))).astype(complex)
        f = gw.BoxFunction(2, n, vals)
        eta1, eta2 = pairs[i % len(pairs)]
        gap = gw.rotated_multiplicativity_gap(f, eta1, eta2)
        scale = max(gw.rect_norm_rotated_fourth(f, gw.gaussian_product(eta1, eta2)), 1.0)
        worst_mult = max(worst_mult, gap / scale)
    cs_ok = True
    for _ in range(25 if quick else 100):
        n = int(rng.integers(2, 7))
        side = 2 * n + 1
        quad = [gw.BoxFunction(2, n, rng.normal(size=(side, side))
                               + 1j * rng.normal(size=(side, side))) for _ in range(4)]
        cs_ok &= gw.cs_chain_check(*quad)
    ok = worst_tensor <= 1e-9 and worst_mult <= 1e-12 and cs_ok
    return _result(8, "rectangle-norm machinery", ok,
                   f"tensor gap {worst_tensor:.2e} (1e-9), multiplicativity gap "
                   f"{worst_mult:.2e} (exact), CS chain {cs_ok}", t0)


# --- 9 -----------------------------------------------------------------

def check_line_embedding(quick: bool = False, seed: int = 0) -> CheckResult:
    t0 = time.time()
    rng = rng_for(seed, "line-embed")
    cases = [(1, 6), (2, 4), (3, 3)] if quick else [(1, 8), (2, 8), (3, 4)]
    ok = True
    for d, n in cases:
        side = 2 * n + 1
        g = gw.BoxFunction(2, n, rng.normal(size=(side, side))
                           + 1j * rng.normal(size=(side, side)))
        ok &= gw.line_embedding_check(g, d, rel_tol=1e-12)
    return _result(9, "line-embedding Alt-sum equality", ok,
                   f"cases (d, N): {cases}, rel tol 1e-12", t0)


# --- 10 ----------------------------------------------------------------

def check_histogram_oracle(quick: bool = False, seed: int = 0) -> CheckResult:
    t0 = time.time()
    rng = rng_for(seed, "histogram")
    n_sets = 15 if quick else 50
    ok = True
    for _ in range(n_sets):
        n = int(rng.integers(1, 41))
        pts = [(int(rng.integers(-15, 16)), int(rng.integers(-15, 16))) for _ in range(n)]
        s = par.PointSet(pts)
        w = {p: complex(rng.normal(), rng.normal()) for p in s}
        hf = par.resonance_histogram(s, weights=w)
        hb = par.resonance_histogram_bruteforce(s, weights=w)
        ok &= set(hf.entries) == set(hb.entries)
        ok &= all(abs(hf.entries[t] - hb.entries[t]) <= 1e-9 * max(1.0, abs(hb.entries[t]))
                  for t in hb.entries)
        hc = par.resonance_histogram(s)
        ok &= int(hc.total.real) == par.additive_energy(s)
    # levels on a spaced lattice are multiples of 2 L^2, exactly
    for spacing in (2, 3, 5):
        pts = [(spacing * int(rng.integers(-6, 7)), spacing * int(rng.integers(-6, 7)))
               for _ in range(25)]
        h = par.resonance_histogram(par.PointSet(pts))
        ok &= all(t % (2 * spacing * spacing) == 0 for t in h.entries)
    return _result(10, "histogram oracle, energy, lattice levels", ok,
                   f"{n_sets} random sets <= 40 points; exact integer checks", t0)


# --- 11 ----------------------------------------------------------------

def _incidence_corpus(seed: int) -> list[par.PointSet]:
    rng = rng_for(seed, "incidence")
    sets = [par.grid_point_set(n) for n in (2, 3, 4, 6, 8)]
    for _ in range(6):
        npts = int(rng.integers(30, 201))
        box = int(rng.integers(10, 40))
        pts = {(int(rng.integers(-box, box + 1)), int(rng.integers(-box, box + 1)))
               for _ in range(npts)}
        sets.append(par.PointSet(sorted(pts)))
    return sets


def check_incidences(quick: bool = False, seed: int = 0) -> CheckResult:
    t0 = time.time()
    max_ratio = 0.0
    for s in _incidence_corpus(seed):
        n = len(s)
        for k in (2, 3, 4, 5):
            rl = par.rich_lines(s, k)
            m = len(rl)
            if m:
                max_ratio = max(max_ratio, m / (n * n / k ** 3 + n / k))
                lines = [line for line, _ in rl]
                inc = par.point_line_incidences(s, lines)
                max_ratio = max(max_ratio, inc / (m ** (2 / 3) * n ** (2 / 3) + m + n))
    ok = max_ratio <= INCIDENCE_CONSTANT <= 10.0
    return _result(11, "incidence and rich-line bounds", ok,
                   f"max ratio {max_ratio:.3f} <= recorded {INCIDENCE_CONSTANT}", t0)


# --- 12 ----------------------------------------------------------------

def check_solver(quick: bool = False, seed: int = 0) -> CheckResult:
    t0 = time.time()
    rng = rng_for(seed, "solver")
    # plane wave phase at t = 1 with dt = 1e-3
    amp, xi0 = 0.8, (2, 1)
    u0 = sch.FourierState({xi0: amp})
    cfg = sol.NlsConfig(cutoff=8, grid=40, dt=1e-3, mu=1, t_end=1.0, sample_every=1000)
    traj = sol.evolve(u0, cfg, keep_states=True)
    final = traj.states[-1].coefficients[xi0]
    phase_err = abs(final - amp * sol.plane_wave_exact(amp, xi0, 1, 1.0))
    drift = traj.mass_drift()
    # order study on smooth data, defocusing, cutoff resolving the cascade
    coeffs = {}
    for x in range(-3, 4):
        for y in range(-3, 4):
            coeffs[(x, y)] = 0.3 * math.exp(-(x * x + y * y) / 4) \
                * complex(rng.normal(), rng.normal())
    data = sch.FourierState(coeffs)
    cfg = sol.NlsConfig(cutoff=30, grid=128, dt=1e-3, mu=1, t_end=0.5, sample_every=10 ** 9)
    dts = [2e-3, 1e-3] if quick else [1e-3, 5e-4, 2.5e-4]
    order = sol.convergence_order(data, cfg, dts=dts)
    ok = phase_err <= 1e-6 and drift <= 1e-10 and abs(order - 2.0) <= 0.1
    return _result(12, "solver: plane wave, mass, order", ok,
                   f"phase err {phase_err:.2e} (1e-6), drift {drift:.2e} (1e-10), "
                   f"order {order:.3f} (2.0 +- 0.1)", t0)


# --- 13 ----------------------------------------------------------------

def check_approx_solution(quick: bool = False, seed: int = 0) -> CheckResult:
    t0 = time.time()
    from .schrodinger import log_plus
    dt = 5e-4 if quick else 2.5e-4
    data = res.SparseGaussianData(spacing=8, width=32.0, amplitude=0.1)
    horizon = res.HORIZON_CONSTANT / log_plus(data.sigma)
    cfg = sol.NlsConfig(cutoff=128, grid=576, dt=dt, mu=1, t_end=horizon, sample_every=100)
    rep = res.approx_solution_experiment(data, cfg, horizon, n_samples=12)
    ratio = rep.error_corrected[-1] / rep.error_plain[-1]
    rate_rel = abs(rep.fitted_rate - rep.oracle_rate) / rep.oracle_rate
    # trend: widen the envelope at fixed spacing (spacing fixes the minimal
    # nonzero level 2 L^2, keeping nonresonant oscillation fast)
    ladder = ((16.0, 288), (32.0, 576)) if quick else ((16.0, 288), (32.0, 576), (64.0, 1080))
    trend_vals = []
    for w, grid in ladder:
        d = res.SparseGaussianData(spacing=4, width=w, amplitude=0.1)
        h = res.HORIZON_CONSTANT / log_plus(d.sigma)
        c = sol.NlsConfig(cutoff=int(d.cutoff_radius), grid=grid, dt=dt, mu=1,
                          t_end=h, sample_every=100)
        r = res.approx_solution_experiment(d, c, h, n_samples=12)
        trend_vals.append(float(r.error_corrected[-1]) / d.amplitude)
    trend_ok = all(trend_vals[i] > trend_vals[i + 1] for i in range(len(trend_vals) - 1))
    ok = ratio <= 1.0 / 3.0 and rate_rel <= 0.10 and trend_ok
    return _result(13, "approximate solution with log-phase correction", ok,
                   f"err ratio {ratio:.3f} (<= 1/3), rate agreement {rate_rel:.3%} (<= 10%), "
                   f"trend {['%.4f' % v for v in trend_vals]} decreasing: {trend_ok}", t0)


# --- 14 ----------------------------------------------------------------

def check_l4_growth(quick: bool = False, seed: int = 0) -> CheckResult:
    t0 = time.time()
    data = res.SparseGaussianData(spacing=4, width=16.0, amplitude=1.0)
    rep = res.l4_growth_check(data, t_values=[2.0, 4.0])
    target = 2.0 ** 0.25
    ok = all(k >= 4.0 for k in rep.periods_spanned)
    worst = max(abs(r - target) / target for r in rep.doubling_ratios)
    ok &= worst <= 0.05
    return _result(14, "L4 growth 2^(1/4) under doubling", ok,
                   f"ratios {['%.5f' % r for r in rep.doubling_ratios]} vs {target:.5f}, "
                   f"worst rel {worst:.3%} (<= 5%), periods {['%.1f' % k for k in rep.periods_spanned]}", t0)


# --- 15 ----------------------------------------------------------------

def check_fejer_norm(quick: bool = False, seed: int = 0) -> CheckResult:
    t0 = time.time()
    rng = rng_for(seed, "fejer")
    worst = 0.0
    n_states = 6 if quick else 20
    for _ in range(n_states):
        kmax = int(rng.integers(3, 13))
        state = sch.random_state(rng, int(rng.integers(3, 25)), kmax)
        m = int(rng.integers(2, 65))
        nn = int(rng.integers(1, 50))
        a = sch.fejer_l4_norm(state, m, nn, method="sum")
        b = sch.fejer_l4_norm(state, m, nn, method="integral")
        worst = max(worst, abs(a - b) / max(a, b, 1e-300))
    return _result(15, "Fejer norm: level sum vs time quadrature", worst <= 1e-8,
                   f"{n_states} states, worst rel {worst:.2e} (tol 1e-8)", t0)


# --- 16 ----------------------------------------------------------------

def check_kernel_extinction(quick: bool = False, seed: int = 0) -> CheckResult:
    t0 = time.time()
    rng = rng_for(seed, "kernel")
    thetas = list(rng.uniform(0, 1, 6 if quick else 12)) + \
        [0.0, 0.5, 1.0 / 3.0, 2.0 / 5.0, 1.0 / 7.0 + 1e-4, 0.25 + 3e-5]
    rows = sch.kernel_bound_scan([8, 16, 32], thetas)
    max_ratio = max(r["ratio"] for r in rows)
    n = 32
    ts = [1.0, 4.0, 10.0]
    epss = [0.5, 0.25, 0.1]
    vals = sch.extinction_values(n, [t / (n * n) for t in ts],
                                 [e / sch.log_plus(float(n)) for e in epss],
                                 samples=256 if quick else 768)
    mono = all(vals[i, j] >= vals[i + 1, j] for i in range(len(ts) - 1) for j in range(len(epss)))
    mono &= all(vals[i, j] >= vals[i, j + 1] for i in range(len(ts)) for j in range(len(epss) - 1))
    ok = max_ratio <= KERNEL_RATIO_CONSTANT and mono
    return _result(16, "kernel bound ratio and extinction monotonicity", ok,
                   f"max peak/bound {max_ratio:.2f} <= {KERNEL_RATIO_CONSTANT}, "
                   f"extinction monotone {mono}", t0)


CRITERIA: list[tuple[int, str, Callable[..., CheckResult]]] = [
    (1, "l4-identity", check_l4_identity),
    (2, "two-mode", check_two_mode),
    (3, "coprime-density", check_coprime_density),
    (4, "inverse-square-slope", check_inverse_square_slope),
    (5, "resonant-constant", check_resonant_constant),
    (6, "eta-decomposition", check_eta_decomposition),
    (7, "gowers", check_gowers),
    (8, "rect-machinery", check_rect_machinery),
    (9, "line-embedding", check_line_embedding),
    (10, "histogram-oracle", check_histogram_oracle),
    (11, "incidences", check_incidences),
    (12, "solver", check_solver),
    (13, "approx-solution", check_approx_solution),
    (14, "l4-growth", check_l4_growth),
    (15, "fejer-norm", check_fejer_norm),
    (16, "kernel-extinction", check_kernel_extinction),
]


def run_suite(quick: bool = False, seed: int = 0,
              subset: Optional[Sequence[int]] = None,
              report: Optional[Callable[[CheckResult], None]] = None) -> list[CheckResult]:
    results = []
    for idx, _, fn in CRITERIA:
        if subset and idx not in subset:
            continue
        r = fn(quick=quick, seed=seed)
        results.append(r)
        if report is not None:
            report(r)
    return results
