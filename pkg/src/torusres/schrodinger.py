"""Linear Schrodinger flow on the 2-torus and its L^4 observables.

Conventions (fixed once, documented everywhere):

* u(x) = sum_xi c(xi) exp(i x.xi) on [0, 2pi]^2 with plain Lebesgue measure,
  so the mass is ||u||_{L2}^2 = (2pi)^2 sum |c(xi)|^2.
* exp(it Lap) multiplies c(xi) by exp(-it |xi|^2); t = 2pi acts as the
  identity since |xi|^2 is an integer.
* The quartic density g(t) = int_{T^2} |exp(it Lap) u|^4 dx expands over
  parallelogram quadruples of the Fourier support:

      g(t) = (2pi)^2 sum_tau exp(-i t tau) W(tau),

  with W the resonance-level histogram of the support weighted by the
  coefficients.  All resonance levels are even, so g has period pi; supports
  inside L Z^2 give levels in 2 L^2 Z and period pi / L^2.
* Spatial quadrature on an M x M grid integrates |u|^4 exactly (up to
  roundoff) once M >= 4K+2, K the largest frequency in the max norm.
* Interval lengths written as 1/log(..) use log(x) = 1 + max(0, ln x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DomainError, PreconditionError
from .lattice import Point, as_point
from .parallelograms import LevelHistogram, PointSet, resonance_histogram

TWO_PI = 2.0 * math.pi


def log_plus(x: float) -> float:
    """1 + max(0, ln x); the convention used in every interval length."""
    if x <= 0:
        raise DomainError("log_plus needs a positive argument")
    return 1.0 + max(0.0, math.log(x))


@dataclass
class FourierState:
    """Sparse frequency-side state: map from integer frequency to amplitude."""

    coefficients: dict[Point, complex] = field(default_factory=dict)
    max_frequency: int = 0

    def __post_init__(self):
        clean = {}
        k = 0
        for p, c in self.coefficients.items():
            q = as_point(*p)
            c = complex(c)
            if c != 0:
                clean[q] = c
                k = max(k, abs(q[0]), abs(q[1]))
        self.coefficients = clean
        if self.max_frequency < k:
            self.max_frequency = k

    def support(self) -> PointSet:
        return PointSet(self.coefficients.keys())

    def mass(self) -> float:
        return TWO_PI ** 2 * sum(abs(c) ** 2 for c in self.coefficients.values())

    def l2_norm(self) -> float:
        return math.sqrt(self.mass())

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        pts = np.array(list(self.coefficients.keys()), dtype=np.int64).reshape(-1, 2)
        cs = np.array(list(self.coefficients.values()), dtype=np.complex128)
        return pts, cs

    @staticmethod
    def from_arrays(pts: np.ndarray, cs: np.ndarray) -> "FourierState":
        return FourierState({(int(x), int(y)): complex(c)
                             for (x, y), c in zip(pts, cs)})

    @staticmethod
    def read_csv(path) -> "FourierState":
        """Lines "xi1,xi2,re,im"; blank lines and #-comments skipped."""
        coeffs: dict[Point, complex] = {}
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#") or line.startswith("xi1"):
                    continue
                a, b, re, im = line.split(",")
                coeffs[(int(a), int(b))] = complex(float(re), float(im))
        return FourierState(coeffs)

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("xi1,xi2,re,im\n")
            for (x, y), c in sorted(self.coefficients.items()):
                fh.write(f"{x},{y},{c.real!r},{c.imag!r}\n")


def free_evolve(state: FourierState, t: float) -> FourierState:
    """exp(it Lap): phase multiplication by exp(-i t |xi|^2)."""
    out = {}
    for (x, y), c in state.coefficients.items():
        out[(x, y)] = c * complex(math.cos(t * (x * x + y * y)), -math.sin(t * (x * x + y * y)))
    return FourierState(out, max_frequency=state.max_frequency)


def state_histogram(state: FourierState, size_bound: int = 2000) -> LevelHistogram:
    """Coefficient-weighted resonance-level histogram of the support."""
    supp = state.support()
    weights = {p: state.coefficients[p] for p in supp}
    return resonance_histogram(supp, weights=weights, size_bound=size_bound)


def min_grid(state: FourierState) -> int:
    return 4 * state.max_frequency + 2


def state_to_grid(state: FourierState, grid: int) -> np.ndarray:
    """Physical samples u(2pi j / M) on an M x M grid via zero-padded FFT."""
    if grid < 2 * state.max_frequency + 1:
        raise PreconditionError("grid too small to hold the Fourier support")
    c = np.zeros((grid, grid), dtype=np.complex128)
    for (x, y), v in state.coefficients.items():
        c[x % grid, y % grid] += v
    return np.fft.ifft2(c) * grid * grid


def density_samples_quadrature(state: FourierState, ts: np.ndarray,
                               grid: Optional[int] = None) -> np.ndarray:
    """g(t) at many times through batched spatial quadrature."""
    m = grid if grid is not None else min_grid(state)
    if m < min_grid(state):
        raise PreconditionError(f"grid {m} < 4K+2 = {min_grid(state)}; |u|^4 would alias")
    pts, cs = state.arrays()
    if pts.size == 0:
        return np.zeros(len(ts))
    ts = np.asarray(ts, dtype=np.float64)
    norms = (pts[:, 0] ** 2 + pts[:, 1] ** 2).astype(np.float64)
    xm = pts[:, 0] % m
    ym = pts[:, 1] % m
    out = np.empty(len(ts))
    chunk = max(1, (1 << 24) // (m * m))
    w = (TWO_PI / m) ** 2
    for lo in range(0, len(ts), chunk):
        tt = ts[lo:lo + chunk]
        c = np.zeros((len(tt), m, m), dtype=np.complex128)
        c[:, xm, ym] = cs[None, :] * np.exp(-1j * tt[:, None] * norms[None, :])
        u = np.fft.ifft2(c, axes=(1, 2)) * (m * m)
        a2 = u.real ** 2 + u.imag ** 2
        out[lo:lo + chunk] = (a2 ** 2).sum(axis=(1, 2)) * w
    return out


def grid_quartic_integral(u: np.ndarray) -> float:
    """int |u|^4 dx from grid samples (exact for alias-free grids)."""
    m = u.shape[0]
    a2 = u.real ** 2 + u.imag ** 2
    return float((a2 ** 2).sum()) * (TWO_PI / m) ** 2


def quartic_density(state: FourierState, t: float, method: str = "combinatorial",
                    histogram: Optional[LevelHistogram] = None,
                    grid: Optional[int] = None) -> float:
    """g(t) = int |exp(it Lap) u|^4 dx by either route.

    combinatorial: (2pi)^2 sum_tau exp(-i t tau) W(tau)  (#supp <= 2000);
    quadrature:    spatial sum on an M x M grid, M >= 4K+2.
    """
    if method == "combinatorial":
        hist = histogram if histogram is not None else state_histogram(state)
        return _density_from_histogram(hist, t)
    if method == "quadrature":
        m = grid if grid is not None else min_grid(state)
        if m < min_grid(state):
            raise PreconditionError(f"grid {m} < 4K+2 = {min_grid(state)}; |u|^4 would alias")
        u = state_to_grid(free_evolve(state, t), m)
        return grid_quartic_integral(u)
    raise DomainError(f"unknown method {method!r}")


def _density_from_histogram(hist: LevelHistogram, t: float) -> float:
    taus = np.array(sorted(hist.entries.keys()), dtype=np.float64)
    ws = np.array([hist.entries[int(tt)] for tt in taus], dtype=np.complex128)
    val = (np.exp(-1j * t * taus) * ws).sum() * TWO_PI ** 2
    if abs(val.imag) > 1e-10 * max(abs(val.real), 1.0):
        raise AssertionError(f"quartic density came out non-real: {val}")
    return float(val.real)


def density_series(hist: LevelHistogram, ts: np.ndarray) -> np.ndarray:
    taus = np.array(sorted(hist.entries.keys()), dtype=np.float64)
    ws = np.array([hist.entries[int(tt)] for tt in taus], dtype=np.complex128)
    vals = np.exp(-1j * np.asarray(ts)[:, None] * taus[None, :]) @ ws * TWO_PI ** 2
    return vals.real


@dataclass
class SpacetimeNormReport:
    interval: tuple[float, float]
    value_combinatorial: float
    value_quadrature: Optional[float]
    histogram: LevelHistogram

    @property
    def value(self) -> float:
        return self.value_combinatorial


def spacetime_l4(state: FourierState, t0: float, t1: float,
                 cross_check: bool = False,
                 histogram: Optional[LevelHistogram] = None) -> SpacetimeNormReport:
    """||exp(it Lap) u||_{L4(t,x)} over [t0, t1] x T^2.

    The time integral is done in closed form per resonance level:
    int exp(-i tau t) dt is analytic.  With ``cross_check`` the density is
    re-derived through spatial quadrature plus discrete-time Fourier
    recovery of the level coefficients (independent of the histogram);
    feasible when the level span is moderate.
    """
    if t1 < t0:
        raise DomainError("t1 < t0")
    hist = histogram if histogram is not None else state_histogram(state)
    fourth = _integral_from_histogram(hist, t0, t1)
    quad = None
    if cross_check:
        quad_hist = recovered_histogram(state)
        quad = _integral_from_histogram(quad_hist, t0, t1) ** 0.25
    return SpacetimeNormReport((t0, t1), fourth ** 0.25, quad, hist)


def _integral_from_histogram(hist: LevelHistogram, t0: float, t1: float) -> float:
    total = 0j
    for tau, w in hist.entries.items():
        if tau == 0:
            total += w * (t1 - t0)
        else:
            total += w * (np.exp(-1j * tau * t0) - np.exp(-1j * tau * t1)) / (1j * tau)
    val = total * TWO_PI ** 2
    if abs(val.imag) > 1e-9 * max(abs(val.real), 1.0):
        raise AssertionError(f"spacetime integral came out non-real: {val}")
    return max(float(val.real), 0.0)


def level_span_bound(state: FourierState) -> int:
    """Upper bound for |levels| of the support: 2 * diam^2."""
    pts, _ = state.arrays()
    if pts.size == 0:
        return 0
    dx = int(pts[:, 0].max() - pts[:, 0].min())
    dy = int(pts[:, 1].max() - pts[:, 1].min())
    return 2 * (dx * dx + dy * dy)


def recovered_histogram(state: FourierState, span: Optional[int] = None) -> LevelHistogram:
    """Level coefficients W(tau) recovered from spatial quadrature alone.

    Samples g(t) at K_t > span uniform points of the period; the discrete
    Fourier transform returns (2pi)^2 W(tau) exactly because all levels are
    even integers within the span.  Independent of the combinatorial path.
    """
    bound = span if span is not None else level_span_bound(state)
    # levels are even: sample over one pi-period
    n_freq = bound // 2
    kt = 2 * n_freq + 2
    ts = np.arange(kt) * (math.pi / kt)
    gs = density_samples_quadrature(state, ts)
    spec = np.fft.fft(gs) / kt
    # g(t_j) = sum_s W(2s) exp(-2 pi i s j / kt), so DFT bin idx collects the
    # level 2s with s = -idx (mod kt), centered to |s| <= kt/2
    entries: dict[int, complex] = {}
    scale = TWO_PI ** 2
    tiny = 1e-13 * max(float(np.abs(gs).max()), 1.0) / scale
    for idx in range(kt):
        coeff = complex(spec[idx]) / scale
        if abs(coeff) < tiny:
            continue
        tau = -2 * idx if idx <= kt // 2 else 2 * (kt - idx)
        entries[int(tau)] = entries.get(int(tau), 0j) + coeff
    return LevelHistogram(entries=entries, weighted=True)


# ---------------------------------------------------------------------------
# Fejer-weighted short-time L^4 norm
# ---------------------------------------------------------------------------

def fejer_kernel(ts: np.ndarray, m: int) -> np.ndarray:
    """F_M(t) = |sum_{k<M} exp(i k t)|^2 / M >= 0 with hat F_M(tau) = max(0, 1-|tau|/M)."""
    ks = np.arange(m)
    e = np.exp(1j * np.asarray(ts)[:, None] * ks[None, :]).sum(axis=1)
    return (e.real ** 2 + e.imag ** 2) / m


def fejer_l4_norm(state: FourierState, m: int, n: int, method: str = "sum",
                  histogram: Optional[LevelHistogram] = None) -> float:
    """Fejer-weighted spacetime L^4 norm, normalized by 1/n:

        (1/n) * ( (1/M) int_{[-pi,pi] x T^2} F_M(t) |exp(it Lap) u|^4 )^(1/4).

    method "sum":      (1/M) (2pi)^3 sum_{|tau|<M} (1 - |tau|/M) W(tau);
    method "integral": time quadrature of F_M(t) g(t) with g from spatial
                       quadrature (exact: the integrand is a trigonometric
                       polynomial and the uniform grid is fine enough).

    The (2pi)^3 factor is this module's normalization: (2pi)^2 from the
    spatial integral and 2pi from int exp(i(tau'-tau)t) over the period.
    """
    if m < 1 or n < 1:
        raise DomainError("M and N must be positive")
    if method == "sum":
        hist = histogram if histogram is not None else state_histogram(state)
        total = 0.0
        for tau, w in hist.entries.items():
            if abs(tau) < m:
                total += (1.0 - abs(tau) / m) * complex(w).real
        val = (TWO_PI ** 3) * total / m
        return (max(val, 0.0) ** 0.25) / n
    if method == "integral":
        # the integrand F_M(t) g(t) is a trigonometric polynomial of degree
        # < M + level span, so the uniform grid integrates it exactly
        kt = level_span_bound(state) + m + 8
        ts = -math.pi + TWO_PI * np.arange(kt) / kt
        gs = density_samples_quadrature(state, ts)
        val = float((fejer_kernel(ts, m) * gs).sum()) * (TWO_PI / kt) / m
        return (max(val, 0.0) ** 0.25) / n
    raise DomainError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# Galilean transform
# ---------------------------------------------------------------------------

def galilean_shift(state: FourierState, xi0: Point) -> FourierState:
    """Frequency translation c(xi) -> c(xi - xi0) (the t = 0 slice of the
    Galilean symmetry exp(i x.xi0 - i t |xi0|^2) u(t, x - 2 t xi0))."""
    out = {}
    for (x, y), c in state.coefficients.items():
        out[as_point(x + xi0[0], y + xi0[1])] = c
    return FourierState(out)


def galilean_invariance_check(state: FourierState, xi0: Point,
                              ts: Iterable[float] = (0.3, 1.1, 2.7)) -> bool:
    """Level histograms of the state and its shift agree (translation leaves
    every level fixed), hence all L^4 reports coincide."""
    shifted = galilean_shift(state, xi0)
    h0 = state_histogram(state)
    h1 = state_histogram(shifted)
    if set(h0.entries) != set(h1.entries):
        return False
    for tau, w in h0.entries.items():
        if abs(w - h1.entries[tau]) > 1e-12 * max(abs(w), 1.0):
            return False
    for t in ts:
        a = _density_from_histogram(h0, t)
        b = _density_from_histogram(h1, t)
        if abs(a - b) > 1e-10 * max(abs(a), 1.0):
            return False
    return True


# ---------------------------------------------------------------------------
# band-limited Dirac kernels
# ---------------------------------------------------------------------------

def smooth_step(x: np.ndarray) -> np.ndarray:
    """C^infty step: 0 for x <= 0, 1 for x >= 1, exp(-1/x)/(exp(-1/x)+exp(-1/(1-x)))."""
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    out[x >= 1] = 1.0
    mid = (x > 0) & (x < 1)
    xm = x[mid]
    a = np.exp(-1.0 / xm)
    b = np.exp(-1.0 / (1.0 - xm))
    out[mid] = a / (a + b)
    return out


def lp_bump(r: np.ndarray) -> np.ndarray:
    """Radial bump psi: 1 on |r| <= 1, supported in |r| < 1.1."""
    r = np.abs(np.asarray(r, dtype=np.float64))
    out = np.zeros_like(r)
    out[r <= 1.0] = 1.0
    mid = (r > 1.0) & (r < 1.1)
    out[mid] = smooth_step((1.1 - r[mid]) / 0.1)
    return out


def bandlimited_dirac(n: int) -> FourierState:
    """Dyadic frequency-shell cutoff of the Dirac comb of unit coefficients.

    Coefficients psi(xi1/N) psi(xi2/N) - psi(2 xi1/N) psi(2 xi2/N); for N = 1
    the inner term is absent (projections below scale 1 vanish).
    """
    if n < 1 or (n & (n - 1)) != 0:
        raise DomainError("N must be a power of two")
    reach = int(math.floor(1.1 * n))
    xs = np.arange(-reach, reach + 1)
    outer = lp_bump(xs / n)
    w = np.outer(outer, outer)
    if n > 1:
        inner = lp_bump(2.0 * xs / n)
        w = w - np.outer(inner, inner)
    coeffs = {}
    for i, x in enumerate(xs):
        for j, y in enumerate(xs):
            if w[i, j] != 0.0:
                coeffs[(int(x), int(y))] = complex(w[i, j])
    return FourierState(coeffs)


# ---------------------------------------------------------------------------
# Dirichlet rational approximation and kernel scans
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DirichletPair:
    a: int
    q: int
    t: float

    def check(self, n: int) -> bool:
        if self.q < 1 or self.q >= n or math.gcd(self.a, self.q) != 1:
            return False
        lhs = abs(Fraction(self.t) - Fraction(self.a, self.q))
        return lhs <= Fraction(1, self.q * n)


def dirichlet_pair(t: float, n: int) -> DirichletPair:
    """Coprime (a, q), 1 <= q < n, with |t - a/q| <= 1/(q n); t reduced mod 1.

    The last continued-fraction convergent with denominator < n realizes the
    bound; the returned pair is verified, not trusted.
    """
    if n < 2:
        raise DomainError("n must be >= 2")
    t0 = t - math.floor(t)
    x = Fraction(t0)
    # continued-fraction convergents of x
    p_prev, q_prev = 1, 0
    p_cur, q_cur = int(math.floor(x)), 1
    frac = x - int(math.floor(x))
    best = (p_cur, q_cur)
    while frac != 0:
        x = 1 / frac
        a_k = int(math.floor(x))
        frac = x - a_k
        p_nxt = a_k * p_cur + p_prev
        q_nxt = a_k * q_cur + q_prev
        if q_nxt >= n:
            break
        p_prev, q_prev, p_cur, q_cur = p_cur, q_cur, p_nxt, q_nxt
        best = (p_cur, q_cur)
    a, q = best
    pair = DirichletPair(a=a, q=q, t=t0)
    lhs = abs(Fraction(t0) - Fraction(a, q))
    if not (1 <= q < n and lhs <= Fraction(1, q * n)):
        raise AssertionError(f"Dirichlet invariant failed for t={t0}, n={n}: {pair}")
    return pair


def kernel_sup_norm(state: FourierState, t: float, oversample: int = 4) -> float:
    """max_x |exp(it Lap) u| measured on an oversampled grid."""
    side = oversample * (2 * state.max_frequency + 1)
    grid = 1 << max(7, (side - 1).bit_length())
    u = state_to_grid(free_evolve(state, t), grid)
    return float(np.abs(u).max())


def kernel_bound_scan(n_list: Sequence[int], thetas: Sequence[float]) -> list[dict]:
    """Peak size of the evolved band-limited Dirac against its rational-time
    bound.

    Times are specified as theta = t / (2pi) in [0, 1] (the flow is
    2pi-periodic); the Dirichlet pair approximates theta and the bound is
    (N / (sqrt(q) (1 + N |theta - a/q|^(1/2))))^2, up to the recorded
    constant.
    """
    rows = []
    for n in n_list:
        if n > 64:
            raise PreconditionError("direct kernel evaluation is capped at N = 64")
        delta = bandlimited_dirac(n)
        for theta in thetas:
            theta = theta - math.floor(theta)
            pair = dirichlet_pair(theta, n)
            sup = kernel_sup_norm(delta, TWO_PI * theta)
            dist = abs(theta - pair.a / pair.q)
            bound = (n / (math.sqrt(pair.q) * (1.0 + n * math.sqrt(dist)))) ** 2
            rows.append({
                "N": n, "theta": theta, "a": pair.a, "q": pair.q,
                "sup": sup, "bound": bound, "ratio": sup / bound,
            })
    return rows


def extinction_values(n: int, t_lowers: Sequence[float], t_uppers: Sequence[float],
                      samples: int = 512) -> np.ndarray:
    """Normalized L^4 norms N^-1 ||exp(it Lap) delta_N||_{L4([a,b] x T^2)} on a
    shared cumulative grid, so nested intervals give exactly monotone values.

    Returns an array v[i, j] for a = t_lowers[i], b = t_uppers[j] (empty
    intervals are NaN).
    """
    delta = bandlimited_dirac(n)
    lo = min(t_lowers)
    hi = max(t_uppers)
    if hi <= lo:
        raise DomainError("empty master interval")
    ts = np.linspace(lo, hi, samples)
    g4 = density_samples_quadrature(delta, ts)
    # cumulative trapezoid
    cum = np.concatenate([[0.0], np.cumsum((g4[1:] + g4[:-1]) * 0.5 * np.diff(ts))])

    def cum_at(x: float) -> float:
        return float(np.interp(x, ts, cum))

    out = np.full((len(t_lowers), len(t_uppers)), np.nan)
    for i, a in enumerate(t_lowers):
        for j, b in enumerate(t_uppers):
            if b > a:
                out[i, j] = (max(cum_at(b) - cum_at(a), 0.0)) ** 0.25 / n
    return out


def extinction_scan(n_list: Sequence[int], big_t: float, eps: float,
                    samples: int = 512) -> list[dict]:
    """Rows (N, interval, value) for the window [T N^-2, eps / log N]."""
    rows = []
    for n in n_list:
        a = big_t / (n * n)
        b = eps / log_plus(float(n))
        if b <= a:
            raise DomainError(f"empty interval for N={n}: [{a}, {b}]")
        v = extinction_values(n, [a], [b], samples=samples)[0, 0]
        rows.append({"N": n, "t_lo": a, "t_hi": b, "value": float(v)})
    return rows


def random_state(rng: np.random.Generator, n_modes: int, kmax: int,
                 unit: bool = False) -> FourierState:
    """Random sparse state with n_modes distinct frequencies in [-K, K]^2."""
    if n_modes > (2 * kmax + 1) ** 2:
        raise DomainError("more modes requested than the box holds")
    coeffs: dict[Point, complex] = {}
    while len(coeffs) < n_modes:
        x = int(rng.integers(-kmax, kmax + 1))
        y = int(rng.integers(-kmax, kmax + 1))
        if (x, y) in coeffs:
            continue
        if unit:
            phase = rng.uniform(0, TWO_PI)
            coeffs[(x, y)] = complex(math.cos(phase), math.sin(phase))
        else:
            coeffs[(x, y)] = complex(rng.normal(), rng.normal())
    return FourierState(coeffs)
