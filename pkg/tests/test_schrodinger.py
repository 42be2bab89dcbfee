import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from torusres import schrodinger as sch
from torusres.errors import DomainError, PreconditionError

TWO_PI = 2 * math.pi


def test_free_evolve_identity_and_phase():
    st0 = sch.FourierState({(2, 1): 1.0 + 0.5j, (0, -3): 0.2})
    assert sch.free_evolve(st0, 0.0).coefficients == st0.coefficients
    t = 0.7
    ev = sch.free_evolve(st0, t)
    expect = (1.0 + 0.5j) * np.exp(-1j * t * 5)
    assert ev.coefficients[(2, 1)] == pytest.approx(expect, rel=1e-12)
    # 2pi periodicity, exact mass preservation
    per = sch.free_evolve(st0, TWO_PI)
    for p, c in st0.coefficients.items():
        assert per.coefficients[p] == pytest.approx(c, abs=1e-12)
    assert sch.free_evolve(st0, 0.123).mass() == pytest.approx(st0.mass(), rel=1e-14)


def test_single_mode_density():
    c = 0.7 + 0.2j
    one = sch.FourierState({(2, -1): c})
    for t in (0.0, 0.9, 4.4):
        assert sch.quartic_density(one, t) == pytest.approx(
            TWO_PI ** 2 * abs(c) ** 4, rel=1e-12)


def test_two_mode_constant_density():
    two = sch.FourierState({(0, 0): 1.0, (1, 0): 1.0})
    hist = sch.state_histogram(two)
    for t in np.linspace(0, TWO_PI, 17):
        assert sch.quartic_density(two, float(t), histogram=hist) == pytest.approx(
            6 * TWO_PI ** 2, rel=1e-12)


def test_density_methods_agree():
    rng = np.random.default_rng(0)
    for _ in range(6):
        state = sch.random_state(rng, 20, 12)
        hist = sch.state_histogram(state)
        for t in rng.uniform(0, TWO_PI, 4):
            a = sch.quartic_density(state, float(t), histogram=hist)
            b = sch.quartic_density(state, float(t), method="quadrature")
            assert b == pytest.approx(a, rel=1e-9)


def test_quadrature_grid_precondition():
    state = sch.random_state(np.random.default_rng(1), 5, 8)
    with pytest.raises(PreconditionError):
        sch.quartic_density(state, 0.1, method="quadrature", grid=20)


def test_density_periodicity_on_lattice():
    rng = np.random.default_rng(2)
    spacing = 3
    coeffs = {(spacing * int(rng.integers(-3, 4)), spacing * int(rng.integers(-3, 4))):
              complex(rng.normal(), rng.normal()) for _ in range(10)}
    state = sch.FourierState(coeffs)
    hist = sch.state_histogram(state)
    period = math.pi / spacing ** 2
    for t in (0.11, 0.57, 1.3):
        a = sch.quartic_density(state, t, histogram=hist)
        b = sch.quartic_density(state, t + period, histogram=hist)
        assert b == pytest.approx(a, rel=1e-9)


def test_recovered_histogram_matches():
    rng = np.random.default_rng(3)
    state = sch.random_state(rng, 10, 6)
    h1 = sch.state_histogram(state)
    h2 = sch.recovered_histogram(state)
    for k in set(h1.entries) | set(h2.entries):
        assert complex(h2.entries.get(k, 0)) == pytest.approx(
            complex(h1.entries.get(k, 0)), abs=1e-9)


def test_spacetime_l4():
    c = 0.5
    one = sch.FourierState({(1, 1): c})
    rep = sch.spacetime_l4(one, 0.0, TWO_PI)
    assert rep.value == pytest.approx((TWO_PI ** 3 * c ** 4) ** 0.25, rel=1e-12)
    with pytest.raises(DomainError):
        sch.spacetime_l4(one, 1.0, 0.0)
    rng = np.random.default_rng(4)
    state = sch.random_state(rng, 12, 6)
    rep = sch.spacetime_l4(state, 0.2, 1.7, cross_check=True)
    assert rep.value_quadrature == pytest.approx(rep.value_combinatorial, rel=1e-8)


def test_fejer_kernel_values():
    ts = np.array([0.0, 0.4, 1.1])
    m = 7
    direct = np.array([sum((1 - abs(tau) / m) * math.cos(tau * t)
                           for tau in range(-m + 1, m)) for t in ts])
    assert np.allclose(sch.fejer_kernel(ts, m), direct, rtol=1e-12)


def test_fejer_norm_forms_agree():
    rng = np.random.default_rng(5)
    for _ in range(4):
        state = sch.random_state(rng, 10, 8)
        a = sch.fejer_l4_norm(state, 12, 5, method="sum")
        b = sch.fejer_l4_norm(state, 12, 5, method="integral")
        assert b == pytest.approx(a, rel=1e-8)


def test_fejer_norm_single_mode():
    one = sch.FourierState({(3, 2): 0.4})
    # only the level-0 quadruple contributes
    expect = (TWO_PI ** 3 * 0.4 ** 4 / 9) ** 0.25 / 2
    assert sch.fejer_l4_norm(one, 9, 2, method="sum") == pytest.approx(expect, rel=1e-12)
    assert sch.fejer_l4_norm(sch.FourierState({}), 4, 3) == 0.0


def test_galilean_invariance():
    rng = np.random.default_rng(6)
    state = sch.random_state(rng, 15, 9)
    assert sch.galilean_invariance_check(state, (0, 0))
    assert sch.galilean_invariance_check(state, (3, -1))


def test_bandlimited_dirac():
    d1 = sch.bandlimited_dirac(1)
    assert len(d1.coefficients) == 9
    assert all(max(abs(p[0]), abs(p[1])) <= 1.1 for p in d1.coefficients)
    d16 = sch.bandlimited_dirac(16)
    # plateau: 1 where the inner bump vanishes (max |p| >= 9) and the outer
    # bump is identically 1 (both |p_i| <= 16)
    plateau = 0
    for p, c in d16.coefficients.items():
        if abs(p[0]) <= 16 and abs(p[1]) <= 16 and max(abs(p[0]), abs(p[1])) >= 9:
            assert c == pytest.approx(1.0, abs=1e-14)
            plateau += 1
    assert plateau > 100
    ratio = d16.mass() / (16 ** 2 * TWO_PI ** 2)
    assert 1.0 < ratio < 4.0
    with pytest.raises(DomainError):
        sch.bandlimited_dirac(12)


def test_smooth_step():
    xs = np.array([-1.0, 0.0, 0.5, 1.0, 2.0])
    s = sch.smooth_step(xs)
    assert s[0] == 0 and s[1] == 0 and s[3] == 1 and s[4] == 1
    assert s[2] == pytest.approx(0.5)


def test_dirichlet_examples():
    assert sch.dirichlet_pair(0.0, 10) == sch.DirichletPair(0, 1, 0.0)
    p = sch.dirichlet_pair(0.5, 10)
    assert (p.a, p.q) == (1, 2)
    p = sch.dirichlet_pair(0.1415926535, 100)
    assert p.q < 100 and abs(p.t - p.a / p.q) <= 1 / (p.q * 100)


@given(st.floats(min_value=0, max_value=1, exclude_max=True),
       st.integers(min_value=2, max_value=500))
@settings(max_examples=150, deadline=None)
def test_dirichlet_invariants(t, n):
    pair = sch.dirichlet_pair(t, n)
    assert pair.check(n)


def test_kernel_scan_t0():
    d = sch.bandlimited_dirac(8)
    coeff_sum = sum(c.real for c in d.coefficients.values())
    assert sch.kernel_sup_norm(d, 0.0) == pytest.approx(coeff_sum, rel=1e-9)
    rows = sch.kernel_bound_scan([8], [0.0, 0.37])
    assert all(r["ratio"] > 0 for r in rows)


def test_extinction_monotone_small():
    n = 16
    ts = [1.0, 8.0]
    epss = [0.5, 0.1]
    v = sch.extinction_values(n, [t / (n * n) for t in ts],
                              [e / sch.log_plus(float(n)) for e in epss], samples=128)
    assert v[1, 1] <= v[0, 0]
    assert v[1, 0] <= v[0, 0] and v[0, 1] <= v[0, 0]
    with pytest.raises(DomainError):
        sch.extinction_scan([16], big_t=200.0, eps=0.1)


def test_state_csv_roundtrip(tmp_path):
    state = sch.FourierState({(1, -2): 0.5 + 0.25j, (0, 0): -1.0})
    path = tmp_path / "state.csv"
    state.write_csv(path)
    back = sch.FourierState.read_csv(path)
    assert back.coefficients == state.coefficients


def test_log_plus():
    assert sch.log_plus(0.5) == 1.0
    assert sch.log_plus(1.0) == 1.0
    assert sch.log_plus(math.e) == 2.0
