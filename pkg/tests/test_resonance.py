import math

import numpy as np
import pytest

from torusres import resonance as res
from torusres import schrodinger as sch
from torusres import solver as sol
from torusres.errors import DomainError, PreconditionError


def test_data_validation():
    with pytest.raises(DomainError):
        res.SparseGaussianData(spacing=8, width=16.0, amplitude=0.1)  # W < 4L
    with pytest.raises(DomainError):
        res.SparseGaussianData(spacing=0, width=16.0, amplitude=0.1)
    d = res.SparseGaussianData(spacing=4, width=16.0, amplitude=0.1)
    assert d.cutoff_radius == 64.0 and d.sigma == 4.0


def test_equal_spacing_and_width_allowed_explicitly():
    # narrow data is constructible when the ratio floor is relaxed
    d = res.SparseGaussianData(spacing=8, width=8.0, amplitude=1.0, min_ratio=1.0)
    state = res.build_sparse_gaussian(d)
    dominant = [p for p, c in state.coefficients.items() if abs(c) > 0.3 * abs(state.coefficients[(0, 0)])]
    assert len(dominant) == 9  # the innermost shell at spacing = width


def test_build_phi_mass_and_symmetry():
    d = res.SparseGaussianData(spacing=8, width=32.0, amplitude=0.1)
    state = res.build_sparse_gaussian(d)
    # support on the spaced lattice within the cutoff
    assert all(x % 8 == 0 and y % 8 == 0 for x, y in state.coefficients)
    assert all(x * x + y * y <= d.cutoff_radius ** 2 for x, y in state.coefficients)
    # mass factor: ||u0|| = MASS_FACTOR * lam up to O((L/W)^2)
    lam_eff = state.l2_norm() / res.MASS_FACTOR
    assert 0.5 * 0.1 <= lam_eff <= 2 * 0.1
    # radial envelope: coefficients at xi and perp(xi) coincide
    assert state.coefficients[(8, 16)] == state.coefficients[(-16, 8)]


def test_resonant_sum_truncation_precondition():
    with pytest.raises(PreconditionError):
        res.resonant_sum((0, 0), 8.0, truncation=10.0)


def test_resonant_sum_w_to_zero():
    assert res.resonant_sum((0, 0), 0.25) == pytest.approx(1.0, abs=1e-10)


def test_resonant_sum_matches_bruteforce():
    for w in (4.0, 6.0):
        for xi in [(0, 0), (1, 0), (2, 3)]:
            a = res.resonant_sum(xi, w)
            b = res.resonant_sum_bruteforce(xi, w)
            assert a == pytest.approx(b, rel=1e-6)


def test_resonant_sum_symmetries():
    w = 6.0
    r = res.resonant_sum((2, 1), w)
    assert res.resonant_sum((-2, -1), w) == pytest.approx(r, rel=1e-12)
    assert res.resonant_sum((-1, 2), w) == pytest.approx(r, rel=1e-12)
    # monotone decreasing along an axis for the radial envelope
    vals = [res.resonant_sum((k, 0), w) for k in range(0, 8, 2)]
    assert all(vals[i] > vals[i + 1] for i in range(len(vals) - 1))


def test_resonant_sum_truncation_tail():
    # doubling the truncation radius moves R by less than 1e-6 relative
    w = 16.0
    a = res.resonant_sum((0, 0), w, truncation=6 * w)
    b = res.resonant_sum((0, 0), w, truncation=12 * w)
    assert abs(a - b) <= 1e-6 * a


def test_resonant_ladder_fit():
    ws = [2.0 ** k for k in range(6, 10)]
    alpha, beta = res.fit_resonant_constant(ws)
    assert 2.7 <= alpha <= 3.3
    rows = res.resonant_ladder(ws)
    assert all(abs(r["fit_residual"]) < 1e-2 * r["R_over_W2"] for r in rows)


def test_theta_sums():
    # direct vs Poisson branches agree near the crossover
    for beta in (0.5, 0.9, 1.0, 1.1, 2.0):
        direct = sum(math.exp(-beta * m * m) for m in range(-40, 41))
        assert float(res.theta_1d(np.array([beta]))[0]) == pytest.approx(direct, rel=1e-12)
    assert res.lattice_gaussian_sum((0.5, -1.5), 0.8) == pytest.approx(
        sum(math.exp(-0.8 * ((m + 0.5) ** 2 + (n - 1.5) ** 2))
            for m in range(-30, 31) for n in range(-30, 31)), rel=1e-12)


def test_mode_rates_single_mode():
    d = res.SparseGaussianData(spacing=8, width=32.0, amplitude=0.1,
                               cutoff_radius=1.0, min_ratio=1.0)
    state = res.build_sparse_gaussian(d)
    rep = res.predicted_mode_rates(d, mu=1)
    c = abs(state.coefficients[(0, 0)])
    assert rep.weighted_mean_rate == pytest.approx(c * c, rel=1e-12)


def test_mode_rates_match_resonant_sum():
    d = res.SparseGaussianData(spacing=8, width=32.0, amplitude=0.1)
    rep = res.predicted_mode_rates(d, mu=1)
    per = {xi: r for xi, r, _ in rep.per_xi}
    for xi in [(0, 0), (8, 0), (16, 8)]:
        full = res.resonant_sum((xi[0] // 8, xi[1] // 8), d.sigma)
        assert per[xi] == pytest.approx(full, rel=1e-8)


def test_mode_rates_perp_symmetry():
    d = res.SparseGaussianData(spacing=4, width=16.0, amplitude=0.2)
    rep = res.predicted_mode_rates(d)
    rates = {xi: rate for xi, _, rate in rep.per_xi}
    assert rates[(4, 8)] == pytest.approx(rates[(-8, 4)], rel=1e-12)


def test_mode_rate_near_reference_value():
    # the mean rate sits near 3 lam^2 ln(W/L) once sigma is moderately large
    d = res.SparseGaussianData(spacing=1, width=32.0, amplitude=1.0)
    rep = res.predicted_mode_rates(d)
    rate0 = {xi: rate for xi, _, rate in rep.per_xi}[(0, 0)]
    reference = 3 * math.log(32.0)
    assert abs(rate0 - reference) / reference < 0.35  # O(1/ln W) corrections


def test_growth_report():
    data = res.SparseGaussianData(spacing=4, width=16.0, amplitude=1.0)
    rep = res.l4_growth_check(data, t_values=[2.0, 4.0])
    target = 2 ** 0.25
    for k, r in zip(rep.periods_spanned, rep.doubling_ratios):
        assert k >= 4
        assert abs(r - target) / target <= 0.05
    assert rep.resonant_mass > 0


def test_growth_exact_period_identity():
    data = res.SparseGaussianData(spacing=4, width=16.0, amplitude=1.0)
    state = res.build_sparse_gaussian(data)
    rescaled = sch.FourierState({(x // 4, y // 4): c for (x, y), c in state.coefficients.items()})
    hist = sch.state_histogram(rescaled, size_bound=6000)
    w0 = complex(hist.entries[0]).real
    period = math.pi / 16
    x = 5 * period
    v4 = res._periodic_l4_fourth(hist, 16, x)
    assert v4 == pytest.approx(x * (2 * math.pi) ** 2 * w0, rel=1e-12)


def test_approx_experiment_tiny():
    # linear regime: both errors collapse and the fitted rate matches lam^2 scale
    data = res.SparseGaussianData(spacing=8, width=32.0, amplitude=1e-4)
    horizon = res.HORIZON_CONSTANT / sch.log_plus(data.sigma)
    cfg = sol.NlsConfig(cutoff=128, grid=576, dt=2e-3, mu=1,
                        t_end=horizon, sample_every=100)
    rep = res.approx_solution_experiment(data, cfg, horizon, n_samples=6)
    assert rep.error_plain[-1] <= 1e-6 * data.amplitude
    assert rep.error_corrected[-1] <= rep.error_plain[-1] + 1e-18
    assert rep.fitted_rate == pytest.approx(rep.oracle_rate, rel=0.05)
    assert rep.lam_eff == pytest.approx(data.amplitude, rel=0.05)


def test_approx_experiment_preconditions():
    data = res.SparseGaussianData(spacing=8, width=32.0, amplitude=0.1)
    cfg = sol.NlsConfig(cutoff=128, grid=576, dt=1e-3, mu=1, t_end=0.1, sample_every=10)
    with pytest.raises(PreconditionError):
        res.approx_solution_experiment(data, cfg, horizon=10.0)
    small = sol.NlsConfig(cutoff=16, grid=66, dt=1e-3, mu=1, t_end=0.1, sample_every=10)
    with pytest.raises(PreconditionError):
        res.approx_solution_experiment(data, small, horizon=0.1)
