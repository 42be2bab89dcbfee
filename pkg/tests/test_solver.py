import math

import numpy as np
import pytest

from torusres import schrodinger as sch
from torusres import solver as sol
from torusres.errors import DomainError, NumericalBlowupError, PreconditionError


def smooth_data(rng, amp=0.3, reach=3):
    coeffs = {}
    for x in range(-reach, reach + 1):
        for y in range(-reach, reach + 1):
            coeffs[(x, y)] = amp * math.exp(-(x * x + y * y) / 4) \
                * complex(rng.normal(), rng.normal())
    return sch.FourierState(coeffs)


def test_config_validation():
    with pytest.raises(DomainError):
        sol.NlsConfig(cutoff=8, grid=30, dt=1e-3)  # grid < 4K+2
    with pytest.raises(DomainError):
        sol.NlsConfig(cutoff=8, grid=40, dt=-1e-3)
    with pytest.raises(DomainError):
        sol.NlsConfig(cutoff=8, grid=40, dt=1e-3, mu=2)


def test_zero_state_stays_zero():
    cfg = sol.NlsConfig(cutoff=4, grid=18, dt=1e-2, t_end=0.1)
    out = sol.strang_step(sch.FourierState({}), cfg)
    assert out.coefficients == {}


def test_support_cutoff_precondition():
    cfg = sol.NlsConfig(cutoff=4, grid=18, dt=1e-2)
    with pytest.raises(PreconditionError):
        sol.strang_step(sch.FourierState({(6, 0): 1.0}), cfg)


def test_plane_wave_exact():
    amp, xi0, mu = 0.8, (2, 1), 1
    u0 = sch.FourierState({xi0: amp})
    cfg = sol.NlsConfig(cutoff=8, grid=40, dt=1e-3, mu=mu, t_end=1.0, sample_every=500)
    traj = sol.evolve(u0, cfg, keep_states=True)
    final = traj.states[-1].coefficients[xi0]
    exact = amp * sol.plane_wave_exact(amp, xi0, mu, 1.0)
    assert abs(final - exact) <= 1e-6
    assert traj.mass_drift() <= 1e-10


def test_linear_regime_matches_free_flow():
    eps = 1e-8
    u0 = sch.FourierState({(1, 0): eps, (0, 2): 0.5 * eps, (-1, 1): 0.25 * eps})
    cfg = sol.NlsConfig(cutoff=6, grid=26, dt=1e-3, mu=1, t_end=0.5, sample_every=10 ** 6)
    traj = sol.evolve(u0, cfg, keep_states=True)
    free = sch.free_evolve(u0, 0.5)
    for p, c in free.coefficients.items():
        assert abs(traj.states[-1].coefficients[p] - c) <= 1e-12 * eps + 1e-20


def test_mass_and_energy_drift():
    rng = np.random.default_rng(0)
    u0 = smooth_data(rng)
    cfg = sol.NlsConfig(cutoff=12, grid=50, dt=1e-3, mu=-1, t_end=1.0, sample_every=100)
    traj = sol.evolve(u0, cfg)
    assert traj.mass_drift() <= 1e-10
    e0 = traj.energy[0]
    assert np.abs(traj.energy - e0).max() / abs(e0) <= 1e-4  # O(dt^2) recorded headroom


def test_time_reversal():
    rng = np.random.default_rng(1)
    u0 = smooth_data(rng)
    cfg = sol.NlsConfig(cutoff=12, grid=50, dt=1e-3, mu=1)
    fwd = sol.strang_step(u0, cfg)
    back = sol.strang_step(fwd, cfg, dt=-1e-3)
    for p, c in u0.coefficients.items():
        assert abs(back.coefficients.get(p, 0) - c) <= 1e-12


def test_convergence_order():
    rng = np.random.default_rng(2)
    u0 = smooth_data(rng)
    cfg = sol.NlsConfig(cutoff=30, grid=128, dt=2e-3, mu=1, t_end=0.25, sample_every=10 ** 6)
    order = sol.convergence_order(u0, cfg, dts=[2e-3, 1e-3])
    assert abs(order - 2.0) <= 0.15


def test_blowup_detection():
    u0 = sch.FourierState({(0, 0): 1e150})
    cfg = sol.NlsConfig(cutoff=2, grid=10, dt=1e300, mu=-1, t_end=1e300)
    with pytest.raises(NumericalBlowupError):
        sol.strang_step(u0, cfg)


def test_focusing_small_data_smoke():
    u0 = sch.FourierState({(1, 0): 0.05, (0, 1): 0.05j, (0, 0): 0.05})
    cfg = sol.NlsConfig(cutoff=8, grid=34, dt=2e-3, mu=-1, t_end=1.0, sample_every=100)
    traj = sol.evolve(u0, cfg)
    assert traj.mass_drift() <= 1e-10
    assert np.isfinite(traj.l4_slice).all()


def test_grid_state_roundtrip():
    state = sch.FourierState({(3, -2): 1.5 - 0.5j, (-4, 4): 0.25j})
    cfg = sol.NlsConfig(cutoff=5, grid=22, dt=1e-3)
    c = sol.coefficient_grid(state, cfg)
    back = sol.grid_to_state(c, 5)
    assert back.coefficients == state.coefficients
