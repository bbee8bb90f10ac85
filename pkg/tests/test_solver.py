import math

import numpy as np
import pytest

from app.errors import (
    ForcingMismatchError,
    GridMismatchError,
    NonContractionError,
    ParameterError,
)
from app.inflation.phase import xi1_exact
from app.randomdata.families import RandomDataSpec, sample_initial_data
from app.solver.config import SolverConfig, ZSource
from app.solver.integrators import (
    convergence_ratio,
    integrate_bbm,
    integrate_perturbed,
    mollifier_gaps,
    reconstruct_solution,
    time_reversal_defect,
)
from app.solver.picard import contraction_time, picard_iterates, picard_solve
from app.solver.propagator import (
    cumulative_integral,
    energy,
    linear_propagator,
    q_of_s,
)
from app.spectral.field import SpectralField
from app.spectral.norms import fourier_lebesgue_norm, sobolev_norm


@pytest.fixture
def cfg():
    return SolverConfig(dt=1e-3, T_final=1.0, M_grid=32)


def test_config_validation():
    with pytest.raises(ParameterError):
        SolverConfig(dt=0.0)
    with pytest.raises(ParameterError):
        SolverConfig(scheme="leapfrog")
    with pytest.raises(ParameterError):
        SolverConfig(picard_nodes=2)


def test_time_grid_ends_at_final_time():
    times = SolverConfig(dt=0.3, T_final=1.0).time_grid()
    assert times[0] == 0.0
    assert times[-1] == 1.0
    assert np.allclose(np.diff(times)[:-1], 0.3)
    assert SolverConfig(dt=0.25, T_final=1.0).time_grid().size == 5


def test_zero_data_stays_zero(cfg):
    traj = integrate_bbm(SpectralField.zeros(8), cfg.replace(T_final=0.1))
    assert not traj.blew_up
    assert sobolev_norm(traj.final, 1.0) == 0.0


def test_energy_is_conserved(cfg, smooth_field):
    traj = integrate_bbm(smooth_field, cfg)
    energies = np.array([energy(state) for state in traj.states])
    assert np.max(np.abs(energies - energies[0])) / energies[0] < 1e-8


def test_mean_is_invariant(cfg, smooth_field):
    traj = integrate_bbm(smooth_field, cfg)
    assert all(abs(state[0] - smooth_field[0]) < 1e-13 for state in traj.states)


def test_solutions_stay_real(cfg, smooth_field):
    assert integrate_bbm(smooth_field, cfg).final.is_conjugate_symmetric(tol=1e-12)


def test_time_reversal(cfg, smooth_field):
    assert time_reversal_defect(smooth_field, cfg.replace(T_final=0.5)) < 1e-6


def test_picard_agrees_with_rk4(cfg, smooth_field):
    short = cfg.replace(T_final=0.05)
    reference = integrate_bbm(smooth_field, short).final
    gap = picard_solve(smooth_field, 0.05, short) - reference
    assert sobolev_norm(gap, 1.0) < 1e-7


def test_picard_scheme_through_integrate_bbm(cfg, smooth_field):
    traj = integrate_bbm(smooth_field, cfg.replace(T_final=0.05, scheme="picard"))
    assert traj.scheme == "picard"
    assert len(traj) == cfg.picard_nodes


def test_first_picard_iterates(cfg, smooth_field):
    T = 0.1
    iterates = picard_iterates(smooth_field, T, cfg, 1)
    free = linear_propagator(smooth_field.resize(cfg.M_grid), T)
    assert iterates[0].final.allclose(free)
    expected = free + xi1_exact(smooth_field.resize(cfg.M_grid), T)
    assert iterates[1].final.allclose(expected, rtol=1e-8)


def test_picard_non_contraction(cfg, smooth_field):
    big = smooth_field * 40.0
    with pytest.raises(NonContractionError) as info:
        picard_solve(big, 20.0, cfg.replace(picard_max_iter=5))
    assert info.value.iterations >= 1


def test_contraction_time_scales_inversely_with_amplitude():
    cfg = SolverConfig(M_grid=8, picard_nodes=51, picard_max_iter=30, picard_tol=1e-8)
    u0 = SpectralField.from_modes({1: 0.5, -1: 0.5}, 8)
    products = []
    for magnitude in (1.0, 2.0, 4.0, 8.0):
        scaled = u0 * magnitude
        T = contraction_time(scaled, cfg, rel_tol=0.05)
        assert 0 < T < math.inf
        products.append(T * fourier_lebesgue_norm(scaled, 0.0, 1))
    assert max(products) <= 4.0 * min(products)
    assert contraction_time(SpectralField.zeros(8), cfg) == math.inf


def test_rk4_is_fourth_order(smooth_field):
    # halving dt cuts the error by 2^4
    cfg = SolverConfig(dt=0.025, T_final=1.0, M_grid=16)
    ratio = convergence_ratio(smooth_field, cfg)
    assert ratio == pytest.approx(16.0, rel=0.2)


def test_fejer_and_gaussian_limits_agree():
    rough = sample_initial_data(RandomDataSpec("gaussian", 0.5, 16, 7))
    cfg = SolverConfig(dt=1e-2, T_final=0.5, M_grid=16)
    gaps = mollifier_gaps(rough, [16, 32, 64, 128], cfg)
    assert np.all(np.diff(gaps) < 0)
    assert gaps[-1] < 0.5 * gaps[0]


def test_blow_up_is_reported_not_raised(cfg, smooth_field):
    traj = integrate_bbm(smooth_field, cfg.replace(blowup_threshold=0.1))
    assert traj.blew_up
    assert len(traj) == 1


def test_splitting_matches_direct_solve(cfg):
    rough = sample_initial_data(RandomDataSpec("gaussian", 0.5, 32, 7))
    z_source = ZSource(rough, "gaussian-symbol", 4.0)
    half = cfg.replace(T_final=0.5)
    v_traj = integrate_perturbed(z_source, half)
    assert v_traj.z_source is z_source
    split = reconstruct_solution(v_traj).final
    direct = integrate_bbm(z_source.initial(cfg.M_grid), half).final
    assert sobolev_norm(split - direct, 1.0) < 1e-6


def test_perturbed_flow_guards(cfg, smooth_field):
    with pytest.raises(ParameterError):
        integrate_perturbed(ZSource(smooth_field), cfg.replace(scheme="picard"))
    with pytest.raises(ParameterError):
        ZSource(smooth_field, "fejer")
    with pytest.raises(ForcingMismatchError):
        reconstruct_solution(integrate_bbm(smooth_field, cfg.replace(T_final=0.01)))


def test_trajectory_lookup_and_frame(cfg, smooth_field):
    traj = integrate_bbm(smooth_field, cfg.replace(T_final=0.01))
    assert traj.state_at(0.0).allclose(smooth_field)
    with pytest.raises(GridMismatchError):
        traj.state_at(0.0005)
    frame = traj.to_frame((0.0, 1.0))
    assert list(frame.columns) == ["t", "H^0", "H^1", "energy"]
    assert len(frame) == len(traj)


def test_exponent_choice_and_quadrature():
    assert q_of_s(0.25) == 4.0
    assert q_of_s(0.75) == pytest.approx(4.0)
    with pytest.raises(ParameterError):
        q_of_s(1.0)
    times = np.linspace(0.0, 1.0, 11)
    assert cumulative_integral(times**2, times)[-1] == pytest.approx(1.0 / 3.0)
