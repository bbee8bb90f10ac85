import math

import numpy as np
import pytest

from app.errors import (
    GridMismatchError,
    ParameterError,
    ParameterSearchError,
    TreeLimitError,
    TruncationError,
)
from app.inflation.bilinear import bilinear_flp_probe
from app.inflation.data import (
    InflationParams,
    build_inflation_data,
    case_of,
    case_parameters,
    condition_values,
    default_exponents,
    f_p_of_A,
    select_parameters,
)
from app.inflation.experiment import run_inflation_experiment
from app.inflation.phase import (
    phase_kernel,
    phase_theta,
    phase_theta_direct,
    xi1_exact,
)
from app.inflation.series import (
    duhamel_bilinear,
    series_trajectories,
    support_intervals,
    tree_sum_series,
    xi_growth_constants,
    xi_series,
)
from app.inflation.trees import TreeNode, catalan, enumerate_trees
from app.solver.config import SolverConfig
from app.solver.picard import picard_solve
from app.solver.propagator import linear_propagator
from app.spectral.field import SpectralField
from app.spectral.norms import fourier_lebesgue_norm, sobolev_norm
from app.spectral.products import bilinear_ratio


def test_tree_counts_follow_catalan():
    counts = [len(enumerate_trees(j)) for j in range(7)]
    assert counts == [1, 1, 2, 5, 14, 42, 132]
    assert counts == [catalan(j) for j in range(7)]
    for j in range(9):
        assert catalan(j + 1) / catalan(j) <= 4


def test_tree_shape():
    (leaf,) = enumerate_trees(0)
    assert leaf.is_terminal
    assert str(enumerate_trees(1)[0]) == "(.,.)"
    for j in range(5):
        trees = enumerate_trees(j)
        assert len({t.canonical for t in trees}) == len(trees)
        assert all(t.n_internal == j and t.n_terminal == j + 1 for t in trees)


def test_tree_guards():
    with pytest.raises(TreeLimitError):
        enumerate_trees(11)
    with pytest.raises(ParameterError):
        enumerate_trees(-1)
    with pytest.raises(ParameterError):
        TreeNode((TreeNode.terminal(),))


def test_phase_function():
    assert phase_theta(2, 1) == pytest.approx(0.6)
    xi, xi1 = np.meshgrid(np.arange(-40, 41), np.arange(-40, 41))
    np.testing.assert_allclose(
        phase_theta(xi, xi1), phase_theta_direct(xi, xi1), rtol=0, atol=1e-13
    )
    np.testing.assert_allclose(phase_theta(xi, xi - xi1), phase_theta(xi, xi1))
    assert np.all(phase_theta(np.arange(-5, 6), 0) == 0)


def test_phase_kernel_small_theta_limit():
    t = 0.8
    theta = np.array([0.0, 1e-14, 1e-6, 1e-3, 0.1, 0.5])
    kernel = phase_kernel(theta, t)
    assert kernel[0] == -1j * t
    bound = t * t * np.abs(theta) / 2
    assert np.all(np.abs(kernel + 1j * t) <= bound * (1 + 1e-9) + 1e-15)


def test_xi1_matches_duhamel_quadrature(smooth_field):
    t = 0.5
    (free,) = series_trajectories(smooth_field, t, 0)
    quadrature = duhamel_bilinear(free, free, t)
    assert quadrature.allclose(xi1_exact(smooth_field, t), rtol=1e-8)
    assert sobolev_norm(xi1_exact(smooth_field, 0.0), 0.0) == 0.0


def test_duhamel_bilinear_symmetry_and_grids(smooth_field):
    t = 0.3
    xi0, xi1 = series_trajectories(smooth_field, t, 1)
    assert duhamel_bilinear(xi0, xi1, t).allclose(duhamel_bilinear(xi1, xi0, t))
    (zero,) = series_trajectories(SpectralField.zeros(smooth_field.M_grid), t, 0)
    assert sobolev_norm(duhamel_bilinear(xi0, zero, t), 0.0) == 0.0
    (coarse,) = series_trajectories(smooth_field, t, 0, n_nodes=11)
    with pytest.raises(GridMismatchError):
        duhamel_bilinear(xi0, coarse, t)


def test_series_first_term_is_free_flow(smooth_field):
    terms = xi_series(smooth_field, 0.2, 0)
    assert terms[0].allclose(linear_propagator(smooth_field, 0.2))


def test_series_matches_tree_sum(smooth_field):
    t = 0.3
    recursion = xi_series(smooth_field, t, 3, n_nodes=51)
    trees = tree_sum_series(smooth_field, t, 3, n_nodes=51)
    for a, b in zip(recursion, trees, strict=True):
        assert a.allclose(b, rtol=1e-10, atol=1e-13)
        assert a.is_conjugate_symmetric(tol=1e-10)


def test_series_sum_matches_picard(smooth_field):
    t = 0.05
    cfg = SolverConfig(M_grid=smooth_field.M_grid, picard_tol=1e-13)
    terms = xi_series(smooth_field, t, 4)
    partial = terms[0]
    for term in terms[1:]:
        partial = partial + term
    gap = partial - picard_solve(smooth_field, t, cfg)
    assert sobolev_norm(gap, 0.0) < 1e-6


def test_growth_constants(smooth_field):
    constants = xi_growth_constants(smooth_field, 0.1, 3)
    assert len(constants) == 3
    assert all(c > 0 for c in constants)
    with pytest.raises(ParameterError):
        xi_growth_constants(smooth_field, 0.1, 3, variant="sup")


def test_support_splits_into_few_intervals():
    params = InflationParams(16, 1, 1.0, 0.05, -1.0, 2.0, 1)
    data = build_inflation_data(params, 80)
    terms = xi_series(data, params.T, 3, n_nodes=51)
    for j, term in enumerate(terms):
        assert 1 <= len(support_intervals(term)) <= 2 ** (j + 1)


def test_inflation_data_shape():
    params = InflationParams(512, 16, 2.0, 1e-3, -1.0, 2.0, 1)
    data = build_inflation_data(params, 600)
    assert data.support().size == 2 * (4 * 16 + 1)
    assert data.is_conjugate_symmetric()
    assert fourier_lebesgue_norm(data, 0.0, 1) == pytest.approx(2 * 2.0 * 65)
    expected = 2.0 * 16**0.5 / 512
    ratio = fourier_lebesgue_norm(data, -1.0, 2.0) / expected
    assert 0.25 <= ratio <= 4.0
    with pytest.raises(TruncationError):
        build_inflation_data(params, 540)
    with pytest.raises(ParameterError):
        build_inflation_data(InflationParams(8, 9, 1.0, 1e-3, -1.0, 2.0, 1), 64)


def test_xi1_lower_bound_on_inflation_data():
    params = InflationParams(2**9, 2**4, 1.0, 0.16, -1.0, 2.0, 1)
    data = build_inflation_data(params, 2**9 + 2**5)
    t = params.A / 100
    xi1 = fourier_lebesgue_norm(xi1_exact(data, t), -1.0, 2.0)
    assert xi1 >= t * params.R**2 * params.A / 100


def test_f_p_of_A():
    assert f_p_of_A(50.0, -1.0, 2.0) == 1.0
    assert f_p_of_A(math.e, -0.5, 2.0) == pytest.approx(1.0)
    assert f_p_of_A(16.0, -0.1, 2.0) == pytest.approx(16**0.4)
    with pytest.raises(ParameterError):
        f_p_of_A(0.5, -1.0, 2.0)


def test_case_routing():
    assert case_of(-1.0, 2.0) == 1
    assert case_of(-0.5, 2.0) == 2
    assert case_of(-0.2, 2.0) == 3
    with pytest.raises(ParameterError):
        case_of(0.1, 2.0)
    with pytest.raises(ParameterError):
        case_of(-1.0, math.inf)


def test_case_one_recipe_at_desk_scale():
    params = case_parameters(-1.0, 2.0, 512, c_A=0.125, c_R=0.3, c_T=24.0)
    assert params.delta == pytest.approx(0.2)
    assert params.A == pytest.approx(18.38, rel=1e-3)
    assert params.R == pytest.approx(3.64, rel=1e-3)
    assert params.T == pytest.approx(3.87e-3, rel=2e-3)
    conditions = condition_values(params, 2)
    assert len(conditions) == 6
    # the desk prefactors keep the geometric conditions and relax (ii) and (iii)
    assert conditions[4].holds and conditions[5].holds
    assert not conditions[1].holds


def test_case_two_recipe():
    N = 2.0**20
    params = case_parameters(-0.5, 2.0, N)
    assert params.case == 2
    assert params.A == pytest.approx(math.sqrt(N / math.log(N)))


def test_case_three_exponents_are_admissible():
    s, p = -0.2, 2.0
    delta, theta = default_exponents(s, p)
    assert 0 < theta < delta <= 1 / (3 * p)
    bound = max(2 * (theta + delta) / (1 + delta * p), 1.5 * theta - (p - 1) * delta)
    assert -s > bound
    assert case_parameters(s, p, 2.0**12).case == 3


def test_select_parameters_case_one():
    params = select_parameters(-1.0, 2.0, 2, delta=0.2)
    assert all(c.holds for c in condition_values(params, 2))
    N = params.N
    assert params.R * params.A**0.5 / N == pytest.approx(N**-0.2)
    assert params.T * params.R**2 * params.A == pytest.approx(N**0.2)
    # the search returns the first power of two that works
    assert math.log2(N) == pytest.approx(round(math.log2(N)))
    smaller = case_parameters(-1.0, 2.0, N / 2, delta=0.2)
    assert not all(c.holds for c in condition_values(smaller, 2))


def test_select_parameters_reports_binding_condition():
    with pytest.raises(ParameterSearchError) as info:
        select_parameters(-1.0, 2.0, 2, delta=0.2, max_log2_N=8)
    assert info.value.binding.startswith("(")


def test_inflation_run_on_zero_background():
    params = InflationParams(32, 2, 1.0, 0.005, -1.0, 2.0, 1)
    cfg = SolverConfig(dt=5e-4, M_grid=64)
    report = run_inflation_experiment(SpectralField.zeros(64), params, cfg)
    assert not report.blew_up
    assert report.initial_norm == pytest.approx(report.perturbation_norm)
    assert len(report.conditions) == 6
    assert report.remainder_dominated
    assert report.as_dict()["params"]["N"] == 32


def test_bilinear_ratio_of_single_modes():
    mode = SpectralField.from_modes({1: 1.0}, 4)
    assert bilinear_ratio(mode, mode, 0.0, 2) == pytest.approx(0.4, abs=1e-12)


def test_bilinear_probe_growth_with_indicator_data():
    report = bilinear_flp_probe(0.0, 4.0, adversarial=True)
    assert report.expected_slope == 0.5
    assert report.fit.slope == pytest.approx(0.5, abs=0.1)


def test_bilinear_probe_bounded_at_l2():
    report = bilinear_flp_probe(0.0, 2.0)
    assert max(report.ratios) / min(report.ratios) < 2.0
    assert report.rows()[0]["M_grid"] == 32
