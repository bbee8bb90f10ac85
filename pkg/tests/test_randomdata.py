import math

import numpy as np
import pytest

from app.errors import ParameterError, UnknownFamilyError
from app.randomdata.families import (
    RandomDataSpec,
    draw_coefficients,
    get_family,
    sample_initial_data,
)
from app.randomdata.moments import (
    analytic_moment,
    chaos_moment_ratio,
    estimate_moment,
    expected_sobolev_square,
    gaussian_chaos_ratio,
    moment_table_check,
    rotation_invariance_check,
    seed_correlation,
)
from app.randomdata.mollifiers import (
    get_kernel,
    kernel_weights,
    mollifier_difference_bound,
    mollify,
)
from app.spectral.field import japanese
from app.spectral.norms import NormDescriptor
from app.stats.ensemble import map_members, member_seed, member_seeds


def test_low_modes_do_not_depend_on_truncation():
    short = draw_coefficients("gaussian", 7, 8)
    long = draw_coefficients("gaussian", 7, 64)
    np.testing.assert_array_equal(short, long[:9])


def test_same_seed_same_field_different_seed_different_field():
    spec = RandomDataSpec("gaussian", 0.5, 32, 11)
    a = sample_initial_data(spec)
    b = sample_initial_data(spec)
    c = sample_initial_data(spec.with_seed(12))
    np.testing.assert_array_equal(a.coeffs, b.coeffs)
    assert not np.allclose(a.coeffs, c.coeffs)


def test_sampled_data_is_real_and_decays():
    u0 = sample_initial_data(RandomDataSpec("uniform-phase", 0.75, 16, 3))
    assert u0.is_conjugate_symmetric()
    # uniform-phase coefficients have modulus one, so |u0_hat(n)| = <n>^-alpha
    np.testing.assert_allclose(
        np.abs(u0.nonnegative()[1:]), japanese(np.arange(1, 17)) ** -0.75
    )
    assert u0[0] == 0


def test_spec_validation():
    with pytest.raises(UnknownFamilyError):
        RandomDataSpec("cauchy")
    with pytest.raises(ParameterError):
        RandomDataSpec("gaussian", 0.5, 0)
    with pytest.raises(UnknownFamilyError):
        get_family("laplace")


def test_member_seeds_extend_without_resampling():
    first = member_seeds(5, 4)
    extended = member_seeds(5, 8)
    assert extended[:4] == first
    assert member_seeds(5, 4, start=4) == extended[4:]
    assert member_seed(5, 0) != member_seed(6, 0)


def test_map_members_is_independent_of_pool_size():
    seeds = member_seeds(1, 16)
    one = map_members(lambda s: draw_coefficients("gaussian", s, 4)[2], seeds, 1)
    four = map_members(lambda s: draw_coefficients("gaussian", s, 4)[2], seeds, 4)
    assert one == four


def test_analytic_moment_pairing_table():
    assert analytic_moment("gaussian", (3, -3)) == 1.0
    assert analytic_moment("gaussian", (1, 2, 3)) == 0.0
    assert analytic_moment("gaussian", (1, -1, 1, -1)) == 2.0
    assert analytic_moment("gaussian", (1, -1, 2, -2)) == 1.0
    assert analytic_moment("uniform-phase", (1, -1, 1, -1)) == 1.0
    assert analytic_moment("gaussian", (0, 0)) == 1.0
    assert analytic_moment("uniform-phase", (0, 0)) == 0.0


@pytest.mark.parametrize("family", ["gaussian", "uniform-phase"])
def test_moment_table_check_passes(family):
    report = moment_table_check(
        family,
        [(3, -3), (1, 2, 3), (1, -1, 1, -1), (1, -1, 2, -2)],
        4000,
        seed=2,
        n_sigma=4.0,
    )
    assert report.passed
    assert [case.classification for case in report.cases] == [
        "pairing",
        "vanishing",
        "pairing",
        "pairing",
    ]


def test_moment_table_rejects_long_tuples():
    with pytest.raises(ParameterError):
        moment_table_check("gaussian", [tuple(range(1, 10))], 100)


def test_sobolev_moment_matches_closed_form():
    spec = RandomDataSpec("gaussian", 0.5, 64, 9)
    est = estimate_moment(spec, NormDescriptor("H", -0.6), 2.0, 400)
    assert est.within(expected_sobolev_square(spec, -0.6), n_sigma=4.0)


def test_estimate_moment_needs_samples():
    with pytest.raises(ParameterError):
        estimate_moment(RandomDataSpec(), NormDescriptor(), 2.0, 5)


def test_gaussian_chaos_ratio_at_q_two():
    assert gaussian_chaos_ratio(2.0) == pytest.approx(1.0 / math.sqrt(2.0))
    a = japanese(np.arange(1, 33)) ** -1.0
    ratios = chaos_moment_ratio(a, [2.0], 2000, seed=4)
    assert ratios[2.0].within(gaussian_chaos_ratio(2.0), n_sigma=4.0)


def test_rotation_invariance_and_seed_independence():
    assert rotation_invariance_check("gaussian", 0.7, 2000, seed=1) > 1e-3
    corr = seed_correlation("gaussian", 2000, seed=1)
    assert abs(corr.mean) <= 4.0 * corr.stderr


def test_mollifier_kernels():
    weights = kernel_weights("fejer", 4.0, 8)
    assert weights[8] == 1.0
    assert weights[8 + 4] == 0.0
    assert get_kernel("dirichlet").support_radius(10.0) == 10
    assert get_kernel("gaussian-symbol").support_radius(10.0) == 60
    with pytest.raises(UnknownFamilyError):
        get_kernel("box")
    with pytest.raises(ParameterError):
        kernel_weights("fejer", 0.0, 4)


def test_mollify_keeps_band_and_low_modes():
    u0 = sample_initial_data(RandomDataSpec("gaussian", 0.5, 32, 0))
    smoothed = mollify(u0, "dirichlet", 8.0)
    assert smoothed.M_grid == 32
    assert smoothed[8] == u0[8]
    assert smoothed[9] == 0


def test_fejer_difference_bound_is_at_most_one():
    bounds = mollifier_difference_bound("fejer", [4, 8, 16, 32], 1.0, 128)
    assert all(0.0 <= b <= 1.0 + 1e-12 for b in bounds)
