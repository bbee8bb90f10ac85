import math

import numpy as np
import pytest

from app.errors import ConsistencyError, ParameterError, ResolutionError
from app.spectral.field import (
    PHI,
    SpectralField,
    apply_multiplier,
    derivative_symbol,
    japanese,
    phi,
    propagator_symbol,
)
from app.spectral.norms import (
    NormDescriptor,
    fourier_lebesgue_norm,
    sobolev_norm,
    wsp_norm,
)
from app.spectral.products import (
    bilinear_l2_constant,
    check_product_paths,
    product,
)
from app.spectral.sums import phi_beta, phi_beta_regime, sum_estimate_ratio
from app.spectral.transforms import from_grid, to_grid


def test_field_shape_is_validated():
    with pytest.raises(ParameterError):
        SpectralField(np.zeros(4), 2)
    with pytest.raises(ParameterError):
        SpectralField.from_modes({5: 1.0}, 2)


def test_real_field_has_conjugate_symmetric_coefficients(rough_field):
    assert rough_field.is_conjugate_symmetric(tol=0.0)
    values = to_grid(rough_field, 128)
    assert np.max(np.abs(values.imag)) < 1e-12


def test_grid_transform_recovers_coefficients(rough_field):
    M = rough_field.M_grid
    back = from_grid(to_grid(rough_field, 4 * M + 3), M)
    assert back.allclose(rough_field, rtol=1e-12)


def test_grid_below_resolution_floor_is_rejected(smooth_field):
    with pytest.raises(ResolutionError):
        to_grid(smooth_field, 2 * smooth_field.M_grid)
    with pytest.raises(ResolutionError):
        wsp_norm(smooth_field, 0.0, 2.0, smooth_field.M_grid)


def test_plancherel_on_the_grid(rough_field):
    values = to_grid(rough_field, 256)
    assert sobolev_norm(rough_field, 0.0) ** 2 == pytest.approx(
        np.mean(np.abs(values) ** 2), rel=1e-12
    )


def test_norm_families_agree_at_p_equal_two(rough_field):
    for s in (-0.5, 0.0, 1.0):
        h = sobolev_norm(rough_field, s)
        assert fourier_lebesgue_norm(rough_field, s, 2.0) == pytest.approx(h, rel=1e-12)
        assert wsp_norm(rough_field, s, 2.0, 200) == pytest.approx(h, rel=1e-10)
        assert NormDescriptor("H", s)(rough_field) == pytest.approx(h)


def test_fourier_lebesgue_sup_norm(smooth_field):
    expected = max(
        float(japanese(n)) * abs(smooth_field[n]) for n in range(-2, 3)
    )
    assert fourier_lebesgue_norm(smooth_field, 1.0, math.inf) == pytest.approx(expected)
    with pytest.raises(ParameterError):
        fourier_lebesgue_norm(smooth_field, 0.0, 0.5)


def test_unknown_norm_space():
    with pytest.raises(ParameterError):
        NormDescriptor("L")


def test_resize_and_reflect(smooth_field):
    wide = smooth_field.resize(40)
    assert wide.M_grid == 40
    assert wide.resize(smooth_field.M_grid).allclose(smooth_field)
    assert smooth_field.reflect()[2] == smooth_field[-2]
    assert smooth_field.reflect().reflect().allclose(smooth_field)


def test_record_round_trip(rough_field):
    assert SpectralField.from_record(rough_field.to_record()).allclose(rough_field)


def test_symbols():
    assert phi(2) == pytest.approx(0.4)
    assert japanese(0) == 1.0
    assert propagator_symbol(0.7).is_real_preserving()
    assert derivative_symbol().is_real_preserving()


def test_propagator_is_unitary(rough_field):
    evolved = apply_multiplier(rough_field, propagator_symbol(3.0))
    for s in (0.0, 1.0):
        assert sobolev_norm(evolved, s) == pytest.approx(sobolev_norm(rough_field, s))


def test_product_of_cosines():
    cos = SpectralField.from_modes({1: 0.5, -1: 0.5}, 4)
    square = product(cos, cos)
    assert square.M_grid == 8
    assert square[0] == pytest.approx(0.5)
    assert square[2] == pytest.approx(0.25)
    assert square[-2] == pytest.approx(0.25)
    assert abs(square[1]) < 1e-15


def test_product_paths_agree(rough_field, smooth_field):
    assert check_product_paths(rough_field, smooth_field) < 1e-12
    with pytest.raises(ParameterError):
        product(rough_field, smooth_field, method="naive")


def test_product_path_mismatch_raises(rough_field):
    with pytest.raises(ConsistencyError):
        check_product_paths(rough_field, rough_field, rtol=-1.0)


def test_bilinear_constant_of_cosine():
    cos = SpectralField.from_modes({1: 0.5, -1: 0.5}, 4)
    # phi(D)(cos^2) keeps the modes +-2 with coefficient 0.25 * 2/5
    assert bilinear_l2_constant([(cos, cos)]) == pytest.approx(math.sqrt(0.02) / 0.5)
    assert bilinear_l2_constant([(SpectralField.zeros(3), cos)]) == 0.0


def test_phi_beta():
    assert phi_beta(0, 0.5) == 1.0
    assert phi_beta(3, 0.0) == 7.0
    assert phi_beta_regime(0.5) == "power"
    assert phi_beta_regime(1.0) == "log"
    assert phi_beta_regime(2.0) == "bounded"


def test_sum_estimate_ratio_stays_bounded():
    ratios = [sum_estimate_ratio(0, k, 0.75, 0.75, 4096) for k in (16, 64, 256)]
    assert max(ratios) < 4.0
    assert max(ratios) / min(ratios) < 2.0


def test_phi_multiplier_is_odd(smooth_field):
    out = apply_multiplier(smooth_field, PHI)
    assert out[0] == 0
    assert out[1] == pytest.approx(0.5 * 0.5)
    assert out[-1] == pytest.approx(-0.5 * 0.5)
