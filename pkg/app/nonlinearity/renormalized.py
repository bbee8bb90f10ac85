import logging

import numpy as np

from app.errors import ConsistencyError
from app.spectral.field import PHI, SpectralField, apply_multiplier, frequencies, phi
from app.spectral.products import product, product_coeffs_fft

logger = logging.getLogger(__name__)

NONLINEARITY_RTOL = 1e-12


def nonlinearity_coeffs(coeffs: np.ndarray, M: int, band: int) -> np.ndarray:
    """phi(n) * (u^2)_hat(n) for |n| <= band, zero frequency removed.

    Array-level path for the integrators; `coeffs` is the dense band-M
    layout of SpectralField.
    """
    out = product_coeffs_fft(coeffs, coeffs, M, band)
    out *= phi(frequencies(band))
    out[band] = 0.0
    return out


def renormalized_nonlinearity(
    u: SpectralField, check: bool = False, truncate: bool = True
) -> SpectralField:
    """N(u) = phi(D)(u^2) with the zero frequency of u^2 excluded.

    truncate=True keeps |n| <= M_grid (the Galerkin projection the solvers
    use); otherwise the full band 2*M_grid of the square is returned.
    With check=True the result is compared against the direct convolution
    path and against apply_multiplier(phi) of the plain square.
    """
    M = u.M_grid
    band = M if truncate else 2 * M
    coeffs = nonlinearity_coeffs(u.coeffs, M, band)
    result = SpectralField(coeffs, band)
    if check:
        square = product(u, u, method="direct", band=band)
        reference = apply_multiplier(square, PHI)
        if reference.coeffs[band] != 0:
            raise ConsistencyError("phi(D) failed to annihilate the zero mode")
        # |(u^2)_hat| <= ||u_hat||_1^2 bounds every coefficient of either path
        scale = max(float(np.sum(np.abs(u.coeffs))) ** 2, 1e-300)
        err = float(np.max(np.abs(reference.coeffs - coeffs), initial=0.0)) / scale
        if err > NONLINEARITY_RTOL:
            raise ConsistencyError(
                f"renormalized nonlinearity paths disagree: relative error {err:.3e}"
            )
        logger.debug("nonlinearity paths agree to %.2e at M=%d", err, M)
    return result
