import logging

import numpy as np
import scipy.fft

from app.errors import ConsistencyError, ParameterError
from app.spectral.field import PHI, SpectralField, apply_multiplier, japanese
from app.spectral.norms import fourier_lebesgue_norm, sobolev_norm
from app.spectral.transforms import padded_size

logger = logging.getLogger(__name__)

PRODUCT_RTOL = 1e-12


def _hermitian(coeffs: np.ndarray) -> np.ndarray:
    return 0.5 * (coeffs + np.conj(coeffs[::-1]))


def product_coeffs_fft(
    a: np.ndarray, b: np.ndarray, M: int, band: int
) -> np.ndarray:
    """Coefficients of the product of two band-M fields for |n| <= band.

    Zero-padded so that nothing aliases into the requested band.
    """
    L = padded_size(M, band)
    pa = np.zeros(L, dtype=complex)
    pb = np.zeros(L, dtype=complex)
    pa[: M + 1] = a[M:]
    pb[: M + 1] = b[M:]
    if M:
        pa[-M:] = a[:M]
        pb[-M:] = b[:M]
    values = scipy.fft.ifft(pa) * scipy.fft.ifft(pb) * L
    spectrum = scipy.fft.fft(values)
    if band == 0:
        return spectrum[:1].copy()
    return np.concatenate([spectrum[L - band :], spectrum[: band + 1]])


def product_coeffs_direct(
    a: np.ndarray, b: np.ndarray, M: int, band: int
) -> np.ndarray:
    full = np.convolve(a, b)
    return full[2 * M - band : 2 * M + band + 1]


def product(
    f: SpectralField,
    g: SpectralField,
    method: str = "fft",
    band: int | None = None,
) -> SpectralField:
    """Exact product f*g, returned on |n| <= band (default 2*M_grid)."""
    M = max(f.M_grid, g.M_grid)
    a = f.resize(M).coeffs
    b = g.resize(M).coeffs
    band = 2 * M if band is None else band
    if band > 2 * M:
        band_out = band
        band = 2 * M
    else:
        band_out = band
    if method == "fft":
        coeffs = product_coeffs_fft(a, b, M, band)
    elif method == "direct":
        coeffs = product_coeffs_direct(a, b, M, band)
    else:
        raise ParameterError(f"unknown product method {method!r}")
    if method == "fft" and f.is_conjugate_symmetric() and g.is_conjugate_symmetric():
        coeffs = _hermitian(coeffs)
    return SpectralField(coeffs, band).resize(band_out)


def check_product_paths(f: SpectralField, g: SpectralField, rtol=PRODUCT_RTOL) -> float:
    """Relative discrepancy between the FFT and direct-convolution products."""
    fast = product(f, g, "fft").coeffs
    slow = product(f, g, "direct").coeffs
    scale = max(np.max(np.abs(slow), initial=0.0), np.finfo(float).tiny)
    err = float(np.max(np.abs(fast - slow), initial=0.0) / scale)
    if err > rtol:
        raise ConsistencyError(f"product paths disagree: relative error {err:.3e}")
    return err


def bilinear_ratio(f: SpectralField, g: SpectralField, s: float = 0.0, p=2) -> float:
    """||phi(D)(fg)||_{FL^{s,p}} / (||f||_{FL^{s,p}} ||g||_{FL^{s,p}})."""
    denom = fourier_lebesgue_norm(f, s, p) * fourier_lebesgue_norm(g, s, p)
    if denom == 0.0:
        return 0.0
    return fourier_lebesgue_norm(apply_multiplier(product(f, g), PHI), s, p) / denom


def bilinear_l2_constant(pairs) -> float:
    """Largest ||phi(D)(fg)||_{L2} / (||f|| ||g||) over the given pairs."""
    worst = 0.0
    for f, g in pairs:
        denom = sobolev_norm(f, 0.0) * sobolev_norm(g, 0.0)
        if denom == 0.0:
            continue
        lhs = sobolev_norm(apply_multiplier(product(f, g), PHI), 0.0)
        worst = max(worst, lhs / denom)
    return worst


def decaying_random_field(rng: np.random.Generator, M: int, decay: float = 1.0):
    """Real field with standard complex normal coefficients times <n>^-decay."""
    n = np.arange(M + 1)
    g = (rng.standard_normal(M + 1) + 1j * rng.standard_normal(M + 1)) / np.sqrt(2)
    g[0] = rng.standard_normal()
    return SpectralField.from_nonnegative(g * japanese(n) ** (-decay))
