"""Exact second-order term through the phase function.

    Xi_1(t)^(xi) = 1/2 e^(-it phi(xi)) phi(xi)
                   sum_{xi1 + xi2 = xi} u(xi1) u(xi2) (e^(-it theta) - 1) / theta

with theta(xi, xi1) = phi(xi1) + phi(xi - xi1) - phi(xi).
"""

import numpy as np

from app.spectral.field import SpectralField, frequencies, phi

# below this |theta| the kernel uses its second-order series
SMALL_THETA = 1e-12
_BLOCK = 256


def phase_theta(xi, xi1) -> np.ndarray | float:
    """Closed form xi xi1 xi2 (3 + xi^2 - xi1 xi2) / (<xi>^2 <xi1>^2 <xi2>^2)."""
    scalar = np.ndim(xi) == 0 and np.ndim(xi1) == 0
    xi = np.asarray(xi, dtype=float)
    xi1 = np.asarray(xi1, dtype=float)
    xi2 = xi - xi1
    num = xi * xi1 * xi2 * (3.0 + xi * xi - xi1 * xi2)
    den = (1.0 + xi * xi) * (1.0 + xi1 * xi1) * (1.0 + xi2 * xi2)
    theta = num / den
    return float(theta) if scalar else theta


def phase_theta_direct(xi, xi1) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    xi1 = np.asarray(xi1, dtype=float)
    return phi(xi1) + phi(xi - xi1) - phi(xi)


def phase_kernel(theta: np.ndarray, t: float) -> np.ndarray:
    """(e^(-it theta) - 1) / theta, continued by -it - t^2 theta / 2 near 0."""
    theta = np.asarray(theta, dtype=float)
    small = np.abs(theta) < SMALL_THETA
    safe = np.where(small, 1.0, theta)
    kernel = np.expm1(-1j * t * safe) / safe
    return np.where(small, -1j * t - 0.5 * t * t * theta, kernel)


def xi1_exact(
    phi_data: SpectralField, t: float, band: int | None = None
) -> SpectralField:
    """Xi_1 = I[S(.)phi_data, S(.)phi_data](t), on |xi| <= band."""
    band = phi_data.M_grid if band is None else band
    out = np.zeros(2 * band + 1, dtype=complex)
    if t == 0:
        return SpectralField(out, band)
    modes = np.flatnonzero(phi_data.coeffs != 0)
    freqs = phi_data.n[modes]
    values = phi_data.coeffs[modes]
    for start in range(0, freqs.size, _BLOCK):
        a = freqs[start : start + _BLOCK, None]
        xi = a + freqs[None, :]
        inside = np.abs(xi) <= band
        if not np.any(inside):
            continue
        amp = values[start : start + _BLOCK, None] * values[None, :]
        theta = phase_theta(xi, np.broadcast_to(a, xi.shape))
        terms = amp * phase_kernel(theta, t)
        np.add.at(out, xi[inside] + band, terms[inside])
    xi = frequencies(band)
    out *= 0.5 * np.exp(-1j * t * phi(xi)) * phi(xi)
    return SpectralField(out, band)
