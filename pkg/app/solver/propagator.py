"""The linear flow S(t) = exp(-it phi(D)) and the Duhamel time integral."""

import numpy as np
from scipy.integrate import cumulative_simpson

from app.errors import ParameterError
from app.spectral.field import SpectralField, frequencies, phi
from app.spectral.norms import sobolev_norm


def phases(t: float, M: int) -> np.ndarray:
    """exp(-i t phi(n)) for n = -M..M."""
    return np.exp(-1j * t * phi(frequencies(M)))


def linear_propagator(f: SpectralField, t: float) -> SpectralField:
    if t == 0:
        return f
    return SpectralField(phases(t, f.M_grid) * f.coeffs, f.M_grid)


def energy(u: SpectralField) -> float:
    """E(u) = 1/2 ||u||_{H^1}^2."""
    return 0.5 * sobolev_norm(u, 1.0) ** 2


def q_of_s(s: float) -> float:
    """Default integrability exponent: 1/s for s <= 1/2, 1/(1 - s) above."""
    if not 0 < s < 1:
        raise ParameterError(f"s must lie in (0, 1), got {s}")
    return 1.0 / s if s <= 0.5 else 1.0 / (1.0 - s)


def cumulative_integral(values: np.ndarray, times: np.ndarray) -> np.ndarray:
    """int_0^t values dt' at every node (axis 0 is time), Simpson rule."""
    values = np.asarray(values)
    if values.shape[0] == 1:
        return np.zeros_like(values)
    if np.iscomplexobj(values):
        real = cumulative_simpson(values.real, x=times, axis=0, initial=0.0)
        imag = cumulative_simpson(values.imag, x=times, axis=0, initial=0.0)
        return real + 1j * imag
    return cumulative_simpson(values, x=times, axis=0, initial=0.0)


def duhamel_rows(times: np.ndarray, forcing: np.ndarray, M: int) -> np.ndarray:
    """-(i/2) int_0^t S(t - t') forcing(t') dt' on every node.

    `forcing` has one row of band-M coefficients per time node.
    """
    symbol = phi(frequencies(M))
    back = np.exp(1j * np.outer(times, symbol))
    integral = cumulative_integral(back * forcing, times)
    return -0.5j * np.conj(back) * integral


def reflect_state(f: SpectralField) -> SpectralField:
    """u(x) -> u(-x); with t -> -t this is a symmetry of the flow."""
    return f.reflect()
