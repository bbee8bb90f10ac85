import numpy as np
import scipy.fft

from app.errors import ResolutionError
from app.spectral.field import SpectralField


def to_grid(f: SpectralField, grid_points: int) -> np.ndarray:
    """Values of f at x_j = 2*pi*j/L, j = 0..L-1."""
    M = f.M_grid
    if grid_points < 2 * M + 1:
        raise ResolutionError(
            f"grid_points={grid_points} below resolution floor {2 * M + 1}"
        )
    padded = np.zeros(grid_points, dtype=complex)
    padded[: M + 1] = f.coeffs[M:]
    if M:
        padded[-M:] = f.coeffs[:M]
    return scipy.fft.ifft(padded) * grid_points


def from_grid(values: np.ndarray, M: int) -> SpectralField:
    L = values.shape[-1]
    if L < 2 * M + 1:
        raise ResolutionError(f"{L} grid points cannot carry band {M}")
    spectrum = scipy.fft.fft(values) / L
    if M == 0:
        return SpectralField(spectrum[:1], 0)
    coeffs = np.concatenate([spectrum[L - M :], spectrum[: M + 1]])
    return SpectralField(coeffs, M)


def padded_size(M: int, band: int) -> int:
    """Grid size making the product of two band-M fields exact up to |n| <= band."""
    return scipy.fft.next_fast_len(max(2 * M + band + 1, 2 * M + 1))
