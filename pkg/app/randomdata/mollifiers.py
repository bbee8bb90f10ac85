import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from app.errors import ParameterError, UnknownFamilyError
from app.spectral.field import SpectralField


@dataclass(frozen=True)
class MollifierKernel:
    name: str
    symbol: Callable[[np.ndarray], np.ndarray]
    # |xi| beyond which the symbol is zero or below double precision
    reach: float

    def __call__(self, xi) -> np.ndarray:
        return self.symbol(np.asarray(xi, dtype=float))

    def support_radius(self, k: float) -> int:
        return int(math.ceil(self.reach * k))


KERNELS: dict[str, MollifierKernel] = {
    "fejer": MollifierKernel(
        "fejer", lambda xi: np.maximum(0.0, 1.0 - np.abs(xi)), 1.0
    ),
    "gaussian-symbol": MollifierKernel(
        "gaussian-symbol", lambda xi: np.exp(-xi * xi), 6.0
    ),
    "dirichlet": MollifierKernel(
        "dirichlet", lambda xi: (np.abs(xi) <= 1.0).astype(float), 1.0
    ),
}


def get_kernel(kernel: str | MollifierKernel) -> MollifierKernel:
    if isinstance(kernel, MollifierKernel):
        return kernel
    try:
        return KERNELS[kernel]
    except KeyError:
        raise UnknownFamilyError(
            f"unknown mollifier {kernel!r}; known: {sorted(KERNELS)}"
        ) from None


def kernel_weights(kernel: str | MollifierKernel, k: float, M: int) -> np.ndarray:
    """rho_hat(n / k) for n = -M..M."""
    if k <= 0:
        raise ParameterError(f"mollifier scale must be positive, got {k}")
    return get_kernel(kernel)(np.arange(-M, M + 1) / k)


def mollify(f: SpectralField, kernel: str | MollifierKernel, k: float) -> SpectralField:
    return SpectralField(kernel_weights(kernel, k, f.M_grid) * f.coeffs, f.M_grid)


def mollifier_difference_bound(
    kernel: str | MollifierKernel, k_list, theta: float, M: int
) -> list[float]:
    """max_{0<|n|<=M, k' >= k} |rho(n/k') - rho(n/k)| (k/|n|)^theta, per k."""
    n = np.arange(1, M + 1, dtype=float)
    rho = get_kernel(kernel)
    ks = sorted(float(k) for k in k_list)
    bounds = []
    for i, k in enumerate(ks):
        worst = 0.0
        for k_prime in ks[i:]:
            diff = np.abs(rho(n / k_prime) - rho(n / k)) * (k / n) ** theta
            worst = max(worst, float(diff.max()))
        bounds.append(worst)
    return bounds
