import itertools
import math
from dataclasses import dataclass

import numpy as np

from app.errors import ParameterError
from app.spectral.field import MultiplierSymbol, SpectralField, apply_multiplier
from app.spectral.norms import sobolev_norm


@dataclass(frozen=True)
class IParams:
    """Cutoff N and target regularity s of the I-operator."""

    N: float
    s: float

    def __post_init__(self):
        if not self.N >= 1:
            raise ParameterError(f"N must be >= 1, got {self.N}")
        if not 0.5 < self.s < 1:
            raise ParameterError(f"s must lie in (1/2, 1), got {self.s}")

    def symbol(self) -> MultiplierSymbol:
        return MultiplierSymbol(f"m_{self.N:g}", lambda n: i_multiplier(n, self))


def i_multiplier(n, p: IParams) -> np.ndarray | float:
    """m(n) = 1 for |n| <= N, (N/|n|)^(1-s) above."""
    scalar = np.ndim(n) == 0
    n = np.abs(np.asarray(n, dtype=float))
    m = np.ones_like(n)
    high = n > p.N
    m[high] = (p.N / n[high]) ** (1.0 - p.s)
    return float(m) if scalar else m


def apply_i(f: SpectralField, p: IParams) -> SpectralField:
    return apply_multiplier(f, p.symbol())


def modified_energy(v: SpectralField, p: IParams) -> float:
    """E(Iv) = 1/2 ||Iv||_{H^1}^2."""
    return 0.5 * sobolev_norm(apply_i(v, p), 1.0) ** 2


def symmetrized_multiplier(n1: int, n2: int, n3: int, p: IParams) -> complex:
    """Symbol of the trilinear commutator averaged over the six orderings.

    Before symmetrization the symbol is i a m(a) (m(b + c) - m(b) m(c)) on
    a + b + c = 0.
    """
    if n1 + n2 + n3 != 0:
        raise ParameterError(f"frequencies must sum to 0, got {(n1, n2, n3)}")

    def m(n):
        return i_multiplier(n, p)

    total = 0j
    for a, b, c in itertools.permutations((n1, n2, n3)):
        total += 1j * a * m(a) * (m(b + c) - m(b) * m(c))
    return total / math.factorial(3)


def symmetrized_multiplier_closed_form(n1: int, n2: int, n3: int, p: IParams):
    """(i/3) sum_j n_j m(n_j)^2."""
    return 1j / 3.0 * sum(n * i_multiplier(n, p) ** 2 for n in (n1, n2, n3))
