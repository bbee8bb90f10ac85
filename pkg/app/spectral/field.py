"""Truncated Fourier representation of periodic fields on the torus.

Coefficients are stored densely for n = -M_grid..M_grid, frequency n at
index n + M_grid. The L2 convention has unit Plancherel coefficient,
||f||^2 = sum |f_hat(n)|^2, which matches the average of |f|^2 over any
grid fine enough to resolve the field.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping
from dataclasses import dataclass

import numpy as np

from app.errors import ParameterError


def frequencies(M: int) -> np.ndarray:
    return np.arange(-M, M + 1)


def japanese(n) -> np.ndarray:
    """<n> = (1 + n^2)^(1/2)."""
    n = np.asarray(n, dtype=float)
    return np.sqrt(1.0 + n * n)


@dataclass(frozen=True, eq=False)
class SpectralField:
    coeffs: np.ndarray
    M_grid: int

    def __post_init__(self):
        if self.M_grid < 0:
            raise ParameterError(f"M_grid must be non-negative, got {self.M_grid}")
        coeffs = np.array(self.coeffs, dtype=complex)
        if coeffs.shape != (2 * self.M_grid + 1,):
            raise ParameterError(
                f"expected {2 * self.M_grid + 1} coefficients, got {coeffs.shape}"
            )
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    # -- constructors -------------------------------------------------------

    @classmethod
    def zeros(cls, M: int) -> SpectralField:
        return cls(np.zeros(2 * M + 1, dtype=complex), M)

    @classmethod
    def from_nonnegative(cls, positive: np.ndarray) -> SpectralField:
        """Real field from its coefficients at n = 0..M (n < 0 by conjugation)."""
        positive = np.asarray(positive, dtype=complex)
        M = positive.size - 1
        coeffs = np.empty(2 * M + 1, dtype=complex)
        coeffs[M:] = positive
        coeffs[M] = positive[0].real
        coeffs[:M] = np.conj(positive[:0:-1])
        return cls(coeffs, M)

    @classmethod
    def from_modes(cls, modes: Mapping[int, complex], M: int) -> SpectralField:
        """Field with the given coefficients; n < 0 entries must be listed
        explicitly (use from_nonnegative for a real field)."""
        coeffs = np.zeros(2 * M + 1, dtype=complex)
        for n, value in modes.items():
            if abs(n) > M:
                raise ParameterError(f"mode {n} outside truncation {M}")
            coeffs[n + M] = value
        return cls(coeffs, M)

    @classmethod
    def from_function(cls, fn: Callable[[np.ndarray], np.ndarray], M: int):
        return cls(np.asarray(fn(frequencies(M)), dtype=complex), M)

    # -- access -------------------------------------------------------------

    @property
    def n(self) -> np.ndarray:
        return frequencies(self.M_grid)

    def __getitem__(self, n: int) -> complex:
        if abs(n) > self.M_grid:
            return 0j
        return complex(self.coeffs[n + self.M_grid])

    def nonnegative(self) -> np.ndarray:
        return self.coeffs[self.M_grid :]

    def is_conjugate_symmetric(self, tol: float = 0.0) -> bool:
        mirror = np.conj(self.coeffs[::-1])
        scale = max(float(np.max(np.abs(self.coeffs), initial=0.0)), 1.0)
        return bool(np.max(np.abs(self.coeffs - mirror), initial=0.0) <= tol * scale)

    def is_conjugate_antisymmetric(self, tol: float = 0.0) -> bool:
        mirror = -np.conj(self.coeffs[::-1])
        scale = max(float(np.max(np.abs(self.coeffs), initial=0.0)), 1.0)
        return bool(np.max(np.abs(self.coeffs - mirror), initial=0.0) <= tol * scale)

    def support(self, rel_tol: float = 1e-9) -> np.ndarray:
        mags = np.abs(self.coeffs)
        peak = mags.max(initial=0.0)
        if peak == 0.0:
            return np.array([], dtype=int)
        return self.n[mags > rel_tol * peak]

    # -- algebra ------------------------------------------------------------

    def resize(self, M: int) -> SpectralField:
        """Zero-pad or truncate to a new band."""
        out = np.zeros(2 * M + 1, dtype=complex)
        keep = min(M, self.M_grid)
        out[M - keep : M + keep + 1] = self.coeffs[
            self.M_grid - keep : self.M_grid + keep + 1
        ]
        return SpectralField(out, M)

    def _aligned(self, other: SpectralField) -> tuple[np.ndarray, np.ndarray, int]:
        M = max(self.M_grid, other.M_grid)
        return self.resize(M).coeffs, other.resize(M).coeffs, M

    def __add__(self, other: SpectralField) -> SpectralField:
        a, b, M = self._aligned(other)
        return SpectralField(a + b, M)

    def __sub__(self, other: SpectralField) -> SpectralField:
        a, b, M = self._aligned(other)
        return SpectralField(a - b, M)

    def __neg__(self) -> SpectralField:
        return SpectralField(-self.coeffs, self.M_grid)

    def __mul__(self, scalar: complex) -> SpectralField:
        return SpectralField(self.coeffs * scalar, self.M_grid)

    __rmul__ = __mul__

    def reflect(self) -> SpectralField:
        """x -> -x, i.e. f_hat(n) -> f_hat(-n)."""
        return SpectralField(self.coeffs[::-1], self.M_grid)

    def allclose(self, other: SpectralField, rtol=1e-12, atol=1e-14) -> bool:
        a, b, _ = self._aligned(other)
        scale = max(np.max(np.abs(a), initial=0.0), np.max(np.abs(b), initial=0.0))
        return bool(np.max(np.abs(a - b), initial=0.0) <= atol + rtol * scale)

    # -- serialization ------------------------------------------------------

    def to_record(self) -> dict:
        """{M_grid, pairs [n, re, im] for n >= 0}."""
        pos = self.nonnegative()
        return {
            "M_grid": self.M_grid,
            "pairs": [
                [n, float(value.real), float(value.imag)] for n, value in enumerate(pos)
            ],
        }

    @classmethod
    def from_record(cls, record: Mapping) -> SpectralField:
        M = int(record["M_grid"])
        positive = np.zeros(M + 1, dtype=complex)
        for n, re, im in record["pairs"]:
            positive[int(n)] = complex(re, im)
        return cls.from_nonnegative(positive)

    def __repr__(self) -> str:
        return f"<SpectralField(M_grid={self.M_grid}, support={self.support().size})>"


@dataclass(frozen=True)
class MultiplierSymbol:
    name: str
    rule: Callable[[np.ndarray], np.ndarray]

    def __call__(self, n) -> np.ndarray:
        return np.asarray(self.rule(np.asarray(n, dtype=float)))

    def is_real_preserving(self, M: int = 64) -> bool:
        n = frequencies(M)
        values = self(n).astype(complex)
        return bool(np.allclose(values[::-1], np.conj(values), rtol=0, atol=1e-14))


def apply_multiplier(f: SpectralField, sym: MultiplierSymbol) -> SpectralField:
    return SpectralField(sym(f.n) * f.coeffs, f.M_grid)


def phi(n) -> np.ndarray:
    n = np.asarray(n, dtype=float)
    return n / (1.0 + n * n)


PHI = MultiplierSymbol("phi", phi)


def bessel_symbol(s: float) -> MultiplierSymbol:
    return MultiplierSymbol(f"<D>^{s}", lambda n: japanese(n) ** s)


def derivative_symbol() -> MultiplierSymbol:
    return MultiplierSymbol("d/dx", lambda n: 1j * n)


def propagator_symbol(t: float) -> MultiplierSymbol:
    return MultiplierSymbol(f"S({t})", lambda n: np.exp(-1j * t * phi(n)))


def zero_mode_projection() -> MultiplierSymbol:
    return MultiplierSymbol("P_{!=0}", lambda n: (n != 0).astype(float))
