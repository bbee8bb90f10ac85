import logging
import math
from dataclasses import asdict, dataclass, field

import numpy as np
import pandas as pd

from app.errors import GridMismatchError, ParameterError
from app.randomdata.mollifiers import get_kernel, mollify
from app.spectral.field import SpectralField, apply_multiplier, propagator_symbol
from app.spectral.norms import sobolev_norm

logger = logging.getLogger(__name__)

SCHEMES = ("if-rk4", "picard")


@dataclass(frozen=True)
class SolverConfig:
    dt: float = 1e-3
    T_final: float = 1.0
    M_grid: int = 64
    scheme: str = "if-rk4"
    picard_tol: float = 1e-10
    picard_max_iter: int = 50
    picard_nodes: int = 201
    # sup |u_hat| above which a run is reported as blown up
    blowup_threshold: float = 1e12

    def __post_init__(self):
        if not self.dt > 0:
            raise ParameterError(f"dt must be positive, got {self.dt}")
        if not self.T_final >= 0:
            raise ParameterError(f"T_final must be non-negative, got {self.T_final}")
        if self.M_grid < 0:
            raise ParameterError(f"M_grid must be non-negative, got {self.M_grid}")
        if self.scheme not in SCHEMES:
            raise ParameterError(f"unknown scheme {self.scheme!r}; known: {SCHEMES}")
        if not self.picard_tol > 0:
            raise ParameterError(f"picard_tol must be positive, got {self.picard_tol}")
        if self.picard_max_iter < 1:
            raise ParameterError("picard_max_iter must be at least 1")
        if self.picard_nodes < 3:
            raise ParameterError("picard_nodes must be at least 3")

    def time_grid(self) -> np.ndarray:
        """0, dt, 2dt, ... up to T_final; the last interval may be short."""
        n_full = int(math.floor(self.T_final / self.dt + 1e-9))
        times = self.dt * np.arange(n_full + 1)
        if self.T_final - times[-1] > 1e-12 * max(1.0, self.T_final):
            times = np.append(times, self.T_final)
        else:
            times[-1] = self.T_final
        return times

    def replace(self, **changes) -> "SolverConfig":
        values = asdict(self)
        values.update(changes)
        return SolverConfig(**values)


@dataclass(frozen=True, eq=False)
class ZSource:
    """The linear part z(t) = S(t) z0 of the split u = z + v.

    z0 is u0z, mollified by rho(D/k) when a kernel is given.
    """

    u0z: SpectralField
    kernel: str | None = None
    k: float | None = None

    def __post_init__(self):
        if self.kernel is not None:
            get_kernel(self.kernel)
            if self.k is None or self.k <= 0:
                raise ParameterError("a mollified z source needs a positive k")

    def initial(self, M: int | None = None) -> SpectralField:
        z0 = self.u0z
        if self.kernel is not None:
            z0 = mollify(z0, self.kernel, self.k)
        return z0 if M is None else z0.resize(M)

    def at(self, t: float, M: int | None = None) -> SpectralField:
        return apply_multiplier(self.initial(M), propagator_symbol(t))

    def same_as(self, other: "ZSource | None") -> bool:
        if other is None:
            return False
        return (
            self.kernel == other.kernel
            and self.k == other.k
            and self.u0z.M_grid == other.u0z.M_grid
            and bool(np.array_equal(self.u0z.coeffs, other.u0z.coeffs))
        )

    def describe(self) -> str:
        if self.kernel is None:
            return "exact-linear"
        return f"{self.kernel}(k={self.k:g})"


@dataclass(eq=False)
class Trajectory:
    times: np.ndarray
    states: list[SpectralField]
    config: SolverConfig
    blew_up: bool = False
    z_source: ZSource | None = None
    scheme: str = field(default="")

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if len(self.states) != self.times.size:
            raise ParameterError(
                f"{len(self.states)} states for {self.times.size} times"
            )
        if not self.scheme:
            self.scheme = self.config.scheme

    def __len__(self) -> int:
        return self.times.size

    @property
    def final(self) -> SpectralField:
        return self.states[-1]

    @property
    def M_grid(self) -> int:
        return self.states[0].M_grid

    def coefficient_rows(self) -> np.ndarray:
        """Shape (len(times), 2M + 1)."""
        return np.stack([state.coeffs for state in self.states])

    def index_of(self, t: float) -> int:
        hits = np.flatnonzero(np.abs(self.times - t) <= 1e-12 * max(1.0, abs(t)))
        if hits.size == 0:
            raise GridMismatchError(f"t={t} is not a node of the trajectory grid")
        return int(hits[0])

    def state_at(self, t: float) -> SpectralField:
        return self.states[self.index_of(t)]

    def same_grid(self, other: "Trajectory") -> bool:
        return self.times.shape == other.times.shape and bool(
            np.allclose(self.times, other.times, rtol=1e-12, atol=1e-14)
        )

    def norms(self, s: float) -> np.ndarray:
        return np.array([sobolev_norm(state, s) for state in self.states])

    def to_frame(self, s_list=(0.0, 1.0), extra: dict | None = None) -> pd.DataFrame:
        """Norm time series: t, one H^s column per s, the energy and extras."""
        columns = {"t": self.times}
        for s in s_list:
            columns[f"H^{s:g}"] = self.norms(s)
        columns["energy"] = 0.5 * self.norms(1.0) ** 2
        for name, values in (extra or {}).items():
            columns[name] = np.asarray(values)
        return pd.DataFrame(columns)

    def to_record(self) -> dict:
        return {
            "times": [float(t) for t in self.times],
            "states": [state.to_record() for state in self.states],
            "blew_up": self.blew_up,
            "scheme": self.scheme,
        }
