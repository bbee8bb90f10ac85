"""Experiment configuration: a JSON document with one section per module.

Every section key has a default; a config file only names what it changes.
Unknown keys and values of the wrong type are collected and reported
together as dotted key paths.
"""

import copy
import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from app.errors import ConfigError

logger = logging.getLogger(__name__)

KINDS = (
    "regularity-scan",
    "ck-divergence",
    "nz-convergence",
    "sharpness",
    "gwp-energy-trace",
    "inflation",
    "tails",
    "chaos-moments",
    "solver-validate",
)

FORMATS = ("csv", "json")

SECTION_DEFAULTS: dict[str, dict] = {
    "spectral": {
        "s_list": [0.0, 1.0],
        "grid_factor": 8,
    },
    "random_data": {
        "family": "gaussian",
        "alpha": 0.5,
        "M_grid": 64,
        "M_list": [64, 128, 256, 512, 1024],
        "n_samples": 1000,
        "s_offset": 0.1,
        "q_list": [2, 4, 8, 16],
        "families": ["gaussian", "uniform-phase"],
        "indices": [[3, -3], [1, 2, 3], [1, -1, 1, -1], [1, -1, 2, -2]],
    },
    "nonlinearity": {
        "kernel": "dirichlet",
        "k_list": [16, 32, 64, 128, 256, 512, 1024, 2048, 4096],
        "s2": 0.7,
        "n_samples": 200,
        "test_mode": 1,
        "nz_k_list": [16, 32, 64, 128, 256, 512],
        "N_list": [64, 128, 256, 512, 1024, 2048, 4096],
        "quartic_s": 0.5,
        "quartic_T": 1.0,
    },
    "solver": {
        "scheme": "if-rk4",
        "dt": 1e-3,
        "T_final": 1.0,
        "M_grid": 64,
        "picard_tol": 1e-10,
        "picard_max_iter": 50,
        "picard_nodes": 201,
        "blowup_threshold": 1e12,
        "order_dt": 0.025,
        "k_factors": [1, 2, 4, 8],
    },
    "imethod": {
        "N": 16,
        "s": 0.6,
        "epsilon": 0.01,
        "n_trajectories": 20,
        "kernel": None,
        "k": None,
    },
    "inflation": {
        "s": -1.0,
        "p": 2.0,
        "n": 2,
        "N": 512.0,
        "search": False,
        "delta": None,
        "theta": None,
        "c_A": 0.125,
        "c_R": 0.3,
        "c_T": 24.0,
        "M_factor": 3,
        "steps": 200,
        "base_amplitude": 0.0,
    },
    "tails": {
        "observable": "z",
        "T": 1.0,
        "n_samples": 10000,
        "M_grid": 32,
        "n_times": 9,
        "n_paths": 20,
        "q": 8.0,
        "beta": None,
        "regularity": None,
        "r2_min": 0.9,
    },
}

TOP_LEVEL = ("kind", "master_seed", "output_dir", "threads", "fmt")


def _type_ok(default, value) -> bool:
    if isinstance(value, bool) or isinstance(default, bool):
        return isinstance(value, bool) and isinstance(default, bool)
    if default is None:
        return value is None or isinstance(value, (int, float, str))
    if isinstance(default, float):
        return isinstance(value, (int, float))
    if isinstance(default, int):
        return isinstance(value, int)
    if isinstance(default, list):
        return isinstance(value, list)
    return isinstance(value, type(default))


@dataclass
class ExperimentConfig:
    kind: str
    master_seed: int = 20240601
    output_dir: str = "runs"
    threads: int = 1
    fmt: str = "csv"
    sections: dict[str, dict] = field(
        default_factory=lambda: copy.deepcopy(SECTION_DEFAULTS)
    )

    def __post_init__(self):
        bad = []
        if self.kind not in KINDS:
            bad.append("kind")
        if isinstance(self.master_seed, bool) or not isinstance(self.master_seed, int):
            bad.append("master_seed")
        elif self.master_seed < 0:
            bad.append("master_seed")
        if not isinstance(self.output_dir, str):
            bad.append("output_dir")
        if isinstance(self.threads, bool) or not isinstance(self.threads, int):
            bad.append("threads")
        elif self.threads < 1:
            bad.append("threads")
        if self.fmt not in FORMATS:
            bad.append("fmt")
        merged = copy.deepcopy(SECTION_DEFAULTS)
        for name, values in self.sections.items():
            if name not in SECTION_DEFAULTS or not isinstance(values, dict):
                bad.append(name)
                continue
            for key, value in values.items():
                if key not in SECTION_DEFAULTS[name]:
                    bad.append(f"{name}.{key}")
                elif not _type_ok(SECTION_DEFAULTS[name][key], value):
                    bad.append(f"{name}.{key}")
                else:
                    merged[name][key] = value
        if bad:
            raise ConfigError(f"invalid configuration keys: {', '.join(bad)}", bad)
        self.sections = merged

    def section(self, name: str) -> dict:
        return self.sections[name]

    def with_overrides(self, **changes) -> "ExperimentConfig":
        values = self.to_dict()
        values.update({k: v for k, v in changes.items() if v is not None})
        return from_dict(values)

    def to_dict(self) -> dict:
        data = {key: getattr(self, key) for key in TOP_LEVEL}
        data.update(copy.deepcopy(self.sections))
        return data


def from_dict(data: dict) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a JSON object", ["<root>"])
    unknown = [
        key for key in data if key not in TOP_LEVEL and key not in SECTION_DEFAULTS
    ]
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}", unknown)
    if "kind" not in data:
        raise ConfigError("configuration has no experiment kind", ["kind"])
    top = {key: data[key] for key in TOP_LEVEL if key in data}
    sections = {key: data[key] for key in SECTION_DEFAULTS if key in data}
    return ExperimentConfig(**top, sections=sections)


def dumps(cfg: ExperimentConfig) -> str:
    return json.dumps(cfg.to_dict(), indent=2, sort_keys=True)


def loads(text: str, defaults: dict | None = None) -> ExperimentConfig:
    """Parse a JSON config; top-level keys it omits are taken from defaults."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"configuration is not valid JSON: {e}", ["<root>"]) from e
    if defaults and isinstance(data, dict):
        data = {**defaults, **data}
    return from_dict(data)


def load_config(path: str | Path, defaults: dict | None = None) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read configuration {path}: {e}", ["<file>"]) from e
    cfg = loads(text, defaults)
    logger.info("Loaded %s configuration from %s", cfg.kind, path)
    return cfg


def dump_config(cfg: ExperimentConfig, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(dumps(cfg) + "\n", encoding="utf-8")
    return path


def config_hash(cfg: ExperimentConfig) -> str:
    """SHA-256 of the canonical JSON (sorted keys, compact separators)."""
    canonical = json.dumps(cfg.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
