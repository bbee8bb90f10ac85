import json
import os
from pathlib import Path

import pytest

from app.config.experiment import (
    SECTION_DEFAULTS,
    ExperimentConfig,
    config_hash,
    dump_config,
    dumps,
    from_dict,
    load_config,
    loads,
)
from app.errors import ConfigError


def test_test_env_vars_are_set():
    for var in ("BBM_OUTPUT_DIR", "BBM_DATABASE_URL", "BBM_THREADS", "ENVIRONMENT"):
        assert os.getenv(var), f"Missing env var: {var}"


def test_settings_read_the_environment():
    from app.config import settings

    assert settings.THREADS == 1
    assert settings.DATABASE_URL == os.environ["BBM_DATABASE_URL"]
    assert settings.ENVIRONMENT == "test"


def test_defaults_fill_every_section():
    cfg = from_dict({"kind": "tails"})
    assert cfg.section("tails") == SECTION_DEFAULTS["tails"]
    assert cfg.master_seed == 20240601
    assert cfg.fmt == "csv"


def test_partial_section_keeps_other_defaults():
    cfg = from_dict({"kind": "solver-validate", "solver": {"dt": 0.01}})
    assert cfg.section("solver")["dt"] == 0.01
    assert cfg.section("solver")["M_grid"] == SECTION_DEFAULTS["solver"]["M_grid"]


def test_integer_accepted_where_a_float_is_expected():
    cfg = from_dict({"kind": "solver-validate", "solver": {"T_final": 2}})
    assert cfg.section("solver")["T_final"] == 2


def test_unknown_top_level_keys_are_reported():
    with pytest.raises(ConfigError) as info:
        from_dict({"kind": "tails", "colour": "blue"})
    assert info.value.keys == ["colour"]


def test_all_bad_keys_are_reported_together():
    with pytest.raises(ConfigError) as info:
        from_dict(
            {
                "kind": "tails",
                "threads": 0,
                "solver": {"dt": "small", "stepper": "euler"},
                "tails": {"n_samples": 1.5},
            }
        )
    assert set(info.value.keys) == {
        "threads",
        "solver.dt",
        "solver.stepper",
        "tails.n_samples",
    }


def test_booleans_are_not_numbers():
    with pytest.raises(ConfigError) as info:
        from_dict({"kind": "inflation", "inflation": {"n": True}})
    assert info.value.keys == ["inflation.n"]
    with pytest.raises(ConfigError):
        from_dict({"kind": "inflation", "master_seed": False})


def test_kind_is_required_and_checked():
    with pytest.raises(ConfigError) as info:
        from_dict({"master_seed": 3})
    assert info.value.keys == ["kind"]
    with pytest.raises(ConfigError):
        ExperimentConfig(kind="ensemble-forecast")


def test_invalid_json():
    with pytest.raises(ConfigError) as info:
        loads("{kind: tails")
    assert info.value.keys == ["<root>"]
    with pytest.raises(ConfigError):
        loads("[1, 2]")


def test_loads_takes_top_level_defaults():
    cfg = loads('{"kind": "sharpness"}', defaults={"master_seed": 7, "threads": 2})
    assert cfg.master_seed == 7
    assert cfg.threads == 2
    cfg = loads('{"kind": "sharpness", "master_seed": 9}', defaults={"master_seed": 7})
    assert cfg.master_seed == 9


def test_round_trip_through_a_file(tmp_path):
    cfg = from_dict(
        {"kind": "nz-convergence", "nonlinearity": {"s2": 0.6, "kernel": "fejer"}}
    )
    path = dump_config(cfg, tmp_path / "nz.json")
    again = load_config(path)
    assert again == cfg
    assert json.loads(path.read_text())["nonlinearity"]["kernel"] == "fejer"
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")


def test_hash_is_stable_and_sensitive():
    cfg = from_dict({"kind": "ck-divergence"})
    same = loads(dumps(cfg))
    assert config_hash(cfg) == config_hash(same)
    assert len(config_hash(cfg)) == 64
    other = cfg.with_overrides(master_seed=cfg.master_seed + 1)
    assert config_hash(other) != config_hash(cfg)


def test_overrides_skip_none_and_revalidate():
    cfg = from_dict({"kind": "tails"})
    assert cfg.with_overrides(threads=None, fmt="json").fmt == "json"
    assert cfg.with_overrides(threads=None).threads == cfg.threads
    with pytest.raises(ConfigError):
        cfg.with_overrides(fmt="parquet")


CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


@pytest.mark.parametrize(
    "path", sorted(CONFIG_DIR.glob("*.json")), ids=lambda p: p.stem
)
def test_shipped_configs_load(path):
    cfg = load_config(path)
    assert cfg.kind in path.stem


def test_shipped_configs_carry_the_acceptance_parameters():
    ck = load_config(CONFIG_DIR / "ck-divergence.json")
    assert ck.section("random_data")["alpha"] == 0.3
    assert ck.section("nonlinearity")["k_list"] == [2**j for j in range(4, 13)]
    assert ck.section("nonlinearity")["n_samples"] == 10_000
    scan = load_config(CONFIG_DIR / "regularity-scan.json")
    assert scan.section("random_data")["n_samples"] == 1000
    sharp = load_config(CONFIG_DIR / "sharpness.json")
    assert sharp.section("random_data")["alpha"] == 0.2
    assert sharp.section("nonlinearity")["N_list"] == [2**j for j in range(6, 13)]
    chaos = load_config(CONFIG_DIR / "chaos-moments.json")
    assert set(chaos.section("random_data")["families"]) == {
        "gaussian",
        "uniform-phase",
    }
    assert chaos.section("random_data")["n_samples"] == 100_000
    gwp = load_config(CONFIG_DIR / "gwp-energy-trace.json")
    assert gwp.section("imethod")["n_trajectories"] == 20
    tails = load_config(CONFIG_DIR / "tails-nz.json")
    assert tails.section("tails")["observable"] == "nz"
