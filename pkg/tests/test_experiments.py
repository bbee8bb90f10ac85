import json
import math

import numpy as np
import pandas as pd
import pytest

from app.config.experiment import config_hash, from_dict
from app.experiments import EXIT_PASS, run, run_experiment, validate
from app.experiments.results import Check, ExperimentResult
from app.experiments.validate import INFO, VIOLATION, WARNING, describe_regime
from app.experiments.writer import _jsonable, render_summary, run_directory
from app.main import build_parser, main
from app.nonlinearity.diagnostics import nz_convergence, sharpness_divergence
from app.stats.montecarlo import largest_rise

SMALL_SOLVER = {"dt": 1e-3, "T_final": 0.1, "M_grid": 16}


def _write(tmp_path, name, data) -> str:
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def _levels(diagnostics, level):
    return [d.message for d in diagnostics if d.level == level]


def test_regime_descriptions():
    assert "no renormalization" in describe_regime(0.75)
    assert "renormalized" in describe_regime(0.4)
    assert "no limit" in describe_regime(0.2)


def test_validate_warns_below_one_quarter():
    cfg = from_dict(
        {
            "kind": "nz-convergence",
            "random_data": {"alpha": 0.2},
            "nonlinearity": {"s2": 0.3},
        }
    )
    diagnostics = validate(cfg)
    assert any("not Cauchy" in m for m in _levels(diagnostics, WARNING))


def test_validate_flags_s2_at_two_alpha():
    cfg = from_dict(
        {
            "kind": "nz-convergence",
            "random_data": {"alpha": 0.4},
            "nonlinearity": {"s2": 0.8},
        }
    )
    violations = _levels(validate(cfg), VIOLATION)
    assert len(violations) == 1
    assert "s2" in violations[0]


def test_validate_sharpness_regime():
    cfg = from_dict({"kind": "sharpness", "random_data": {"alpha": 0.3}})
    assert _levels(validate(cfg), VIOLATION)
    cfg = from_dict({"kind": "sharpness", "random_data": {"alpha": 0.2}})
    assert not _levels(validate(cfg), VIOLATION)


def test_validate_echoes_six_inflation_conditions():
    diagnostics = validate(from_dict({"kind": "inflation"}))
    conditions = [d for d in diagnostics if d.message.startswith("(")]
    assert len(conditions) == 6
    assert all(("holds" in d.message) != ("fails" in d.message) for d in conditions)
    assert any("case 1" in d.message for d in diagnostics)


def test_validate_reports_instead_of_raising():
    cfg = from_dict({"kind": "inflation", "inflation": {"s": 0.5}})
    violations = _levels(validate(cfg), VIOLATION)
    assert violations and violations[0].startswith("inflation parameters")
    cfg = from_dict({"kind": "tails", "tails": {"q": 2.0, "beta": 0.4}})
    assert any("GRR" in m for m in _levels(validate(cfg), VIOLATION))


def test_diagnostic_rendering():
    (first, *_) = validate(from_dict({"kind": "ck-divergence"}))
    assert first.level == INFO
    assert str(first).startswith("[INFO] ")


def test_jsonable_values():
    value = {
        "a": np.float64(math.inf),
        "b": [np.int64(3), -math.inf, math.nan],
        "c": 1 + 2j,
        "d": np.array([0.5, 1.5]),
        "e": (True, None),
    }
    assert _jsonable(value) == {
        "a": "inf",
        "b": [3, "-inf", "nan"],
        "c": {"re": 1.0, "im": 2.0},
        "d": [0.5, 1.5],
        "e": [True, None],
    }


def test_result_status_and_summary():
    result = ExperimentResult("tails", "tails decay", pd.DataFrame())
    result.add("slope", "positive slope", True, 1.2, 0.0)
    assert result.exit_status == EXIT_PASS
    result.add("kappa", "fast decay", False, 0.4, 1.6)
    assert result.exit_status == 1
    text = render_summary(from_dict({"kind": "tails"}), result)
    assert "[PASS] slope" in text
    assert "[FAIL] kappa" in text
    assert "result: FAIL" in text
    assert Check("x", "y", True, math.inf).as_dict()["observed"] == "inf"


def test_run_directory_is_named_by_kind_and_hash(tmp_path):
    cfg = from_dict({"kind": "tails", "output_dir": str(tmp_path)})
    assert run_directory(cfg).name == f"tails-{config_hash(cfg)[:12]}"


def test_solver_validate_end_to_end(tmp_path, registry):
    cfg = from_dict(
        {
            "kind": "solver-validate",
            "output_dir": str(tmp_path),
            "solver": SMALL_SOLVER,
        }
    )
    status, run_dir = run(cfg)
    assert status == EXIT_PASS
    assert {p.name for p in run_dir.iterdir()} == {
        "data.csv",
        "manifest.json",
        "summary.txt",
    }
    manifest = json.loads((run_dir / "manifest.json").read_text())
    assert manifest["status"] == "pass"
    assert manifest["config_hash"] == config_hash(cfg)
    assert manifest["config"]["solver"]["M_grid"] == 16
    assert len(manifest["checks"]) == 7
    names = {check["name"] for check in manifest["checks"]}
    assert {"convergence order", "mollifier limits agree"} <= names

    frame = pd.read_csv(run_dir / "data.csv")
    assert list(frame.columns) == ["t", "H^0", "H^1", "energy"]

    (record,) = registry.list_runs_by_kind("solver-validate")
    assert record.output_dir == str(run_dir)
    assert len(registry.get_checks_for_run(record.id)) == 7


def test_json_format(tmp_path, registry):
    cfg = from_dict(
        {
            "kind": "solver-validate",
            "output_dir": str(tmp_path),
            "fmt": "json",
            "solver": SMALL_SOLVER,
        }
    )
    _, run_dir = run(cfg)
    rows = json.loads((run_dir / "data.json").read_text())
    assert rows[0]["t"] == 0.0


def test_results_do_not_depend_on_thread_count():
    base = {
        "kind": "regularity-scan",
        "random_data": {"M_list": [8, 16], "n_samples": 20},
    }
    one = run_experiment(from_dict(base))
    two = run_experiment(from_dict({**base, "threads": 2}))
    pd.testing.assert_frame_equal(one.data, two.data)
    assert one.member_seeds == two.member_seeds


def test_sharpness_fits_the_sampled_variance():
    cfg = from_dict(
        {
            "kind": "sharpness",
            "random_data": {"alpha": 0.2},
            "nonlinearity": {"N_list": [16, 32, 64], "n_samples": 40},
        }
    )
    result = run_experiment(cfg)
    report = sharpness_divergence(0.2, 1, [16, 32, 64], 40, seed=cfg.master_seed)
    (check,) = [c for c in result.checks if c.name == "variance growth exponent"]
    assert check.observed == pytest.approx(report.slope.slope)
    assert result.summary["sampled_slope"] == check.observed
    assert check.observed != pytest.approx(
        result.summary["closed_form_slope"], rel=1e-9
    )


def test_nz_decay_reads_the_monte_carlo_means():
    cfg = from_dict(
        {
            "kind": "nz-convergence",
            "random_data": {"alpha": 0.4},
            "nonlinearity": {
                "kernel": "fejer",
                "s2": 0.7,
                "nz_k_list": [8, 16, 32],
                "n_samples": 60,
            },
        }
    )
    result = run_experiment(cfg)
    report = nz_convergence(0.4, 0.7, "fejer", [8, 16, 32], 60, seed=cfg.master_seed)
    (check,) = [c for c in result.checks if c.name == "cauchy decay"]
    assert check.observed == pytest.approx(largest_rise(report.estimates))
    assert check.threshold == 3.0
    assert check.passed == (check.observed <= 3.0)


def test_parser_accepts_every_kind():
    parser = build_parser()
    args = parser.parse_args(["tails", "--seed", "5", "--format", "json"])
    assert args.seed == 5
    assert args.fmt == "json"
    with pytest.raises(SystemExit):
        parser.parse_args(["tails", "--format", "xml"])


def test_main_rejects_bad_config(tmp_path):
    path = _write(tmp_path, "bad.json", {"kind": "tails", "tails": {"power": 3}})
    assert main(["tails", "--config", path]) == 2


def test_main_rejects_kind_mismatch(tmp_path):
    path = _write(tmp_path, "tails.json", {"kind": "tails"})
    assert main(["sharpness", "--config", path]) == 2


def test_main_maps_domain_errors_to_exit_two(tmp_path, registry):
    path = _write(
        tmp_path,
        "nz.json",
        {"kind": "nz-convergence", "random_data": {"alpha": 0.2}},
    )
    assert main(["nz-convergence", "--config", path, "--out", str(tmp_path)]) == 2


def test_main_validate_prints_diagnostics(tmp_path, capsys):
    path = _write(tmp_path, "inflation.json", {"kind": "inflation"})
    assert main(["validate", "--config", path]) == 0
    out = capsys.readouterr().out
    assert "(v) A < N/8" in out


def test_main_runs_and_lists(tmp_path, registry, capsys):
    path = _write(
        tmp_path, "solver.json", {"kind": "solver-validate", "solver": SMALL_SOLVER}
    )
    out_dir = tmp_path / "out"
    assert main(["solver-validate", "--config", path, "--out", str(out_dir)]) == 0
    assert "solver-validate: PASS" in capsys.readouterr().out
    assert main(["runs", "--kind", "solver-validate"]) == 0
    assert str(out_dir) in capsys.readouterr().out
