import argparse
import logging
import sys

from app.config.experiment import KINDS

EXIT_CONFIG = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bbm-lab",
        description="Numerical experiments for the BBM equation with random data.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    for kind in KINDS:
        sub = commands.add_parser(kind, help=f"run the {kind} experiment")
        sub.add_argument("--config", help="JSON experiment configuration")
        sub.add_argument("--seed", type=int, help="master seed (u64)")
        sub.add_argument("--out", help="output directory")
        sub.add_argument("--threads", type=int, help="worker-pool size")
        sub.add_argument("--format", choices=("csv", "json"), dest="fmt")

    check = commands.add_parser("validate", help="report parameter-regime diagnostics")
    check.add_argument("--config", required=True, help="JSON experiment configuration")

    runs = commands.add_parser("runs", help="list registered runs")
    runs.add_argument("--kind", choices=KINDS)
    return parser


def _config_for(args: argparse.Namespace):
    from app.config import settings
    from app.config.experiment import ExperimentConfig, load_config

    defaults = {
        "master_seed": settings.MASTER_SEED,
        "output_dir": str(settings.OUTPUT_DIR),
        "threads": settings.THREADS,
    }
    if args.config:
        cfg = load_config(args.config, defaults)
        if cfg.kind != args.command:
            from app.errors import ConfigError

            raise ConfigError(
                f"config is for {cfg.kind!r} but {args.command!r} was requested",
                ["kind"],
            )
    else:
        cfg = ExperimentConfig(kind=args.command, **defaults)
    return cfg.with_overrides(
        master_seed=args.seed,
        output_dir=args.out,
        threads=args.threads,
        fmt=args.fmt,
    )


def _list_runs(kind: str | None) -> int:
    from app.database.repository import get_checks_for_run, init_db, list_runs_by_kind

    init_db()
    for run in list_runs_by_kind(kind):
        checks = get_checks_for_run(run.id)
        passed = sum(check.passed for check in checks)
        print(
            f"{run.id:5d}  {run.kind:17s} {run.status:5s} "
            f"{passed}/{len(checks)} checks  seed={run.master_seed}  "
            f"{run.created_at:%Y-%m-%d %H:%M}  {run.output_dir}"
        )
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    # Settings are validated on import and exit with status 2 when malformed
    from app.config.settings import ENVIRONMENT, LOG_LEVEL

    logging.basicConfig(
        level=LOG_LEVEL,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        stream=sys.stdout,
    )
    logger = logging.getLogger(__name__)
    logger.info("Starting bbm-lab %s (%s)", args.command, ENVIRONMENT)

    from app.errors import BBMLabError, ConfigError

    try:
        if args.command == "runs":
            return _list_runs(args.kind)
        if args.command == "validate":
            from app.config.experiment import load_config
            from app.experiments import validate

            for diagnostic in validate(load_config(args.config)):
                print(diagnostic)
            return 0

        from app.experiments import run

        status, run_dir = run(_config_for(args))
    except ConfigError as e:
        logger.error("Configuration error: %s", e)
        if e.keys:
            logger.error("Offending keys: %s", ", ".join(e.keys))
        return EXIT_CONFIG
    except BBMLabError as e:
        logger.error("%s failed: %s: %s", args.command, type(e).__name__, e)
        return EXIT_CONFIG

    print(f"{args.command}: {'PASS' if status == 0 else 'FAIL'}  ({run_dir})")
    return status


if __name__ == "__main__":
    sys.exit(main())
