"""
Command line interface of tvcnlab.

    tvcnlab generate|metrics|routes|traffic --config <file> [--out <dir>] [--seed <n>]
    tvcnlab experiment --config <file>|--pack <name> [--out <dir>] [--seed <n>] [--jobs <n>]
    tvcnlab check [--out <dir>]

Exit codes: 0 on success, 1 when a check fails, 2 on a configuration error, 3 on a runtime error.
"""

import argparse
import logging
import os
import sys
from typing import List, Optional

from . import data
from ._version import __version__
from .acceptance import run_check
from .config import load_config, resolve_jobs
from .exceptions import ConfigError, TVCNError
from .experiments import run_experiment, run_generate, run_metrics, run_routes, run_traffic
from .models import ExperimentSpec, GrowthConfig, MetricsRunConfig, RoutesRunConfig, TrafficRunConfig

__all__ = ["main", "build_parser"]

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

_run_configs = {
    "generate": GrowthConfig,
    "metrics": MetricsRunConfig,
    "routes": RoutesRunConfig,
    "traffic": TrafficRunConfig,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tvcnlab", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=str, default="tvcnlab_out", help="output directory")
    common.add_argument("--seed", type=int, default=None, help="override the seed of the config")
    common.add_argument("-v", "--verbose", action="count", default=0, help="more log output, repeatable")
    common.add_argument("--quiet", action="store_true", help="no progress bars")

    sub = ap.add_subparsers(dest="command", metavar="command")
    sub.required = True

    helps = {
        "generate": "grow a network and write every snapshot",
        "metrics": "structural metrics of the grown network",
        "routes": "route users with every strategy",
        "traffic": "simulate traffic with every strategy",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--config", type=str, required=True, help="JSON or YAML run configuration")
        if name == "traffic":
            p.add_argument("--trace", action="store_true", help="also write the packet count of every step")

    p = sub.add_parser("experiment", parents=[common], help="run a multi-realization experiment sweep")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", type=str, help="JSON or YAML experiment specification")
    source.add_argument("--pack", type=str, choices=data.list_experiments(), help="a bundled experiment pack")
    p.add_argument("--jobs", type=int, default=None, help="worker processes; TVCNLAB_JOBS takes precedence")

    p = sub.add_parser("check", help="compare the results of an experiment with the expected orderings")
    p.add_argument("--out", type=str, default="tvcnlab_out", help="directory an experiment wrote into")
    p.add_argument("-v", "--verbose", action="count", default=0, help="more log output, repeatable")

    return ap


def _configure_logging(verbose: int) -> None:
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="%(asctime)s %(name)s %(levelname)s: %(message)s")


def _dispatch(args: argparse.Namespace) -> List[str]:
    if args.command == "experiment":
        if args.pack is not None:
            raw = data.get_experiment(args.pack).dict()
        else:
            raw = args.config
        spec = load_config(raw, ExperimentSpec, overrides={"base_seed": args.seed})
        jobs = resolve_jobs(args.jobs)
        return run_experiment(spec, args.out, jobs=jobs, progress=not args.quiet)

    cfg = load_config(args.config, _run_configs[args.command], overrides={"rng_seed": args.seed})

    if args.command == "generate":
        return run_generate(cfg, args.out)
    elif args.command == "metrics":
        return run_metrics(cfg, args.out)
    elif args.command == "routes":
        return run_routes(cfg, args.out)
    else:
        return run_traffic(cfg, args.out, keep_trace=args.trace)


def _check(out_dir: str) -> int:
    results, path = run_check(out_dir)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.criterion}  ({r.detail})")
    logger.info(f"Output: {os.path.abspath(path)}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK_FAILED


def main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point of the ``tvcnlab`` console script.
    """
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)

    try:
        if args.command == "check":
            return _check(args.out)
        files = _dispatch(args)
    except ConfigError as exc:
        print(f"tvcnlab: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (TVCNError, OSError, ValueError, ArithmeticError, RuntimeError) as exc:
        logger.debug("Run failed", exc_info=True)
        print(f"tvcnlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    for f in files:
        logger.info(f"Output: {os.path.abspath(f)}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
