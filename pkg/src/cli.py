"""
Command-line front end.

Subcommands:

    gen-trace        write a synthetic trace file
    run              simulate one policy and write metrics CSV + JSON summary
    compare          run several policies (and capacities) on one trace
    eval-predictors  score the FNN, LR and AVG predictors without a cache

Tables go to standard output; logs and ``--progress`` lines go to standard error.
"""

import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional

from .engine import COMPARISON_FIELDS, EpochMetrics, format_table
from .models import CompareConfig, PredictorConfig, RunConfig, SyntheticConfig, TraceSource
from .operations import compare_policies, evaluate_predictors, generate_trace, simulate
from .operations.simulate import output_stem
from .utils.config import config
from .utils.errors import ConfigError, PopCacheError, exit_code_for
from .utils.logger import setup_logging

logger = logging.getLogger(__name__)


def _load_env() -> None:
    try:
        from dotenv import load_dotenv
    except ImportError:
        return
    load_dotenv()
    config.reload()


def _load_json(path: Optional[str]) -> Dict[str, Any]:
    """
    Read a JSON config file; no path means an empty object.

    Raises:
        ConfigError: If the file is missing or not a JSON object
    """
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file {path} is not valid JSON: {e}")
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return data


def _apply_trace_overrides(data: Dict[str, Any], args: argparse.Namespace) -> Dict[str, Any]:
    """--trace replaces the source; --seed also seeds a synthetic workload."""
    data = dict(data)
    if getattr(args, "trace", None):
        data["trace"] = {"file": args.trace}
    data.setdefault("trace", {"synthetic": {}})
    trace = data["trace"]
    if args.seed is not None and isinstance(trace, dict) and isinstance(trace.get("synthetic"), dict):
        data["trace"] = {"synthetic": {**trace["synthetic"], "seed": args.seed}}
    return data


def _progress_printer(enabled: bool):
    if not enabled:
        return None

    def report(epoch: EpochMetrics) -> None:
        parts = [f"epoch {epoch.epoch}", f"requests={epoch.requests}", f"hit_rate={epoch.hit_rate:.4f}"]
        if epoch.train_mse is not None:
            parts.append(f"train_mse={epoch.train_mse:.4f}")
        if epoch.val_mse is not None:
            parts.append(f"val_mse={epoch.val_mse:.4f}")
        print(" ".join(parts), file=sys.stderr, flush=True)

    return report


def cmd_gen_trace(args: argparse.Namespace) -> int:
    overrides = {"seed": args.seed} if args.seed is not None else None
    cfg = SyntheticConfig.from_dict(_load_json(args.config), overrides)
    path = args.out or config.output_path("traces", f"synthetic-s{cfg.seed}.csv")
    count = generate_trace(cfg, path)
    print(f"{count} events written to {path}")
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    data = _apply_trace_overrides(_load_json(args.config), args)
    cfg = RunConfig.from_dict(
        data, {"policy": args.policy, "capacity": args.capacity, "seed": args.seed, "output": args.out}
    )
    metrics = simulate(cfg, progress=_progress_printer(args.progress))
    row = {
        "policy": metrics.policy,
        "capacity": metrics.capacity,
        "requests": metrics.requests,
        "hits": metrics.hits,
        "hit_rate": metrics.hit_rate,
        "post_warmup_hit_rate": metrics.post_warmup_hit_rate,
        "mean_eval_mse": metrics.mean_after_warmup("eval_mse"),
        "mean_val_mse": metrics.mean_after_warmup("val_mse"),
    }
    print(format_table([row], COMPARISON_FIELDS))
    logger.info(f"Metrics stem: {output_stem(cfg)}")
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    data = _apply_trace_overrides(_load_json(args.config), args)
    overrides: Dict[str, Any] = {"seed": args.seed, "output": args.out, "policies": args.policies}
    if args.capacity:
        overrides["capacity"] = args.capacity
    cfg = CompareConfig.from_dict(data, overrides)
    rows = compare_policies(cfg, workers=args.workers)
    print(format_table([row.to_dict() for row in rows], COMPARISON_FIELDS))
    return 0


def cmd_eval_predictors(args: argparse.Namespace) -> int:
    data = _apply_trace_overrides(_load_json(args.config), args)
    unknown = sorted(set(data) - {"trace", "predictor", "seed"})
    if unknown:
        raise ConfigError(f"Unknown evaluation config keys: {', '.join(unknown)}")
    source = TraceSource.from_dict(data["trace"])
    predictor_cfg = PredictorConfig.from_dict(data.get("predictor", {}))
    seed = args.seed if args.seed is not None else int(data.get("seed", 0))
    results = evaluate_predictors(source, predictor_cfg, seed=seed, output=args.out)
    print(format_table([r.to_dict() for r in results], ["predictor", "mean_eval_mse", "mean_val_mse"]))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="popcache",
        description="Trace-driven simulator for popularity-prediction caching",
    )
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR (default: POPCACHE_LOG_LEVEL)")
    parser.add_argument("--log-file", default=None, help="Also write logs to this file")
    parser.add_argument("--progress", action="store_true", default=None, help="Print one line per epoch to stderr")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    gen = sub.add_parser("gen-trace", help="Write a synthetic trace file")
    gen.add_argument("--config", help="JSON file mirroring the synthetic workload settings")
    gen.add_argument("--out", help="Trace CSV path")
    gen.add_argument("--seed", type=int, help="Workload seed")
    gen.set_defaults(handler=cmd_gen_trace)

    run = sub.add_parser("run", help="Simulate one policy")
    run.add_argument("--config", help="JSON run configuration")
    run.add_argument("--trace", help="Read events from this trace file instead of the configured source")
    run.add_argument("--policy", choices=["fnn", "lr", "avg", "lru", "arc"])
    run.add_argument("--capacity", type=int, help="Cache size in contents")
    run.add_argument("--seed", type=int, help="Master seed (also seeds a synthetic workload)")
    run.add_argument("--out", help="Output stem for <stem>.csv and <stem>.json")
    run.set_defaults(handler=cmd_run)

    cmp_parser = sub.add_parser("compare", help="Compare policies on one trace")
    cmp_parser.add_argument("--config", help="JSON comparison configuration")
    cmp_parser.add_argument("--trace", help="Read events from this trace file instead of the configured source")
    cmp_parser.add_argument("--policies", nargs="+", choices=["fnn", "lr", "avg", "lru", "arc"])
    cmp_parser.add_argument("--capacity", type=int, nargs="+", help="One or more cache sizes")
    cmp_parser.add_argument("--seed", type=int, help="Master seed (also seeds a synthetic workload)")
    cmp_parser.add_argument("--workers", type=int, help="Parallel runs (default: POPCACHE_WORKERS)")
    cmp_parser.add_argument("--out", help="Output stem for the comparison table")
    cmp_parser.set_defaults(handler=cmd_compare)

    ev = sub.add_parser("eval-predictors", help="Score the predictors without a cache")
    ev.add_argument("--config", help="JSON with 'trace', 'predictor' and 'seed'")
    ev.add_argument("--trace", help="Read events from this trace file instead of the configured source")
    ev.add_argument("--seed", type=int, help="Master seed (also seeds a synthetic workload)")
    ev.add_argument("--out", help="JSON results path")
    ev.set_defaults(handler=cmd_eval_predictors)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments and dispatch.

    Returns:
        0 on success, 2 on bad usage, 1 on configuration, trace or I/O errors,
        3 on any other failure
    """
    _load_env()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    setup_logging(args.log_level or config.log_level, args.log_file or config.log_file)
    if args.progress is None:
        args.progress = config.progress

    try:
        return args.handler(args)
    except (PopCacheError, OSError, ValueError) as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"popcache {args.command}: error: {e}", file=sys.stderr)
        return exit_code_for(e)
    except Exception as e:
        logger.exception(f"{args.command} failed unexpectedly")
        print(f"popcache {args.command}: internal error: {e}", file=sys.stderr)
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
