"""Command-line entry point: ``propbo run | study | import-pool | list-benchmarks``.

Run options come from three layers: defaults, then ``--config FILE``, then
explicit flags (highest precedence).
"""
import argparse
import dataclasses
import json
import logging
import sys

import numpy as np

from .bench import BENCHMARKS, get_benchmark, simple_regret
from .core import (
    InvalidArgumentError,
    NumericUnderflowError,
    ObjectiveError,
    PoolExhaustedError,
    RunConfig,
    SearchSpace,
    UnsupportedDimensionError,
    load_config,
)
from .loop import run
from .sampling import load_pool_csv
from .study import SWEEPABLE, StudySpec, emit_trace, run_study

logger = logging.getLogger("propbo")

_ERRORS = (InvalidArgumentError, NumericUnderflowError, ObjectiveError, PoolExhaustedError,
           UnsupportedDimensionError, OSError, FloatingPointError)


def _config_flags(parser):
    group = parser.add_argument_group("run configuration")
    group.add_argument("--config", help="flat key = value file")
    for f in dataclasses.fields(RunConfig):
        # everything is parsed as a string and coerced by RunConfig.from_dict
        group.add_argument("--" + f.name.replace("_", "-"), dest=f.name, default=None, metavar=f.name.upper())


def _pool_flags(parser):
    group = parser.add_argument_group("pool import")
    group.add_argument("--pool-csv", help="CSV pool (header, feature columns, objective column)")
    group.add_argument("--value-column", help="objective column name (default: last column)")
    group.add_argument("--bounds", help="search box as 'lo:hi,lo:hi,...' (default: data bounding box)")
    group.add_argument("--maximize", action="store_true", help="negate pool values (maximization)")


def _parse_bounds(text):
    if text is None:
        return None
    try:
        pairs = [tuple(float(v) for v in part.split(":")) for part in text.split(",")]
    except ValueError:
        raise InvalidArgumentError(f"bad --bounds {text!r}") from None
    if any(len(p) != 2 for p in pairs):
        raise InvalidArgumentError(f"bad --bounds {text!r}; expected lo:hi pairs")
    return SearchSpace.from_bounds(pairs)


def _build_config(args):
    overrides = {f.name: getattr(args, f.name) for f in dataclasses.fields(RunConfig)}
    return load_config(args.config, **overrides)


def _load_pool(args):
    if not args.pool_csv:
        return None, None
    pool, space, _ = load_pool_csv(args.pool_csv, args.value_column, _parse_bounds(args.bounds),
                                   args.maximize)
    return pool, space


def cmd_run(args):
    config = _build_config(args)
    pool, space = _load_pool(args)
    if pool is not None and config.scenario != "pool":
        config = config.replace(scenario="pool")
    record = run(config, pool=pool, space=space)
    if args.trace:
        emit_trace(record, args.trace, timing=not args.no_timing)
    if pool is not None:
        f_star = float(pool.values.min())
    else:
        f_star = get_benchmark(config.benchmark).known_optimum_value
    summary = {
        "evaluations": len(record),
        "best_value": record.best_value,
        "best_point": [float(v) for v in record.best_point],
        "simple_regret": simple_regret(record.y, f_star),
        "truncated": record.truncated,
    }
    print(json.dumps(summary, indent=2))
    return 0


def _parse_values(sweep, text):
    out = []
    for item in text.split(","):
        item = item.strip()
        if sweep == "sampler_kind":
            out.append(item)
        elif sweep in ("n_unlabeled", "pool_subset"):
            out.append(int(item))
        else:
            out.append(float(item))
    return out


def cmd_study(args):
    config = _build_config(args)
    pool, space = _load_pool(args)
    if pool is not None and config.scenario != "pool":
        config = config.replace(scenario="pool")
    try:
        values = _parse_values(args.sweep, args.values)
    except ValueError:
        raise InvalidArgumentError(f"bad --values {args.values!r} for sweep {args.sweep}") from None
    spec = StudySpec(base=config, sweep=args.sweep, values=values, repeats=args.repeats,
                     output=args.output, timing=not args.no_timing, jobs=args.jobs,
                     pool=pool, space=space)
    rows = run_study(spec)
    print(f"wrote {len(rows)} aggregate rows to {spec.output / 'aggregate.csv'}")
    if spec.failures:
        print(f"{len(spec.failures)} run(s) failed; see {spec.output / 'failures.csv'}", file=sys.stderr)
        return 1
    return 0


def cmd_import_pool(args):
    pool, space, features = load_pool_csv(args.csv, args.value_column, _parse_bounds(args.bounds),
                                          args.maximize)
    best = int(np.argmin(pool.values))
    print(json.dumps({
        "candidates": len(pool),
        "dims": space.dims,
        "features": features,
        "lower": space.lower.tolist(),
        "upper": space.upper.tolist(),
        "best_value": float(pool.values[best]),
        "best_candidate": pool.candidates[best].tolist(),
    }, indent=2))
    return 0


def cmd_list_benchmarks(args):
    for name, bench in sorted(BENCHMARKS.items()):
        bounds = ", ".join(f"[{lo:g}, {hi:g}]" for lo, hi in zip(bench.space.lower, bench.space.upper))
        print(f"{name:14s} d={bench.space.dims}  box={bounds}  f*={bench.known_optimum_value:.10g}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="propbo", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="a single optimization run")
    _config_flags(p)
    _pool_flags(p)
    p.add_argument("--trace", help="write the per-evaluation trace CSV here")
    p.add_argument("--no-timing", action="store_true", help="write 0 in duration_s (reproducible bytes)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("study", help="repeated seeded runs over one swept parameter")
    _config_flags(p)
    _pool_flags(p)
    p.add_argument("--sweep", required=True, choices=sorted(SWEEPABLE))
    p.add_argument("--values", required=True, help="comma-separated sweep values")
    p.add_argument("--repeats", type=int, default=20)
    p.add_argument("--output", default="study", help="output directory")
    p.add_argument("--jobs", type=int, default=1, help="concurrent runs")
    p.add_argument("--no-timing", action="store_true")
    p.set_defaults(func=cmd_study)

    p = sub.add_parser("import-pool", help="validate a CSV pool and summarize it")
    p.add_argument("csv")
    p.add_argument("--value-column")
    p.add_argument("--bounds")
    p.add_argument("--maximize", action="store_true")
    p.set_defaults(func=cmd_import_pool)

    p = sub.add_parser("list-benchmarks", help="show the built-in objectives")
    p.set_defaults(func=cmd_list_benchmarks)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except _ERRORS as exc:
        print(f"propbo: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
