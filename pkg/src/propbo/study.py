"""Repeated seeded runs, parameter sweeps and CSV output."""
import csv
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .bench import get_benchmark, regret_trace
from .core import InvalidArgumentError
from .loop import RunRecord, run

logger = logging.getLogger(__name__)

SWEEPABLE = {
    "beta": "beta",
    "n_unlabeled": "n_unlabeled",
    "sampler_kind": "sampler",
    "pool_subset": "pool_subset",
    "zeta": "zeta",
}


def _fmt(value):
    return format(float(value), ".17g")


def trace_header(d):
    return (["iteration"] + [f"x_{k + 1}" for k in range(d)]
            + ["y", "best_so_far", "y_dagger", "beta", "flat_landscape", "duration_s"])


def emit_trace(record, path, timing=True):
    """Write one CSV row per evaluation.

    Reals use 17 significant digits so the file reproduces the record exactly.
    With ``timing=False`` the duration column is written as 0, which makes the
    file a pure function of the configuration.
    """
    path = Path(path)
    d = record.X[0].size if record.X else 0
    best = record.best_so_far if len(record) else []
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(trace_header(d))
        for i in range(len(record)):
            writer.writerow(
                [i] + [_fmt(v) for v in record.X[i]]
                + [_fmt(record.y[i]), _fmt(best[i]), _fmt(record.y_dagger[i]), _fmt(record.beta[i]),
                   int(record.flat_landscape[i]), _fmt(record.duration_s[i] if timing else 0.0)])
    return path


def read_trace(path):
    """Parse a trace file back into a :class:`RunRecord` (config not restored)."""
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        d = sum(1 for h in header if h.startswith("x_"))
        record = RunRecord(config=None)
        for row in reader:
            x = np.array([float(v) for v in row[1:1 + d]])
            y, _, y_dagger, beta = (float(v) for v in row[1 + d:5 + d])
            record.add(x, y, float(row[6 + d]), y_dagger=y_dagger, beta=beta, flat=row[5 + d] == "1")
    return record


@dataclass
class StudySpec:
    """One swept parameter over ``values``; each value is run with seeds ``base.seed + i``."""

    base: object
    sweep: str
    values: list
    repeats: int = 20
    output: Path = Path("study")
    timing: bool = True
    jobs: int = 1
    objective: object = None
    pool: object = None
    space: object = None
    f_star: float = None
    failures: list = field(default_factory=list)

    def __post_init__(self):
        if self.sweep not in SWEEPABLE:
            raise InvalidArgumentError(f"sweep must be one of {sorted(SWEEPABLE)}")
        if self.repeats < 2:
            raise InvalidArgumentError("a study needs at least 2 repeats for a standard error")
        if not self.values:
            raise InvalidArgumentError("a study needs at least one sweep value")
        self.output = Path(self.output)

    def config_for(self, value, i):
        changes = {SWEEPABLE[self.sweep]: value, "seed": self.base.seed + i}
        if self.sweep == "beta":
            changes["beta_mode"] = "fixed"
        return self.base.replace(**changes)

    def optimum(self):
        if self.f_star is not None:
            return self.f_star
        if self.pool is not None and self.pool.values is not None:
            return float(self.pool.values.min())
        if self.objective is None:
            return get_benchmark(self.base.benchmark).known_optimum_value
        value = getattr(self.objective, "known_optimum_value", None)
        if value is None:
            raise InvalidArgumentError("cannot compute regret: unknown optimum for this objective")
        return value


def _run_one(args):
    config, objective, pool, space = args
    try:
        return run(config, objective, pool, space), None
    except Exception as exc:  # noqa: BLE001 - recorded per (value, seed)
        return None, f"{type(exc).__name__}: {exc}"


def _value_tag(value):
    return str(value).replace("/", "_").replace(" ", "")


def run_study(spec):
    """Execute every (value, seed) run and write per-run traces plus ``aggregate.csv``.

    Returns the aggregate rows as dicts. Failures are logged, kept in
    ``spec.failures`` and excluded from the aggregate (see its ``count`` column).
    """
    f_star = spec.optimum()
    traces_dir = spec.output / "traces"
    traces_dir.mkdir(parents=True, exist_ok=True)
    jobs = [(spec.config_for(v, i), spec.objective, spec.pool, spec.space)
            for v in spec.values for i in range(spec.repeats)]
    if spec.jobs > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as ex:
            results = list(ex.map(_run_one, jobs))
    else:
        results = [_run_one(job) for job in jobs]

    spec.failures = []
    rows = []
    for vi, value in enumerate(spec.values):
        regrets = []
        for i in range(spec.repeats):
            config = jobs[vi * spec.repeats + i][0]
            record, error = results[vi * spec.repeats + i]
            if record is None:
                logger.error("run failed for %s=%s seed=%d: %s", spec.sweep, value, config.seed, error)
                spec.failures.append((value, config.seed, error))
                continue
            emit_trace(record, traces_dir / f"{spec.sweep}_{_value_tag(value)}_seed{config.seed}.csv",
                       timing=spec.timing)
            regrets.append(regret_trace(record.y, f_star))
        length = max((r.size for r in regrets), default=0)
        for it in range(length):
            col = np.array([r[it] for r in regrets if r.size > it])
            stderr = float(np.std(col, ddof=1) / math.sqrt(col.size)) if col.size > 1 else float("nan")
            rows.append({"sweep_value": value, "iteration": it, "mean_regret": float(col.mean()),
                         "stderr_regret": stderr, "count": int(col.size)})

    with (spec.output / "aggregate.csv").open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["sweep_value", "iteration", "mean_regret", "stderr_regret", "count"])
        for row in rows:
            writer.writerow([row["sweep_value"], row["iteration"], _fmt(row["mean_regret"]),
                             _fmt(row["stderr_regret"]), row["count"]])
    if spec.failures:
        with (spec.output / "failures.csv").open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["sweep_value", "seed", "error"])
            writer.writerows(spec.failures)
    return rows
