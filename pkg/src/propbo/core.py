"""Domain types, run configuration and seeded randomness."""
from __future__ import annotations

import configparser
import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class InvalidArgumentError(ValueError):
    pass


class NumericUnderflowError(ArithmeticError):
    pass


class UnsupportedDimensionError(ValueError):
    pass


class PoolExhaustedError(RuntimeError):
    pass


class ObjectiveError(RuntimeError):
    pass


def make_rng(seed):
    """Return the single random stream owned by one run."""
    return np.random.default_rng(int(seed))


@dataclass(frozen=True)
class SearchSpace:
    """Closed axis-aligned box ``lower <= x <= upper``."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=np.float64))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=np.float64))
        if lower.ndim != 1 or lower.shape != upper.shape or lower.size == 0:
            raise InvalidArgumentError("lower and upper must be nonempty vectors of equal length")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise InvalidArgumentError("bounds must be finite")
        if np.any(lower >= upper):
            raise InvalidArgumentError(f"empty search space: lower {lower} not below upper {upper}")
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def from_bounds(cls, bounds):
        b = np.asarray(bounds, dtype=np.float64)
        return cls(b[:, 0], b[:, 1])

    @property
    def dims(self):
        return self.lower.size

    @property
    def width(self):
        return self.upper - self.lower

    def contains(self, x):
        x = np.asarray(x, dtype=np.float64)
        inside = np.all((x >= self.lower) & (x <= self.upper), axis=-1)
        return bool(inside) if inside.ndim == 0 else inside

    def to_unit(self, x):
        return (np.asarray(x, dtype=np.float64) - self.lower) / self.width

    def from_unit(self, u):
        # clip guards the last ulp so mapped points stay inside the closed box
        return np.clip(self.lower + np.asarray(u, dtype=np.float64) * self.width, self.lower, self.upper)


@dataclass
class History:
    """Evaluated points ``x_i`` and their objective values ``y_i`` in query order."""

    space: SearchSpace
    points: list = field(default_factory=list)
    values: list = field(default_factory=list)

    def append(self, x, y):
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.space.dims,):
            raise InvalidArgumentError(f"point must have shape ({self.space.dims},), got {x.shape}")
        if not self.space.contains(x):
            raise InvalidArgumentError(f"point {x} outside the search space")
        self.points.append(x)
        self.values.append(float(y))

    def __len__(self):
        return len(self.values)

    @property
    def X(self):
        return np.array(self.points, dtype=np.float64).reshape(len(self.points), self.space.dims)

    @property
    def y(self):
        return np.array(self.values, dtype=np.float64)


def one_hot_labels(is_class1):
    """Rows ``(1, 0)`` for Class 0 and ``(0, 1)`` for Class 1."""
    is_class1 = np.asarray(is_class1, dtype=bool)
    labels = np.zeros((is_class1.size, 2))
    labels[np.arange(is_class1.size), is_class1.astype(int)] = 1.0
    return labels


@dataclass
class PoolSet:
    """Finite candidate set; doubles as unlabeled data and as the query domain."""

    candidates: np.ndarray
    evaluated: np.ndarray = None
    values: np.ndarray = None

    def __post_init__(self):
        self.candidates = np.asarray(self.candidates, dtype=np.float64)
        if self.candidates.ndim != 2 or self.candidates.shape[0] == 0:
            raise InvalidArgumentError("pool candidates must be a nonempty 2-D array")
        n = self.candidates.shape[0]
        if self.evaluated is None:
            self.evaluated = np.zeros(n, dtype=bool)
        else:
            self.evaluated = np.asarray(self.evaluated, dtype=bool).copy()
        if self.evaluated.shape != (n,):
            raise InvalidArgumentError("evaluated mask must have one entry per candidate")
        if self.values is not None:
            self.values = np.asarray(self.values, dtype=np.float64)
            if self.values.shape != (n,):
                raise InvalidArgumentError("values must have one entry per candidate")

    def __len__(self):
        return self.candidates.shape[0]

    @property
    def unevaluated_indices(self):
        return np.flatnonzero(~self.evaluated)

    def mark_evaluated(self, index):
        if self.evaluated[index]:
            raise InvalidArgumentError(f"candidate {index} was already evaluated")
        self.evaluated[index] = True

    def bounding_space(self):
        return SearchSpace(self.candidates.min(axis=0), self.candidates.max(axis=0))


SCENARIOS = ("sampling", "pool")
CLASSIFIERS = ("label_propagation", "label_spreading", "nadaraya_watson_control", "random_search")
SAMPLERS = ("truncnorm", "uniform", "halton", "sobol")
BETA_MODES = ("fixed", "learned")


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a run, apart from the objective itself.

    ``beta`` is the fixed kernel width when ``beta_mode == "fixed"`` and the
    initial / fallback value when it is ``"learned"``.
    """

    zeta: float = 0.33
    scenario: str = "sampling"
    classifier: str = "label_propagation"
    n_unlabeled: int = 100
    pool_subset: int | None = None
    pool_size: int = 1000
    alpha: float = 0.2
    beta_mode: str = "learned"
    beta: float = 0.5
    max_prop_iters: int = 1000
    tol: float = 1e-6
    n_starts: int = 1000
    iterations: int = 100
    n_init: int = 5
    seed: int = 0
    sampler: str = "truncnorm"
    sampling_std: float = 1.0
    tie_tol: float = 1e-9
    benchmark: str = "branin"

    def __post_init__(self):
        self.validate()

    def validate(self):
        def check(cond, msg):
            if not cond:
                raise InvalidArgumentError(msg)

        check(0.0 < self.zeta < 1.0, f"zeta must lie in (0, 1), got {self.zeta}")
        check(0.0 < self.alpha < 1.0, f"alpha must lie in (0, 1), got {self.alpha}")
        check(self.scenario in SCENARIOS, f"scenario must be one of {SCENARIOS}")
        check(self.classifier in CLASSIFIERS, f"classifier must be one of {CLASSIFIERS}")
        check(self.sampler in SAMPLERS, f"sampler must be one of {SAMPLERS}")
        check(self.beta_mode in BETA_MODES, f"beta_mode must be one of {BETA_MODES}")
        check(self.n_unlabeled >= 0, "n_unlabeled must be nonnegative")
        check(self.pool_subset is None or self.pool_subset >= 1, "pool_subset must be positive")
        check(self.pool_size >= 1, "pool_size must be positive")
        check(math.isfinite(self.beta) and self.beta > 0.0, "beta must be positive")
        check(self.max_prop_iters >= 1, "max_prop_iters must be positive")
        check(self.tol > 0.0, "tol must be positive")
        check(self.n_starts >= 1, "n_starts must be positive")
        check(self.iterations >= 1, "iterations must be positive")
        check(self.n_init >= 1, "n_init must be positive")
        check(self.sampling_std > 0.0, "sampling_std must be positive")
        check(self.tie_tol >= 0.0, "tie_tol must be nonnegative")

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def to_dict(self):
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data):
        types = {f.name: f.type for f in dataclasses.fields(cls)}
        unknown = set(data) - set(types)
        if unknown:
            raise InvalidArgumentError(f"unknown config keys: {sorted(unknown)}")
        return cls(**{k: _coerce(k, types[k], v) for k, v in data.items()})


def _coerce(key, type_name, value):
    if not isinstance(value, str):
        return value
    text = value.strip()
    try:
        if type_name == "int | None":
            return None if text.lower() in ("", "none") else int(text)
        if type_name == "int":
            return int(text)
        if type_name == "float":
            return float(text)
    except ValueError as exc:
        raise InvalidArgumentError(f"bad value for {key}: {value!r}") from exc
    return text


def write_config(config, path):
    """Write a flat ``key = value`` file, one field per line."""
    lines = []
    for key, value in config.to_dict().items():
        lines.append(f"{key} = {'none' if value is None else repr(value) if isinstance(value, float) else value}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_config_file(path):
    """Parse a flat ``key = value`` file into a dict of raw strings."""
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=("#", ";"))
    parser.optionxform = str
    text = Path(path).read_text()
    try:
        parser.read_string("[run]\n" + text)
    except configparser.Error as exc:
        raise InvalidArgumentError(f"cannot parse config file {path}: {exc}") from exc
    return dict(parser["run"])


def load_config(path, **overrides):
    """Defaults, then file values, then non-None ``overrides`` (highest precedence)."""
    data = read_config_file(path) if path is not None else {}
    data.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig.from_dict(data)
