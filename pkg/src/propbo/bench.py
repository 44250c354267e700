"""Synthetic benchmark objectives (all minimized) and simple regret."""
import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import InvalidArgumentError, SearchSpace

logger = logging.getLogger(__name__)


def beale(x):
    x1, x2 = x
    return ((1.5 - x1 + x1 * x2) ** 2
            + (2.25 - x1 + x1 * x2 ** 2) ** 2
            + (2.625 - x1 + x1 * x2 ** 3) ** 2)


def branin(x):
    x1, x2 = x
    return ((x2 - 5.1 / (4 * np.pi ** 2) * x1 ** 2 + 5 / np.pi * x1 - 6) ** 2
            + 10 * (1 - 1 / (8 * np.pi)) * np.cos(x1) + 10)


def bukin6(x):
    x1, x2 = x
    return 100 * np.sqrt(np.abs(x2 - 0.01 * x1 ** 2)) + 0.01 * np.abs(x1 + 10)


def sixhumpcamel(x):
    x1, x2 = x
    return (4 - 2.1 * x1 ** 2 + x1 ** 4 / 3) * x1 ** 2 + x1 * x2 + (-4 + 4 * x2 ** 2) * x2 ** 2


@dataclass(frozen=True)
class Benchmark:
    name: str
    space: SearchSpace
    function: Callable
    known_optimum_value: float
    known_optimum: tuple = ()

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.space.dims,):
            raise InvalidArgumentError(f"{self.name} expects a {self.space.dims}-vector")
        if not self.space.contains(x):
            raise InvalidArgumentError(f"{self.name}: {x} lies outside {self.space.lower}..{self.space.upper}")
        return float(self.function(x))

    def batch(self, X):
        """Vectorized evaluation without the box check (for grids and oracles)."""
        X = np.asarray(X, dtype=np.float64)
        return np.asarray(self.function(X.T), dtype=np.float64)


BENCHMARKS = {
    "beale": Benchmark("beale", SearchSpace.from_bounds([[-4.5, 4.5], [-4.5, 4.5]]),
                       beale, 0.0, ((3.0, 0.5),)),
    "branin": Benchmark("branin", SearchSpace.from_bounds([[-5.0, 10.0], [0.0, 15.0]]),
                        branin, 0.39788735772973816,
                        ((-np.pi, 12.275), (np.pi, 2.275), (9.42478, 2.475))),
    "bukin6": Benchmark("bukin6", SearchSpace.from_bounds([[-15.0, -5.0], [-3.0, 3.0]]),
                        bukin6, 0.0, ((-10.0, 1.0),)),
    "sixhumpcamel": Benchmark("sixhumpcamel", SearchSpace.from_bounds([[-3.0, 3.0], [-2.0, 2.0]]),
                              sixhumpcamel, -1.0316284534898774,
                              ((0.08984201, -0.71265640), (-0.08984201, 0.71265640))),
}


def get_benchmark(name):
    try:
        return BENCHMARKS[name]
    except KeyError:
        raise InvalidArgumentError(f"unknown benchmark {name!r}; choose from {sorted(BENCHMARKS)}") from None


def simple_regret(values, f_star):
    """``min(values) - f_star``; tiny negatives from an inexact ``f_star`` are clipped to 0."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise InvalidArgumentError("simple regret needs at least one value")
    regret = float(values.min() - f_star)
    if regret < 0.0:
        if regret < -1e-9:
            raise InvalidArgumentError(f"observed value below the stated optimum by {-regret:.3g}")
        logger.info("clipping simple regret %.3g to 0", regret)
        regret = 0.0
    return regret


def regret_trace(values, f_star):
    """Simple regret after each evaluation (prefix minima)."""
    best = np.minimum.accumulate(np.asarray(values, dtype=np.float64))
    return np.maximum(best - f_star, 0.0)
