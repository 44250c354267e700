"""The optimization loop and its baselines.

Random-stream order within one run (seeded by ``config.seed``):

1. pool generation, when a pool scenario builds its own uniform pool;
2. the initial design;
3. per iteration: unlabeled points (or pool subset), multi-start start
   points, one tie-break integer. Random search draws one query per iteration.

Everything before step 3 is independent of the classifier, so runs sharing a
seed share their pool and initial design.
"""
import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .acquisition import assign_labels, compute_threshold, maximize_continuous, maximize_pool
from .bench import get_benchmark
from .core import History, InvalidArgumentError, ObjectiveError, PoolExhaustedError, PoolSet, make_rng
from .propagation import InductiveClassifier, learn_beta, propagate
from .sampling import draw_unlabeled, sample_uniform, subsample_indices, uniform_pool

logger = logging.getLogger(__name__)

_METHOD = {
    "label_propagation": "label_propagation",
    "label_spreading": "label_spreading",
    "nadaraya_watson_control": "label_propagation",
}


@dataclass
class RunRecord:
    """One row per objective evaluation; initial-design rows carry NaN for y_dagger and beta."""

    config: object
    X: list = field(default_factory=list)
    y: list = field(default_factory=list)
    y_dagger: list = field(default_factory=list)
    beta: list = field(default_factory=list)
    flat_landscape: list = field(default_factory=list)
    duration_s: list = field(default_factory=list)
    propagation_s: list = field(default_factory=list)
    pool_index: list = field(default_factory=list)
    truncated: bool = False

    def add(self, x, y, duration, y_dagger=np.nan, beta=np.nan, flat=False, propagation_s=np.nan,
            index=None):
        self.X.append(np.asarray(x, dtype=np.float64))
        self.y.append(float(y))
        self.y_dagger.append(float(y_dagger))
        self.beta.append(float(beta))
        self.flat_landscape.append(bool(flat))
        self.duration_s.append(float(duration))
        self.propagation_s.append(float(propagation_s))
        self.pool_index.append(index)

    def __len__(self):
        return len(self.y)

    @property
    def best_so_far(self):
        return np.minimum.accumulate(np.asarray(self.y))

    @property
    def best_index(self):
        return int(np.argmin(self.y))

    @property
    def best_value(self):
        return self.y[self.best_index]

    @property
    def best_point(self):
        return self.X[self.best_index]


def _evaluate(objective, x, step):
    y = objective(x)
    try:
        y = float(y)
    except (TypeError, ValueError):
        raise ObjectiveError(f"objective returned a non-scalar at evaluation {step}") from None
    if not np.isfinite(y):
        raise ObjectiveError(f"objective returned {y} at evaluation {step}")
    return y


def _resolve_problem(config, objective, pool, space):
    if config.scenario == "pool":
        if pool is not None:
            pool = PoolSet(pool.candidates, pool.evaluated, pool.values)
            if space is None:
                space = pool.bounding_space()
            if objective is None and pool.values is None:
                bench = get_benchmark(config.benchmark)
                objective = bench
        if objective is None and pool is None:
            bench = get_benchmark(config.benchmark)
            objective, space = bench, bench.space
        if space is None:
            space = objective.space
    else:
        if pool is not None:
            raise InvalidArgumentError("a pool was supplied but scenario is 'sampling'")
        if objective is None:
            bench = get_benchmark(config.benchmark)
            objective, space = bench, bench.space
        if space is None:
            space = getattr(objective, "space", None)
            if space is None:
                raise InvalidArgumentError("a search space is required for a custom objective")
    return objective, pool, space


def run(config, objective=None, pool=None, space=None):
    """Run the optimizer; returns a complete :class:`RunRecord`.

    ``objective`` defaults to the registered benchmark ``config.benchmark``.
    In the pool scenario a pool carrying ``values`` is its own objective; a
    missing pool is drawn uniformly from the search space (``config.pool_size``
    points).
    """
    config.validate()
    objective, pool, space = _resolve_problem(config, objective, pool, space)
    rng = make_rng(config.seed)
    if config.scenario == "pool" and pool is None:
        pool = uniform_pool(space, config.pool_size, rng)
    if pool is not None and not np.all(space.contains(pool.candidates)):
        raise InvalidArgumentError("pool candidates must lie inside the search space")

    def value_of(x, index, step):
        if index is not None and objective is None:
            return float(pool.values[index])
        return _evaluate(objective, x, step)

    history = History(space)
    record = RunRecord(config)

    if pool is None:
        initial = [(x, None) for x in sample_uniform(space, config.n_init, rng)]
    else:
        avail = pool.unevaluated_indices
        if avail.size == 0:
            raise PoolExhaustedError("pool has no unevaluated candidates")
        chosen = rng.choice(avail, size=min(config.n_init, avail.size), replace=False)
        initial = [(pool.candidates[i], int(i)) for i in chosen]
    for step, (x, index) in enumerate(initial):
        t0 = time.perf_counter()
        y = value_of(x, index, step)
        if index is not None:
            pool.mark_evaluated(index)
        history.append(x, y)
        record.add(x, y, time.perf_counter() - t0, index=index)

    for it in range(config.iterations):
        step = len(history)
        if pool is not None and pool.unevaluated_indices.size == 0:
            logger.warning("pool exhausted after %d evaluations; truncating run", step)
            record.truncated = True
            break
        t0 = time.perf_counter()
        x, index, info = propose(config, history, space, pool, rng)
        y = value_of(x, index, step)
        if index is not None:
            pool.mark_evaluated(index)
        history.append(x, y)
        record.add(x, y, time.perf_counter() - t0, **info, index=index)
    return record


def run_control_nw(config, objective=None, pool=None, space=None):
    """The supervised control: inductive model over labeled points only."""
    return run(config.replace(classifier="nadaraya_watson_control"), objective, pool, space)


def _uniform_query(space, pool, rng):
    if pool is None:
        return sample_uniform(space, 1, rng)[0], None
    avail = pool.unevaluated_indices
    index = int(avail[rng.integers(avail.size)])
    return pool.candidates[index].copy(), index


def propose(config, history, space, pool, rng):
    """One acquisition step; returns ``(x, pool_index or None, info)``."""
    y = history.y
    y_dagger = compute_threshold(y, config.zeta)
    info = {"y_dagger": y_dagger}
    labels = assign_labels(y, y_dagger)
    if config.classifier == "random_search":
        x, index = _uniform_query(space, pool, rng)
        return x, index, info
    if not labels[:, 0].any():
        # every observation is Class 1 (e.g. all values tied): nothing to contrast
        x, index = _uniform_query(space, pool, rng)
        return x, index, info

    X_l = history.X
    control = config.classifier == "nadaraya_watson_control"
    if control:
        X_u = np.empty((0, space.dims))
    elif pool is None:
        X_u = draw_unlabeled(config.sampler, X_l, space, config.n_unlabeled, rng, config.sampling_std)
    else:
        avail = pool.unevaluated_indices
        if config.pool_subset is not None:
            avail = avail[np.sort(subsample_indices(avail.size, config.pool_subset, rng))]
        X_u = pool.candidates[avail]

    method = _METHOD[config.classifier]
    if config.beta_mode == "learned" and X_u.shape[0] > 0:
        beta = learn_beta(X_l, labels, X_u, method, config.alpha, config.max_prop_iters,
                          config.tol, beta_init=config.beta)
    else:
        # with no unlabeled rows the entropy is identically 0 and learning returns the initial value
        beta = config.beta
    X = np.vstack([X_l, X_u])
    t_prop = time.perf_counter()
    labels_hat = propagate(X, labels, beta, method, config.alpha, config.max_prop_iters, config.tol)
    info["propagation_s"] = time.perf_counter() - t_prop
    info["beta"] = beta

    predictor = InductiveClassifier(X, labels_hat, beta)
    if pool is None:
        outcome = maximize_continuous(predictor, space, config.n_starts, rng, tie_tol=config.tie_tol)
    else:
        outcome = maximize_pool(predictor, pool, rng, tie_tol=config.tie_tol)
    info["flat"] = outcome.flat_landscape
    return outcome.query, outcome.index, info
