"""Thresholding, labeling and maximization of the class-1 probability surface.

The positive ``1/zeta`` prefactor of the density-ratio acquisition is dropped:
it cannot move an argmax, so returned values read directly as probabilities.
"""
import math
from dataclasses import dataclass

import numpy as np

from .core import InvalidArgumentError, PoolExhaustedError, one_hot_labels

TIE_TOL = 1e-9
MAX_STEPS = 200
STATIONARITY_TOL = 1e-6
_ARMIJO = 1e-4
_FD_STEP = 1e-6


@dataclass(frozen=True)
class AcquisitionOutcome:
    query: np.ndarray
    value: float
    flat_landscape: bool
    starts_evaluated: int
    index: int | None = None


def compute_threshold(values, zeta):
    """The k-th smallest value, ``k = max(1, ceil(zeta * t))``; at least one point is Class 1."""
    values = np.sort(np.asarray(values, dtype=np.float64))
    if values.size == 0:
        raise InvalidArgumentError("need at least one value")
    k = max(1, math.ceil(zeta * values.size))
    return float(values[k - 1])


def assign_labels(values, y_dagger):
    """One-hot rows; Class 1 (column 1) for ``y <= y_dagger``."""
    values = np.asarray(values, dtype=np.float64)
    is_class1 = values <= y_dagger
    assert is_class1.any(), "threshold below every value"
    return one_hot_labels(is_class1)


def _value_grad_fn(predictor):
    if hasattr(predictor, "value_and_grad"):
        return predictor.value_and_grad

    def fd(X):
        X = np.asarray(X, dtype=np.float64)
        v = np.asarray(predictor(X), dtype=np.float64)
        grad = np.empty_like(X)
        for k in range(X.shape[1]):
            e = np.zeros(X.shape[1])
            e[k] = _FD_STEP
            grad[:, k] = (np.asarray(predictor(X + e)) - np.asarray(predictor(X - e))) / (2 * _FD_STEP)
        return v, grad

    return fd


def _check_finite(values):
    if np.any(np.isnan(values)):
        raise FloatingPointError("predictor returned NaN during acquisition maximization")


def _tie_break(values, tie_tol, rng):
    """Index of the chosen maximizer and whether the whole set is flat."""
    best = values.max()
    flat = bool(best - values.min() <= tie_tol)
    candidates = np.arange(values.size) if flat else np.flatnonzero(values >= best - tie_tol)
    return int(candidates[rng.integers(candidates.size)]), flat


def ascend(predictor, space, U0, max_steps=MAX_STEPS, stat_tol=STATIONARITY_TOL):
    """Projected gradient ascent with backtracking, run for all starts in parallel.

    Works in unit-box coordinates ``U``; returns terminal ``U`` and values.
    """
    value_grad = _value_grad_fn(predictor)
    width = space.width

    def evaluate(U):
        v, g = value_grad(space.from_unit(U))
        v = np.asarray(v, dtype=np.float64)
        _check_finite(v)
        return v, np.asarray(g, dtype=np.float64) * width

    U = np.clip(np.asarray(U0, dtype=np.float64), 0.0, 1.0)
    val, grad = evaluate(U)
    gmax = np.abs(grad).max(axis=1)
    step = 0.1 / np.maximum(gmax, 1e-12)
    active = np.abs(np.clip(U + grad, 0.0, 1.0) - U).max(axis=1) >= stat_tol
    for _ in range(max_steps):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        trial = np.clip(U[idx] + step[idx, None] * grad[idx], 0.0, 1.0)
        tval, tgrad = evaluate(trial)
        gain = np.einsum("ij,ij->i", grad[idx], trial - U[idx])
        ok = tval >= val[idx] + _ARMIJO * gain
        acc = idx[ok]
        U[acc] = trial[ok]
        val[acc] = tval[ok]
        grad[acc] = tgrad[ok]
        step[acc] *= 2.0
        step[idx[~ok]] *= 0.5
        moved = np.abs(np.clip(U[idx] + grad[idx], 0.0, 1.0) - U[idx]).max(axis=1)
        active[idx] = (moved >= stat_tol) & (step[idx] > 1e-16)
    return U, val


def maximize_continuous(predictor, space, n_starts, rng, starts=None, tie_tol=TIE_TOL,
                        max_steps=MAX_STEPS):
    """Multi-start bounded ascent of ``predictor`` over ``space``.

    Start points come from ``rng`` (n_starts x d uniforms) unless ``starts`` is
    given. If every terminal value lies within ``tie_tol`` of the others the
    landscape is flat and a terminal point is picked uniformly at random;
    otherwise the pick is uniform over terminal points within ``tie_tol`` of
    the best. Exactly one integer is drawn for the pick.
    """
    if starts is None:
        if n_starts < 1:
            raise InvalidArgumentError("n_starts must be positive")
        U0 = rng.random((int(n_starts), space.dims))
    else:
        U0 = space.to_unit(np.atleast_2d(starts))
    U, val = ascend(predictor, space, U0, max_steps=max_steps)
    pick, flat = _tie_break(val, tie_tol, rng)
    return AcquisitionOutcome(query=space.from_unit(U[pick]), value=float(val[pick]),
                              flat_landscape=flat, starts_evaluated=U0.shape[0])


def maximize_pool(predictor, pool, rng, tie_tol=TIE_TOL):
    """Argmax of ``predictor`` over the unevaluated candidates; ties broken uniformly."""
    idx = pool.unevaluated_indices
    if idx.size == 0:
        raise PoolExhaustedError("no unevaluated candidates left in the pool")
    values = np.asarray(predictor(pool.candidates[idx]), dtype=np.float64)
    _check_finite(values)
    pick, flat = _tie_break(values, tie_tol, rng)
    chosen = int(idx[pick])
    return AcquisitionOutcome(query=pool.candidates[chosen].copy(), value=float(values[pick]),
                              flat_landscape=flat, starts_evaluated=idx.size, index=chosen)
