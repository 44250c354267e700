"""RBF similarity graphs over labeled + unlabeled points."""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import InvalidArgumentError


def _check_beta(beta):
    if not (np.isfinite(beta) and beta > 0.0):
        raise InvalidArgumentError(f"beta must be a positive finite number, got {beta}")


def rbf_similarity(x_i, x_j, beta):
    """``exp(-beta * ||x_i - x_j||^2)`` for two single points."""
    _check_beta(beta)
    x_i = np.asarray(x_i, dtype=np.float64)
    x_j = np.asarray(x_j, dtype=np.float64)
    if not (np.all(np.isfinite(x_i)) and np.all(np.isfinite(x_j))):
        raise InvalidArgumentError("points must be finite")
    diff = x_i - x_j
    return float(np.exp(-beta * np.dot(diff, diff)))


@dataclass(frozen=True)
class SimilarityGraph:
    W: np.ndarray
    degree: np.ndarray
    beta: float

    @property
    def n(self):
        return self.W.shape[0]


def build_graph(X, beta):
    """Dense similarity matrix over all rows of ``X``; self-loops included (``W_ii = 1``)."""
    _check_beta(beta)
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise InvalidArgumentError("build_graph needs at least two points")
    if not np.all(np.isfinite(X)):
        raise InvalidArgumentError("points must be finite")
    W = kernels.rbf(X, X, float(beta))
    # both triangles are computed independently; force exact symmetry and unit diagonal
    W = np.triu(W) + np.triu(W, 1).T
    np.fill_diagonal(W, 1.0)
    return SimilarityGraph(W=W, degree=W.sum(axis=1), beta=float(beta))


def row_stochastic_propagator(g):
    return g.W / g.degree[:, None]


def symmetric_propagator(g):
    S = g.W / np.sqrt(np.outer(g.degree, g.degree))
    return np.triu(S) + np.triu(S, 1).T
