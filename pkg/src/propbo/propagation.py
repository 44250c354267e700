"""Transductive label propagation / spreading and the inductive class-1 model.

Labels are two-column soft assignments: column 0 is Class 0 (``y > y_dagger``),
column 1 is Class 1 (``y <= y_dagger``).
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from . import kernels
from .core import InvalidArgumentError
from .graph import build_graph, row_stochastic_propagator, symmetric_propagator

logger = logging.getLogger(__name__)

DEFAULT_TAU = 1000
DEFAULT_EPS = 1e-6
DEFAULT_ALPHA = 0.2
BETA_INIT = 0.5
BETA_BOUNDS = (1e-3, 1e3)
# objective evaluations allowed per beta search; bounds the cost when line searches stall on
# the noisy high-beta tail, where propagation stops at tau before converging
BETA_MAXFUN = 30


@dataclass(frozen=True)
class PropagatedLabels:
    rows: np.ndarray
    n_l: int
    n_iter: int = 0
    deltas: np.ndarray = None

    @property
    def n_u(self):
        return self.rows.shape[0] - self.n_l


def _check_labels(labels):
    labels = np.asarray(labels, dtype=np.float64)
    if labels.ndim != 2 or labels.shape[1] != 2 or labels.shape[0] == 0:
        raise InvalidArgumentError("labels must be an (n_l, 2) one-hot matrix")
    if not np.all((labels.sum(axis=1) == 1.0) & ((labels == 0.0) | (labels == 1.0)).all(axis=1)):
        raise InvalidArgumentError("every label row must be (1, 0) or (0, 1)")
    return labels


def normalize_rows(C):
    """Row-normalize in place where the row sum is positive; zero rows stay zero."""
    s = C.sum(axis=1)
    nz = s > 0.0
    C[nz] /= s[nz, None]
    return C


def init_labels(labels, n_u):
    labels = _check_labels(labels)
    rows = np.vstack([labels, np.zeros((int(n_u), 2))])
    return PropagatedLabels(rows=rows, n_l=labels.shape[0])


def propagate_lp(g, labels, tau=DEFAULT_TAU, eps=DEFAULT_EPS):
    """Label propagation: multiply by ``D^-1 W``, clamp labeled rows, row-normalize; repeat."""
    init = init_labels(labels, g.n - np.asarray(labels).shape[0])
    if init.n_u < 0:
        raise InvalidArgumentError("graph has fewer nodes than labels")
    M = row_stochastic_propagator(g)
    rows, n_iter, deltas = kernels.lp_iterate(M, init.rows, init.n_l, int(tau), float(eps))
    return PropagatedLabels(rows=rows, n_l=init.n_l, n_iter=n_iter, deltas=deltas)


def propagate_ls(g, labels, alpha=DEFAULT_ALPHA, tau=DEFAULT_TAU, eps=DEFAULT_EPS):
    """Label spreading with clamping factor ``alpha``.

    The update ``F <- alpha S F + (1 - alpha) F_0`` runs unnormalized (its fixed
    point is the closed form ``(1 - alpha)(I - alpha S)^-1 F_0``); rows are
    normalized once on return.
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidArgumentError(f"alpha must lie in (0, 1), got {alpha}")
    init = init_labels(labels, g.n - np.asarray(labels).shape[0])
    if init.n_u < 0:
        raise InvalidArgumentError("graph has fewer nodes than labels")
    S = symmetric_propagator(g)
    rows, n_iter, deltas = kernels.ls_iterate(S, init.rows, float(alpha), int(tau), float(eps))
    return PropagatedLabels(rows=normalize_rows(rows), n_l=init.n_l, n_iter=n_iter, deltas=deltas)


class OracleUnavailable(ArithmeticError):
    pass


def lp_closed_form(g, labels):
    """Harmonic fixed point ``C_u = (I - M_uu)^-1 M_ul C_l`` by a direct solve."""
    labels = _check_labels(labels)
    n_l = labels.shape[0]
    M = row_stochastic_propagator(g)
    rows = np.vstack([labels, np.zeros((g.n - n_l, 2))])
    if g.n == n_l:
        return PropagatedLabels(rows=rows, n_l=n_l)
    A = np.eye(g.n - n_l) - M[n_l:, n_l:]
    if np.linalg.cond(A) > 1e14:
        raise OracleUnavailable("I - M_uu is numerically singular")
    rows[n_l:] = np.linalg.solve(A, M[n_l:, :n_l] @ labels)
    return PropagatedLabels(rows=normalize_rows(rows), n_l=n_l)


def ls_closed_form(g, labels, alpha):
    labels = _check_labels(labels)
    n_l = labels.shape[0]
    Y = np.vstack([labels, np.zeros((g.n - n_l, 2))])
    S = symmetric_propagator(g)
    F = (1.0 - alpha) * np.linalg.solve(np.eye(g.n) - alpha * S, Y)
    return PropagatedLabels(rows=normalize_rows(F), n_l=n_l)


def entropy(c):
    """Sum over rows of ``-sum_k c_k log c_k`` (natural log, ``0 log 0 = 0``)."""
    rows = np.asarray(getattr(c, "rows", c), dtype=np.float64)
    if np.any(rows < 0.0):
        raise InvalidArgumentError("entropy is undefined for negative label mass")
    pos = rows > 0.0
    out = np.zeros_like(rows)
    out[pos] = rows[pos] * np.log(rows[pos])
    return float(-out.sum()) + 0.0  # no negative zero


def propagate(X, labels, beta, method="label_propagation", alpha=DEFAULT_ALPHA,
              tau=DEFAULT_TAU, eps=DEFAULT_EPS):
    g = build_graph(X, beta)
    if method == "label_propagation":
        return propagate_lp(g, labels, tau, eps)
    if method == "label_spreading":
        return propagate_ls(g, labels, alpha, tau, eps)
    raise InvalidArgumentError(f"unknown propagation method {method!r}")


def learn_beta(X_l, labels, X_u, method="label_propagation", alpha=DEFAULT_ALPHA,
               tau=DEFAULT_TAU, eps=DEFAULT_EPS, beta_init=BETA_INIT, bounds=BETA_BOUNDS):
    """Pick the kernel width minimizing the entropy of the propagated labels.

    Single-start L-BFGS-B over ``log(beta)``, started at ``beta_init``, with
    at most ``BETA_MAXFUN`` objective evaluations. On optimizer failure the
    initial value is returned.
    """
    X = np.vstack([np.asarray(X_l, dtype=np.float64),
                   np.asarray(X_u, dtype=np.float64).reshape(-1, np.shape(X_l)[1])])
    labels = _check_labels(labels)
    if X.shape[0] < 2:
        return float(beta_init)

    def objective(z):
        return entropy(propagate(X, labels, float(np.exp(z[0])), method, alpha, tau, eps))

    z0 = np.log(beta_init)
    try:
        res = optimize.minimize(
            objective, x0=[z0], method="L-BFGS-B",
            bounds=[(np.log(bounds[0]), np.log(bounds[1]))],
            # step in log(beta) large enough to sit above propagation tolerance noise
            options={"eps": 1e-3, "maxfun": BETA_MAXFUN},
        )
    except (ValueError, FloatingPointError, np.linalg.LinAlgError) as exc:
        logger.warning("beta learning failed (%s); using beta=%g", exc, beta_init)
        return float(beta_init)
    z = float(res.x[0])
    if not np.isfinite(z) or not np.isfinite(res.fun):
        logger.warning("beta learning returned a nonfinite result; using beta=%g", beta_init)
        return float(beta_init)
    if z == z0:
        return float(beta_init)
    return float(np.exp(z))


class InductiveClassifier:
    """Class-1 probability at unseen points from kernel-weighted propagated labels.

    With no unlabeled rows this is the Nadaraya-Watson estimate over the
    labeled data.
    """

    def __init__(self, X, rows, beta):
        self.X = np.ascontiguousarray(X, dtype=np.float64)
        self.rows = np.ascontiguousarray(getattr(rows, "rows", rows), dtype=np.float64)
        self.beta = float(beta)
        if self.X.shape[0] != self.rows.shape[0]:
            raise InvalidArgumentError("X and label rows differ in length")
        if not np.any(self.rows.sum(axis=1) > 0.0):
            raise InvalidArgumentError("at least one label row must carry mass")

    def __call__(self, Q):
        Q = np.atleast_2d(np.asarray(Q, dtype=np.float64))
        p, _ = kernels.class1_value_grad(Q, self.X, self.rows, self.beta, False)
        return p

    def value_and_grad(self, Q):
        Q = np.atleast_2d(np.asarray(Q, dtype=np.float64))
        return kernels.class1_value_grad(Q, self.X, self.rows, self.beta, True)


def predict_class1(x, X, c, beta):
    x = np.asarray(x, dtype=np.float64)
    p = InductiveClassifier(X, c, beta)(x.reshape(1, -1))
    return float(p[0])
