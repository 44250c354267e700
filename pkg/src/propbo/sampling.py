"""Unlabeled-point generators and pool handling.

Stochastic samplers draw from the caller's generator in a fixed order: centers
in history order, then points, then dimensions (row-major uniforms).
"""
import csv
import logging
import warnings

import numpy as np
from scipy import special
from scipy.stats import qmc

from .core import (
    InvalidArgumentError,
    NumericUnderflowError,
    PoolSet,
    SearchSpace,
    UnsupportedDimensionError,
)

logger = logging.getLogger(__name__)

SOBOL_MAX_DIM = 21201
_LOG_MIN_MASS = np.log(1e-300)


def _truncnorm_from_uniform(u, a, b):
    """Map uniforms ``u`` to standard normals truncated to ``[a, b]`` by inverse CDF.

    Works on the side of zero holding most of the interval so that both tail
    probabilities are handled in log space without cancellation.
    """
    u, a, b = np.broadcast_arrays(np.asarray(u, float), np.asarray(a, float), np.asarray(b, float))
    flip = (a + b) > 0.0
    lo = np.where(flip, -b, a)
    hi = np.where(flip, -a, b)
    # now lo < hi and lo + hi <= 0: log Phi(hi) is the larger of the two
    log_hi = special.log_ndtr(hi)
    log_lo = special.log_ndtr(lo)
    ratio = np.exp(log_lo - log_hi)
    log_mass = log_hi + np.log1p(-ratio)
    if np.any(log_mass < _LOG_MIN_MASS):
        bad = np.flatnonzero(log_mass.ravel() < _LOG_MIN_MASS)[0]
        raise NumericUnderflowError(
            f"truncation interval [{lo.ravel()[bad]:.6g}, {hi.ravel()[bad]:.6g}] (standardized) "
            f"has probability mass below 1e-300")
    # Phi(lo) + u (Phi(hi) - Phi(lo)) = Phi(hi) (ratio + u (1 - ratio))
    z = special.ndtri_exp(log_hi + np.log(ratio + u * (1.0 - ratio)))
    z = np.clip(z, lo, hi)
    return np.where(flip, -z, z)


def sample_truncnorm_1d(mu, lo, hi, rng, size=None, std=1.0):
    """Draw(s) from ``N(mu, std^2)`` truncated to ``[lo, hi]``."""
    if not lo < hi:
        raise InvalidArgumentError(f"need lo < hi, got [{lo}, {hi}]")
    u = rng.random(size)
    z = _truncnorm_from_uniform(u, (lo - mu) / std, (hi - mu) / std)
    x = np.clip(mu + std * z, lo, hi)
    return float(x) if size is None else x


def allocation(n_u, n_l):
    """Per-center counts: ``n_u // n_l`` each, one extra for the first ``n_u % n_l`` centers."""
    if n_l < 1:
        raise InvalidArgumentError("need at least one center")
    base, extra = divmod(int(n_u), int(n_l))
    return np.array([base + (i < extra) for i in range(n_l)], dtype=int)


def sample_unlabeled(centers, space, n_u, rng, std=1.0):
    """Truncated normals ``N(x_i, std^2 I)`` around each labeled point, clipped to ``space``."""
    centers = np.asarray(getattr(centers, "X", centers), dtype=np.float64)
    counts = allocation(n_u, centers.shape[0])
    out = np.empty((int(n_u), space.dims))
    row = 0
    for center, count in zip(centers, counts):
        if count == 0:
            continue
        u = rng.random((count, space.dims))
        a = (space.lower - center) / std
        b = (space.upper - center) / std
        z = _truncnorm_from_uniform(u, a[None, :], b[None, :])
        out[row:row + count] = np.clip(center + std * z, space.lower, space.upper)
        row += count
    return out


def sample_uniform(space, n, rng):
    return space.from_unit(rng.random((int(n), space.dims)))


def first_primes(k):
    primes = []
    candidate = 2
    while len(primes) < k:
        if all(candidate % p for p in primes if p * p <= candidate):
            primes.append(candidate)
        candidate += 1
    return primes


def radical_inverse(indices, base):
    # mirrored digits as an integer over base**k, then one division: correctly rounded
    indices = np.asarray(indices, dtype=np.int64).copy()
    num = np.zeros(indices.shape, dtype=np.int64)
    den = np.ones(indices.shape, dtype=np.int64)
    while np.any(indices > 0):
        live = indices > 0
        num[live] = num[live] * base + indices[live] % base
        den[live] *= base
        indices //= base
    return num / den


def halton(space, n):
    """Unscrambled Halton points 1..n (origin skipped), bases = first d primes."""
    idx = np.arange(1, int(n) + 1)
    unit = np.column_stack([radical_inverse(idx, p) for p in first_primes(space.dims)])
    return space.from_unit(unit)


def sobol(space, n):
    """First ``n`` unscrambled Sobol' points including the origin (Joe-Kuo direction numbers)."""
    if space.dims > SOBOL_MAX_DIM:
        raise UnsupportedDimensionError(f"Sobol' supports at most {SOBOL_MAX_DIM} dimensions")
    engine = qmc.Sobol(d=space.dims, scramble=False)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)  # balance warning for n not a power of 2
        unit = engine.random(int(n))
    return space.from_unit(unit)


def draw_unlabeled(kind, centers, space, n_u, rng, std=1.0):
    if n_u == 0:
        return np.empty((0, space.dims))
    if kind == "truncnorm":
        return sample_unlabeled(centers, space, n_u, rng, std)
    if kind == "uniform":
        return sample_uniform(space, n_u, rng)
    if kind == "halton":
        return halton(space, n_u)
    if kind == "sobol":
        return sobol(space, n_u)
    raise InvalidArgumentError(f"unknown sampler {kind!r}")


def subsample_indices(n, m, rng):
    if m > n:
        logger.info("subset size %d exceeds pool size %d; using the whole pool", m, n)
        m = n
    return rng.choice(n, size=int(m), replace=False)


def subsample_pool(pool, m, rng):
    """Uniform without-replacement subset of ``m`` candidates."""
    idx = subsample_indices(len(pool), m, rng)
    values = None if pool.values is None else pool.values[idx]
    return PoolSet(pool.candidates[idx], pool.evaluated[idx], values)


def uniform_pool(space, size, rng):
    return PoolSet(sample_uniform(space, size, rng))


def load_pool_csv(path, value_column=None, bounds=None, maximize=False):
    """Read a candidate pool: header row, ``d`` feature columns and one objective column.

    The objective column defaults to the last one. ``bounds`` (a SearchSpace)
    is validated against every row; without it the bounding box of the data is
    used. ``maximize=True`` negates values so the pool is minimized.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise InvalidArgumentError(f"{path}: empty file") from None
        if len(header) < 2:
            raise InvalidArgumentError(f"{path}: need at least one feature and one value column")
        if value_column is None:
            vcol = len(header) - 1
        elif value_column in header:
            vcol = header.index(value_column)
        else:
            raise InvalidArgumentError(f"{path}: no column named {value_column!r}")
        if all(_is_float(h) for h in header):
            raise InvalidArgumentError(f"{path}: header row required (first line is numeric)")
        rows, values = [], []
        for lineno, record in enumerate(reader, start=2):
            if not record or all(not f.strip() for f in record):
                continue
            if len(record) != len(header):
                raise InvalidArgumentError(
                    f"{path}:{lineno}: expected {len(header)} fields, got {len(record)}")
            try:
                nums = [float(f) for f in record]
            except ValueError as exc:
                raise InvalidArgumentError(f"{path}:{lineno}: {exc}") from None
            if not np.all(np.isfinite(nums)):
                raise InvalidArgumentError(f"{path}:{lineno}: NaN or infinite value")
            values.append(nums[vcol])
            rows.append([v for k, v in enumerate(nums) if k != vcol])
    if not rows:
        raise InvalidArgumentError(f"{path}: no data rows")
    X = np.array(rows)
    y = np.array(values)
    if maximize:
        y = -y
    if bounds is not None:
        if bounds.dims != X.shape[1]:
            raise InvalidArgumentError(f"{path}: bounds have {bounds.dims} dims, data has {X.shape[1]}")
        outside = np.flatnonzero(~bounds.contains(X))
        if outside.size:
            raise InvalidArgumentError(f"{path}:{outside[0] + 2}: candidate outside the given bounds")
        space = bounds
    else:
        try:
            space = SearchSpace(X.min(axis=0), X.max(axis=0))
        except InvalidArgumentError as exc:
            raise InvalidArgumentError(f"{path}: a feature column is constant ({exc})") from None
    features = [h for k, h in enumerate(header) if k != vcol]
    return PoolSet(X, values=y), space, features


def _is_float(text):
    try:
        float(text)
    except ValueError:
        return False
    return True
