import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from propbo.acquisition import (
    assign_labels,
    compute_threshold,
    maximize_continuous,
    maximize_pool,
)
from propbo.core import PoolExhaustedError, PoolSet, SearchSpace, make_rng
from propbo.propagation import InductiveClassifier

BOX = SearchSpace([-2.0, -2.0], [2.0, 2.0])


def constant(value):
    return lambda X: np.full(np.atleast_2d(X).shape[0], value)


def test_threshold_examples():
    assert compute_threshold(np.arange(1, 11), 0.33) == 4.0
    assert compute_threshold([3.5], 0.33) == 3.5
    assert compute_threshold([2.0] * 7, 0.33) == 2.0


def test_labels_follow_threshold():
    values = np.arange(1.0, 11.0)
    labels = assign_labels(values, compute_threshold(values, 0.33))
    np.testing.assert_array_equal(np.flatnonzero(labels[:, 1]), [0, 1, 2, 3])
    np.testing.assert_array_equal(labels.sum(axis=1), 1.0)
    assert assign_labels([1.0, 1.0], 1.0)[:, 1].all()


def test_labels_reject_impossible_threshold():
    with pytest.raises(AssertionError):
        assign_labels([1.0, 2.0], 0.5)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=50), st.floats(0.01, 0.99))
def test_threshold_guarantees_class1(values, zeta):
    y_dagger = compute_threshold(values, zeta)
    labels = assign_labels(values, y_dagger)
    assert labels[:, 1].sum() >= 1
    assert y_dagger in values


def test_flat_landscape_picks_uniformly_among_starts():
    starts = np.array([[-1.0, -1.0], [1.0, -1.0], [-1.0, 1.0], [1.0, 1.0]])
    rng = make_rng(0)
    trials = 2000
    picks = np.zeros(4)
    for _ in range(trials):
        out = maximize_continuous(constant(0.5), BOX, 4, rng, starts=starts)
        assert out.flat_landscape
        picks[np.flatnonzero((starts == out.query).all(axis=1))[0]] += 1
    assert np.all(np.abs(picks / trials - 0.25) < 3 * np.sqrt(0.25 * 0.75 / trials))


def spike(X):
    X = np.atleast_2d(X)
    return np.exp(-4.0 * np.sum((X - np.array([0.7, -0.3])) ** 2, axis=1))


def test_finds_basin_optimum():
    out = maximize_continuous(spike, BOX, 20, make_rng(1))
    grid = np.stack(np.meshgrid(np.linspace(-2, 2, 801), np.linspace(-2, 2, 801)), -1).reshape(-1, 2)
    best = grid[np.argmax(spike(grid))]
    assert np.abs(out.query - best).max() < 1e-3 + 0.005  # grid spacing 0.005
    assert np.abs(out.query - [0.7, -0.3]).max() < 1e-3
    assert not out.flat_landscape
    assert out.value == spike(out.query)[0]


def test_single_start_does_not_descend():
    rng = make_rng(2)
    for _ in range(20):
        start = rng.uniform(-2, 2, size=(1, 2))
        out = maximize_continuous(spike, BOX, 1, rng, starts=start)
        assert out.value >= spike(start)[0]


def test_optimum_on_boundary_is_reached():
    out = maximize_continuous(lambda X: np.atleast_2d(X)[:, 0], BOX, 5, make_rng(3))
    assert out.query[0] == pytest.approx(2.0, abs=1e-9)
    assert BOX.contains(out.query)


def test_nan_predictor_aborts():
    with pytest.raises(FloatingPointError):
        maximize_continuous(constant(np.nan), BOX, 3, make_rng(0))


def test_inductive_classifier_value_consistent():
    rng = make_rng(4)
    X = rng.uniform(-2, 2, size=(20, 2))
    rows = rng.dirichlet([1, 1], size=20)
    clf = InductiveClassifier(X, rows, 1.0)
    out = maximize_continuous(clf, BOX, 50, rng)
    assert abs(out.value - clf(out.query)[0]) <= 1e-12
    assert BOX.contains(out.query)


def test_pool_argmax_and_mask():
    cand = np.array([[0.0], [1.0], [2.0], [3.0]])
    pool = PoolSet(cand, evaluated=[False, False, False, True])
    out = maximize_pool(lambda X: np.atleast_2d(X)[:, 0], pool, make_rng(0))
    assert out.index == 2 and not out.flat_landscape
    np.testing.assert_array_equal(out.query, [2.0])


def test_pool_ties_uniform():
    pool = PoolSet(np.arange(5.0)[:, None], evaluated=[False, True, False, False, False])
    rng = make_rng(9)
    trials = 4000
    counts = np.zeros(5)
    for _ in range(trials):
        out = maximize_pool(constant(0.3), pool, rng)
        assert out.flat_landscape
        counts[out.index] += 1
    assert counts[1] == 0
    freq = counts[[0, 2, 3, 4]] / trials
    assert np.all(np.abs(freq - 0.25) < 3 * np.sqrt(0.25 * 0.75 / trials))


def test_pool_exhausted():
    with pytest.raises(PoolExhaustedError):
        maximize_pool(constant(0.1), PoolSet(np.zeros((2, 1)), evaluated=[True, True]), make_rng(0))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([np.exp, np.arctan, lambda v: v ** 3 + v]))
def test_pool_argmax_invariant_under_monotone_maps(seed, g):
    rng = np.random.default_rng(seed)
    pool = PoolSet(rng.uniform(size=(30, 2)))
    values = rng.uniform(size=30)
    lookup = {tuple(c): v for c, v in zip(pool.candidates, values)}

    def f(X):
        return np.array([lookup[tuple(r)] for r in np.atleast_2d(X)])

    a = maximize_pool(f, pool, make_rng(0), tie_tol=0.0)
    b = maximize_pool(lambda X: g(f(X)), pool, make_rng(0), tie_tol=0.0)
    assert a.index == b.index == int(np.argmax(values))
