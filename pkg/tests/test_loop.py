import numpy as np
import pytest
from scipy import stats

from propbo.bench import BENCHMARKS
from propbo.core import InvalidArgumentError, ObjectiveError, PoolSet, RunConfig, SearchSpace
from propbo.loop import run, run_control_nw

FAST = dict(n_unlabeled=20, n_starts=20, iterations=6, beta_mode="fixed", beta=1.0)


def test_random_search_record_shape():
    rec = run(RunConfig(classifier="random_search", iterations=7, n_init=3, seed=1))
    assert len(rec) == 10
    assert all(BENCHMARKS["branin"].space.contains(x) for x in rec.X)
    assert np.isnan(rec.y_dagger[:3]).all() and np.isfinite(rec.y_dagger[3:]).all()
    assert np.all(np.diff(rec.best_so_far) <= 0.0)


def test_iterations_must_be_positive():
    with pytest.raises(InvalidArgumentError):
        RunConfig(iterations=0)
    rec = run(RunConfig(classifier="random_search", iterations=1, n_init=4))
    assert len(rec) == 5


@pytest.mark.parametrize("classifier", ["label_propagation", "label_spreading"])
def test_fixed_seed_replays_bitwise(classifier):
    cfg = RunConfig(classifier=classifier, seed=11, **FAST)
    a, b = run(cfg), run(cfg)
    np.testing.assert_array_equal(np.array(a.X), np.array(b.X))
    assert a.y == b.y and a.beta == b.beta and a.flat_landscape == b.flat_landscape


def test_different_seeds_diverge():
    a = run(RunConfig(seed=1, **FAST))
    b = run(RunConfig(seed=2, **FAST))
    assert a.y != b.y


def test_learned_beta_stays_in_bounds():
    rec = run(RunConfig(seed=3, n_unlabeled=20, n_starts=10, iterations=3))
    betas = np.array(rec.beta[5:])
    assert np.all((betas >= 1e-3 * (1 - 1e-12)) & (betas <= 1e3 * (1 + 1e-12)))


def test_control_equals_propagation_without_unlabeled_points():
    cfg = RunConfig(seed=4, **{**FAST, "n_unlabeled": 0})
    control = run_control_nw(cfg)
    lp = run(cfg)
    np.testing.assert_array_equal(np.array(control.X), np.array(lp.X))
    assert control.y == lp.y


def test_control_runs_to_completion():
    rec = run_control_nw(RunConfig(seed=0, n_starts=10, iterations=100))
    assert len(rec) == 105


def test_sampling_queries_stay_in_box():
    space = BENCHMARKS["sixhumpcamel"].space
    for classifier in ("label_propagation", "label_spreading"):
        rec = run(RunConfig(benchmark="sixhumpcamel", classifier=classifier, seed=5, **FAST))
        assert all(space.contains(x) for x in rec.X)


def test_pool_queries_are_fresh_members():
    rng = np.random.default_rng(0)
    cand = rng.uniform([-3, -2], [3, 2], size=(60, 2))
    pool = PoolSet(cand, values=BENCHMARKS["sixhumpcamel"].batch(cand))
    cfg = RunConfig(scenario="pool", seed=6, **{**FAST, "iterations": 20})
    rec = run(cfg, pool=pool)
    idx = rec.pool_index
    assert len(set(idx)) == len(idx) == 25
    for i, x, y in zip(idx, rec.X, rec.y):
        np.testing.assert_array_equal(x, cand[i])
        assert y == pool.values[i]
    assert not pool.evaluated.any()  # caller's pool untouched


def test_pool_subset_run():
    rng = np.random.default_rng(1)
    cand = rng.uniform(size=(80, 2))
    pool = PoolSet(cand, values=np.sum((cand - 0.3) ** 2, axis=1))
    rec = run(RunConfig(scenario="pool", pool_subset=10, seed=2, **FAST), pool=pool)
    assert len(set(rec.pool_index)) == len(rec)


def test_pool_exhaustion_truncates():
    cand = np.linspace(0, 1, 8)[:, None]
    pool = PoolSet(cand, values=(cand[:, 0] - 0.4) ** 2)
    rec = run(RunConfig(scenario="pool", seed=0, **{**FAST, "iterations": 20}), pool=pool)
    assert rec.truncated and len(rec) == 8
    assert sorted(rec.pool_index) == list(range(8))


def test_generated_pool_uses_benchmark():
    rec = run(RunConfig(scenario="pool", pool_size=50, benchmark="beale", seed=0, **FAST))
    assert len(rec) == 11
    assert all(BENCHMARKS["beale"].space.contains(x) for x in rec.X)


def test_custom_objective_and_space():
    space = SearchSpace([0.0] * 3, [1.0] * 3)
    rec = run(RunConfig(seed=0, **FAST), objective=lambda x: float(np.sum((x - 0.5) ** 2)), space=space)
    assert len(rec) == 11 and rec.X[0].shape == (3,)


@pytest.mark.parametrize("bad", [np.nan, np.inf, "text"])
def test_bad_objective_aborts(bad):
    space = SearchSpace([0.0], [1.0])
    with pytest.raises(ObjectiveError):
        run(RunConfig(seed=0, **FAST), objective=lambda x: bad, space=space)


def test_first_random_query_is_uniform():
    # chi-square over 10 equal bins of the first coordinate, 10^4 independent seeds
    lo, hi = -5.0, 10.0
    xs = np.array([run(RunConfig(classifier="random_search", iterations=1, n_init=1, seed=s)).X[1][0]
                   for s in range(10_000)])
    counts = np.histogram(xs, bins=10, range=(lo, hi))[0]
    assert stats.chisquare(counts).pvalue > 0.001
