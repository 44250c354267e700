"""Bayesian optimization whose acquisition is the class-1 probability of a
graph-based semi-supervised classifier (label propagation / label spreading).

Quick start::

    from propbo import RunConfig, run
    record = run(RunConfig(benchmark="branin", iterations=50, seed=0))
    print(record.best_value, record.best_point)
"""
from .acquisition import assign_labels, compute_threshold, maximize_continuous, maximize_pool
from .bench import BENCHMARKS, Benchmark, get_benchmark, simple_regret
from .core import History, PoolSet, RunConfig, SearchSpace, load_config, make_rng, write_config
from .graph import SimilarityGraph, build_graph, rbf_similarity
from .kernels import BACKEND
from .loop import RunRecord, run, run_control_nw
from .propagation import (
    InductiveClassifier,
    PropagatedLabels,
    entropy,
    learn_beta,
    predict_class1,
    propagate_lp,
    propagate_ls,
)
from .study import StudySpec, emit_trace, read_trace, run_study

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BENCHMARKS", "Benchmark", "History", "InductiveClassifier", "PoolSet",
    "PropagatedLabels", "RunConfig", "RunRecord", "SearchSpace", "SimilarityGraph", "StudySpec",
    "assign_labels", "build_graph", "compute_threshold", "emit_trace", "entropy", "get_benchmark",
    "learn_beta", "load_config", "make_rng", "maximize_continuous", "maximize_pool",
    "predict_class1", "propagate_lp", "propagate_ls", "rbf_similarity", "read_trace", "run",
    "run_control_nw", "run_study", "simple_regret", "write_config",
]
