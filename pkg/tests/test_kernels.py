"""Compiled and numpy kernels must agree to rounding."""
import numpy as np
import pytest

from propbo import _kernels_py as py
from propbo import kernels

compiled = pytest.importorskip("propbo._kernels", reason="compiled kernels not built")


@pytest.fixture
def instance():
    rng = np.random.default_rng(11)
    X = rng.uniform(size=(40, 3))
    C = np.zeros((40, 2))
    C[np.arange(10), rng.integers(0, 2, 10)] = 1.0
    return rng, X, C


def test_backend_selected():
    assert kernels.BACKEND in ("compiled", "python")


def test_rbf_parity(instance):
    _, X, _ = instance
    np.testing.assert_allclose(compiled.rbf(X, X, 1.7), py.rbf(X, X, 1.7), rtol=1e-14, atol=0)
    np.testing.assert_allclose(compiled.sq_dists(X[:5], X), py.sq_dists(X[:5], X), rtol=1e-14, atol=0)


def test_lp_parity(instance):
    _, X, C = instance
    W = py.rbf(X, X, 2.0)
    M = W / W.sum(axis=1, keepdims=True)
    a = compiled.lp_iterate(M, C, 10, 500, 1e-10)
    b = py.lp_iterate(M, C, 10, 500, 1e-10)
    assert a[1] == b[1]
    np.testing.assert_allclose(a[0], b[0], atol=1e-13)


def test_ls_parity(instance):
    _, X, C = instance
    W = py.rbf(X, X, 2.0)
    d = W.sum(axis=1)
    S = W / np.sqrt(np.outer(d, d))
    a = compiled.ls_iterate(S, C, 0.7, 500, 1e-12)
    b = py.ls_iterate(S, C, 0.7, 500, 1e-12)
    assert a[1] == b[1]
    np.testing.assert_allclose(a[0], b[0], atol=1e-13)


@pytest.mark.parametrize("need_grad", [False, True])
def test_predictor_parity(instance, need_grad):
    rng, X, C = instance
    C = C.copy()
    C[10:] = rng.dirichlet([1, 1], size=30)
    C[12] = 0.0
    Q = rng.uniform(-1, 2, size=(25, 3))
    pa, ga = compiled.class1_value_grad(Q, X, C, 3.0, need_grad)
    pb, gb = py.class1_value_grad(Q, X, C, 3.0, need_grad)
    np.testing.assert_allclose(pa, pb, atol=1e-14)
    if need_grad:
        np.testing.assert_allclose(ga, gb, atol=1e-12)
    else:
        assert ga is None and gb is None
