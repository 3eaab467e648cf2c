"""Compiled and numpy kernels must agree with each other and with LAPACK."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellipsoid_descent import _backend, _pykernels

from .conftest import random_spd

pytestmark = pytest.mark.skipif(
    "cython" not in _backend.available_backends(), reason="compiled kernels not built"
)


def _ck():
    from ellipsoid_descent import _ckernels

    return _ckernels


@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_cholesky_backends_agree(n, seed):
    a = random_spd(np.random.default_rng(seed), n)
    lc, bc = _ck().cholesky(a, 1e-13 * a.diagonal().max())
    lp, bp = _pykernels.cholesky(a, 1e-13 * a.diagonal().max())
    assert bc == bp == -1
    np.testing.assert_allclose(lc, lp, rtol=1e-12, atol=1e-14)
    np.testing.assert_allclose(lc, np.linalg.cholesky(a), rtol=1e-10, atol=1e-12)


def test_cholesky_reports_failing_pivot():
    a = np.diag([1.0, -1e-3, 2.0])
    assert _ck().cholesky(a, 1e-13)[1] == 1
    assert _pykernels.cholesky(a, 1e-13)[1] == 1


@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_cho_solve_backends_agree(n, seed):
    rng = np.random.default_rng(seed)
    a = random_spd(rng, n, shift=0.1)
    b = rng.standard_normal(n)
    lower = np.linalg.cholesky(a)
    xc = _ck().cho_solve(lower, b)
    xp = _pykernels.cho_solve(lower, b)
    np.testing.assert_allclose(xc, xp, rtol=1e-10, atol=1e-12)
    np.testing.assert_allclose(xc, np.linalg.solve(a, b), rtol=1e-8, atol=1e-10)


@given(st.integers(1, 8), st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_power_iteration_backends_agree(m, n, seed):
    a = np.random.default_rng(seed).uniform(-1, 1, (m, n))
    x0 = np.ones(n)
    lc, _, okc = _ck().power_iteration_gram(a, x0, 1e-14, 10_000)
    lp, _, okp = _pykernels.power_iteration_gram(a, x0, 1e-14, 10_000)
    assert okc and okp
    truth = np.linalg.norm(a, 2) ** 2
    assert lc == pytest.approx(truth, rel=1e-9)
    assert lp == pytest.approx(truth, rel=1e-9)


def test_power_iteration_reports_cap():
    # equal top singular values with a start vector mixing both: still converges
    # (Rayleigh quotient is flat), so force the cap with a tiny budget instead
    a = np.diag([1.0, 0.999999])
    lam, iters, ok = _ck().power_iteration_gram(a, np.ones(2), 1e-30, 5)
    assert not ok and iters == 5


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=16), st.floats(1.01, 50))
def test_p_norm_backends_agree(v, p):
    v = np.array(v)
    assert _ck().p_norm(v, p) == pytest.approx(_pykernels.p_norm(v, p), rel=1e-12, abs=1e-300)


def test_symmetry_defect_backends_agree(rng):
    a = rng.standard_normal((5, 5))
    assert _ck().symmetry_defect(a) == pytest.approx(_pykernels.symmetry_defect(a))


def test_backend_switching():
    before = _backend.get_backend()
    with _backend.use_backend("python"):
        assert _backend.get_backend() == "python"
        assert _backend.kernels is _pykernels
    assert _backend.get_backend() == before
    with pytest.raises(ValueError):
        _backend.set_backend("fortran")
