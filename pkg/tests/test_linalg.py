import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellipsoid_descent import linalg
from ellipsoid_descent.errors import DimensionMismatch, InvalidExponent, NotPositiveDefinite

from .conftest import random_spd

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 10)


def test_factorize_identity(backend):
    np.testing.assert_array_equal(linalg.factorize(np.eye(2)).lower, np.eye(2))


def test_factorize_diagonal(backend):
    np.testing.assert_allclose(linalg.factorize([[4.0, 0.0], [0.0, 1.0]]).lower, [[2.0, 0.0], [0.0, 1.0]])


def test_factorize_2x2_by_hand(backend):
    # L11 = 2, L21 = 2/2 = 1, L22 = sqrt(3 - 1)
    a = np.array([[4.0, 2.0], [2.0, 3.0]])
    f = linalg.factorize(a)
    np.testing.assert_allclose(f.lower, [[2.0, 0.0], [1.0, math.sqrt(2.0)]], rtol=1e-15)
    np.testing.assert_allclose(f.reconstruct(), a, rtol=1e-10)


@pytest.mark.parametrize("eps", [1e-3, 1e-10, 1e-16])
def test_factorize_rejects_negative_eigenvalue(backend, eps):
    with pytest.raises(NotPositiveDefinite):
        linalg.factorize(np.diag([1.0, -eps]))


def test_factorize_rejects_tiny_pivot_and_asymmetry(backend):
    with pytest.raises(NotPositiveDefinite):
        linalg.factorize(np.diag([1.0, 1e-14]))
    with pytest.raises(NotPositiveDefinite):
        linalg.factorize([[1.0, 0.5], [0.4, 1.0]])
    with pytest.raises(DimensionMismatch):
        linalg.factorize(np.ones((2, 3)))


@given(dims, seeds)
def test_factor_reconstructs_with_positive_diagonal(n, seed):
    a = random_spd(np.random.default_rng(seed), n)
    f = linalg.factorize(a)
    assert np.all(np.diag(f.lower) > 0)
    np.testing.assert_array_equal(np.triu(f.lower, 1), 0.0)
    np.testing.assert_allclose(f.reconstruct(), a, rtol=1e-10, atol=1e-10 * np.abs(a).max())


def test_solve_spd_examples(backend):
    np.testing.assert_allclose(linalg.solve_spd(linalg.factorize(np.eye(2)), [3, 5]), [3, 5])
    np.testing.assert_allclose(linalg.solve_spd(linalg.factorize(np.diag([4.0, 1.0])), [1, 1]), [0.25, 1.0])
    with pytest.raises(DimensionMismatch):
        linalg.solve_spd(linalg.factorize(np.eye(2)), [1, 2, 3])


@given(dims, seeds)
def test_solve_spd_residual(n, seed):
    rng = np.random.default_rng(seed)
    a = random_spd(rng, n, shift=1e-2)
    b = rng.standard_normal(n)
    x = linalg.solve_spd(linalg.factorize(a), b)
    assert np.linalg.norm(a @ x - b) <= 1e-9 * max(1.0, np.linalg.norm(b))


def test_solve_spd_random_5x5(backend, rng):
    a = random_spd(rng, 5)
    b = rng.standard_normal(5)
    x = linalg.solve_spd(linalg.factorize(a), b)
    assert np.linalg.norm(a @ x - b) <= 1e-9 * max(1.0, np.linalg.norm(b))


def test_ellipsoid_norm_examples():
    assert linalg.ellipsoid_norm(np.eye(2), [3, 4]) == 5.0
    assert linalg.ellipsoid_norm(np.diag([4.0, 1.0]), [1, 0]) == 2.0
    assert linalg.ellipsoid_norm(np.eye(3), [0, 0, 0]) == 0.0
    with pytest.raises(DimensionMismatch):
        linalg.ellipsoid_norm(np.eye(2), [1, 2, 3])


@given(dims, seeds)
def test_ellipsoid_norm_equals_mapped_euclidean_norm(n, seed):
    rng = np.random.default_rng(seed)
    a = linalg.SpdMatrix(random_spd(rng, n))
    v = rng.standard_normal(n)
    mapped = np.linalg.norm(a.factor.lower.T @ v)
    assert linalg.ellipsoid_norm(a, v) == pytest.approx(mapped, rel=1e-10)


@given(dims, seeds, st.floats(-1e3, 1e3))
def test_ellipsoid_norm_axioms(n, seed, alpha):
    rng = np.random.default_rng(seed)
    a = linalg.SpdMatrix(random_spd(rng, n, shift=1e-2))
    v = rng.standard_normal(n)
    base = linalg.ellipsoid_norm(a, v)
    assert base > 0
    assert linalg.ellipsoid_norm(a, alpha * v) == pytest.approx(abs(alpha) * base, rel=1e-12, abs=1e-300)


def test_p_norm_examples(backend):
    assert linalg.p_norm([3, 4], 2) == pytest.approx(5.0, rel=1e-15)
    assert linalg.p_norm([1, 1, 1, 1], 2) == pytest.approx(2.0, rel=1e-15)
    assert linalg.p_norm([1, 2, 3], 3) == pytest.approx(36 ** (1 / 3), rel=1e-15)
    assert linalg.p_norm([0, 0], 3) == 0.0
    assert linalg.p_norm([1e200, 1e200], 2) == pytest.approx(math.sqrt(2) * 1e200)


@pytest.mark.parametrize("p", [1.0, 0.5, -2.0, math.inf, math.nan])
def test_p_norm_rejects_bad_exponent(p):
    with pytest.raises(InvalidExponent):
        linalg.p_norm([1, 2], p)


def test_spectral_norm_examples(backend):
    assert linalg.spectral_norm(np.eye(3)) == pytest.approx(1.0, rel=1e-12)
    assert linalg.spectral_norm(np.diag([3.0, 1.0])) == pytest.approx(3.0, rel=1e-12)
    assert linalg.spectral_norm(np.zeros((2, 3))) == 0.0
    assert linalg.spectral_norm([[2.0]]) == 2.0


def test_spectral_norm_random_4x3_transpose(backend, rng):
    a = rng.standard_normal((4, 3))
    s = linalg.spectral_norm(a)
    assert s == pytest.approx(linalg.spectral_norm(a.T), rel=1e-8)
    assert s == pytest.approx(np.linalg.norm(a, 2), rel=1e-8)


@given(st.integers(1, 8), st.integers(1, 8), seeds)
def test_spectral_norm_matches_svd_and_transpose(m, n, seed):
    a = np.random.default_rng(seed).uniform(-1, 1, (m, n))
    s = linalg.spectral_norm(a)
    assert s == pytest.approx(np.linalg.svd(a, compute_uv=False)[0], rel=1e-8)
    assert abs(s - linalg.spectral_norm(a.T)) <= 1e-8 * max(1.0, s)


def test_vectors_are_immutable_and_validated():
    v = linalg.as_vector([1, 2])
    with pytest.raises(ValueError):
        v[0] = 3.0
    with pytest.raises(ValueError):
        linalg.as_vector([1.0, math.nan])
    with pytest.raises(DimensionMismatch):
        linalg.as_vector([])
    a = linalg.SpdMatrix(np.eye(2))
    with pytest.raises(ValueError):
        a.array[0, 0] = 2.0
