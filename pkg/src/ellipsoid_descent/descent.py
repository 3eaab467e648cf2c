"""Steepest descent direction on the unit sphere of the norm ``|d|_B``.

The minimizer of ``g.d`` subject to ``sqrt(d^T B d) = 1`` is
``d = -B^{-1} g / sqrt(g^T B^{-1} g)`` with minimum ``-sqrt(g^T B^{-1} g)``.
:func:`brute_force_min` is an independent sampling oracle for that minimum;
it only evaluates ``g.d`` on random feasible points and never touches the
closed form or the factorization.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DimensionMismatch, NoConvergence, ZeroGradient

ZERO_GRADIENT_NORM = 1e-300
MIN_DRAW_NORM = 1e-12
MAX_REDRAWS = 100
ORACLE_CHUNK = 16_384


@dataclass(frozen=True)
class DirectionResult:
    d: np.ndarray
    value: float


def _inputs(g, b):
    g = linalg.as_vector(g, "g")
    b = linalg.as_spd(b)
    if g.shape[0] != b.n:
        raise DimensionMismatch(f"B is {b.n}x{b.n}, g has length {g.shape[0]}")
    scale = float(np.abs(g).max())
    unit = g / scale if scale > 0.0 else g
    if scale * math.sqrt(float(unit @ unit)) <= ZERO_GRADIENT_NORM:
        raise ZeroGradient("direction is undefined for a zero gradient")
    return g, b, scale, unit


def steepest_direction(g, b):
    """Unit ``B``-norm direction minimizing ``g.d``.

    >>> r = steepest_direction([1.0, 0.0], [[1.0, 0.0], [0.0, 1.0]])
    >>> r.d.tolist(), r.value
    ([-1.0, -0.0], -1.0)
    """
    g, b, scale, unit = _inputs(g, b)
    # the direction does not depend on |g|; work with g / max|g_i|
    binv_u = linalg.solve_spd(b.factor, unit)
    d = -binv_u / math.sqrt(float(unit @ binv_u))
    d.flags.writeable = False
    return DirectionResult(d=d, value=scale * float(unit @ d))


def direction_value(g, b):
    """Attained minimum ``-sqrt(g^T B^{-1} g)``."""
    g, b, scale, unit = _inputs(g, b)
    return -scale * math.sqrt(float(unit @ linalg.solve_spd(b.factor, unit)))


def _b_norms(z, b):
    return np.sqrt(np.maximum(np.einsum("ij,jk,ik->i", z, b, z), 0.0))


def _draw(rng, count, n):
    z = rng.standard_normal((count, n))
    for _ in range(MAX_REDRAWS):
        small = np.einsum("ij,ij->i", z, z) < MIN_DRAW_NORM**2
        if not small.any():
            return z
        z[small] = rng.standard_normal((int(small.sum()), n))
    raise NoConvergence(f"could not draw a nonzero vector in {MAX_REDRAWS} tries")


def sample_unit_sphere(b, seed):
    """Gaussian draw from ``seed`` rescaled to unit ``B``-norm."""
    b = linalg.as_spd(b)
    z = _draw(np.random.default_rng(seed), 1, b.n)[0]
    d = z / linalg.ellipsoid_norm(b, z)
    d.flags.writeable = False
    return d


def _chunk_best(g, b, seed, index, count):
    rng = np.random.default_rng([seed, index])
    z = _draw(rng, count, g.shape[0])
    d = z / _b_norms(z, b)[:, None]
    values = d @ g
    vmin = values.min()
    ties = np.flatnonzero(values == vmin)
    if ties.size > 1:
        ties = ties[np.lexsort(d[ties].T[::-1])]
    return float(vmin), d[ties[0]]


def brute_force_min(g, b, samples, seed, workers=1):
    """Smallest ``g.d`` over ``samples`` random unit-``B``-norm points.

    Draws are split into fixed chunks of 16384, chunk ``i`` seeded with
    ``(seed, i)``, so the answer does not depend on ``workers``. Ties break
    on the lexicographic order of ``d``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    g = linalg.as_vector(g, "g")
    b = linalg.as_spd(b)
    if g.shape[0] != b.n:
        raise DimensionMismatch(f"B is {b.n}x{b.n}, g has length {g.shape[0]}")
    barr = b.array
    chunks = [
        (i, min(ORACLE_CHUNK, samples - start))
        for i, start in enumerate(range(0, samples, ORACLE_CHUNK))
    ]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            found = list(pool.map(lambda c: _chunk_best(g, barr, seed, *c), chunks))
    else:
        found = [_chunk_best(g, barr, seed, *c) for c in chunks]
    value, d = min(found, key=lambda vd: (vd[0], tuple(vd[1])))
    d = d.copy()
    d.flags.writeable = False
    return DirectionResult(d=d, value=value)
