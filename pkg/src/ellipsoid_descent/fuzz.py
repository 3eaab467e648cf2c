"""Seeded random-input campaigns for the inequality checks.

Trials are grouped into fixed blocks of :data:`BLOCK` cases. Block ``j`` of
check ``c`` draws from ``default_rng([seed, c, j])``, so each trial's inputs
depend only on ``(seed, check, trial index)`` and never on how blocks are
spread over workers.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import inequalities as ineq

BLOCK = 1000

LOG10_RANGE = (-3.0, 3.0)
P_RANGE = (1.1, 10.0)
SPD_SHIFT = 1e-3

CHECK_NAMES = (
    "log_bound",
    "am_gm",
    "young",
    "holder",
    "cauchy_schwarz",
    "transpose_spectral",
    "generalized_cs",
)


def log_uniform(rng, size=None):
    return 10.0 ** rng.uniform(*LOG10_RANGE, size)


def signed_log_uniform(rng, n):
    return np.copysign(log_uniform(rng, n), rng.random(n) - 0.5)


def simplex_weights(rng, n):
    w = rng.dirichlet(np.ones(n))
    w = np.maximum(w, 1e-300)
    return w / w.sum()


def random_spd(rng, n, shift=SPD_SHIFT):
    """``M^T M + n * shift * I`` with ``M`` uniform on [-1, 1]."""
    m = rng.uniform(-1.0, 1.0, (n, n))
    return m.T @ m + (n * shift) * np.eye(n)


def _log_bound(rng, dim):
    return ineq.check_log_bound(log_uniform(rng))


def _am_gm(rng, dim):
    return ineq.check_weighted_am_gm(log_uniform(rng, dim), simplex_weights(rng, dim))


def _young(rng, dim):
    x, y = log_uniform(rng, 2)
    return ineq.check_young(x, y, rng.uniform(*P_RANGE))


def _holder(rng, dim):
    x = signed_log_uniform(rng, dim)
    y = signed_log_uniform(rng, dim)
    return ineq.check_holder(x, y, rng.uniform(*P_RANGE))


def _cauchy_schwarz(rng, dim):
    return ineq.check_cauchy_schwarz(signed_log_uniform(rng, dim), signed_log_uniform(rng, dim))


def _transpose_spectral(rng, dim, rtol=None):
    m, k = rng.integers(1, dim + 1, 2)
    a = rng.uniform(-1.0, 1.0, (m, k))
    if rtol is None:
        return ineq.check_transpose_spectral(a)
    return ineq.check_transpose_spectral(a, rtol)


def _generalized_cs(rng, dim):
    a = random_spd(rng, dim)
    return ineq.check_generalized_cs(a, signed_log_uniform(rng, dim), signed_log_uniform(rng, dim))


GENERATORS = {
    "log_bound": _log_bound,
    "am_gm": _am_gm,
    "young": _young,
    "holder": _holder,
    "cauchy_schwarz": _cauchy_schwarz,
    "transpose_spectral": _transpose_spectral,
    "generalized_cs": _generalized_cs,
}


@dataclass(frozen=True)
class CampaignRow:
    trial: int
    check: str
    report: ineq.InequalityReport
    holds: bool


def _holds(name, report, rtol):
    if rtol is None:
        return report.holds
    if name == "transpose_spectral":
        return abs(report.gap) <= rtol * report.scale
    return report.gap >= -rtol * report.scale


def _run_block(name, seed, block, trials, dim, rtol):
    index = CHECK_NAMES.index(name)
    rng = np.random.default_rng([seed, index, block])
    gen = GENERATORS[name]
    start = block * BLOCK
    rows = []
    for trial in range(start, min(start + BLOCK, trials)):
        report = gen(rng, dim)
        rows.append(CampaignRow(trial, name, report, _holds(name, report, rtol)))
    return rows


def run_campaign(name, trials, seed=42, dim=8, rtol=None, workers=1):
    """Yield :class:`CampaignRow` for ``trials`` cases of each selected check.

    ``name`` is one of :data:`CHECK_NAMES` or ``"all"``. ``rtol`` overrides
    each check's default slack when set. Rows come out ordered by check then
    trial index whatever ``workers`` is.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if dim < 1:
        raise ValueError("dim must be >= 1")
    names = CHECK_NAMES if name == "all" else (name,)
    for n in names:
        if n not in GENERATORS:
            raise ValueError(f"unknown check {n!r}")
    jobs = [(n, seed, b, trials, dim, rtol) for n in names for b in range(-(-trials // BLOCK))]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            for rows in pool.map(_run_block, *zip(*jobs)):
                yield from rows
    else:
        for job in jobs:
            yield from _run_block(*job)
