"""Monte Carlo calibration: null tables, critical values, p-values, power.

Every replicate draws from its own counter-based stream (see
:mod:`unifit.rng`), so tables and power curves are a pure function of
(seed, test, family, θ, n, replicates) — bit-identical regardless of
worker count. Null sample matrices are cached and shared across tests.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from . import rng as _rng
from .alternatives import AlternativeFamily
from .competitors import (
    HS_MAX_N,
    _ad_batch,
    _cvm_batch,
    _hs_batch,
    _ks_batch,
    _qc_batch,
    ad_statistic,
    cvm_statistic,
    hs_statistic,
    ks_statistic,
    qc_statistic,
)
from .errors import BadParameter, InsufficientReplicates, SampleTooLarge, SampleTooSmall
from .moment_tests import _t_batch, t_statistic
from .samples import Sample


@dataclass(frozen=True)
class StatisticSpec:
    """A test statistic plus its sample-size constraints."""

    id: str
    evaluate: Callable[[Sample], float]
    batch: Callable[[np.ndarray], np.ndarray]  # rows must be sorted
    min_n: int = 1
    max_n: int | None = None


STATISTICS: dict[str, StatisticSpec] = {
    "t1": StatisticSpec("t1", lambda s: t_statistic(s, 1), lambda m: _t_batch(m, 1), min_n=2),
    "t2": StatisticSpec("t2", lambda s: t_statistic(s, 2), lambda m: _t_batch(m, 2), min_n=3),
    "hs": StatisticSpec("hs", hs_statistic, _hs_batch, min_n=4, max_n=HS_MAX_N),
    "ks": StatisticSpec("ks", ks_statistic, _ks_batch),
    "ad": StatisticSpec("ad", ad_statistic, _ad_batch),
    "cvm": StatisticSpec("cvm", cvm_statistic, _cvm_batch),
    "qc": StatisticSpec("qc", qc_statistic, _qc_batch),
}


def get_statistic(test_id: str) -> StatisticSpec:
    spec = STATISTICS.get(test_id)
    if spec is None:
        raise BadParameter(f"unknown test {test_id!r}; expected one of {sorted(STATISTICS)}")
    return spec


def _check_n(spec: StatisticSpec, n: int) -> None:
    if n < spec.min_n:
        raise SampleTooSmall(spec.min_n, n)
    if spec.max_n is not None and n > spec.max_n:
        raise SampleTooLarge(spec.max_n, n)


@dataclass(frozen=True)
class McConfig:
    """Simulation configuration. Results do not depend on ``workers``."""

    replicates: int = 10_000
    alpha: float = 0.1
    n: int = 50
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.replicates < 100:
            raise InsufficientReplicates(
                f"need at least 100 replicates, got {self.replicates}"
            )
        if not (0.0 < self.alpha < 1.0):
            raise BadParameter(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.n < 1:
            raise BadParameter(f"need n >= 1, got {self.n}")
        if self.workers < 1:
            raise BadParameter(f"need workers >= 1, got {self.workers}")


@dataclass(frozen=True)
class TestOutcome:
    """Statistic value, Monte Carlo p-value and decision for one sample."""

    test_id: str
    n: int
    statistic: float
    p_value: float
    reject: bool
    alpha: float
    replicates: int
    seed: int
    extra: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class PowerCurve:
    """Empirical power of one test along a θ grid."""

    test_id: str
    family_id: str
    theta: np.ndarray
    power: np.ndarray
    se: np.ndarray
    n: int
    alpha: float
    replicates: int
    seed: int


# ---------------------------------------------------------------------------
# replicate simulation
# ---------------------------------------------------------------------------

def _null_rows(args) -> np.ndarray:
    seed, n, start, stop = args
    rows = np.empty((stop - start, n))
    for i in range(start, stop):
        rows[i - start] = _rng.stream(seed, _rng.DOMAIN_NULL, i).random(n)
    return rows


def _family_rows(args) -> np.ndarray:
    # families are addressed by their id string so chunks stay picklable
    fam_id, theta, seed, n, start, stop = args
    from .alternatives import parse_family_spec

    fam = parse_family_spec(fam_id)
    fkey = _rng.family_key(fam.id)
    tkey = _rng.theta_key(theta)
    rows = np.empty((stop - start, n))
    for i in range(start, stop):
        gen = _rng.stream(seed, _rng.DOMAIN_POWER, fkey, tkey, i)
        rows[i - start] = fam._sampler(theta, n, gen)
    return rows


def _run_chunked(worker, args_builder, replicates: int, workers: int) -> np.ndarray:
    if workers <= 1:
        return worker(args_builder(0, replicates))
    bounds = np.linspace(0, replicates, workers + 1, dtype=int)
    chunks = [args_builder(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(worker, chunks))
    return np.vstack(parts)


_NULL_CACHE: dict[tuple, np.ndarray] = {}
_STAT_CACHE: dict[tuple, np.ndarray] = {}
_CACHE_LIMIT = 32


def _evict(cache: dict) -> None:
    while len(cache) > _CACHE_LIMIT:
        cache.pop(next(iter(cache)))


def null_sample_matrix(n: int, replicates: int, seed: int, workers: int = 1) -> np.ndarray:
    """Sorted uniform null samples, one replicate per row (cached)."""
    key = (n, replicates, seed)
    got = _NULL_CACHE.get(key)
    if got is None:
        rows = _run_chunked(_null_rows, lambda a, b: (seed, n, a, b), replicates, workers)
        got = np.sort(rows, axis=1)
        got.setflags(write=False)
        _NULL_CACHE[key] = got
        _evict(_NULL_CACHE)
    return got


def null_statistics(test_id: str, n: int, replicates: int, seed: int,
                    workers: int = 1) -> np.ndarray:
    """Null distribution table of a statistic (cached)."""
    key = (test_id, n, replicates, seed)
    got = _STAT_CACHE.get(key)
    if got is None:
        spec = get_statistic(test_id)
        _check_n(spec, n)
        got = spec.batch(null_sample_matrix(n, replicates, seed, workers))
        got.setflags(write=False)
        _STAT_CACHE[key] = got
        _evict(_STAT_CACHE)
    return got


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def critical_value(test_id: str, n: int | None = None, alpha: float | None = None,
                   config: McConfig = McConfig()) -> float:
    """Empirical (1−α) null quantile of the statistic (upper-tail tests).

    Uses the order-statistic quantile of type "higher" on a simulated null
    table; rejection at level α is ``statistic > critical_value`` and
    agrees with the p-value rule on the same table.
    """
    n = config.n if n is None else int(n)
    alpha = config.alpha if alpha is None else float(alpha)
    if config.replicates * alpha < 10:
        raise InsufficientReplicates(
            f"replicates*alpha = {config.replicates * alpha:g} < 10; "
            "the tail quantile would be too noisy"
        )
    table = null_statistics(test_id, n, config.replicates, config.seed, config.workers)
    return float(np.quantile(table, 1.0 - alpha, method="higher"))


def p_value(test_id: str, sample: Sample, config: McConfig = McConfig()) -> TestOutcome:
    """Monte Carlo p-value p = (1 + #{simulated >= observed}) / (replicates + 1)."""
    spec = get_statistic(test_id)
    _check_n(spec, sample.n)
    observed = float(spec.evaluate(sample))
    table = null_statistics(test_id, sample.n, config.replicates, config.seed, config.workers)
    exceed = int(np.count_nonzero(table >= observed))
    p = (1.0 + exceed) / (config.replicates + 1.0)
    return TestOutcome(
        test_id=test_id, n=sample.n, statistic=observed, p_value=p,
        reject=p <= config.alpha, alpha=config.alpha,
        replicates=config.replicates, seed=config.seed,
    )


def family_sample_matrix(fam: AlternativeFamily, theta: float, n: int, replicates: int,
                         seed: int, workers: int = 1) -> np.ndarray:
    """Sorted samples from the family at θ, one replicate per row."""
    theta = fam.check_theta(theta)
    rows = _run_chunked(
        _family_rows, lambda a, b: (fam.id, theta, seed, n, a, b), replicates, workers
    )
    return np.sort(np.clip(rows, 0.0, 1.0), axis=1)


def power_study(test_ids: Sequence[str], fam: AlternativeFamily, theta_grid,
                config: McConfig = McConfig()) -> list[PowerCurve]:
    """Empirical power of each test along the θ grid.

    For each θ the same simulated samples feed every test; power is the
    fraction of replicates whose statistic exceeds the test's critical
    value from an equally sized null table under the same seed.
    """
    theta_grid = np.asarray(list(theta_grid), dtype=np.float64)
    for theta in theta_grid:
        fam.check_theta(float(theta))
    crits = {tid: critical_value(tid, config=config) for tid in test_ids}
    hits = {tid: [] for tid in test_ids}
    for theta in theta_grid:
        rows = family_sample_matrix(fam, float(theta), config.n, config.replicates,
                                    config.seed, config.workers)
        for tid in test_ids:
            stats = get_statistic(tid).batch(rows)
            hits[tid].append(float(np.mean(stats > crits[tid])))
    curves = []
    for tid in test_ids:
        power = np.asarray(hits[tid])
        se = np.sqrt(power * (1.0 - power) / config.replicates)
        curves.append(PowerCurve(
            test_id=tid, family_id=fam.id, theta=theta_grid.copy(), power=power, se=se,
            n=config.n, alpha=config.alpha, replicates=config.replicates, seed=config.seed,
        ))
    return curves


def with_params(config: McConfig, **kwargs) -> McConfig:
    """Convenience: a copy of ``config`` with fields replaced."""
    return replace(config, **kwargs)
