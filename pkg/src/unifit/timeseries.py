"""Hidden-periodicity detection through cumulative periodogram ratios.

Under Gaussian white noise the normalised cumulative periodogram at the
Fourier frequencies behaves like ordered uniforms, so any uniformity test
from this package applies. Critical values are simulated end-to-end under
Gaussian white noise rather than reusing the i.i.d. uniform tables.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rng as _rng
from .errors import SeriesTooShort, ZeroDenominator
from .montecarlo import McConfig, TestOutcome, get_statistic
from .samples import Sample, make_sample


@dataclass(frozen=True)
class Periodogram:
    """Ordinates I(ω_i) at the Fourier frequencies ω_i = 2πi/n, i = 1..q."""

    n: int
    freqs: np.ndarray
    ordinates: np.ndarray

    @property
    def q(self) -> int:
        return self.ordinates.size


def periodogram(series) -> Periodogram:
    """Mean-removed periodogram I(ω_i) = |Σ_t x_t e^{−iω_i t}|² / n for i = 1..q,
    q = floor((n−1)/2)."""
    x = np.asarray(series, dtype=np.float64).reshape(-1)
    n = x.size
    if n < 4:
        raise SeriesTooShort(f"need a series of length >= 4, got {n}")
    q = (n - 1) // 2
    spec = np.fft.rfft(x - x.mean())
    ordinates = np.abs(spec[1:q + 1]) ** 2 / n
    freqs = 2.0 * np.pi * np.arange(1, q + 1) / n
    ordinates.setflags(write=False)
    freqs.setflags(write=False)
    return Periodogram(n=n, freqs=freqs, ordinates=ordinates)


def cumulative_ratios(p: Periodogram) -> Sample:
    """Cumulative ratios Y_k = Σ_{i<=k} I(ω_i) / Σ_{i<=q−1} I(ω_i).

    The final ratio Y_{q−1} is identically 1 and carries no information,
    so the returned sample holds Y_1 .. Y_{q−2} (requires q >= 3). Under
    Gaussian white noise these are distributed as the order statistics of
    q−2 independent uniforms.
    """
    if p.q < 3:
        raise SeriesTooShort(f"need q >= 3 Fourier frequencies, got q={p.q}")
    head = p.ordinates[: p.q - 1]
    denom = float(np.sum(head))
    if denom <= 0.0:
        raise ZeroDenominator("total periodogram mass is zero (constant series?)")
    ratios = np.cumsum(head)[:-1] / denom
    return make_sample(np.clip(ratios, 0.0, 1.0))


def _pipeline_statistic(series, test_id: str) -> tuple[float, int]:
    p = periodogram(series)
    sample = cumulative_ratios(p)
    return float(get_statistic(test_id).evaluate(sample)), p.q


_NOISE_CACHE: dict[tuple, np.ndarray] = {}


def _null_pipeline_statistics(test_id: str, length: int, replicates: int,
                              seed: int) -> np.ndarray:
    key = (test_id, length, replicates, seed)
    got = _NOISE_CACHE.get(key)
    if got is None:
        stats = np.empty(replicates)
        for i in range(replicates):
            z = _rng.stream(seed, _rng.DOMAIN_NOISE, i).standard_normal(length)
            stats[i] = _pipeline_statistic(z, test_id)[0]
        stats.setflags(write=False)
        _NOISE_CACHE[key] = stats
        while len(_NOISE_CACHE) > 16:
            _NOISE_CACHE.pop(next(iter(_NOISE_CACHE)))
    return got if got is not None else _NOISE_CACHE[key]


def whitenoise_test(series, test_id: str = "t1",
                    config: McConfig = McConfig()) -> TestOutcome:
    """Test a series for Gaussian white noise (no hidden periodicities).

    Pipeline: periodogram → cumulative ratios → uniformity statistic, with
    the null distribution simulated end-to-end on Gaussian white noise of
    the same length. Needs a series of length >= 8.
    """
    x = np.asarray(series, dtype=np.float64).reshape(-1)
    if x.size < 8:
        raise SeriesTooShort(f"need a series of length >= 8, got {x.size}")
    observed, q = _pipeline_statistic(x, test_id)
    table = _null_pipeline_statistics(test_id, x.size, config.replicates, config.seed)
    exceed = int(np.count_nonzero(table >= observed))
    p = (1.0 + exceed) / (config.replicates + 1.0)
    return TestOutcome(
        test_id=test_id, n=q - 2, statistic=observed, p_value=p,
        reject=p <= config.alpha, alpha=config.alpha,
        replicates=config.replicates, seed=config.seed,
        extra={"q": q, "series_length": int(x.size)},
    )
