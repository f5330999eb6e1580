"""Competitor uniformity statistics: KS, AD, CvM, max-correlation, HS.

All statistics here are the standard test-ready forms (n-scaled where the
classical definition is an integral), reject in the upper tail, and are
invariant under permutation of the input. Critical values and p-values
come from :mod:`unifit.montecarlo`, not from published tables.
"""
from __future__ import annotations

from functools import lru_cache
from math import comb

import numpy as np

from .errors import DegenerateValue, SampleTooLarge, SampleTooSmall
from .samples import Sample

COMPETITOR_IDS = ("ks", "ad", "cvm", "qc", "hs")

#: log-guard distance from {0, 1} used by the Anderson-Darling statistic
AD_EPS = 1e-12

#: O(n^4)-derived cost cap on the HS statistic (both evaluation modes)
HS_MAX_N = 120


def ks_statistic(sample: Sample) -> float:
    """Kolmogorov-Smirnov sup-distance between the empirical CDF and t."""
    return float(_ks_batch(sample.sorted_values[None, :])[0])


def ad_statistic(sample: Sample, clamp: bool = True) -> float:
    """Anderson-Darling statistic, n-scaled.

    Observations are clamped to [1e-12, 1 - 1e-12] before the logs; with
    ``clamp=False`` a value exactly 0 or 1 raises :class:`DegenerateValue`.
    """
    x = sample.sorted_values
    if not clamp and np.any((x <= 0.0) | (x >= 1.0)):
        raise DegenerateValue("observation exactly 0 or 1 breaks the log terms")
    return float(_ad_batch(x[None, :])[0])


def cvm_statistic(sample: Sample) -> float:
    """Cramér-von Mises statistic, n-scaled: 1/(12n) + Σ (X_(i) − (2i−1)/2n)²."""
    return float(_cvm_batch(sample.sorted_values[None, :])[0])


def qc_statistic(sample: Sample) -> float:
    """Folded maximum-correlation statistic |(6/n²) Σ (2i−n−1) X_(i) − 1|."""
    return float(_qc_batch(sample.sorted_values[None, :])[0])


def hs_kernel(x1: float, x2: float, x3: float, x4: float) -> float:
    """Degree-4 kernel of the Hashimoto-Shirahata statistic.

    One pairwise-difference part plus, for each of the three ways of
    splitting the arguments into two pairs, the product of the max-gap and
    min-gap between the pairs. Fully symmetric in its four arguments.
    """
    xs = (x1, x2, x3, x4)
    sq = 0.0
    for i in range(4):
        for j in range(i + 1, 4):
            d = xs[i] - xs[j]
            sq += d * d
    pairings = (
        (max(x1, x2) - max(x3, x4)) * (min(x1, x2) - min(x3, x4)),
        (max(x1, x3) - max(x2, x4)) * (min(x1, x3) - min(x2, x4)),
        (max(x1, x4) - max(x2, x3)) * (min(x1, x4) - min(x2, x3)),
    )
    return sq / 36.0 - sum(pairings) / 6.0


def hs_statistic(sample: Sample, mode: str = "fast") -> float:
    """Average of :func:`hs_kernel` over all 4-subsets of the sample.

    ``mode="fast"`` uses an O(n²) expansion in the sorted sample (for a
    sorted subset a <= b <= c <= d two of the pairing products cancel and
    the third is (d−b)(c−a)); ``"naive"`` enumerates subsets. Requires
    4 <= n <= 120.
    """
    n = sample.n
    if n < 4:
        raise SampleTooSmall(4, n)
    if n > HS_MAX_N:
        raise SampleTooLarge(HS_MAX_N, n)
    if mode == "naive":
        x = sample.values
        from itertools import combinations

        idx = np.fromiter(
            (k for quad in combinations(range(n), 4) for k in quad), dtype=np.intp
        ).reshape(-1, 4)
        quads = np.sort(x[idx], axis=1)
        a, b, c, d = quads.T
        diffs = (
            (a - b) ** 2 + (a - c) ** 2 + (a - d) ** 2
            + (b - c) ** 2 + (b - d) ** 2 + (c - d) ** 2
        )
        vals = diffs / 36.0 - (d - b) * (c - a) / 6.0
        return float(np.mean(vals))
    return float(_hs_batch(sample.sorted_values[None, :])[0])


def hs_projection(s1, s2):
    """Two-argument projection of :func:`hs_kernel` under uniformity.

    Closed form (s1²s2 + s2²s1)/6 + min(s1,s2)/18 − 2 s1 s2/9 − s1²s2²/6;
    symmetric, and degenerate in each argument.
    """
    s1 = np.asarray(s1, dtype=np.float64)
    s2 = np.asarray(s2, dtype=np.float64)
    out = (
        (s1**2 * s2 + s2**2 * s1) / 6.0
        + np.minimum(s1, s2) / 18.0
        - 2.0 * s1 * s2 / 9.0
        - s1**2 * s2**2 / 6.0
    )
    if out.ndim == 0:
        return float(out)
    return out


# ---------------------------------------------------------------------------
# batched evaluators over rows of an already-sorted sample matrix
# ---------------------------------------------------------------------------

def _ks_batch(sorted_rows: np.ndarray) -> np.ndarray:
    n = sorted_rows.shape[1]
    i = np.arange(1, n + 1)
    upper = np.max(i / n - sorted_rows, axis=1)
    lower = np.max(sorted_rows - (i - 1) / n, axis=1)
    return np.maximum(upper, lower)


def _ad_batch(sorted_rows: np.ndarray) -> np.ndarray:
    n = sorted_rows.shape[1]
    x = np.clip(sorted_rows, AD_EPS, 1.0 - AD_EPS)
    w = 2.0 * np.arange(1, n + 1) - 1.0
    terms = (np.log(x) + np.log(1.0 - x[:, ::-1])) @ w
    return -n - terms / n


def _cvm_batch(sorted_rows: np.ndarray) -> np.ndarray:
    n = sorted_rows.shape[1]
    grid = (2.0 * np.arange(1, n + 1) - 1.0) / (2.0 * n)
    return 1.0 / (12.0 * n) + np.sum((sorted_rows - grid) ** 2, axis=1)


def _qc_batch(sorted_rows: np.ndarray) -> np.ndarray:
    n = sorted_rows.shape[1]
    w = 2.0 * np.arange(1, n + 1) - n - 1.0
    return np.abs(6.0 / n**2 * (sorted_rows @ w) - 1.0)


@lru_cache(maxsize=32)
def _hs_pair_weights(n: int) -> np.ndarray:
    """Weight of X_(p) X_(q) in the sum of (d−b)(c−a) over sorted 4-subsets."""
    w = np.zeros((n, n))
    for p in range(1, n + 1):
        for q in range(p + 1, n + 1):
            w[p - 1, q - 1] = (
                comb(p - 1, 2) + comb(n - q, 2) - comb(q - p - 1, 2) - (p - 1) * (n - q)
            )
    out = w + w.T
    out.setflags(write=False)
    return out


def _hs_batch(sorted_rows: np.ndarray) -> np.ndarray:
    n = sorted_rows.shape[1]
    c4 = comb(n, 4)
    pair_part = comb(n - 2, 2) / (36.0 * c4)
    s1 = np.sum(sorted_rows, axis=1)
    s2 = np.sum(sorted_rows**2, axis=1)
    quad = np.einsum("rp,pq,rq->r", sorted_rows, _hs_pair_weights(n), sorted_rows) / 2.0
    return pair_part * (n * s2 - s1**2) - quad / (6.0 * c4)
