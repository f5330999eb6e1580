"""Validated observation vectors on [0, 1] and their empirical CDF.

A :class:`Sample` is immutable after construction and caches its sort
order, so order-statistic formulas downstream are cheap and well defined
even with tied observations (the sort is stable).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable

import numpy as np

from .errors import EmptyInput, OutOfRange


@dataclass(frozen=True)
class Sample:
    """Observations in [0, 1] plus the permutation sorting them ascending."""

    values: np.ndarray
    sorted_index: np.ndarray

    @property
    def n(self) -> int:
        return self.values.size

    @cached_property
    def sorted_values(self) -> np.ndarray:
        out = self.values[self.sorted_index]
        out.setflags(write=False)
        return out


def make_sample(raw: Iterable[float]) -> Sample:
    """Validate ``raw`` and return a :class:`Sample`.

    Values exactly 0 or 1 are accepted (statistics that cannot tolerate
    them guard separately). Raises :class:`EmptyInput` or
    :class:`OutOfRange` on the first offending value.
    """
    values = np.asarray(raw, dtype=np.float64)
    if values.ndim != 1:
        values = values.reshape(-1)
    if values.size == 0:
        raise EmptyInput("need at least one observation")
    bad = ~((values >= 0.0) & (values <= 1.0))  # catches NaN as well
    if np.any(bad):
        idx = int(np.argmax(bad))
        raise OutOfRange(idx, values[idx])
    values = values.copy()
    values.setflags(write=False)
    order = np.argsort(values, kind="stable")
    order.setflags(write=False)
    return Sample(values=values, sorted_index=order)


def pit_transform(raw: Iterable[float], f0: Callable) -> Sample:
    """Probability-integral transform: test ``raw`` against the CDF ``f0``.

    Applies ``f0`` elementwise and validates the result, reducing a simple
    null hypothesis with continuous CDF ``f0`` to uniformity on [0, 1].
    """
    arr = np.asarray(raw, dtype=np.float64)
    try:
        transformed = np.asarray(f0(arr), dtype=np.float64)
        if transformed.shape != arr.shape:
            raise TypeError
    except (TypeError, ValueError):
        transformed = np.array([float(f0(x)) for x in arr])
    return make_sample(transformed)


def ecdf(sample: Sample, t) -> float | np.ndarray:
    """Empirical CDF of ``sample`` at ``t`` (right-continuous)."""
    counts = np.searchsorted(sample.sorted_values, t, side="right")
    result = counts / sample.n
    if np.ndim(t) == 0:
        return float(result)
    return result


def load_observations(path) -> np.ndarray:
    """Read observations from a text file.

    One value per line or whitespace-separated; lines starting with '#'
    are ignored.
    """
    out: list[float] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            out.extend(float(tok) for tok in line.split())
    return np.asarray(out, dtype=np.float64)
