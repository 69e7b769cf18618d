"""Cosine, Pearson and Spearman similarity between document vectors.

Spearman is Pearson applied to average (fractional) ranks.  The textbook
closed form ``1 - 6 sum(d^2) / (n (n^2 - 1))`` is exact only when neither
ranking has ties, so it serves as a fast path for that case alone.  On
sparse TF-IDF vectors ties are the norm (every absent term is a zero).

Undefined measures (zero norm, zero variance) come back with
``degenerate=True`` and ``value=None`` instead of raising, since a constant
vector is an ordinary corpus artifact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ranking import rank_vector

MEASURES = ("cs", "pcc", "srcc")


@dataclass(frozen=True)
class MeasureResult:
    measure: str
    value: float | None
    degenerate: bool = False

    def format(self, precision: int = 4) -> str:
        return format_value(self.value, precision)


def format_value(value: float | None, precision: int | None = 4) -> str:
    """Fixed-point rendering; ``None`` -> ``n/a``; ``precision=None`` -> repr."""
    if value is None:
        return "n/a"
    if precision is None:
        return repr(float(value))
    text = f"{value:.{precision}f}"
    if text.startswith("-") and float(text) == 0:
        text = text[1:]
    return text


def _as_array(x) -> np.ndarray:
    return np.asarray(getattr(x, "weights", x), dtype=float)


def _pair(u, v) -> tuple[np.ndarray, np.ndarray]:
    a, b = _as_array(u), _as_array(v)
    if a.ndim != 1 or a.shape != b.shape:
        raise ValueError(f"vectors must be 1-d of equal length, got {a.shape} and {b.shape}")
    return a, b


def _clamp(x: float, lo: float) -> float:
    return min(1.0, max(lo, x))


def cosine(u, v) -> MeasureResult:
    a, b = _pair(u, v)
    norm_a = math.sqrt(math.fsum(a * a))
    norm_b = math.sqrt(math.fsum(b * b))
    if norm_a == 0.0 or norm_b == 0.0:
        return MeasureResult("cs", None, True)
    return MeasureResult("cs", _clamp(math.fsum(a * b) / (norm_a * norm_b), -1.0))


def _pearson_value(a: np.ndarray, b: np.ndarray) -> float | None:
    # rounding in the mean would turn a constant vector's zero variance into noise
    if np.all(a == a[0]) or np.all(b == b[0]):
        return None
    n = a.size
    da = a - math.fsum(a) / n
    db = b - math.fsum(b) / n
    ss_a = math.fsum(da * da)
    ss_b = math.fsum(db * db)
    if ss_a == 0.0 or ss_b == 0.0:
        return None
    # the 1/(n-1) factors of the covariance and both sample deviations cancel
    return _clamp(math.fsum(da * db) / (math.sqrt(ss_a) * math.sqrt(ss_b)), -1.0)


def pearson(u, v) -> MeasureResult:
    a, b = _pair(u, v)
    if a.size < 2:
        raise ValueError("pearson needs at least 2 coordinates")
    value = _pearson_value(a, b)
    return MeasureResult("pcc", value, value is None)


def spearman_closed_form(ranks_u, ranks_v) -> float:
    """``1 - 6 sum(d_i^2) / (n (n^2 - 1))``; valid only for tie-free ranks."""
    a, b = _pair(ranks_u, ranks_v)
    n = a.size
    if n < 2:
        raise ValueError("spearman needs at least 2 coordinates")
    d = a - b
    return 1.0 - 6.0 * math.fsum(d * d) / (n * (n * n - 1.0))


def spearman_from_ranks(ranks_u, ranks_v) -> MeasureResult:
    """Pearson correlation of two rank vectors (any rank base)."""
    a, b = _pair(ranks_u, ranks_v)
    if a.size < 2:
        raise ValueError("spearman needs at least 2 coordinates")
    value = _pearson_value(a, b)
    return MeasureResult("srcc", value, value is None)


def spearman(u, v, tie_policy: str = "average") -> MeasureResult:
    a, b = _pair(u, v)
    if a.size < 2:
        raise ValueError("spearman needs at least 2 coordinates")
    ru = rank_vector(a, tie_policy)
    rv = rank_vector(b, tie_policy)
    if not (ru.has_ties or rv.has_ties):
        return MeasureResult("srcc", _clamp(spearman_closed_form(ru.ranks, rv.ranks), -1.0))
    return spearman_from_ranks(ru.ranks, rv.ranks)


def measure(name: str, u, v, tie_policy: str = "average") -> MeasureResult:
    if name == "cs":
        return cosine(u, v)
    if name == "pcc":
        return pearson(u, v)
    if name == "srcc":
        return spearman(u, v, tie_policy)
    raise ValueError(f"unknown measure {name!r}; expected one of {MEASURES}")


def all_measures(u, v, tie_policy: str = "average") -> dict[str, MeasureResult]:
    return {m: measure(m, u, v, tie_policy) for m in MEASURES}
