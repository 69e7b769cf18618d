"""Fractional ranking of weight vectors with explicit tie policies.

Ranks are 1-based and ascending: the smallest weight gets rank 1 and the
largest gets rank ``n``.  A 0-based convention differs only by a constant
shift, which leaves every correlation computed downstream unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TIE_POLICIES = ("average", "min", "max", "ordinal", "dense")


@dataclass(frozen=True, eq=False)
class RankVector:
    ranks: np.ndarray
    tie_policy: str
    has_ties: bool

    def __len__(self) -> int:
        return len(self.ranks)


def rank_vector(values, tie_policy: str = "average") -> RankVector:
    """Rank ``values`` in ascending order.

    Tied values receive, per ``tie_policy``:

    * ``average``: the mean of the positions the tied run occupies
    * ``min`` / ``max``: the lowest / highest of those positions
    * ``ordinal``: distinct positions, ties broken by original index
    * ``dense``: like ``min`` but with no gaps after a tied run

    Raises ``ValueError`` for empty or non-finite input, or an unknown policy.
    """
    if tie_policy not in TIE_POLICIES:
        raise ValueError(f"unknown tie policy {tie_policy!r}; expected one of {TIE_POLICIES}")
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("values must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(v)):
        raise ValueError("values must be finite")

    n = v.size
    order = np.argsort(v, kind="stable")
    sorted_v = v[order]
    # start index of each run of equal values in sorted order
    new_run = np.empty(n, dtype=bool)
    new_run[0] = True
    np.not_equal(sorted_v[1:], sorted_v[:-1], out=new_run[1:])
    starts = np.flatnonzero(new_run)
    ends = np.append(starts[1:], n)  # exclusive
    has_ties = len(starts) < n

    run_id = np.cumsum(new_run) - 1
    if tie_policy == "ordinal":
        sorted_ranks = np.arange(1, n + 1, dtype=float)
    elif tie_policy == "min":
        sorted_ranks = (starts + 1.0)[run_id]
    elif tie_policy == "max":
        sorted_ranks = ends.astype(float)[run_id]
    elif tie_policy == "dense":
        sorted_ranks = run_id + 1.0
    else:
        # positions start+1 .. end, so their mean is (start + 1 + end) / 2
        sorted_ranks = ((starts + 1 + ends) / 2.0)[run_id]

    ranks = np.empty(n, dtype=float)
    ranks[order] = sorted_ranks
    ranks.flags.writeable = False
    return RankVector(ranks, tie_policy, bool(has_ties))


def rank_sum_check(ranks: RankVector) -> bool:
    """True iff average ranks sum to n(n+1)/2 (relative tolerance 1e-9)."""
    if ranks.tie_policy != "average":
        raise ValueError(f"rank sum identity only holds for 'average', not {ranks.tie_policy!r}")
    n = len(ranks)
    return math.isclose(math.fsum(ranks.ranks), n * (n + 1) / 2, rel_tol=1e-9)
