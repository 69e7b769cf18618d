"""Pairwise similarity matrices over a corpus and the reports built on them."""

from __future__ import annotations

import csv
import io
import itertools
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .ranking import rank_vector
from .similarity import MEASURES, format_value, measure


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    """Per-measure ``n x n`` grids; ``NaN`` marks a degenerate cell."""

    doc_ids: tuple[str, ...]
    grids: dict[str, np.ndarray]

    def __post_init__(self) -> None:
        object.__setattr__(self, "_pos", {d: i for i, d in enumerate(self.doc_ids)})

    def position(self, doc_id: str) -> int:
        try:
            return self._pos[doc_id]  # type: ignore[attr-defined]
        except KeyError:
            raise KeyError(f"unknown document id {doc_id!r}") from None

    def value(self, measure_name: str, a: str, b: str) -> float | None:
        x = self.grids[measure_name][self.position(a), self.position(b)]
        return None if np.isnan(x) else float(x)

    def pairs(self) -> Iterable[tuple[str, str]]:
        """Unordered pairs in corpus order: (0,1), (0,2), ..., (n-2,n-1)."""
        return itertools.combinations(self.doc_ids, 2)


@dataclass(frozen=True)
class PairRecord:
    doc_a: str
    doc_b: str
    cs: float | None
    pcc: float | None
    srcc: float | None


def _diagonal(name: str, w: np.ndarray) -> float:
    if name == "cs":
        return 1.0 if np.any(w != 0) else np.nan
    return 1.0 if np.any(w != w[0]) else np.nan


def pairwise_matrix(vectors: Sequence, measures: Sequence[str] = MEASURES,
                    tie_policy: str = "average", workers: int = 1) -> SimilarityMatrix:
    """Fill every measure grid, computing each unordered pair exactly once.

    ``workers > 1`` spreads the pairs over a thread pool; cells are written by
    pair position, so the result does not depend on scheduling.
    """
    if len(vectors) < 2:
        raise ValueError("pairwise_matrix needs at least 2 documents")
    ids = tuple(v.doc_id for v in vectors)
    weights = [np.asarray(v.weights, dtype=float) for v in vectors]
    if len({w.shape for w in weights}) != 1:
        raise ValueError("vectors have mismatched lengths")
    for m in measures:
        if m not in MEASURES:
            raise ValueError(f"unknown measure {m!r}")

    n = len(vectors)
    grids = {m: np.full((n, n), np.nan) for m in measures}
    for m in measures:
        for i, w in enumerate(weights):
            grids[m][i, i] = _diagonal(m, w)

    pairs = list(itertools.combinations(range(n), 2))

    def cell(pair):
        i, j = pair
        return [measure(m, weights[i], weights[j], tie_policy).value for m in measures]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(cell, pairs))
    else:
        results = [cell(p) for p in pairs]

    for (i, j), values in zip(pairs, results):
        for m, val in zip(measures, values):
            x = np.nan if val is None else val
            grids[m][i, j] = grids[m][j, i] = x
    for g in grids.values():
        g.flags.writeable = False
    return SimilarityMatrix(ids, grids)


def comparison_report(matrix: SimilarityMatrix,
                      pairs: Iterable[tuple[str, str]] | None = None) -> list[PairRecord]:
    """One record per requested pair, in request order (all pairs by default)."""
    selected = matrix.pairs() if pairs is None else pairs
    records = []
    for a, b in selected:
        matrix.position(a)
        matrix.position(b)
        records.append(PairRecord(
            a, b,
            *(matrix.value(m, a, b) if m in matrix.grids else None for m in MEASURES),
        ))
    return records


def pair_label(a: str, b: str) -> str:
    return f"{a}|{b}"


def measure_scatter(matrix: SimilarityMatrix) -> list[tuple[str, float | None, float | None, float | None]]:
    """Points ``(pair, cs, srcc, pcc)`` for every unordered pair."""
    return [(pair_label(r.doc_a, r.doc_b), r.cs, r.srcc, r.pcc)
            for r in comparison_report(matrix)]


def rank_scatter(u, v, vocabulary: Sequence[str],
                 tie_policy: str = "average") -> list[tuple[str, float, float]]:
    wu = np.asarray(getattr(u, "weights", u), dtype=float)
    wv = np.asarray(getattr(v, "weights", v), dtype=float)
    if not len(wu) == len(wv) == len(vocabulary):
        raise ValueError("vectors and vocabulary have mismatched lengths")
    ru = rank_vector(wu, tie_policy).ranks
    rv = rank_vector(wv, tie_policy).ranks
    return [(t, float(a), float(b)) for t, a, b in zip(vocabulary, ru, rv)]


# ---- serialization -------------------------------------------------------

def _csv_text(rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def matrix_csv(matrix: SimilarityMatrix, measure_name: str,
               precision: int | None = 4) -> str:
    grid = matrix.grids[measure_name]
    rows: list[list[str]] = [["", *matrix.doc_ids]]
    for i, doc in enumerate(matrix.doc_ids):
        rows.append([doc, *(format_value(None if np.isnan(x) else float(x), precision)
                            for x in grid[i])])
    return _csv_text(rows)


def matrix_json(matrix: SimilarityMatrix) -> str:
    payload = {
        "doc_ids": list(matrix.doc_ids),
        "measures": {
            m: [[None if np.isnan(x) else float(x) for x in row] for row in g]
            for m, g in matrix.grids.items()
        },
    }
    return json.dumps(payload, ensure_ascii=False, indent=1) + "\n"


def report_csv(records: Sequence[PairRecord], precision: int | None = 4) -> str:
    rows: list[list[str]] = [["doc_a", "doc_b", "cs", "srcc", "pcc"]]
    for r in records:
        rows.append([r.doc_a, r.doc_b, *(format_value(x, precision)
                                         for x in (r.cs, r.srcc, r.pcc))])
    return _csv_text(rows)


def measure_scatter_csv(points, precision: int | None = None) -> str:
    rows: list[list[str]] = [["pair", "cs", "srcc", "pcc"]]
    rows += [[p, *(format_value(x, precision) for x in vals)] for p, *vals in points]
    return _csv_text(rows)


def rank_scatter_csv(points) -> str:
    rows: list[list[str]] = [["term", "rank_u", "rank_v"]]
    rows += [[t, repr(a), repr(b)] for t, a, b in points]
    return _csv_text(rows)
