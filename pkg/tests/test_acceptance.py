"""Exit criteria for the package, one test per criterion.

Each test prints a ``PASS``/``FAIL`` line (visible even under output capture).
Run on its own with ``pytest tests/test_acceptance.py -v``.
"""

import contextlib
import csv
import itertools
import json
import math
import time

import numpy as np
import pytest

from docrank import (
    PipelineConfig,
    TfIdfModel,
    build_vocabulary,
    cosine,
    data_path,
    pearson,
    rank_vector,
    spearman,
    spearman_closed_form,
    spearman_from_ranks,
    vectorize,
)
from docrank.cli import main
from docrank.similarity import measure
from docrank.text_pipeline import load_inputs

from conftest import counting_ranks

GOLDEN_SRCC = -0.285714
GOLDEN_WEIGHT = math.log(2) / 7


@pytest.fixture
def criterion(capsys):
    @contextlib.contextmanager
    def run(label):
        try:
            yield
        except BaseException:
            with capsys.disabled():
                print(f"\nFAIL  {label}")
            raise
        with capsys.disabled():
            print(f"\nPASS  {label}")
    return run


def golden_vectors():
    corpus = load_inputs(data_path("illustration.tsv"), PipelineConfig(pretokenized=True))
    model = TfIdfModel.fit(corpus)
    return model, [vectorize(model, d) for d in corpus]


def test_c1_golden_example(criterion):
    with criterion("1 golden example: CS = 0.00, SRCC = -0.285714 +- 1e-6, < 1 s"):
        t0 = time.perf_counter()
        _, (d1, d2) = golden_vectors()
        cs = cosine(d1, d2).value
        srcc = spearman(d1, d2).value
        elapsed = time.perf_counter() - t0
        assert cs == 0.0
        assert abs(srcc - GOLDEN_SRCC) <= 1e-6
        assert abs(srcc - (-2 / 7)) <= 1e-12
        assert elapsed < 1.0


def test_c2_tfidf_reconstruction(criterion):
    with criterion("2 TF-IDF weights = ln(2)/7 ~ 0.099021 +- 1e-4, < 1 s"):
        t0 = time.perf_counter()
        _, (d1, d2) = golden_vectors()
        nonzero = np.concatenate([d1.weights[d1.weights > 0], d2.weights[d2.weights > 0]])
        elapsed = time.perf_counter() - t0
        assert len(nonzero) == 4
        assert np.all(np.abs(nonzero - 0.099021) <= 1e-4)
        assert np.all(np.abs(nonzero - GOLDEN_WEIGHT) <= 1e-12)
        assert elapsed < 1.0


def test_c3_vocabulary_reconstruction(criterion):
    with criterion("3 nonzero positions (1-based): d1 {3, 7}, d2 {4, 9}"):
        model, (d1, d2) = golden_vectors()
        assert model.vocabulary.terms == ("ask", "before", "have", "his", "john",
                                          "leave", "marry", "mary", "wife")
        assert set(np.flatnonzero(d1.weights) + 1) == {3, 7}
        assert set(np.flatnonzero(d2.weights) + 1) == {4, 9}


def _within_tie_rankings(values):
    """All distinct 0..n-1 rankings consistent with ascending order of ``values``."""
    values = np.asarray(values)
    levels = sorted(set(values.tolist()))
    groups = [np.flatnonzero(values == lv) for lv in levels]
    offsets = np.cumsum([0] + [len(g) for g in groups[:-1]])
    out = []
    for perms in itertools.product(*(itertools.permutations(range(len(g))) for g in groups)):
        r = np.empty(len(values))
        for g, off, p in zip(groups, offsets, perms):
            r[g] = off + np.array(p)
        out.append(r)
    return np.array(out)


def test_c4_tie_correction_necessity(criterion):
    with criterion("4 closed form on every distinct 0..n-1 ranking != -0.285714; "
                   "Pearson on average ranks == -0.285714"):
        _, (d1, d2) = golden_vectors()
        U = _within_tie_rankings(d1.weights)
        V = _within_tie_rankings(d2.weights)
        assert U.shape == V.shape == (math.factorial(7) * 2, 9)
        n = 9
        # sum d^2 = sum u^2 + sum v^2 - 2 u.v; the squared sums are the same for every ranking
        base = float((U[0] ** 2).sum() + (V[0] ** 2).sum())
        sums_sq = set()
        for chunk in np.array_split(U, 10):
            sums_sq.update(np.unique(base - 2.0 * (chunk @ V.T)).tolist())
        rhos = np.array([1 - 6 * s / (n * (n * n - 1)) for s in sorted(sums_sq)])
        assert np.all(np.abs(rhos - GOLDEN_SRCC) > 1e-6)
        # spot check the shortcut against the direct closed form
        rng = np.random.default_rng(0)
        for i, j in rng.integers(0, len(U), size=(200, 2)):
            assert spearman_closed_form(U[i], V[j]) in set(rhos.tolist())

        avg = spearman_from_ranks(rank_vector(d1.weights).ranks, rank_vector(d2.weights).ranks)
        assert abs(avg.value - GOLDEN_SRCC) <= 1e-6
        # the closed form applied to the tied average ranks is wrong too
        closed_on_avg = spearman_closed_form(rank_vector(d1.weights).ranks,
                                             rank_vector(d2.weights).ranks)
        assert abs(closed_on_avg - GOLDEN_SRCC) > 1e-6


def _tied_vector(rng, n):
    v = rng.normal(size=n)
    mask = rng.random(n) < 0.3
    pool = rng.normal(size=max(1, n // 20))
    v[mask] = rng.choice(pool, size=int(mask.sum()))
    return v


def test_c5_ranking_oracle_equivalence(criterion):
    with criterion("5 sort-based average ranks == O(n^2) counting oracle, 1000 vectors, exact"):
        rng = np.random.default_rng(20240501)
        planted = 0
        for _ in range(1000):
            n = int(rng.integers(2, 1001))
            v = _tied_vector(rng, n)
            r = rank_vector(v)
            planted += r.has_ties
            np.testing.assert_array_equal(r.ranks, counting_ranks(v))
        assert planted > 900


def test_c6_fast_path_agreement(criterion):
    with criterion("6 closed-form Spearman == Pearson on ranks within 1e-12, 1000 tie-free vectors"):
        rng = np.random.default_rng(6)
        worst = 0.0
        for _ in range(1000):
            n = int(rng.integers(2, 1001))
            ru = rank_vector(rng.normal(size=n))
            rv = rank_vector(rng.normal(size=n))
            assert not (ru.has_ties or rv.has_ties)
            fast = spearman_closed_form(ru.ranks, rv.ranks)
            general = spearman_from_ranks(ru.ranks, rv.ranks).value
            worst = max(worst, abs(fast - general))
        assert worst <= 1e-12


def _sparse_pair(rng):
    n = int(rng.integers(3, 200))
    u, v = rng.exponential(size=n), rng.exponential(size=n)
    u[rng.random(n) < 0.6] = 0.0
    v[rng.random(n) < 0.6] = 0.0
    return u, v


def test_c7_property_suite(criterion):
    with criterion("7 symmetry, range, permutation, CS scale, SRCC monotone, "
                   "rank shift, nonlinearity (seeded)"):
        rng = np.random.default_rng(7)
        names = ("cs", "pcc", "srcc")
        for _ in range(500):
            u, v = _sparse_pair(rng)
            res = {m: measure(m, u, v) for m in names}
            # symmetry, bit for bit
            assert all(res[m] == measure(m, v, u) for m in names)
            # range
            for m, r in res.items():
                if not r.degenerate:
                    assert -1.0 <= r.value <= 1.0
            if not res["cs"].degenerate:
                assert 0.0 <= res["cs"].value <= 1.0
            # joint permutation
            perm = rng.permutation(len(u))
            for m in names:
                p = measure(m, u[perm], v[perm])
                assert p.degenerate == res[m].degenerate
                if not p.degenerate:
                    assert abs(p.value - res[m].value) <= 1e-12
            # cosine scale
            a, b = rng.uniform(0.01, 100, size=2)
            if not res["cs"].degenerate:
                assert abs(cosine(a * u, b * v).value - res["cs"].value) <= 1e-12
            # strictly increasing transform leaves SRCC exactly unchanged
            g = np.sqrt(u) * 5 + 1
            assert spearman(g, v) == res["srcc"]
            # 0-based vs 1-based ranks
            ru, rv = rank_vector(u).ranks, rank_vector(v).ranks
            assert spearman_from_ranks(ru - 1, rv - 1) == spearman_from_ranks(ru, rv)
        for _ in range(500):
            n = int(rng.integers(3, 200))
            u = rng.uniform(0.1, 10.0, size=n)
            assert len(np.unique(u)) == n
            assert spearman(u, u ** 3).value == 1.0
            assert pearson(u, u ** 3).value < 1.0


def _run_synthetic(out):
    corpus_dir = data_path("synthetic14")
    assert main(["ingest", str(corpus_dir), "--out-dir", str(out)]) == 0
    assert main(["vectorize", str(out / "corpus.json"), "--out-dir", str(out)]) == 0
    assert main(["matrix", str(out / "vectors.json"), "--out-dir", str(out)]) == 0
    assert main(["compare", str(out / "vectors.json"), "-o", str(out / "compare.csv")]) == 0
    return {p.name: p.read_bytes() for p in sorted(out.iterdir())}


def test_c8_synthetic_corpus_workflow(criterion, tmp_path):
    with criterion("8 synthetic 14-doc corpus: 91 pairs, symmetric, unit diagonal, "
                   "scatter == matrix, byte-identical reruns, < 5 s"):
        t0 = time.perf_counter()
        first = _run_synthetic(tmp_path / "a")
        second = _run_synthetic(tmp_path / "b")
        elapsed = time.perf_counter() - t0
        assert first == second
        assert elapsed < 5.0

        doc = json.loads(first["matrix.json"])
        ids = doc["doc_ids"]
        assert len(ids) == 14
        for m, grid in doc["measures"].items():
            g = np.array(grid, dtype=float)
            assert not np.isnan(g).any()
            np.testing.assert_array_equal(g, g.T)
            np.testing.assert_array_equal(np.diag(g), 1.0)

        compare_rows = list(csv.DictReader(first["compare.csv"].decode().splitlines()))
        assert len(compare_rows) == 91
        scatter = list(csv.DictReader(first["measure_scatter.csv"].decode().splitlines()))
        assert len(scatter) == 91
        pos = {d: i for i, d in enumerate(ids)}
        for row in scatter:
            a, b = row["pair"].split("|")
            for m in ("cs", "srcc", "pcc"):
                assert float(row[m]) == doc["measures"][m][pos[a]][pos[b]]
