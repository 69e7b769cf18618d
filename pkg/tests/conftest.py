import math

import numpy as np
import pytest

from docrank import PipelineConfig, TfIdfModel, data_path, vectorize
from docrank.text_pipeline import load_inputs

ILLUSTRATION = [
    ("d1", "John have ask Mary marry before leave"),
    ("d2", "Before leave Mary ask John his wife"),
]


# ---- independent oracles ---------------------------------------------------

def scan_tokens(text, lowercase=True, min_len=1, stopwords=()):
    """Character-by-character reference tokenizer."""
    out, cur = [], []
    for ch in text + " ":
        if ch.isalnum():
            cur.append(ch)
            continue
        if cur:
            tok = "".join(cur)
            tok = tok.lower() if lowercase else tok
            if len(tok) >= min_len and tok not in stopwords:
                out.append(tok)
            cur = []
    return out


def counting_ranks(values):
    """O(n^2) average ranks: 1 + #{smaller} + (#{equal others}) / 2."""
    v = np.asarray(values, dtype=float)
    less = (v[None, :] < v[:, None]).sum(axis=1)
    equal = (v[None, :] == v[:, None]).sum(axis=1) - 1
    return 1.0 + less + equal / 2.0


def pearson_oracle(u, v):
    """Sample correlation written out as 1/(n-1) * sum of z-score products."""
    n = len(u)
    mu, mv = sum(u) / n, sum(v) / n
    su = math.sqrt(sum((x - mu) ** 2 for x in u) / (n - 1))
    sv = math.sqrt(sum((y - mv) ** 2 for y in v) / (n - 1))
    return sum((x - mu) / su * (y - mv) / sv for x, y in zip(u, v)) / (n - 1)


# ---- fixtures ---------------------------------------------------------------

@pytest.fixture(scope="session")
def illustration_corpus():
    return load_inputs(data_path("illustration.tsv"), PipelineConfig(pretokenized=True))


@pytest.fixture(scope="session")
def illustration_model(illustration_corpus):
    return TfIdfModel.fit(illustration_corpus)


@pytest.fixture(scope="session")
def illustration_vectors(illustration_corpus, illustration_model):
    return [vectorize(illustration_model, d) for d in illustration_corpus]


@pytest.fixture(scope="session")
def synthetic_dir():
    return data_path("synthetic14")
