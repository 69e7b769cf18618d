"""TF, IDF and TF-IDF document vectors over a shared vocabulary."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

from .text_pipeline import Corpus, CorpusError, Document, Vocabulary, build_vocabulary

VECTORS_FORMAT = "docrank.vectors"
VECTORS_VERSION = 1

LOG_FUNCS = {"e": math.log, "10": math.log10, "2": math.log2}


class VocabularyMismatch(ValueError):
    """A document contains a token the model has never seen."""


def _check_base(log_base: str) -> str:
    log_base = str(log_base)
    if log_base not in LOG_FUNCS:
        raise ValueError(f"log_base must be one of {sorted(LOG_FUNCS)}, got {log_base!r}")
    return log_base


@dataclass(frozen=True)
class TfIdfModel:
    vocabulary: Vocabulary
    doc_freq: tuple[int, ...]
    corpus_size: int
    log_base: str = "e"

    def __post_init__(self) -> None:
        object.__setattr__(self, "log_base", _check_base(self.log_base))
        if len(self.doc_freq) != len(self.vocabulary):
            raise ValueError("doc_freq length does not match vocabulary")
        for term, df in zip(self.vocabulary.terms, self.doc_freq):
            if not 1 <= df <= self.corpus_size:
                raise ValueError(f"doc_freq[{term!r}] = {df} outside [1, {self.corpus_size}]")
        log = LOG_FUNCS[self.log_base]
        idf = np.array([log(self.corpus_size / df) for df in self.doc_freq], dtype=float)
        idf.flags.writeable = False
        object.__setattr__(self, "idf", idf)

    @classmethod
    def fit(cls, corpus: Corpus, log_base: str = "e") -> "TfIdfModel":
        vocab = build_vocabulary(corpus)
        df = Counter(t for doc in corpus for t in set(doc.tokens))
        return cls(vocab, tuple(df[t] for t in vocab.terms), corpus.size, log_base)


@dataclass(frozen=True, eq=False)
class DocumentVector:
    doc_id: str
    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.array(self.weights, dtype=float)
        if w.ndim != 1:
            raise ValueError("weights must be one-dimensional")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError(f"weights of {self.doc_id!r} must be finite and non-negative")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return len(self.weights)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DocumentVector):
            return NotImplemented
        return self.doc_id == other.doc_id and np.array_equal(self.weights, other.weights)

    def nonzero(self) -> Iterator[tuple[int, float]]:
        """Sparse view: ``(index, weight)`` for each nonzero coordinate."""
        for i in np.flatnonzero(self.weights):
            yield int(i), float(self.weights[i])


def term_frequency(document: Document, term: str) -> float:
    if not document.tokens:
        raise CorpusError(f"document {document.id!r} is empty")
    return document.tokens.count(term) / len(document.tokens)


def inverse_document_frequency(model: TfIdfModel, term: str) -> float:
    try:
        return float(model.idf[model.vocabulary.index[term]])
    except KeyError:
        raise VocabularyMismatch(f"term {term!r} not in vocabulary") from None


def vectorize(model: TfIdfModel, document: Document) -> DocumentVector:
    weights = np.zeros(len(model.vocabulary))
    if not document.tokens:
        return DocumentVector(document.id, weights)
    index = model.vocabulary.index
    n = len(document.tokens)
    for term, count in Counter(document.tokens).items():
        try:
            i = index[term]
        except KeyError:
            raise VocabularyMismatch(
                f"document {document.id!r} has token {term!r} outside the model vocabulary"
            ) from None
        weights[i] = (count / n) * model.idf[i]
    return DocumentVector(document.id, weights)


def vectorize_corpus(model: TfIdfModel, corpus: Corpus) -> list[DocumentVector]:
    return [vectorize(model, doc) for doc in corpus]


def save_vectors(model: TfIdfModel, vectors: list[DocumentVector], path: str | Path) -> None:
    """Write model and vectors as JSON; floats use shortest round-trip repr."""
    payload = {
        "format": VECTORS_FORMAT,
        "version": VECTORS_VERSION,
        "log_base": model.log_base,
        "corpus_size": model.corpus_size,
        "vocabulary": list(model.vocabulary.terms),
        "doc_freq": list(model.doc_freq),
        "documents": [
            {"id": v.doc_id, "weights": [float(x) for x in v.weights]} for v in vectors
        ],
    }
    Path(path).write_text(json.dumps(payload, ensure_ascii=False) + "\n", encoding="utf-8")


def load_vectors(path: str | Path) -> tuple[TfIdfModel, list[DocumentVector]]:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("format") != VECTORS_FORMAT:
        raise ValueError(f"{path}: not a vectors file")
    if payload.get("version") != VECTORS_VERSION:
        raise ValueError(f"{path}: unsupported vectors version {payload.get('version')}")
    model = TfIdfModel(
        Vocabulary(tuple(payload["vocabulary"])),
        tuple(payload["doc_freq"]),
        payload["corpus_size"],
        payload["log_base"],
    )
    vectors = [DocumentVector(d["id"], np.array(d["weights"], dtype=float))
               for d in payload["documents"]]
    for v in vectors:
        if len(v) != len(model.vocabulary):
            raise ValueError(f"{path}: vector {v.doc_id!r} has wrong length")
    return model, vectors
