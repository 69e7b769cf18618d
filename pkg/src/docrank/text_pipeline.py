"""Raw text or pre-tokenized lines -> Corpus, plus the shared Vocabulary."""

from __future__ import annotations

import configparser
import itertools
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

CORPUS_FORMAT = "docrank.corpus"
CORPUS_VERSION = 1


class CorpusError(ValueError):
    """Raised for corpora that violate their construction contract."""


class DegenerateCorpus(CorpusError):
    """The corpus has no tokens at all."""


@dataclass(frozen=True)
class PipelineConfig:
    lowercase: bool = True
    min_token_len: int = 1
    stopwords_path: str | None = None
    pretokenized: bool = False
    stopwords: frozenset[str] = field(default=frozenset(), compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.min_token_len < 1:
            raise ValueError(f"min_token_len must be >= 1, got {self.min_token_len}")
        if self.stopwords_path and not self.stopwords:
            object.__setattr__(self, "stopwords", load_stopwords(self.stopwords_path))

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("stopwords")
        return d


def load_stopwords(path: str | Path) -> frozenset[str]:
    """One stopword per line; blank lines and ``#`` comments are skipped."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.lower())
    return frozenset(words)


_BOOL_WORDS = {"1": True, "true": True, "yes": True, "on": True,
               "0": False, "false": False, "no": False, "off": False}


def parse_bool(text: str) -> bool:
    try:
        return _BOOL_WORDS[text.strip().lower()]
    except KeyError:
        raise ValueError(f"not a boolean: {text!r}") from None


def read_config_file(path: str | Path) -> dict:
    """Read a flat ``key = value`` pipeline config file.

    Only the keys ``lowercase``, ``min_token_len``, ``stopwords_path`` and
    ``pretokenized`` are accepted; anything else is an error so typos do not
    silently fall back to defaults.
    """
    parser = configparser.ConfigParser(interpolation=None)
    parser.read_string("[pipeline]\n" + Path(path).read_text(encoding="utf-8"))
    raw = dict(parser["pipeline"])
    out: dict = {}
    for key, value in raw.items():
        if key in ("lowercase", "pretokenized"):
            out[key] = parse_bool(value)
        elif key == "min_token_len":
            out[key] = int(value)
        elif key == "stopwords_path":
            out[key] = value or None
        else:
            raise ValueError(f"unknown config key {key!r}")
    return out


def write_config_file(config: PipelineConfig, path: str | Path) -> None:
    lines = [f"{k} = {'' if v is None else str(v).lower() if isinstance(v, bool) else v}"
             for k, v in config.to_dict().items()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


@dataclass(frozen=True)
class Document:
    id: str
    tokens: tuple[str, ...]
    raw_text: str | None = None

    @property
    def degenerate(self) -> bool:
        return not self.tokens

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]

    def __post_init__(self) -> None:
        if not self.documents:
            raise CorpusError("corpus needs at least one document")
        seen = set()
        for doc in self.documents:
            if doc.id in seen:
                raise CorpusError(f"duplicate document id {doc.id!r}")
            seen.add(doc.id)

    @property
    def size(self) -> int:
        return len(self.documents)

    @property
    def ids(self) -> list[str]:
        return [d.id for d in self.documents]

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    def __getitem__(self, doc_id: str) -> Document:
        for doc in self.documents:
            if doc.id == doc_id:
                return doc
        raise KeyError(doc_id)


@dataclass(frozen=True)
class Vocabulary:
    terms: tuple[str, ...]

    def __post_init__(self) -> None:
        for a, b in zip(self.terms, self.terms[1:]):
            if a.encode("utf-8") >= b.encode("utf-8"):
                raise CorpusError(f"vocabulary not strictly ascending at {a!r}, {b!r}")
        object.__setattr__(self, "_index", {t: i for i, t in enumerate(self.terms)})

    @property
    def index(self) -> dict[str, int]:
        return self._index  # type: ignore[attr-defined]

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: object) -> bool:
        return term in self._index  # type: ignore[attr-defined]


def tokenize(raw_text: str, config: PipelineConfig | None = None) -> list[str]:
    """Split text into maximal runs of alphanumeric characters.

    Case folding, the minimum length filter and the stopword filter are
    applied in that order; token order is preserved.
    """
    config = config or PipelineConfig()
    tokens = []
    for is_word, run in itertools.groupby(raw_text, key=str.isalnum):
        if not is_word:
            continue
        tok = "".join(run)
        if config.lowercase:
            tok = tok.lower()
        if len(tok) < config.min_token_len or tok in config.stopwords:
            continue
        tokens.append(tok)
    return tokens


def build_corpus(inputs: Iterable[tuple[str, str]],
                 config: PipelineConfig | None = None) -> Corpus:
    """Build a corpus from ``(id, text)`` pairs, keeping input order.

    In pre-tokenized mode each text is split on whitespace and kept verbatim.
    Documents that end up empty are kept but flagged degenerate; a corpus
    where every document is empty is rejected.
    """
    config = config or PipelineConfig()
    docs = []
    for doc_id, text in inputs:
        if config.pretokenized:
            docs.append(Document(doc_id, tuple(text.split())))
        else:
            docs.append(Document(doc_id, tuple(tokenize(text, config)), raw_text=text))
    corpus = Corpus(tuple(docs))
    if all(d.degenerate for d in corpus):
        raise DegenerateCorpus("every document in the corpus is empty")
    return corpus


def build_vocabulary(corpus: Corpus) -> Vocabulary:
    terms = {t for doc in corpus for t in doc.tokens}
    if not terms:
        raise DegenerateCorpus("corpus has zero tokens")
    return Vocabulary(tuple(sorted(terms, key=lambda t: t.encode("utf-8"))))


def read_raw_directory(path: str | Path) -> list[tuple[str, str]]:
    """``*.txt`` files in byte-wise filename order; id is the filename stem."""
    files = sorted(Path(path).glob("*.txt"), key=lambda p: p.name.encode("utf-8"))
    if not files:
        raise FileNotFoundError(f"no .txt files in {path}")
    return [(p.stem, p.read_text(encoding="utf-8")) for p in files]


def read_pretokenized_file(path: str | Path) -> list[tuple[str, str]]:
    """Lines of ``id<TAB>tok tok ...``; blank lines are skipped."""
    out = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        if "\t" not in line:
            raise CorpusError(f"{path}:{lineno}: expected 'id<TAB>tokens'")
        doc_id, tokens = line.split("\t", 1)
        if not doc_id:
            raise CorpusError(f"{path}:{lineno}: empty document id")
        out.append((doc_id, tokens))
    return out


def load_inputs(path: str | Path, config: PipelineConfig) -> Corpus:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"input not found: {path}")
    if config.pretokenized:
        pairs = read_pretokenized_file(path)
    elif path.is_dir():
        pairs = read_raw_directory(path)
    else:
        pairs = [(path.stem, path.read_text(encoding="utf-8"))]
    return build_corpus(pairs, config)


def save_corpus(corpus: Corpus, path: str | Path,
                config: PipelineConfig | None = None) -> None:
    payload = {
        "format": CORPUS_FORMAT,
        "version": CORPUS_VERSION,
        "config": (config or PipelineConfig()).to_dict(),
        "documents": [
            {"id": d.id, "tokens": list(d.tokens), "raw_text": d.raw_text}
            for d in corpus
        ],
    }
    Path(path).write_text(json.dumps(payload, ensure_ascii=False, indent=1) + "\n",
                          encoding="utf-8")


def load_corpus(path: str | Path) -> Corpus:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("format") != CORPUS_FORMAT:
        raise CorpusError(f"{path}: not a corpus file")
    if payload.get("version") != CORPUS_VERSION:
        raise CorpusError(f"{path}: unsupported corpus version {payload.get('version')}")
    return Corpus(tuple(
        Document(d["id"], tuple(d["tokens"]), d.get("raw_text"))
        for d in payload["documents"]
    ))


def corpus_from_tokens(docs: Sequence[tuple[str, Sequence[str]]]) -> Corpus:
    """Convenience constructor for already tokenized documents."""
    return Corpus(tuple(Document(i, tuple(toks)) for i, toks in docs))
