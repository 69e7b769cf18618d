"""Staged command-line pipeline: ingest -> vectorize -> sim / matrix / compare / rank-scatter.

Settings resolve as: command-line flag, then ``DOCRANK_<NAME>`` environment
variable, then the ``--config`` file (pipeline keys only), then the default.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .ranking import TIE_POLICIES
from .report import (
    comparison_report,
    matrix_csv,
    matrix_json,
    measure_scatter,
    measure_scatter_csv,
    pairwise_matrix,
    rank_scatter,
    rank_scatter_csv,
    report_csv,
)
from .similarity import MEASURES, measure
from .text_pipeline import (
    CorpusError,
    DegenerateCorpus,
    PipelineConfig,
    load_corpus,
    load_inputs,
    parse_bool,
    read_config_file,
    save_corpus,
)
from .vector_space import LOG_FUNCS, TfIdfModel, load_vectors, save_vectors, vectorize_corpus

ENV_PREFIX = "DOCRANK_"

EXIT_USAGE = 2
EXIT_MISSING = 3
EXIT_MALFORMED = 4
EXIT_UNKNOWN_ID = 5
EXIT_DEGENERATE = 6


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


DEFAULTS = {
    "lowercase": True,
    "min_token_len": 1,
    "stopwords_path": None,
    "pretokenized": False,
    "log_base": "e",
    "tie_policy": "average",
    "precision": 4,
    "out_dir": ".",
}

_CONVERT = {
    "lowercase": parse_bool,
    "pretokenized": parse_bool,
    "min_token_len": int,
    "precision": int,
}


@dataclass(frozen=True)
class RunConfig:
    input: str | None
    pretokenized: bool
    log_base: str
    tie_policy: str
    lowercase: bool
    min_token_len: int
    stopwords_path: str | None
    out_dir: str
    precision: int

    def __post_init__(self) -> None:
        if self.log_base not in LOG_FUNCS:
            raise CliError(f"invalid log base {self.log_base!r} (choose e, 10 or 2)", EXIT_MALFORMED)
        if self.tie_policy not in TIE_POLICIES:
            raise CliError(f"invalid tie policy {self.tie_policy!r}", EXIT_MALFORMED)
        if not 1 <= self.precision <= 12:
            raise CliError(f"precision must be in [1, 12], got {self.precision}", EXIT_MALFORMED)
        if self.min_token_len < 1:
            raise CliError(f"min token length must be >= 1, got {self.min_token_len}",
                           EXIT_MALFORMED)

    @property
    def mode(self) -> str:
        return "pretokenized" if self.pretokenized else "raw"

    def pipeline(self) -> PipelineConfig:
        return PipelineConfig(self.lowercase, self.min_token_len,
                              self.stopwords_path, self.pretokenized)


def resolve_config(args: argparse.Namespace, environ=None) -> RunConfig:
    environ = os.environ if environ is None else environ
    file_values: dict = {}
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.is_file():
            raise CliError(f"config file not found: {path}", EXIT_MISSING)
        try:
            file_values = read_config_file(path)
        except Exception as exc:
            raise CliError(f"malformed config file {path}: {exc}", EXIT_MALFORMED) from None

    values = {}
    for key, default in DEFAULTS.items():
        flag = getattr(args, key, None)
        env = environ.get(ENV_PREFIX + key.upper())
        if flag is not None:
            values[key] = flag
        elif env is not None:
            try:
                values[key] = _CONVERT.get(key, str)(env)
            except ValueError:
                raise CliError(f"invalid {ENV_PREFIX}{key.upper()}={env!r}",
                               EXIT_MALFORMED) from None
        elif key in file_values:
            values[key] = file_values[key]
        else:
            values[key] = default
    return RunConfig(input=getattr(args, "input", None), **values)


# ---- helpers -------------------------------------------------------------

def _load_vectors(path: str):
    p = Path(path)
    if not p.is_file():
        raise CliError(f"vectors file not found: {p}", EXIT_MISSING)
    try:
        return load_vectors(p)
    except (ValueError, KeyError, TypeError) as exc:
        raise CliError(f"malformed vectors file {p}: {exc}", EXIT_MALFORMED) from None


def _lookup(vectors, doc_id: str):
    for v in vectors:
        if v.doc_id == doc_id:
            return v
    raise CliError(f"unknown document id {doc_id!r}", EXIT_UNKNOWN_ID)


def _require_signal(vectors) -> None:
    if all(not v.weights.any() for v in vectors):
        raise CliError("degenerate corpus: every TF-IDF vector is zero "
                       "(need at least 2 documents that differ in vocabulary)",
                       EXIT_DEGENERATE)


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _emit(text: str, out: str | None) -> None:
    if out:
        _write(Path(out), text)
    else:
        sys.stdout.write(text)


def _read_pairs(args) -> list[tuple[str, str]] | None:
    pairs = []
    for item in args.pair or []:
        a, sep, b = item.partition(",")
        if not sep or not a or not b:
            raise CliError(f"malformed pair {item!r} (expected A,B)", EXIT_MALFORMED)
        pairs.append((a, b))
    if args.pairs_file:
        p = Path(args.pairs_file)
        if not p.is_file():
            raise CliError(f"pairs file not found: {p}", EXIT_MISSING)
        for lineno, line in enumerate(p.read_text(encoding="utf-8").splitlines(), 1):
            fields = line.replace(",", " ").split()
            if not fields or fields[0].startswith("#"):
                continue
            if len(fields) != 2:
                raise CliError(f"{p}:{lineno}: expected two document ids", EXIT_MALFORMED)
            pairs.append((fields[0], fields[1]))
    return pairs or None


# ---- commands ------------------------------------------------------------

def cmd_ingest(args, cfg: RunConfig) -> int:
    try:
        corpus = load_inputs(cfg.input, cfg.pipeline())
    except FileNotFoundError as exc:
        raise CliError(str(exc), EXIT_MISSING) from None
    except DegenerateCorpus as exc:
        raise CliError(str(exc), EXIT_DEGENERATE) from None
    except CorpusError as exc:
        raise CliError(str(exc), EXIT_MALFORMED) from None
    out = Path(args.output or Path(cfg.out_dir) / "corpus.json")
    out.parent.mkdir(parents=True, exist_ok=True)
    save_corpus(corpus, out, cfg.pipeline())
    print(f"ingested {corpus.size} documents -> {out}")
    return 0


def cmd_vectorize(args, cfg: RunConfig) -> int:
    p = Path(args.corpus)
    if not p.is_file():
        raise CliError(f"corpus file not found: {p}", EXIT_MISSING)
    try:
        corpus = load_corpus(p)
    except (ValueError, KeyError, TypeError) as exc:
        raise CliError(f"malformed corpus file {p}: {exc}", EXIT_MALFORMED) from None
    try:
        model = TfIdfModel.fit(corpus, cfg.log_base)
    except DegenerateCorpus as exc:
        raise CliError(str(exc), EXIT_DEGENERATE) from None
    vectors = vectorize_corpus(model, corpus)
    _require_signal(vectors)
    out = Path(args.output or Path(cfg.out_dir) / "vectors.json")
    out.parent.mkdir(parents=True, exist_ok=True)
    save_vectors(model, vectors, out)
    print(f"vectorized {len(vectors)} documents over {len(model.vocabulary)} terms -> {out}")
    return 0


def cmd_sim(args, cfg: RunConfig) -> int:
    _, vectors = _load_vectors(args.vectors)
    u, v = _lookup(vectors, args.doc_a), _lookup(vectors, args.doc_b)
    result = measure(args.measure, u, v, cfg.tie_policy)
    print(result.format(None if args.full_precision else cfg.precision))
    return 0


def cmd_matrix(args, cfg: RunConfig) -> int:
    _, vectors = _load_vectors(args.vectors)
    if len(vectors) < 2:
        raise CliError("matrix needs at least 2 documents", EXIT_DEGENERATE)
    _require_signal(vectors)
    matrix = pairwise_matrix(vectors, tie_policy=cfg.tie_policy, workers=args.workers)
    precision = None if args.full_precision else cfg.precision
    out_dir = Path(cfg.out_dir)
    for m in MEASURES:
        _write(out_dir / f"matrix_{m}.csv", matrix_csv(matrix, m, precision))
    _write(out_dir / "matrix.json", matrix_json(matrix))
    _write(out_dir / "measure_scatter.csv", measure_scatter_csv(measure_scatter(matrix)))
    print(f"wrote {len(MEASURES)} matrices for {len(vectors)} documents -> {out_dir}")
    return 0


def cmd_compare(args, cfg: RunConfig) -> int:
    _, vectors = _load_vectors(args.vectors)
    if len(vectors) < 2:
        raise CliError("compare needs at least 2 documents", EXIT_DEGENERATE)
    _require_signal(vectors)
    pairs = _read_pairs(args)
    ids = {v.doc_id for v in vectors}
    for a, b in pairs or []:
        for d in (a, b):
            if d not in ids:
                raise CliError(f"unknown document id {d!r}", EXIT_UNKNOWN_ID)
    matrix = pairwise_matrix(vectors, tie_policy=cfg.tie_policy, workers=args.workers)
    records = comparison_report(matrix, pairs)
    _emit(report_csv(records, None if args.full_precision else cfg.precision), args.output)
    return 0


def cmd_rank_scatter(args, cfg: RunConfig) -> int:
    model, vectors = _load_vectors(args.vectors)
    u, v = _lookup(vectors, args.doc_a), _lookup(vectors, args.doc_b)
    points = rank_scatter(u, v, model.vocabulary.terms, cfg.tie_policy)
    _emit(rank_scatter_csv(points), args.output)
    return 0


# ---- parser --------------------------------------------------------------

def _bool_flag(parser, name: str, help_text: str) -> None:
    dest = name.replace("-", "_")
    parser.add_argument(f"--{name}", dest=dest, action="store_true", default=None, help=help_text)
    parser.add_argument(f"--no-{name}", dest=dest, action="store_false")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="docrank",
        description="TF-IDF document similarity with cosine, Pearson and Spearman measures.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value pipeline config file")
    common.add_argument("--out-dir", dest="out_dir", help="output directory (default .)")
    common.add_argument("--log-base", dest="log_base", choices=sorted(LOG_FUNCS))
    common.add_argument("--tie-policy", dest="tie_policy", choices=TIE_POLICIES)
    common.add_argument("--precision", type=int, help="decimal places in reports (1-12)")
    common.add_argument("--full-precision", action="store_true",
                        help="print shortest round-trip floats instead of fixed decimals")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[common], help="build a corpus file from text")
    p.add_argument("input", help="directory of .txt files, a .txt file, or a pre-tokenized TSV")
    _bool_flag(p, "pretokenized", "input is 'id<TAB>tok tok ...' lines, kept verbatim")
    _bool_flag(p, "lowercase", "fold tokens to lowercase (default on)")
    p.add_argument("--min-token-len", dest="min_token_len", type=int)
    p.add_argument("--stopwords", dest="stopwords_path", help="file with one stopword per line")
    p.add_argument("-o", "--output", help="corpus file (default OUT_DIR/corpus.json)")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("vectorize", parents=[common], help="fit TF-IDF and write vectors")
    p.add_argument("corpus")
    p.add_argument("-o", "--output", help="vectors file (default OUT_DIR/vectors.json)")
    p.set_defaults(func=cmd_vectorize)

    p = sub.add_parser("sim", parents=[common], help="one measure for one document pair")
    p.add_argument("vectors")
    p.add_argument("doc_a")
    p.add_argument("doc_b")
    p.add_argument("--measure", choices=MEASURES, default="srcc")
    p.set_defaults(func=cmd_sim)

    p = sub.add_parser("matrix", parents=[common], help="pairwise matrices as CSV and JSON")
    p.add_argument("vectors")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("compare", parents=[common], help="pair comparison report (CSV)")
    p.add_argument("vectors")
    p.add_argument("--pair", action="append", metavar="A,B", help="restrict to this pair (repeatable)")
    p.add_argument("--pairs-file", help="file with one 'A B' pair per line")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-o", "--output", help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("rank-scatter", parents=[common], help="per-term rank pairs (CSV)")
    p.add_argument("vectors")
    p.add_argument("doc_a")
    p.add_argument("doc_b")
    p.add_argument("-o", "--output", help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_rank_scatter)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        return args.func(args, cfg)
    except CliError as exc:
        print(f"docrank: error: {exc}", file=sys.stderr)
        return exc.code
    except OSError as exc:
        print(f"docrank: error: {exc}", file=sys.stderr)
        return EXIT_MISSING


if __name__ == "__main__":
    sys.exit(main())
