"""Document similarity over TF-IDF vectors: cosine, Pearson and tie-corrected Spearman."""

from importlib import resources
from pathlib import Path

__version__ = "0.1.0"

from .ranking import RankVector, rank_sum_check, rank_vector  # noqa: E402
from .report import (  # noqa: E402
    PairRecord,
    SimilarityMatrix,
    comparison_report,
    measure_scatter,
    pairwise_matrix,
    rank_scatter,
)
from .similarity import (  # noqa: E402
    MeasureResult,
    all_measures,
    cosine,
    pearson,
    spearman,
    spearman_closed_form,
    spearman_from_ranks,
)
from .text_pipeline import (  # noqa: E402
    Corpus,
    Document,
    PipelineConfig,
    Vocabulary,
    build_corpus,
    build_vocabulary,
    tokenize,
)
from .vector_space import (  # noqa: E402
    DocumentVector,
    TfIdfModel,
    inverse_document_frequency,
    term_frequency,
    vectorize,
)


def data_path(name: str) -> Path:
    """Path to a bundled data file (``illustration.tsv`` or ``synthetic14``)."""
    return Path(str(resources.files(__name__).joinpath("data", name)))
