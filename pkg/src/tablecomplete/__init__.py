"""Table completion engine: row and column suggestions for relational tables."""

from .columns import RelatedTable, RelatedTableSet, find_related_tables, rank_labels, suggest_columns
from .indexstore import (
    CollectionStats,
    EntityIndex,
    IndexBundle,
    IndexFormatError,
    TableIndex,
    build_indexes,
    load,
    persist,
)
from .ingest import CorpusStats, IngestError, load_corpus, load_kb
from .model import (
    Cell,
    CorpusTable,
    EmptySeedError,
    EntityRecord,
    ScoringParams,
    SeedTable,
    Suggestion,
    normalize_label,
    tokenize,
)
from .rows import RowCandidateSet, rank_rows, select_row_candidates, suggest_rows
from .scoring import (
    TermVector,
    bm25_score,
    column_labels_likelihood,
    dirichlet_lm_prob,
    jaccard,
    overlap_ratio,
)

__version__ = "0.1.0"

__all__ = [
    "Cell",
    "CollectionStats",
    "CorpusStats",
    "CorpusTable",
    "EmptySeedError",
    "EntityIndex",
    "EntityRecord",
    "IndexBundle",
    "IndexFormatError",
    "IngestError",
    "RelatedTable",
    "RelatedTableSet",
    "RowCandidateSet",
    "ScoringParams",
    "SeedTable",
    "Suggestion",
    "TableIndex",
    "TermVector",
    "bm25_score",
    "build_indexes",
    "column_labels_likelihood",
    "dirichlet_lm_prob",
    "find_related_tables",
    "jaccard",
    "load",
    "load_corpus",
    "load_kb",
    "normalize_label",
    "overlap_ratio",
    "persist",
    "rank_labels",
    "rank_rows",
    "select_row_candidates",
    "suggest_columns",
    "suggest_rows",
    "tokenize",
]
