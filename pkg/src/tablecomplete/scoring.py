"""Reusable statistical estimators: Jaccard, Dirichlet-smoothed LMs, BM25, overlap ratios.

All functions are pure over immutable index state, so concurrent use is
unrestricted. Scores are unnormalized throughout; ranking only ever compares
them relative to each other.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import TYPE_CHECKING, AbstractSet, Iterable, Mapping, Sequence

from .model import ScoringParams, tokenize

if TYPE_CHECKING:
    from .indexstore import CollectionStats, EntityIndex, TableIndex


@dataclass(frozen=True)
class TermVector:
    """Term frequencies with their precomputed sum; zero-frequency entries are never stored."""

    counts: Mapping[str, int]
    total: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "counts", dict(self.counts))
        if any(v <= 0 for v in self.counts.values()):
            raise ValueError("term vector must not store non-positive frequencies")
        if self.total != sum(self.counts.values()):
            raise ValueError("term vector total does not match the sum of its frequencies")

    @classmethod
    def from_terms(cls, terms: Iterable[str]) -> "TermVector":
        counts = Counter(terms)
        return cls(counts=dict(counts), total=sum(counts.values()))

    def get(self, term: str) -> int:
        return self.counts.get(term, 0)


EMPTY_TERM_VECTOR = TermVector(counts={}, total=0)


def jaccard(a: AbstractSet, b: AbstractSet) -> float:
    """|a ∩ b| / |a ∪ b|; two empty sets give 0 (no shared evidence)."""
    if not a and not b:
        return 0.0
    return len(a & b) / len(a | b)


def overlap_ratio(source: AbstractSet, reference: AbstractSet) -> float:
    """|source ∩ reference| / |reference|; an empty reference gives 0 (callers skip the factor)."""
    if not reference:
        return 0.0
    return len(source & reference) / len(reference)


def dirichlet_lm_prob(
    term: str,
    tv: TermVector,
    collection_lm: Mapping[str, float],
    mu: float,
) -> float:
    """Dirichlet-smoothed per-term probability (tf + mu * P(t|collection)) / (total + mu).

    Terms outside the collection vocabulary get no smoothing mass, so the
    result is 0 exactly when the term is unseen both locally and globally.
    """
    if mu <= 0:
        raise ValueError("mu must be positive")
    return (tv.get(term) + mu * collection_lm.get(term, 0.0)) / (tv.total + mu)


def column_labels_likelihood(
    labels: Sequence[str],
    entity_id: str,
    entity_index: "EntityIndex",
    collection: "CollectionStats",
    params: ScoringParams,
) -> float:
    """Sum over labels of the product of per-token Dirichlet factors for the entity's label LM.

    An entity unseen in the corpus falls back to the collection model alone.
    An empty label list yields 0 (empty sum).
    """
    tv = entity_index.label_terms.get(entity_id, EMPTY_TERM_VECTOR)
    total = 0.0
    for label in labels:
        product = 1.0
        for term in tokenize(label):
            product *= dirichlet_lm_prob(term, tv, collection.label_lm, params.mu_labels)
        total += product
    return total


def bm25_idf(doc_count: int, doc_freq: int) -> float:
    """Non-negative BM25 idf: ln((N - df + 0.5) / (df + 0.5) + 1)."""
    return math.log((doc_count - doc_freq + 0.5) / (doc_freq + 0.5) + 1.0)


def bm25_score(
    query_terms: Sequence[str],
    field: str,
    table_id: str,
    table_index: "TableIndex",
    params: ScoringParams,
) -> float:
    """Okapi BM25 of one table's field against the query terms; unknown tables score 0."""
    lengths = table_index.field_lengths[field]
    if table_id not in lengths:
        return 0.0
    postings = table_index.postings[field]
    avgdl = table_index.avg_field_length[field]
    dl = lengths[table_id]
    score = 0.0
    for term in query_terms:
        per_table = postings.get(term)
        if not per_table:
            continue
        tf = per_table.get(table_id, 0)
        if tf == 0:
            continue
        idf = bm25_idf(table_index.doc_count, len(per_table))
        norm = params.bm25_k1 * (1.0 - params.bm25_b + params.bm25_b * dl / avgdl)
        score += idf * tf * (params.bm25_k1 + 1.0) / (tf + norm)
    return score


def bm25_scores_for_query(
    query_terms: Sequence[str],
    field: str,
    table_index: "TableIndex",
    params: ScoringParams,
) -> dict[str, float]:
    """BM25 scores of every table matching at least one query term, in one postings pass.

    Same arithmetic as :func:`bm25_score` applied per matching table; tables
    absent from the result score 0.
    """
    lengths = table_index.field_lengths[field]
    postings = table_index.postings[field]
    avgdl = table_index.avg_field_length[field]
    k1 = params.bm25_k1
    b = params.bm25_b
    scores: dict[str, float] = {}
    # Terms are visited with their multiplicity and summed in query order so the
    # per-table accumulation is bit-identical to bm25_score.
    for term in query_terms:
        per_table = postings.get(term)
        if not per_table:
            continue
        idf = bm25_idf(table_index.doc_count, len(per_table))
        for table_id, tf in per_table.items():
            norm = k1 * (1.0 - b + b * lengths[table_id] / avgdl)
            contribution = idf * tf * (k1 + 1.0) / (tf + norm)
            scores[table_id] = scores.get(table_id, 0.0) + contribution
    return scores
