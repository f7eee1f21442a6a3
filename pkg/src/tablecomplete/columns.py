"""Column population: rank heading labels harvested from tables related to the seed.

A related table's relevance is the product of its entity coverage, caption
BM25 score, and label overlap with the seed; a candidate label's score is
the sum of the relevances of the related tables carrying it. Factors whose
seed evidence is absent (no entities, no caption, no labels) are neutral 1,
so suggestions still work from a partial seed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .indexstore import IndexBundle
from .model import (
    EmptySeedError,
    ScoringParams,
    SeedTable,
    Suggestion,
    normalize_label,
    tokenize,
)
from .retrieval import find_similar_tables
from .scoring import overlap_ratio

COMPONENT_RELEVANCE_SUM = "relevance-sum"


@dataclass(frozen=True, slots=True)
class RelatedTable:
    table_id: str
    entity_coverage: float
    caption_score: float
    label_overlap: float

    @property
    def relevance(self) -> float:
        return self.entity_coverage * self.caption_score * self.label_overlap


@dataclass(frozen=True)
class RelatedTableSet:
    """Tables related to the seed, each annotated with its relevance components."""

    tables: tuple[RelatedTable, ...]


def find_related_tables(
    seed: SeedTable, bundle: IndexBundle, params: ScoringParams
) -> RelatedTableSet:
    """Union of the three retrieval routes, annotated and sorted by table id."""
    if not (seed.caption or seed.entities or seed.labels):
        raise EmptySeedError("column population requires a non-empty seed")
    similar = find_similar_tables(seed, bundle, params)
    seed_entities = set(seed.entities)
    seed_norm_labels = {normalize_label(l) for l in seed.labels} - {""}
    caption_terms = tokenize(seed.caption)

    annotated: list[RelatedTable] = []
    for table_id in sorted(similar.union()):
        if seed_entities:
            entity_coverage = overlap_ratio(bundle.core_entity_sets[table_id], seed_entities)
        else:
            entity_coverage = 1.0
        if caption_terms:
            caption_score = similar.caption_scores.get(table_id, 0.0)
        else:
            caption_score = 1.0
        if seed_norm_labels:
            table_norm_labels = {norm for norm, _ in bundle.norm_label_pairs[table_id]}
            label_overlap = overlap_ratio(table_norm_labels, seed_norm_labels)
        else:
            label_overlap = 1.0
        annotated.append(
            RelatedTable(
                table_id=table_id,
                entity_coverage=entity_coverage,
                caption_score=caption_score,
                label_overlap=label_overlap,
            )
        )
    return RelatedTableSet(tables=tuple(annotated))


def rank_labels(
    seed: SeedTable,
    related: RelatedTableSet,
    bundle: IndexBundle,
    params: ScoringParams,
    limit: int,
) -> list[Suggestion]:
    """Sum each candidate label's supporting-table relevances and return the top ``limit``.

    Ties break by normalized label; the displayed form is the most frequent
    raw form among the related tables, earliest table id first on a tie.
    """
    if limit <= 0:
        return []
    seed_norm_labels = {normalize_label(l) for l in seed.labels} - {""}

    scores: dict[str, float] = {}
    display_votes: dict[str, dict[str, int]] = {}
    for table in related.tables:  # ascending table id: first-seen raw form wins vote ties
        relevance = table.relevance
        for norm, raw in bundle.norm_label_pairs[table.table_id]:
            if norm in seed_norm_labels:
                continue
            scores[norm] = scores.get(norm, 0.0) + relevance
            votes = display_votes.setdefault(norm, {})
            votes[raw] = votes.get(raw, 0) + 1

    ranked = sorted(scores.items(), key=lambda item: (-item[1], item[0]))[:limit]
    suggestions: list[Suggestion] = []
    for norm, score in ranked:
        best_raw, best_count = norm, -1
        for raw, count in display_votes[norm].items():
            if count > best_count:
                best_raw, best_count = raw, count
        suggestions.append(
            Suggestion(target=best_raw, score=score, components={COMPONENT_RELEVANCE_SUM: score})
        )
    return suggestions


def suggest_columns(
    seed: SeedTable, bundle: IndexBundle, params: ScoringParams, limit: int
) -> list[Suggestion]:
    """Related-table retrieval followed by label ranking, as one engine call."""
    return rank_labels(seed, find_related_tables(seed, bundle, params), bundle, params, limit)
