"""Similar-table retrieval shared by row and column population.

Three routes feed the result: BM25 over captions with the seed caption as
the query, tables sharing core entities with the seed, and tables sharing
normalized heading labels. Each route is ranked (most similar first, ties by
table id) and truncated to ``params.top_k_tables`` before the union is taken.
"""

from __future__ import annotations

from dataclasses import dataclass

from .indexstore import FIELD_CAPTION, IndexBundle
from .model import ScoringParams, SeedTable, tokenize, unique_normalized_labels
from .scoring import bm25_scores_for_query


@dataclass(frozen=True)
class SimilarTables:
    """Route results plus their deduplicated union, all deterministically ordered."""

    caption_route: tuple[str, ...]
    entity_route: tuple[str, ...]
    label_route: tuple[str, ...]
    caption_scores: dict[str, float]

    def union(self) -> list[str]:
        seen: set[str] = set()
        merged: list[str] = []
        for route in (self.caption_route, self.entity_route, self.label_route):
            for table_id in route:
                if table_id not in seen:
                    seen.add(table_id)
                    merged.append(table_id)
        return merged


def _top_by_count(counts: dict[str, int], k: int) -> tuple[str, ...]:
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return tuple(table_id for table_id, _ in ranked[:k])


def find_similar_tables(seed: SeedTable, bundle: IndexBundle, params: ScoringParams) -> SimilarTables:
    k = params.top_k_tables

    caption_scores = bm25_scores_for_query(
        tokenize(seed.caption), FIELD_CAPTION, bundle.table_index, params
    )
    positive = [(tid, s) for tid, s in caption_scores.items() if s > 0.0]
    positive.sort(key=lambda item: (-item[1], item[0]))
    caption_route = tuple(tid for tid, _ in positive[:k])

    entity_counts: dict[str, int] = {}
    for entity_id in seed.entities:
        for table_id in bundle.table_index.entity_postings.get(entity_id, ()):
            entity_counts[table_id] = entity_counts.get(table_id, 0) + 1
    entity_route = _top_by_count(entity_counts, k)

    label_counts: dict[str, int] = {}
    for norm in unique_normalized_labels(seed.labels):
        for table_id in bundle.table_index.label_postings.get(norm, ()):
            label_counts[table_id] = label_counts.get(table_id, 0) + 1
    label_route = _top_by_count(label_counts, k)

    return SimilarTables(
        caption_route=caption_route,
        entity_route=entity_route,
        label_route=label_route,
        caption_scores=caption_scores,
    )
