"""Row population: rank knowledge-base entities to extend the seed table's core column.

Candidates come from two sources: KB entities sharing a category with a seed
entity, and core-column entities of tables similar to the seed. Each
candidate is then scored as the product of entity similarity, column-labels
likelihood, and caption likelihood.
"""

from __future__ import annotations

from dataclasses import dataclass

from .indexstore import IndexBundle
from .model import EmptySeedError, ScoringParams, SeedTable, Suggestion, tokenize
from .retrieval import find_similar_tables
from .scoring import (
    EMPTY_TERM_VECTOR,
    column_labels_likelihood,
    dirichlet_lm_prob,
    jaccard,
)

COMPONENT_ENTITY_SIMILARITY = "entity-similarity"
COMPONENT_LABEL_LIKELIHOOD = "label-likelihood"
COMPONENT_CAPTION_LIKELIHOOD = "caption-likelihood"


@dataclass(frozen=True)
class RowCandidateSet:
    """Candidate entities for the core column; seed entities are never included."""

    candidates: frozenset[str]
    from_kb: int
    from_tc: int


def select_row_candidates(
    seed: SeedTable, bundle: IndexBundle, params: ScoringParams
) -> RowCandidateSet:
    """Union of category-sharing KB entities and core entities of similar tables."""
    if not seed.entities:
        raise EmptySeedError("row population requires at least one seed entity")
    seed_set = set(seed.entities)

    kb_candidates: set[str] = set()
    for entity_id in seed.entities:
        for category in bundle.entity_categories(entity_id):
            kb_candidates.update(bundle.lookup_entities_by_category(category))
    kb_candidates -= seed_set

    tc_candidates: set[str] = set()
    similar = find_similar_tables(seed, bundle, params)
    for table_id in similar.union():
        tc_candidates.update(bundle.core_entity_sets[table_id])
    tc_candidates -= seed_set

    return RowCandidateSet(
        candidates=frozenset(kb_candidates | tc_candidates),
        from_kb=len(kb_candidates),
        from_tc=len(tc_candidates),
    )


def _seed_table_counts(
    seed: SeedTable, bundle: IndexBundle, params: ScoringParams
) -> tuple[dict[str, int], int]:
    """Per-entity counts of qualifying tables and the qualifying-table total.

    By default a table qualifies when its core column holds every seed
    entity; with ``params.tc_any_seed`` one seed entity suffices.
    """
    postings = bundle.table_index.entity_postings
    if params.tc_any_seed:
        qualifying: set[str] = set()
        for entity_id in seed.entities:
            qualifying.update(postings.get(entity_id, ()))
    else:
        qualifying = set(postings.get(seed.entities[0], ()))
        for entity_id in seed.entities[1:]:
            if not qualifying:
                break
            qualifying &= set(postings.get(entity_id, ()))
    counts: dict[str, int] = {}
    for table_id in qualifying:
        for entity_id in bundle.core_entity_sets[table_id]:
            counts[entity_id] = counts.get(entity_id, 0) + 1
    return counts, len(qualifying)


def rank_rows(
    seed: SeedTable,
    candidates: RowCandidateSet,
    bundle: IndexBundle,
    params: ScoringParams,
    limit: int,
) -> list[Suggestion]:
    """Score every candidate and return the top ``limit``, ties broken by entity id."""
    if limit <= 0:
        return []
    seed_categories = [bundle.entity_categories(e) for e in seed.entities]
    cooccur_counts, seed_table_total = _seed_table_counts(seed, bundle, params)
    caption_terms = tokenize(seed.caption)
    entity_index = bundle.entity_index
    collection = bundle.collection

    scored: list[Suggestion] = []
    for entity_id in sorted(candidates.candidates):
        categories = bundle.entity_categories(entity_id)
        kb_similarity = sum(jaccard(categories, sc) for sc in seed_categories) / len(
            seed_categories
        )
        tc_similarity = (
            cooccur_counts.get(entity_id, 0) / seed_table_total if seed_table_total else 0.0
        )
        entity_similarity = (
            params.lambda_e * kb_similarity + (1.0 - params.lambda_e) * tc_similarity
        )

        if seed.labels:
            label_likelihood = column_labels_likelihood(
                seed.labels, entity_id, entity_index, collection, params
            )
        else:
            label_likelihood = 1.0

        if caption_terms:
            abstract_tv = entity_index.abstract_terms.get(entity_id, EMPTY_TERM_VECTOR)
            entity_cooccur = collection.caption_cooccurrence.get(entity_id, {})
            table_count = collection.entity_table_count.get(entity_id, 0)
            caption_likelihood = 1.0
            for term in caption_terms:
                kb_part = dirichlet_lm_prob(
                    term, abstract_tv, collection.abstract_lm, params.mu_entity
                )
                tc_part = entity_cooccur.get(term, 0) / table_count if table_count else 0.0
                caption_likelihood *= (
                    params.lambda_c * kb_part + (1.0 - params.lambda_c) * tc_part
                )
        else:
            caption_likelihood = 1.0

        score = entity_similarity * label_likelihood * caption_likelihood
        scored.append(
            Suggestion(
                target=entity_id,
                score=score,
                components={
                    COMPONENT_ENTITY_SIMILARITY: entity_similarity,
                    COMPONENT_LABEL_LIKELIHOOD: label_likelihood,
                    COMPONENT_CAPTION_LIKELIHOOD: caption_likelihood,
                },
            )
        )
    scored.sort(key=lambda s: (-s.score, s.target))
    return scored[:limit]


def suggest_rows(
    seed: SeedTable, bundle: IndexBundle, params: ScoringParams, limit: int
) -> list[Suggestion]:
    """Candidate selection followed by ranking, as one engine call."""
    return rank_rows(seed, select_row_candidates(seed, bundle, params), bundle, params, limit)
