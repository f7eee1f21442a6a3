"""Independent brute-force reimplementations of the ranking math.

Everything here recomputes statistics by scanning the raw corpus and KB
records directly; nothing touches the index structures or the scoring
module. Shared with the engine are only the tokenizer and the label
normalizer, which define term identity rather than any scoring decision.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Sequence

from tablecomplete.model import (
    CorpusTable,
    EntityRecord,
    ScoringParams,
    SeedTable,
    normalize_label,
    tokenize,
)


def oracle_jaccard(a, b) -> float:
    union = list(a) + [x for x in b if x not in a]
    if not union:
        return 0.0
    intersection = [x for x in a if x in b]
    return len(intersection) / len(union)


def oracle_overlap_ratio(source, reference) -> float:
    if not reference:
        return 0.0
    hits = sum(1 for x in reference if x in source)
    return hits / len(reference)


def oracle_bm25_scores(
    query_terms: Sequence[str],
    docs: dict[str, list[str]],
    k1: float,
    b: float,
) -> dict[str, float]:
    """BM25 over tokenized documents with the non-negative idf variant."""
    n = len(docs)
    if n == 0:
        return {}
    avgdl = sum(len(tokens) for tokens in docs.values()) / n
    df: Counter[str] = Counter()
    for tokens in docs.values():
        for term in set(tokens):
            df[term] += 1
    scores: dict[str, float] = {}
    for doc_id, tokens in docs.items():
        tf = Counter(tokens)
        score = 0.0
        for term in query_terms:
            f = tf.get(term, 0)
            if f == 0:
                continue
            idf = math.log((n - df[term] + 0.5) / (df[term] + 0.5) + 1.0)
            score += idf * f * (k1 + 1.0) / (f + k1 * (1.0 - b + b * len(tokens) / avgdl))
        scores[doc_id] = score
    return scores


def _label_tokens(table: CorpusTable) -> list[str]:
    tokens: list[str] = []
    for label in table.labels:
        tokens.extend(tokenize(label))
    return tokens


def _norm_labels(table: CorpusTable) -> set[str]:
    return {normalize_label(l) for l in table.labels} - {""}


def _caption_docs(tables: Sequence[CorpusTable]) -> dict[str, list[str]]:
    return {t.table_id: tokenize(t.caption) for t in tables}


def oracle_similar_tables(
    seed: SeedTable, tables: Sequence[CorpusTable], params: ScoringParams
) -> tuple[list[str], list[str], list[str], dict[str, float]]:
    """The three retrieval routes, each ranked and capped exactly as specified."""
    k = params.top_k_tables
    caption_scores = oracle_bm25_scores(
        tokenize(seed.caption), _caption_docs(tables), params.bm25_k1, params.bm25_b
    )
    caption_route = [
        tid
        for tid, score in sorted(
            ((t, s) for t, s in caption_scores.items() if s > 0.0),
            key=lambda item: (-item[1], item[0]),
        )
    ][:k]

    entity_overlaps = []
    label_overlaps = []
    seed_norms = {normalize_label(l) for l in seed.labels} - {""}
    for table in tables:
        shared_entities = sum(1 for e in set(table.core_entities) if e in seed.entities)
        if shared_entities:
            entity_overlaps.append((table.table_id, shared_entities))
        shared_labels = sum(1 for l in _norm_labels(table) if l in seed_norms)
        if shared_labels:
            label_overlaps.append((table.table_id, shared_labels))
    entity_route = [
        tid for tid, _ in sorted(entity_overlaps, key=lambda item: (-item[1], item[0]))
    ][:k]
    label_route = [
        tid for tid, _ in sorted(label_overlaps, key=lambda item: (-item[1], item[0]))
    ][:k]
    return caption_route, entity_route, label_route, caption_scores


def oracle_row_candidates(
    seed: SeedTable,
    tables: Sequence[CorpusTable],
    kb: Sequence[EntityRecord],
    params: ScoringParams,
) -> tuple[set[str], set[str]]:
    """(kb-route candidates, tc-route candidates), seed entities excluded."""
    by_id = {r.id: r for r in kb}
    seed_cats: set[str] = set()
    for entity_id in seed.entities:
        if entity_id in by_id:
            seed_cats.update(by_id[entity_id].categories)
    kb_candidates = {
        r.id
        for r in kb
        if r.id not in seed.entities and any(c in seed_cats for c in r.categories)
    }

    caption_route, entity_route, label_route, _ = oracle_similar_tables(seed, tables, params)
    similar = set(caption_route) | set(entity_route) | set(label_route)
    tc_candidates: set[str] = set()
    for table in tables:
        if table.table_id in similar:
            tc_candidates.update(table.core_entities)
    tc_candidates -= set(seed.entities)
    return kb_candidates, tc_candidates


def oracle_row_scores(
    seed: SeedTable,
    candidates: Sequence[str],
    tables: Sequence[CorpusTable],
    kb: Sequence[EntityRecord],
    params: ScoringParams,
) -> dict[str, tuple[float, float, float, float]]:
    """entity -> (entity_similarity, label_likelihood, caption_likelihood, score)."""
    by_id = {r.id: r for r in kb}

    label_collection: Counter[str] = Counter()
    for table in tables:
        label_collection.update(_label_tokens(table))
    label_total = sum(label_collection.values())

    abstract_collection: Counter[str] = Counter()
    for record in kb:
        abstract_collection.update(tokenize(record.abstract))
    abstract_total = sum(abstract_collection.values())

    caption_terms = tokenize(seed.caption)
    seed_set = set(seed.entities)

    results: dict[str, tuple[float, float, float, float]] = {}
    for entity_id in candidates:
        cats = by_id[entity_id].categories if entity_id in by_id else frozenset()
        kb_sim_total = 0.0
        for seed_id in seed.entities:
            seed_cats = by_id[seed_id].categories if seed_id in by_id else frozenset()
            kb_sim_total += oracle_jaccard(cats, seed_cats)
        kb_sim = kb_sim_total / len(seed.entities)

        if params.tc_any_seed:
            qualifying = [
                t for t in tables if any(e in seed_set for e in t.core_entities)
            ]
        else:
            qualifying = [
                t for t in tables if all(e in t.core_entities for e in seed.entities)
            ]
        containing_both = sum(1 for t in qualifying if entity_id in t.core_entities)
        tc_sim = containing_both / len(qualifying) if qualifying else 0.0
        entity_similarity = params.lambda_e * kb_sim + (1.0 - params.lambda_e) * tc_sim

        if seed.labels:
            tf_e: Counter[str] = Counter()
            for table in tables:
                if entity_id in table.core_entities:
                    tf_e.update(_label_tokens(table))
            size_e = sum(tf_e.values())
            label_likelihood = 0.0
            for label in seed.labels:
                product = 1.0
                for term in tokenize(label):
                    p_collection = (
                        label_collection[term] / label_total if label_total else 0.0
                    )
                    product *= (tf_e.get(term, 0) + params.mu_labels * p_collection) / (
                        size_e + params.mu_labels
                    )
                label_likelihood += product
        else:
            label_likelihood = 1.0

        if caption_terms:
            abstract_tf = Counter(tokenize(by_id[entity_id].abstract)) if entity_id in by_id else Counter()
            abstract_len = sum(abstract_tf.values())
            containing_e = [t for t in tables if entity_id in t.core_entities]
            caption_likelihood = 1.0
            for term in caption_terms:
                p_abs_collection = (
                    abstract_collection[term] / abstract_total if abstract_total else 0.0
                )
                kb_part = (abstract_tf.get(term, 0) + params.mu_entity * p_abs_collection) / (
                    abstract_len + params.mu_entity
                )
                if containing_e:
                    hits = sum(1 for t in containing_e if term in set(tokenize(t.caption)))
                    tc_part = hits / len(containing_e)
                else:
                    tc_part = 0.0
                caption_likelihood *= (
                    params.lambda_c * kb_part + (1.0 - params.lambda_c) * tc_part
                )
        else:
            caption_likelihood = 1.0

        score = entity_similarity * label_likelihood * caption_likelihood
        results[entity_id] = (entity_similarity, label_likelihood, caption_likelihood, score)
    return results


def oracle_related_tables(
    seed: SeedTable, tables: Sequence[CorpusTable], params: ScoringParams
) -> dict[str, tuple[float, float, float]]:
    """table -> (entity_coverage, caption_score, label_overlap)."""
    caption_route, entity_route, label_route, caption_scores = oracle_similar_tables(
        seed, tables, params
    )
    related = set(caption_route) | set(entity_route) | set(label_route)
    caption_terms = tokenize(seed.caption)
    seed_norms = {normalize_label(l) for l in seed.labels} - {""}
    seed_set = set(seed.entities)
    by_id = {t.table_id: t for t in tables}

    annotated: dict[str, tuple[float, float, float]] = {}
    for table_id in sorted(related):
        table = by_id[table_id]
        coverage = (
            oracle_overlap_ratio(set(table.core_entities), seed_set) if seed_set else 1.0
        )
        cap = caption_scores.get(table_id, 0.0) if caption_terms else 1.0
        lab = (
            oracle_overlap_ratio(_norm_labels(table), seed_norms) if seed_norms else 1.0
        )
        annotated[table_id] = (coverage, cap, lab)
    return annotated


def oracle_column_scores(
    seed: SeedTable, tables: Sequence[CorpusTable], params: ScoringParams
) -> tuple[dict[str, float], dict[str, str]]:
    """(normalized label -> score, normalized label -> display form)."""
    annotated = oracle_related_tables(seed, tables, params)
    by_id = {t.table_id: t for t in tables}
    seed_norms = {normalize_label(l) for l in seed.labels} - {""}

    scores: dict[str, float] = {}
    votes: dict[str, dict[str, int]] = {}
    for table_id in sorted(annotated):
        coverage, cap, lab = annotated[table_id]
        relevance = coverage * cap * lab
        table = by_id[table_id]
        seen: set[str] = set()
        for raw in table.labels:
            norm = normalize_label(raw)
            if not norm or norm in seed_norms or norm in seen:
                continue
            seen.add(norm)
            scores[norm] = scores.get(norm, 0.0) + relevance
            per = votes.setdefault(norm, {})
            per[raw] = per.get(raw, 0) + 1
    display: dict[str, str] = {}
    for norm, raw_counts in votes.items():
        best_raw, best_count = norm, -1
        for raw, count in raw_counts.items():
            if count > best_count:
                best_raw, best_count = raw, count
        display[norm] = best_raw
    return scores, display
