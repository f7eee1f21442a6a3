"""Deterministic synthetic corpus/KB generator for scale and latency experiments.

The generated corpus mimics the statistics that drive engine cost: a small
pool of popular entities fills most core-column slots (so candidate sets
stay realistic while related-table sets grow), heading labels and caption
terms come from global vocabularies (so label/caption retrieval routes grow
additively with seed size), and abstracts share the caption vocabulary (so
caption likelihoods are informative).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class SynthConfig:
    tables: int = 1_000
    entities: int = 500
    categories: int = 100
    head_entities: int = 50
    head_share: float = 0.99
    entities_per_table: tuple[int, int] = (5, 9)
    labels_per_table: tuple[int, int] = (5, 8)
    caption_terms: tuple[int, int] = (3, 6)
    label_vocab: int = 600
    caption_vocab: int = 2_000
    cats_per_entity: tuple[int, int] = (2, 4)
    abstract_terms: tuple[int, int] = (6, 10)
    rng_seed: int = 7


def _label_vocab(size: int) -> list[str]:
    # Mix single- and two-token labels so label language models see both.
    return [f"h{i:03d}" if i % 3 else f"h{i:03d} v{i % 9}" for i in range(size)]


def _caption_vocab(size: int) -> list[str]:
    return [f"c{i:04d}" for i in range(size)]


def _entity_id(i: int) -> str:
    return f"E{i:06d}"


def write_synthetic_corpus(cfg: SynthConfig, corpus_path: str | Path, kb_path: str | Path) -> None:
    """Write corpus and KB JSON Lines files; identical configs yield identical bytes."""
    rng = random.Random(cfg.rng_seed)
    labels = _label_vocab(cfg.label_vocab)
    caption_words = _caption_vocab(cfg.caption_vocab)
    name_words = [f"n{i:03d}" for i in range(200)]

    kb_path = Path(kb_path)
    with kb_path.open("w", encoding="utf-8") as kb:
        for i in range(cfg.entities):
            entity_id = _entity_id(i)
            name = f"{rng.choice(name_words)} {rng.choice(name_words)} {i:05d}"
            abstract = " ".join(
                rng.choice(caption_words)
                for _ in range(rng.randint(*cfg.abstract_terms))
            )
            categories = rng.sample(
                range(cfg.categories), k=min(cfg.categories, rng.randint(*cfg.cats_per_entity))
            )
            kb.write(
                json.dumps(
                    {
                        "id": entity_id,
                        "label": name,
                        "abstract": abstract,
                        "categories": [f"C{c:05d}" for c in sorted(categories)],
                    },
                    ensure_ascii=False,
                    separators=(",", ":"),
                )
            )
            kb.write("\n")

    head = min(cfg.head_entities, cfg.entities)
    corpus_path = Path(corpus_path)
    with corpus_path.open("w", encoding="utf-8") as corpus:
        for t in range(cfg.tables):
            n_entities = rng.randint(*cfg.entities_per_table)
            chosen: list[int] = []
            seen: set[int] = set()
            while len(chosen) < n_entities:
                if rng.random() < cfg.head_share:
                    idx = rng.randrange(head)
                else:
                    idx = rng.randrange(cfg.entities)
                if idx not in seen:
                    seen.add(idx)
                    chosen.append(idx)
            table_labels = [
                labels[i]
                for i in rng.sample(range(cfg.label_vocab), k=rng.randint(*cfg.labels_per_table))
            ]
            caption = " ".join(
                rng.choice(caption_words) for _ in range(rng.randint(*cfg.caption_terms))
            )
            rows = [
                [{"text": f"item {idx:06d}", "entityId": _entity_id(idx)}] for idx in chosen
            ]
            corpus.write(
                json.dumps(
                    {
                        "id": f"T{t:07d}",
                        "pageTitle": f"p{t % 1000}",
                        "sectionTitle": f"s{t % 50}" if t % 2 else "",
                        "caption": caption,
                        "headers": table_labels,
                        "coreColumnIndex": 0,
                        "rows": rows,
                    },
                    ensure_ascii=False,
                    separators=(",", ":"),
                )
            )
            corpus.write("\n")
