"""Shared fixtures: a small deterministic corpus with non-trivial overlap structure."""

from __future__ import annotations

import random

import pytest

from tablecomplete.indexstore import IndexBundle, build_indexes
from tablecomplete.model import Cell, CorpusTable, EntityRecord, ScoringParams, SeedTable

CAPTION_WORDS = [
    "world", "cup", "final", "team", "season", "league",
    "champion", "goal", "open", "grand", "slam", "winner",
]
LABEL_POOL = [
    "Team", "Wins", "Losses", "Points", "Year",
    "No. Wins", "Rank", "Country", "Goals Scored", "Player Name",
]
NAME_WORDS = ["United", "City", "Rovers", "Albion", "Athletic", "Wanderers", "County", "Town"]


def make_fixture_kb(rng: random.Random, n_entities: int = 20, n_categories: int = 15):
    entities = []
    for i in range(1, n_entities + 1):
        name = f"{rng.choice(NAME_WORDS)} {rng.choice(NAME_WORDS)} {i}"
        abstract = " ".join(rng.choice(CAPTION_WORDS) for _ in range(rng.randint(4, 8)))
        categories = frozenset(
            f"C{c:02d}" for c in rng.sample(range(1, n_categories + 1), rng.randint(1, 3))
        )
        entities.append(
            EntityRecord(id=f"E{i:02d}", label=name, abstract=abstract, categories=categories)
        )
    return entities


def make_fixture_tables(rng: random.Random, entity_ids: list[str], n_tables: int = 10):
    tables = []
    for i in range(1, n_tables + 1):
        caption = " ".join(rng.choice(CAPTION_WORDS) for _ in range(rng.randint(2, 4)))
        labels = rng.sample(LABEL_POOL, rng.randint(3, 5))
        if rng.random() < 0.3:
            labels[0] = labels[0].upper()  # normalization must still match
        core = rng.sample(entity_ids, rng.randint(2, 6))
        cells = tuple(
            (
                Cell(text=f"row {j}", entity_id=entity_id),
                Cell(text=str(rng.randint(0, 99))),
            )
            for j, entity_id in enumerate(core)
        )
        tables.append(
            CorpusTable(
                table_id=f"T{i:02d}",
                page_title=" ".join(rng.choice(CAPTION_WORDS) for _ in range(2)),
                section_title=rng.choice(CAPTION_WORDS),
                caption=caption,
                labels=tuple(labels),
                core_entities=tuple(core),
                core_column_index=0,
                cells=cells,
            )
        )
    return tables


def make_random_seed(rng: random.Random, tables, entity_ids: list[str]) -> SeedTable:
    """A randomized seed mixing table-derived and random pieces; may lack any part."""
    if rng.random() < 0.5:
        base = rng.choice(tables)
        entities = list(base.core_entities[: rng.randint(1, len(base.core_entities))])
    else:
        entities = rng.sample(entity_ids, rng.randint(1, 4))
    caption = (
        " ".join(rng.choice(CAPTION_WORDS) for _ in range(rng.randint(1, 3)))
        if rng.random() < 0.7
        else ""
    )
    labels: list[str] = []
    if rng.random() < 0.7:
        labels = rng.sample(LABEL_POOL, rng.randint(1, 3))
    return SeedTable(caption=caption, entities=tuple(entities), labels=tuple(labels))


@pytest.fixture(scope="session")
def fixture_corpus():
    rng = random.Random(20180708)
    entities = make_fixture_kb(rng)
    tables = make_fixture_tables(rng, [e.id for e in entities])
    return tables, entities


@pytest.fixture(scope="session")
def fixture_bundle(fixture_corpus) -> IndexBundle:
    tables, entities = fixture_corpus
    return build_indexes(tables, entities)


@pytest.fixture(scope="session")
def params() -> ScoringParams:
    return ScoringParams()


@pytest.fixture(scope="session")
def fixture_seeds(fixture_corpus) -> list[SeedTable]:
    tables, entities = fixture_corpus
    rng = random.Random(41)
    return [make_random_seed(rng, tables, [e.id for e in entities]) for _ in range(25)]
