"""Shared domain vocabulary: tables, entities, suggestions, scoring parameters.

Everything here is immutable after construction and free of I/O and scoring
logic, so instances can be shared across concurrent readers.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

_TOKEN_RE = re.compile(r"[^\W_]+")

#: Relative tolerance for reconstructing a suggestion score from its components.
SCORE_RECONSTRUCTION_RTOL = 1e-9


def normalize_label(raw: str) -> str:
    """Canonical form of a heading label: trimmed, case-folded, inner whitespace collapsed."""
    return " ".join(raw.casefold().split())


def tokenize(text: str) -> list[str]:
    """Lowercased alphanumeric terms; punctuation and underscores act as separators."""
    return _TOKEN_RE.findall(text.lower())


class EmptySeedError(ValueError):
    """Raised when a population request lacks the seed data it requires."""


@dataclass(frozen=True)
class SeedTable:
    """The user's in-progress table: caption, core-column entity ids, heading labels."""

    caption: str = ""
    entities: tuple[str, ...] = ()
    labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "entities", tuple(self.entities))
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(set(self.entities)) != len(self.entities):
            raise ValueError("seed entities must be unique")
        normalized = [normalize_label(l) for l in self.labels]
        if len(set(normalized)) != len(normalized):
            raise ValueError("seed labels must be unique after normalization")


@dataclass(frozen=True)
class Cell:
    text: str = ""
    entity_id: Optional[str] = None

    def __post_init__(self) -> None:
        if self.entity_id is not None and not self.entity_id:
            raise ValueError("cell entity id must be non-empty when present")


@dataclass(frozen=True)
class CorpusTable:
    """One table from the corpus; ``core_entities`` are the distinct linked ids of the core column."""

    table_id: str
    page_title: str = ""
    section_title: str = ""
    caption: str = ""
    labels: tuple[str, ...] = ()
    core_entities: tuple[str, ...] = ()
    core_column_index: int = 0
    cells: tuple[tuple[Cell, ...], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "core_entities", tuple(self.core_entities))
        object.__setattr__(self, "cells", tuple(tuple(row) for row in self.cells))
        if not self.table_id:
            raise ValueError("table id must be non-empty")
        if self.core_column_index < 0:
            raise ValueError("core column index must be non-negative")
        if self.cells:
            width = max(len(row) for row in self.cells)
            if width and self.core_column_index >= width:
                raise ValueError(
                    f"core column index {self.core_column_index} out of range for "
                    f"{width}-column table {self.table_id!r}"
                )


@dataclass(frozen=True)
class EntityRecord:
    """A knowledge-base entity; the abstract is guaranteed non-empty by ingestion."""

    id: str
    label: str
    abstract: str
    categories: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "categories", frozenset(self.categories))
        if not self.id:
            raise ValueError("entity id must be non-empty")
        if not self.abstract:
            raise ValueError(f"entity {self.id!r} has an empty abstract")


@dataclass(frozen=True)
class Suggestion:
    """A ranked recommendation with its per-component score breakdown.

    The score always reconstructs as the product of the component values,
    which lets clients display an exact explanation of the ranking.
    """

    target: str
    score: float
    components: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", dict(self.components))
        if not math.isfinite(self.score) or self.score < 0:
            raise ValueError(f"suggestion score must be finite and >= 0, got {self.score}")
        product = 1.0
        for value in self.components.values():
            product *= value
        if not math.isclose(product, self.score, rel_tol=SCORE_RECONSTRUCTION_RTOL, abs_tol=0.0):
            raise ValueError(
                f"component product {product} does not reconstruct score {self.score}"
            )


@dataclass(frozen=True)
class ScoringParams:
    """Mixture weights, smoothing magnitudes, and retrieval caps for both population models.

    ``top_k_tables`` caps each similar-table retrieval route; set it to a value
    at least the corpus size to consider every matching table.
    ``tc_any_seed`` switches the corpus co-occurrence fraction to count tables
    containing at least one seed entity instead of all of them.
    """

    lambda_e: float = 0.5
    lambda_c: float = 0.5
    mu_labels: float = 2000.0
    mu_entity: float = 2000.0
    bm25_k1: float = 1.2
    bm25_b: float = 0.75
    top_k_tables: int = 256
    tc_any_seed: bool = False

    def __post_init__(self) -> None:
        if not 0.0 <= self.lambda_e <= 1.0:
            raise ValueError("lambda_e must be in [0, 1]")
        if not 0.0 <= self.lambda_c <= 1.0:
            raise ValueError("lambda_c must be in [0, 1]")
        if self.mu_labels <= 0:
            raise ValueError("mu_labels must be positive")
        if self.mu_entity <= 0:
            raise ValueError("mu_entity must be positive")
        if self.bm25_k1 <= 0:
            raise ValueError("bm25_k1 must be positive")
        if not 0.0 <= self.bm25_b <= 1.0:
            raise ValueError("bm25_b must be in [0, 1]")
        if self.top_k_tables < 1:
            raise ValueError("top_k_tables must be a positive integer")


def unique_normalized_labels(labels: Sequence[str]) -> list[str]:
    """Distinct non-empty normalized forms of ``labels``, in first-occurrence order."""
    seen: set[str] = set()
    out: list[str] = []
    for raw in labels:
        norm = normalize_label(raw)
        if norm and norm not in seen:
            seen.add(norm)
            out.append(norm)
    return out
