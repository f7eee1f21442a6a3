"""Corpus and knowledge-base loaders: JSON Lines in, validated records out.

Both loaders follow the same per-line policy: a malformed line is reported
with its line number and skipped, an unreadable file is fatal. Output order
is deterministic (input order, duplicates collapsed to their first position
with the last record winning).
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from .model import Cell, CorpusTable, EntityRecord, normalize_label

log = logging.getLogger(__name__)


class IngestError(Exception):
    """Fatal ingestion failure (unreadable file, not a recoverable line error)."""


@dataclass
class CorpusStats:
    """Counters reported by one ingestion run."""

    table_count: int = 0
    entity_count: int = 0
    dropped_entities: int = 0
    dangling_links: int = 0
    label_vocabulary_size: int = 0
    kb_line_errors: int = 0
    corpus_line_errors: int = 0
    duplicate_entities: int = 0
    duplicate_tables: int = 0
    line_error_samples: list[str] = field(default_factory=list)

    _MAX_SAMPLES = 20

    def record_line_error(self, path: Path, line_no: int, message: str, kind: str) -> None:
        if kind == "kb":
            self.kb_line_errors += 1
        else:
            self.corpus_line_errors += 1
        detail = f"{path.name}:{line_no}: {message}"
        if len(self.line_error_samples) < self._MAX_SAMPLES:
            self.line_error_samples.append(detail)
        log.warning("skipping malformed %s line %s", kind, detail)


def _iter_lines(path: Path) -> Iterator[tuple[int, bytes]]:
    try:
        handle = path.open("rb")
    except OSError as exc:
        raise IngestError(f"cannot read {path}: {exc}") from exc
    with handle:
        for line_no, raw in enumerate(handle, start=1):
            yield line_no, raw


def _parse_json_line(raw: bytes) -> dict:
    text = raw.decode("utf-8")  # invalid UTF-8 is a line error, caught by callers
    obj = json.loads(text)
    if not isinstance(obj, dict):
        raise ValueError("line is not a JSON object")
    return obj


def _require_str(obj: dict, key: str, default: str | None = None) -> str:
    value = obj.get(key, default)
    if not isinstance(value, str):
        raise ValueError(f"field {key!r} must be a string")
    return value


def load_kb(path: str | Path, stats: CorpusStats | None = None) -> tuple[dict[str, EntityRecord], CorpusStats]:
    """Load the entity file, skipping entities without an abstract.

    Returns the id -> record mapping (first-occurrence order, last duplicate
    wins) together with the updated stats.
    """
    path = Path(path)
    stats = stats if stats is not None else CorpusStats()
    records: dict[str, EntityRecord] = {}
    for line_no, raw in _iter_lines(path):
        if not raw.strip():
            continue
        try:
            obj = _parse_json_line(raw)
            entity_id = _require_str(obj, "id")
            if not entity_id:
                raise ValueError("field 'id' must be non-empty")
            label = _require_str(obj, "label", default="")
            abstract = obj.get("abstract", "")
            if not isinstance(abstract, str):
                raise ValueError("field 'abstract' must be a string")
            categories = obj.get("categories", [])
            if not isinstance(categories, list) or not all(isinstance(c, str) for c in categories):
                raise ValueError("field 'categories' must be a list of strings")
        except (ValueError, UnicodeDecodeError) as exc:
            stats.record_line_error(path, line_no, str(exc), kind="kb")
            continue
        if not abstract:
            stats.dropped_entities += 1
            continue
        if entity_id in records:
            stats.duplicate_entities += 1
        records[entity_id] = EntityRecord(
            id=entity_id, label=label, abstract=abstract, categories=frozenset(categories)
        )
    stats.entity_count = len(records)
    return records, stats


def _parse_cells(obj: dict, path_hint: str) -> list[list[dict]]:
    rows = obj.get("rows", [])
    if not isinstance(rows, list):
        raise ValueError("field 'rows' must be a list")
    parsed: list[list[dict]] = []
    for row in rows:
        if not isinstance(row, list):
            raise ValueError("each row must be a list of cells")
        cells: list[dict] = []
        for cell in row:
            if not isinstance(cell, dict):
                raise ValueError("each cell must be an object")
            text = cell.get("text", "")
            if not isinstance(text, str):
                raise ValueError("cell field 'text' must be a string")
            entity_id = cell.get("entityId")
            if entity_id is not None and (not isinstance(entity_id, str) or not entity_id):
                raise ValueError("cell field 'entityId' must be a non-empty string or null")
            cells.append({"text": text, "entityId": entity_id})
        parsed.append(cells)
    return parsed


def _pick_core_column(rows: list[list[dict]]) -> int:
    """Fallback when the corpus omits the core column: leftmost column with the
    highest fraction of entity-linked cells, ties resolved leftmost."""
    if not rows:
        return 0
    width = max(len(row) for row in rows)
    best_index, best_fraction = 0, -1.0
    for col in range(width):
        linked = total = 0
        for row in rows:
            if col < len(row):
                total += 1
                if row[col]["entityId"] is not None:
                    linked += 1
        fraction = linked / total if total else 0.0
        if fraction > best_fraction:
            best_index, best_fraction = col, fraction
    return best_index


def load_corpus(
    path: str | Path,
    kb_ids: set[str] | frozenset[str],
    stats: CorpusStats | None = None,
) -> tuple[dict[str, CorpusTable], CorpusStats]:
    """Load the table file, resolving cell links against the knowledge base.

    Links to unknown entities are cleared to plain text and counted as
    dangling; core entities are recomputed as the ordered distinct resolved
    ids of the core column.
    """
    path = Path(path)
    stats = stats if stats is not None else CorpusStats()
    tables: dict[str, CorpusTable] = {}
    label_vocabulary: set[str] = set()
    for line_no, raw in _iter_lines(path):
        if not raw.strip():
            continue
        try:
            obj = _parse_json_line(raw)
            table_id = _require_str(obj, "id")
            if not table_id:
                raise ValueError("field 'id' must be non-empty")
            page_title = _require_str(obj, "pageTitle", default="")
            section_title = _require_str(obj, "sectionTitle", default="")
            caption = _require_str(obj, "caption", default="")
            headers = obj.get("headers", [])
            if not isinstance(headers, list) or not all(isinstance(h, str) for h in headers):
                raise ValueError("field 'headers' must be a list of strings")
            rows = _parse_cells(obj, path.name)
            width = max((len(r) for r in rows), default=0)
            if "coreColumnIndex" in obj:
                core_index = obj["coreColumnIndex"]
                if not isinstance(core_index, int) or isinstance(core_index, bool):
                    raise ValueError("field 'coreColumnIndex' must be an integer")
                if core_index < 0 or (width and core_index >= width):
                    raise ValueError(
                        f"coreColumnIndex {core_index} out of range for {width}-column table"
                    )
            else:
                core_index = _pick_core_column(rows)
        except (ValueError, UnicodeDecodeError) as exc:
            stats.record_line_error(path, line_no, str(exc), kind="corpus")
            continue

        cell_rows: list[tuple[Cell, ...]] = []
        core_entities: list[str] = []
        seen_core: set[str] = set()
        for row in rows:
            cells: list[Cell] = []
            for col, cell in enumerate(row):
                entity_id = cell["entityId"]
                if entity_id is not None and entity_id not in kb_ids:
                    stats.dangling_links += 1
                    entity_id = None
                cells.append(Cell(text=cell["text"], entity_id=entity_id))
                if col == core_index and entity_id is not None and entity_id not in seen_core:
                    seen_core.add(entity_id)
                    core_entities.append(entity_id)
            cell_rows.append(tuple(cells))

        if table_id in tables:
            stats.duplicate_tables += 1
        tables[table_id] = CorpusTable(
            table_id=table_id,
            page_title=page_title,
            section_title=section_title,
            caption=caption,
            labels=tuple(headers),
            core_entities=tuple(core_entities),
            core_column_index=core_index,
            cells=tuple(cell_rows),
        )

    for table in tables.values():
        for header in table.labels:
            norm = normalize_label(header)
            if norm:
                label_vocabulary.add(norm)
    stats.table_count = len(tables)
    stats.label_vocabulary_size = len(label_vocabulary)
    return tables, stats
