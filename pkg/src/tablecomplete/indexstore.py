"""Native inverted indices over the table corpus and knowledge base, plus persistence.

Four structures are built in one pass: the table index (per-field term
postings, entity and label postings), the entity index (records plus the
per-entity language models), the category index, and corpus-wide collection
statistics. A build is exclusive; a built or loaded bundle is immutable and
safe for unlimited concurrent readers.

The on-disk layout is a manifest plus one JSON file per structure, written
with sorted keys so identical inputs persist byte-identically.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .model import Cell, CorpusTable, EntityRecord, normalize_label, tokenize
from .scoring import TermVector

FORMAT_VERSION = 1

FIELD_CAPTION = "caption"
FIELD_PAGE_TITLE = "page_title"
FIELD_SECTION_TITLE = "section_title"
FIELD_LABELS = "labels"
FIELDS = (FIELD_CAPTION, FIELD_PAGE_TITLE, FIELD_SECTION_TITLE, FIELD_LABELS)

_MANIFEST_FILE = "manifest.json"
_TABLES_FILE = "tables.jsonl"
_TABLE_INDEX_FILE = "table_index.json"
_ENTITY_INDEX_FILE = "entity_index.json"
_CATEGORIES_FILE = "categories.json"
_COLLECTION_FILE = "collection.json"


class IndexFormatError(Exception):
    """Persisted index directory is missing, corrupt, or from another format version."""


def _field_tokens(table: CorpusTable) -> dict[str, list[str]]:
    label_tokens: list[str] = []
    for label in table.labels:
        label_tokens.extend(tokenize(label))
    return {
        FIELD_CAPTION: tokenize(table.caption),
        FIELD_PAGE_TITLE: tokenize(table.page_title),
        FIELD_SECTION_TITLE: tokenize(table.section_title),
        FIELD_LABELS: label_tokens,
    }


@dataclass
class TableIndex:
    """Per-field term postings plus entity and label postings over the corpus."""

    postings: dict[str, dict[str, dict[str, int]]]
    entity_postings: dict[str, list[str]]
    label_postings: dict[str, list[str]]
    field_lengths: dict[str, dict[str, int]]
    avg_field_length: dict[str, float]
    doc_count: int


@dataclass
class EntityIndex:
    """Entity records with their abstract LM, aggregated label-term stats, and name postings."""

    records: dict[str, EntityRecord]
    abstract_terms: dict[str, TermVector]
    label_terms: dict[str, TermVector]
    name_postings: dict[str, list[str]]


@dataclass
class CollectionStats:
    """Corpus-wide statistics shared by every estimator.

    ``label_lm`` and ``abstract_lm`` are normalized term distributions over
    all table labels and all entity abstracts respectively.
    ``caption_cooccurrence[e][t]`` counts tables holding entity ``e`` in the
    core column with term ``t`` in the caption; ``entity_table_count[e]``
    counts all tables holding ``e``.
    """

    label_lm: dict[str, float]
    abstract_lm: dict[str, float]
    caption_cooccurrence: dict[str, dict[str, int]]
    entity_table_count: dict[str, int]
    table_count: int


@dataclass
class IndexBundle:
    """Everything the population models and the service query; immutable once built."""

    tables: dict[str, CorpusTable]
    table_index: TableIndex
    entity_index: EntityIndex
    categories: dict[str, tuple[str, ...]]
    collection: CollectionStats
    manifest: Optional[dict] = field(default=None, compare=False, repr=False)

    core_entity_sets: dict[str, frozenset[str]] = field(
        init=False, compare=False, repr=False, default_factory=dict
    )
    norm_label_pairs: dict[str, tuple[tuple[str, str], ...]] = field(
        init=False, compare=False, repr=False, default_factory=dict
    )
    label_display: dict[str, str] = field(
        init=False, compare=False, repr=False, default_factory=dict
    )
    sorted_entity_names: list[tuple[str, str]] = field(
        init=False, compare=False, repr=False, default_factory=list
    )

    def __post_init__(self) -> None:
        display_votes: dict[str, dict[str, int]] = {}
        for table_id in sorted(self.tables):
            table = self.tables[table_id]
            self.core_entity_sets[table_id] = frozenset(table.core_entities)
            pairs: list[tuple[str, str]] = []
            seen: set[str] = set()
            for raw in table.labels:
                norm = normalize_label(raw)
                if norm and norm not in seen:
                    seen.add(norm)
                    pairs.append((norm, raw))
                    votes = display_votes.setdefault(norm, {})
                    votes[raw] = votes.get(raw, 0) + 1
            self.norm_label_pairs[table_id] = tuple(pairs)
        for norm, votes in display_votes.items():
            best_raw, best_count = "", -1
            for raw, count in votes.items():  # insertion order breaks ties deterministically
                if count > best_count:
                    best_raw, best_count = raw, count
            self.label_display[norm] = best_raw
        self.sorted_entity_names = sorted(
            (record.label.casefold(), entity_id)
            for entity_id, record in self.entity_index.records.items()
        )

    # -- lookups ---------------------------------------------------------

    def lookup_tables_by_entity(self, entity_id: str) -> list[str]:
        """Table ids whose core column contains the entity, sorted by table id."""
        return list(self.table_index.entity_postings.get(entity_id, ()))

    def lookup_entities_by_category(self, category_id: str) -> set[str]:
        """Members of the category; the exact inverse of the entity records."""
        return set(self.categories.get(category_id, ()))

    def entity(self, entity_id: str) -> Optional[EntityRecord]:
        return self.entity_index.records.get(entity_id)

    def table(self, table_id: str) -> Optional[CorpusTable]:
        return self.tables.get(table_id)

    def entity_categories(self, entity_id: str) -> frozenset[str]:
        record = self.entity_index.records.get(entity_id)
        return record.categories if record is not None else frozenset()


def build_indexes(
    tables: Iterable[CorpusTable], entities: Iterable[EntityRecord]
) -> IndexBundle:
    """Build all index structures in one deterministic pass over the input streams."""
    table_map: dict[str, CorpusTable] = {}
    postings: dict[str, dict[str, dict[str, int]]] = {f: {} for f in FIELDS}
    field_lengths: dict[str, dict[str, int]] = {f: {} for f in FIELDS}
    entity_postings: dict[str, list[str]] = {}
    label_postings: dict[str, set[str]] = {}
    label_collection: Counter[str] = Counter()
    entity_label_counts: dict[str, Counter[str]] = {}
    caption_cooccurrence: dict[str, dict[str, int]] = {}
    entity_table_count: dict[str, int] = {}

    try:
        for table in tables:
            table_map[table.table_id] = table
            tokens_by_field = _field_tokens(table)
            for field_name in FIELDS:
                tokens = tokens_by_field[field_name]
                field_lengths[field_name][table.table_id] = len(tokens)
                field_postings = postings[field_name]
                for term, tf in Counter(tokens).items():
                    field_postings.setdefault(term, {})[table.table_id] = tf
            label_collection.update(tokens_by_field[FIELD_LABELS])
            for raw in table.labels:
                norm = normalize_label(raw)
                if norm:
                    label_postings.setdefault(norm, set()).add(table.table_id)
            caption_terms = set(tokens_by_field[FIELD_CAPTION])
            for entity_id in table.core_entities:
                entity_postings.setdefault(entity_id, []).append(table.table_id)
                entity_table_count[entity_id] = entity_table_count.get(entity_id, 0) + 1
                counts = entity_label_counts.setdefault(entity_id, Counter())
                counts.update(tokens_by_field[FIELD_LABELS])
                cooccur = caption_cooccurrence.setdefault(entity_id, {})
                for term in caption_terms:
                    cooccur[term] = cooccur.get(term, 0) + 1
    except MemoryError as exc:  # pragma: no cover - depends on host memory
        raise IndexFormatError("out of memory while building the table index") from exc

    doc_count = len(table_map)
    avg_field_length = {
        f: (sum(field_lengths[f].values()) / doc_count if doc_count else 0.0) for f in FIELDS
    }
    table_index = TableIndex(
        postings=postings,
        entity_postings={e: sorted(ids) for e, ids in entity_postings.items()},
        label_postings={l: sorted(ids) for l, ids in label_postings.items()},
        field_lengths=field_lengths,
        avg_field_length=avg_field_length,
        doc_count=doc_count,
    )

    records: dict[str, EntityRecord] = {}
    abstract_terms: dict[str, TermVector] = {}
    abstract_collection: Counter[str] = Counter()
    name_postings: dict[str, set[str]] = {}
    category_members: dict[str, list[str]] = {}
    try:
        for record in entities:
            records[record.id] = record
            terms = tokenize(record.abstract)
            abstract_terms[record.id] = TermVector.from_terms(terms)
            abstract_collection.update(terms)
            for term in set(tokenize(record.label)):
                name_postings.setdefault(term, set()).add(record.id)
            for category in sorted(record.categories):
                category_members.setdefault(category, []).append(record.id)
    except MemoryError as exc:  # pragma: no cover
        raise IndexFormatError("out of memory while building the entity index") from exc

    label_terms = {
        entity_id: TermVector(counts=dict(counts), total=sum(counts.values()))
        for entity_id, counts in entity_label_counts.items()
        if counts
    }
    entity_index = EntityIndex(
        records=records,
        abstract_terms=abstract_terms,
        label_terms=label_terms,
        name_postings={t: sorted(ids) for t, ids in name_postings.items()},
    )

    label_total = sum(label_collection.values())
    abstract_total = sum(abstract_collection.values())
    collection = CollectionStats(
        label_lm={t: c / label_total for t, c in label_collection.items()} if label_total else {},
        abstract_lm=(
            {t: c / abstract_total for t, c in abstract_collection.items()} if abstract_total else {}
        ),
        caption_cooccurrence=caption_cooccurrence,
        entity_table_count=entity_table_count,
        table_count=doc_count,
    )
    categories = {c: tuple(sorted(ids)) for c, ids in category_members.items()}
    return IndexBundle(
        tables=table_map,
        table_index=table_index,
        entity_index=entity_index,
        categories=categories,
        collection=collection,
    )


# -- persistence -----------------------------------------------------------


def _dump_json(obj, path: Path) -> None:
    try:
        with path.open("w", encoding="utf-8") as handle:
            json.dump(obj, handle, sort_keys=True, ensure_ascii=False, separators=(",", ":"))
            handle.write("\n")
    except OSError as exc:
        raise IndexFormatError(f"cannot write {path.name}: {exc}") from exc


def _load_json(path: Path):
    try:
        with path.open("r", encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError as exc:
        raise IndexFormatError(f"missing {path.name} in {path.parent}") from exc
    except (OSError, json.JSONDecodeError) as exc:
        raise IndexFormatError(f"cannot read {path.name}: {exc}") from exc


def _table_to_json(table: CorpusTable) -> dict:
    return {
        "id": table.table_id,
        "pageTitle": table.page_title,
        "sectionTitle": table.section_title,
        "caption": table.caption,
        "headers": list(table.labels),
        "coreColumnIndex": table.core_column_index,
        "coreEntities": list(table.core_entities),
        "rows": [
            [{"text": cell.text, "entityId": cell.entity_id} for cell in row]
            for row in table.cells
        ],
    }


def _table_from_json(obj: dict) -> CorpusTable:
    return CorpusTable(
        table_id=obj["id"],
        page_title=obj["pageTitle"],
        section_title=obj["sectionTitle"],
        caption=obj["caption"],
        labels=tuple(obj["headers"]),
        core_entities=tuple(obj["coreEntities"]),
        core_column_index=obj["coreColumnIndex"],
        cells=tuple(
            tuple(Cell(text=c["text"], entity_id=c["entityId"]) for c in row)
            for row in obj["rows"]
        ),
    )


def persist(bundle: IndexBundle, directory: str | Path, built_from: Optional[dict] = None) -> None:
    """Write the bundle to ``directory`` as a versioned, self-describing layout."""
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IndexFormatError(f"cannot create index directory {directory}: {exc}") from exc

    manifest = {
        "formatVersion": FORMAT_VERSION,
        "tables": bundle.collection.table_count,
        "entities": len(bundle.entity_index.records),
        "builtFrom": built_from or {},
    }
    try:
        with (directory / _TABLES_FILE).open("w", encoding="utf-8") as handle:
            for table_id in sorted(bundle.tables):
                json.dump(
                    _table_to_json(bundle.tables[table_id]),
                    handle,
                    sort_keys=True,
                    ensure_ascii=False,
                    separators=(",", ":"),
                )
                handle.write("\n")
    except OSError as exc:
        raise IndexFormatError(f"cannot write {_TABLES_FILE}: {exc}") from exc

    ti = bundle.table_index
    _dump_json(
        {
            "postings": {
                f: {t: sorted(per.items()) for t, per in ti.postings[f].items()} for f in FIELDS
            },
            "entityPostings": ti.entity_postings,
            "labelPostings": ti.label_postings,
            "fieldLengths": ti.field_lengths,
            "avgFieldLength": ti.avg_field_length,
            "docCount": ti.doc_count,
        },
        directory / _TABLE_INDEX_FILE,
    )
    ei = bundle.entity_index
    _dump_json(
        {
            "records": {
                r.id: {
                    "label": r.label,
                    "abstract": r.abstract,
                    "categories": sorted(r.categories),
                }
                for r in ei.records.values()
            },
            "abstractTerms": {e: tv.counts for e, tv in ei.abstract_terms.items()},
            "labelTerms": {e: tv.counts for e, tv in ei.label_terms.items()},
            "namePostings": ei.name_postings,
        },
        directory / _ENTITY_INDEX_FILE,
    )
    _dump_json({c: list(ids) for c, ids in bundle.categories.items()}, directory / _CATEGORIES_FILE)
    _dump_json(
        {
            "labelLm": bundle.collection.label_lm,
            "abstractLm": bundle.collection.abstract_lm,
            "captionCooccurrence": bundle.collection.caption_cooccurrence,
            "entityTableCount": bundle.collection.entity_table_count,
            "tableCount": bundle.collection.table_count,
        },
        directory / _COLLECTION_FILE,
    )
    _dump_json(manifest, directory / _MANIFEST_FILE)


def load_manifest(directory: str | Path) -> dict:
    directory = Path(directory)
    manifest_path = directory / _MANIFEST_FILE
    if not manifest_path.exists():
        raise IndexFormatError(f"missing manifest: no {_MANIFEST_FILE} in {directory}")
    manifest = _load_json(manifest_path)
    version = manifest.get("formatVersion")
    if version != FORMAT_VERSION:
        raise IndexFormatError(
            f"index format version mismatch: found {version}, this build reads {FORMAT_VERSION}"
        )
    return manifest


def load(directory: str | Path) -> IndexBundle:
    """Load a persisted bundle; fails fast on a missing manifest or version mismatch."""
    directory = Path(directory)
    manifest = load_manifest(directory)

    tables: dict[str, CorpusTable] = {}
    try:
        with (directory / _TABLES_FILE).open("r", encoding="utf-8") as handle:
            for line in handle:
                if line.strip():
                    table = _table_from_json(json.loads(line))
                    tables[table.table_id] = table
    except FileNotFoundError as exc:
        raise IndexFormatError(f"missing {_TABLES_FILE} in {directory}") from exc
    except (OSError, json.JSONDecodeError) as exc:
        raise IndexFormatError(f"cannot read {_TABLES_FILE}: {exc}") from exc

    raw_ti = _load_json(directory / _TABLE_INDEX_FILE)
    table_index = TableIndex(
        postings={
            f: {t: {tid: tf for tid, tf in per} for t, per in raw_ti["postings"][f].items()}
            for f in FIELDS
        },
        entity_postings=raw_ti["entityPostings"],
        label_postings=raw_ti["labelPostings"],
        field_lengths=raw_ti["fieldLengths"],
        avg_field_length=raw_ti["avgFieldLength"],
        doc_count=raw_ti["docCount"],
    )
    raw_ei = _load_json(directory / _ENTITY_INDEX_FILE)
    records = {
        entity_id: EntityRecord(
            id=entity_id,
            label=fields["label"],
            abstract=fields["abstract"],
            categories=frozenset(fields["categories"]),
        )
        for entity_id, fields in raw_ei["records"].items()
    }
    entity_index = EntityIndex(
        records=records,
        abstract_terms={
            e: TermVector(counts=counts, total=sum(counts.values()))
            for e, counts in raw_ei["abstractTerms"].items()
        },
        label_terms={
            e: TermVector(counts=counts, total=sum(counts.values()))
            for e, counts in raw_ei["labelTerms"].items()
        },
        name_postings=raw_ei["namePostings"],
    )
    categories = {c: tuple(ids) for c, ids in _load_json(directory / _CATEGORIES_FILE).items()}
    raw_cs = _load_json(directory / _COLLECTION_FILE)
    collection = CollectionStats(
        label_lm=raw_cs["labelLm"],
        abstract_lm=raw_cs["abstractLm"],
        caption_cooccurrence=raw_cs["captionCooccurrence"],
        entity_table_count=raw_cs["entityTableCount"],
        table_count=raw_cs["tableCount"],
    )
    return IndexBundle(
        tables=tables,
        table_index=table_index,
        entity_index=entity_index,
        categories=categories,
        collection=collection,
        manifest=manifest,
    )
