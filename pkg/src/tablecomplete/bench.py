"""Latency benchmark: time engine-only suggestion calls over varying seed sizes.

Seeds are full corpus tables; for each requested size the seed is truncated
to that many core entities (rows mode) or heading labels (columns mode) and
the engine call is timed around candidate selection plus ranking only, so
the numbers exclude serialization and transport. Requests run sequentially;
latency, not throughput, is the quantity of interest.
"""

from __future__ import annotations

import json
import math
import random
import statistics
import time
from dataclasses import dataclass, field
from typing import Sequence

from .columns import suggest_columns
from .indexstore import IndexBundle
from .model import ScoringParams, SeedTable, normalize_label
from .rows import suggest_rows

MODES = ("rows", "columns")
DEFAULT_SUGGESTION_LIMIT = 10


@dataclass(frozen=True)
class SizeBucket:
    size: int
    samples: int
    skipped_seeds: int
    mean_micros: float
    p50_micros: float
    p95_micros: float
    min_micros: float
    max_micros: float


@dataclass
class BenchReport:
    mode: str
    sizes: list[int]
    repeats: int
    seed_count: int
    corpus_fingerprint: str
    buckets: list[SizeBucket] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "sizes": self.sizes,
            "repeats": self.repeats,
            "seedCount": self.seed_count,
            "corpusFingerprint": self.corpus_fingerprint,
            "perSize": [
                {
                    "size": b.size,
                    "samples": b.samples,
                    "skippedSeeds": b.skipped_seeds,
                    "meanMicros": b.mean_micros,
                    "p50Micros": b.p50_micros,
                    "p95Micros": b.p95_micros,
                    "minMicros": b.min_micros,
                    "maxMicros": b.max_micros,
                }
                for b in self.buckets
            ],
        }

    def human_table(self) -> str:
        header = f"{'size':>6} {'samples':>8} {'skipped':>8} {'mean(us)':>12} {'p50(us)':>12} {'p95(us)':>12}"
        lines = [f"mode: {self.mode}   repeats: {self.repeats}   seeds: {self.seed_count}", header]
        for b in self.buckets:
            lines.append(
                f"{b.size:>6} {b.samples:>8} {b.skipped_seeds:>8} "
                f"{b.mean_micros:>12.1f} {b.p50_micros:>12.1f} {b.p95_micros:>12.1f}"
            )
        return "\n".join(lines)


def _percentile(sorted_samples: Sequence[float], q: float) -> float:
    """Nearest-rank percentile over raw samples."""
    rank = max(1, math.ceil(q / 100.0 * len(sorted_samples)))
    return sorted_samples[rank - 1]


def seed_from_table_json(obj: dict) -> SeedTable:
    """Build a seed from either a corpus-table object or a bare seed object."""
    if "rows" in obj or "headers" in obj:
        core_index = obj.get("coreColumnIndex", 0)
        entities: list[str] = []
        seen: set[str] = set()
        if "coreEntities" in obj:
            for entity_id in obj["coreEntities"]:
                if entity_id not in seen:
                    seen.add(entity_id)
                    entities.append(entity_id)
        else:
            for row in obj.get("rows", []):
                if core_index < len(row):
                    entity_id = row[core_index].get("entityId")
                    if entity_id and entity_id not in seen:
                        seen.add(entity_id)
                        entities.append(entity_id)
        labels = _dedupe_labels(obj.get("headers", []))
        return SeedTable(caption=obj.get("caption", ""), entities=tuple(entities), labels=labels)
    return SeedTable(
        caption=obj.get("caption", ""),
        entities=tuple(obj.get("entities", [])),
        labels=_dedupe_labels(obj.get("labels", [])),
    )


def _dedupe_labels(raw_labels: Sequence[str]) -> tuple[str, ...]:
    seen: set[str] = set()
    out: list[str] = []
    for raw in raw_labels:
        norm = normalize_label(raw)
        if norm and norm not in seen:
            seen.add(norm)
            out.append(raw)
    return tuple(out)


def load_seeds_file(path) -> list[SeedTable]:
    seeds: list[SeedTable] = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            if line.strip():
                seeds.append(seed_from_table_json(json.loads(line)))
    return seeds


def sample_seeds(bundle: IndexBundle, n: int, rng_seed: int) -> list[SeedTable]:
    """Draw ``n`` corpus tables as seeds, deterministically for a given RNG seed."""
    rng = random.Random(rng_seed)
    table_ids = sorted(bundle.tables)
    chosen = rng.sample(table_ids, k=min(n, len(table_ids)))
    seeds = []
    for table_id in chosen:
        table = bundle.tables[table_id]
        seeds.append(
            SeedTable(
                caption=table.caption,
                entities=table.core_entities,
                labels=_dedupe_labels(table.labels),
            )
        )
    return seeds


def _truncate(seed: SeedTable, mode: str, size: int) -> SeedTable | None:
    if mode == "rows":
        if len(seed.entities) < size:
            return None
        return SeedTable(caption=seed.caption, entities=seed.entities[:size], labels=seed.labels)
    if len(seed.labels) < size:
        return None
    return SeedTable(caption=seed.caption, entities=seed.entities, labels=seed.labels[:size])


def run_bench(
    bundle: IndexBundle,
    seeds: Sequence[SeedTable],
    mode: str,
    sizes: Sequence[int],
    repeats: int,
    params: ScoringParams,
    corpus_fingerprint: str = "",
    limit: int = DEFAULT_SUGGESTION_LIMIT,
    warmup: bool = True,
) -> BenchReport:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    engine = suggest_rows if mode == "rows" else suggest_columns

    report = BenchReport(
        mode=mode,
        sizes=list(sizes),
        repeats=repeats,
        seed_count=len(seeds),
        corpus_fingerprint=corpus_fingerprint,
    )
    for size in sizes:
        samples: list[float] = []
        skipped = 0
        for seed in seeds:
            truncated = _truncate(seed, mode, size)
            if truncated is None:
                skipped += 1
                continue
            if warmup:  # one untimed call so cold caches do not skew the samples
                engine(truncated, bundle, params, limit)
            for _ in range(repeats):
                started = time.perf_counter_ns()
                engine(truncated, bundle, params, limit)
                samples.append((time.perf_counter_ns() - started) / 1000.0)
        if samples:
            ordered = sorted(samples)
            bucket = SizeBucket(
                size=size,
                samples=len(samples),
                skipped_seeds=skipped,
                mean_micros=statistics.fmean(samples),
                p50_micros=_percentile(ordered, 50.0),
                p95_micros=_percentile(ordered, 95.0),
                min_micros=ordered[0],
                max_micros=ordered[-1],
            )
        else:
            bucket = SizeBucket(
                size=size,
                samples=0,
                skipped_seeds=skipped,
                mean_micros=0.0,
                p50_micros=0.0,
                p95_micros=0.0,
                min_micros=0.0,
                max_micros=0.0,
            )
        report.buckets.append(bucket)
    return report
