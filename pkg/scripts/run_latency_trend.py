#!/usr/bin/env python3
"""End-to-end response-time experiment: generate, build, bench both modes, fit a line.

Suggestion latency should grow roughly linearly with seed size in both
modes, with column population slower than row population because it scores
against every related table. Pass --top-k to cap the related-table routes
and observe how the cap trades completeness for latency.
"""

import argparse
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

from tablecomplete.cli import run as cli_run
from tablecomplete.synth import SynthConfig, write_synthetic_corpus


def linear_fit(sizes, means):
    x = np.asarray(sizes, dtype=float)
    y = np.asarray(means, dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    predicted = slope * x + intercept
    r2 = 1.0 - float(((y - predicted) ** 2).sum()) / float(((y - y.mean()) ** 2).sum())
    return slope, intercept, r2


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--tables", type=int, default=100_000)
    parser.add_argument("--entities", type=int, default=50_000)
    parser.add_argument("--sizes", default="1,2,3,4,5")
    parser.add_argument("--repeats", type=int, default=10)
    parser.add_argument("--seeds", type=int, default=10)
    parser.add_argument("--top-k", type=int, default=1_000_000,
                        help="related-table cap; default is effectively uncapped")
    parser.add_argument("--work-dir", type=Path, default=None)
    args = parser.parse_args()

    work = args.work_dir or Path(tempfile.mkdtemp(prefix="latency-trend-"))
    work.mkdir(parents=True, exist_ok=True)
    corpus, kb, index = work / "corpus.jsonl", work / "kb.jsonl", work / "idx"

    print(f"work dir: {work}")
    cfg = SynthConfig(
        tables=args.tables,
        entities=args.entities,
        categories=2_000,
        head_entities=500,
        label_vocab=400,
        rng_seed=11,
    )
    write_synthetic_corpus(cfg, corpus, kb)
    if cli_run(["build", "--corpus", str(corpus), "--kb", str(kb), "--out", str(index)]) != 0:
        return 1

    sizes = [int(s) for s in args.sizes.split(",")]
    means = {}
    for mode in ("rows", "columns"):
        # Bench in a fresh process so each mode starts from a cold, identical heap.
        report_path = work / f"{mode}.json"
        command = [
            sys.executable, "-m", "tablecomplete.cli", "bench",
            "--index", str(index), "--mode", mode,
            "--sizes", args.sizes, "--repeats", str(args.repeats),
            "--sample", str(args.seeds), "--rng-seed", "13",
            "--top-k", str(args.top_k), "--json", str(report_path),
        ]
        subprocess.run(command, check=True)
        report = json.loads(report_path.read_text())
        means[mode] = [bucket["meanMicros"] for bucket in report["perSize"]]

    print()
    for mode in ("rows", "columns"):
        slope, intercept, r2 = linear_fit(sizes, means[mode])
        pretty = ", ".join(f"{m / 1000:.1f}ms" for m in means[mode])
        print(f"{mode:>8}: [{pretty}]  fit slope={slope / 1000:.2f}ms/size  R2={r2:.4f}")
    slower = all(c > r for r, c in zip(means["rows"], means["columns"]))
    print(f"columns slower than rows at every size: {slower}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
