#!/usr/bin/env python3
"""Generate a synthetic corpus + KB pair for scale experiments."""

import argparse
from pathlib import Path

from tablecomplete.synth import SynthConfig, write_synthetic_corpus


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--tables", type=int, default=100_000)
    parser.add_argument("--entities", type=int, default=50_000)
    parser.add_argument("--categories", type=int, default=2_000)
    parser.add_argument("--head-entities", type=int, default=500)
    parser.add_argument("--label-vocab", type=int, default=400)
    parser.add_argument("--caption-vocab", type=int, default=2_000)
    parser.add_argument("--rng-seed", type=int, default=11)
    parser.add_argument("--out-dir", type=Path, default=Path("data"))
    args = parser.parse_args()

    cfg = SynthConfig(
        tables=args.tables,
        entities=args.entities,
        categories=args.categories,
        head_entities=args.head_entities,
        label_vocab=args.label_vocab,
        caption_vocab=args.caption_vocab,
        rng_seed=args.rng_seed,
    )
    args.out_dir.mkdir(parents=True, exist_ok=True)
    corpus = args.out_dir / "corpus.jsonl"
    kb = args.out_dir / "kb.jsonl"
    write_synthetic_corpus(cfg, corpus, kb)
    print(f"wrote {corpus} ({args.tables} tables) and {kb} ({args.entities} entities)")


if __name__ == "__main__":
    main()
