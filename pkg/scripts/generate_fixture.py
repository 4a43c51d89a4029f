#!/usr/bin/env python3
"""Regenerate the bundled evaluation corpus in place (or to --out).

The generator is deterministic; rerunning with the default seed must
reproduce the shipped files byte for byte.
"""

from __future__ import annotations

import argparse

from senselab.fixtures import DEFAULT_SEED, bundled_corpus_dir, generate_corpus, write_corpus


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--out", default=None,
                        help="output directory (default: the packaged data dir)")
    args = parser.parse_args()

    corpus = generate_corpus(args.seed)
    out_dir = args.out or bundled_corpus_dir()
    write_corpus(corpus, out_dir)
    print(f"wrote {len(corpus.events)} events, "
          f"{len(corpus.inquiries) + len(corpus.exemplars)} inquiries -> {out_dir}")


if __name__ == "__main__":
    main()
