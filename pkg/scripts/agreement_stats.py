"""Tabulate how the filler and sliding relations line up on small theories.

Enumerates comb representatives over a few boundaries, decides every pair
under both relations, and counts the verdict combinations.  The row to
watch is filler-equivalent pairs that sliding separates: those are the
pairs the coarser relation glues together.

Usage: python3 scripts/agreement_stats.py [--bound 1] [--max-pairs 300]
"""
from __future__ import annotations

import argparse
import itertools
import sys
from collections import Counter
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from opticomb import (  # noqa: E402
    IdempotentFreeBackend,
    MatrixBackend,
    ObjectWord,
    Verdict,
    enumerate_combs,
    equiv_comb,
    equiv_optic,
)


def backends():
    idem = IdempotentFreeBackend()
    a = ObjectWord.of("a")
    yield idem, [((a, a), (a, a)), ((a @ a, a @ a), (a, a))]
    boolm = MatrixBackend({"b": 2}, semiring="bool")
    b = ObjectWord.of("b")
    yield boolm, [((b, b), (b, b))]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--bound", type=int, default=1)
    parser.add_argument("--max-pairs", type=int, default=300)
    args = parser.parse_args()

    for backend, boundaries in backends():
        print(f"backend: {backend.name}")
        for source, target in boundaries:
            reps = list(enumerate_combs(backend, source, target, bound=args.bound))
            table: Counter[tuple[str, str]] = Counter()
            pairs = 0
            for c1, c2 in itertools.combinations(reps, 2):
                if pairs >= args.max_pairs:
                    break
                pairs += 1
                d_comb = equiv_comb(backend, c1, c2, bound=args.bound)
                d_opt = equiv_optic(backend, c1, c2, bound=args.bound)
                table[(d_comb.verdict.value, d_opt.verdict.value)] += 1
            label = (
                f"  ({source[0].pretty()},{source[1].pretty()}) with hole "
                f"({target[0].pretty()},{target[1].pretty()})"
            )
            print(f"{label}: {len(reps)} representatives, {pairs} pairs")
            for (vc, vo), count in sorted(table.items()):
                print(f"    filler={vc:<10} sliding={vo:<10} {count}")
            glued = table.get(
                (Verdict.EQUIVALENT.value, Verdict.DISTINCT.value), 0
            )
            print(f"    pairs glued by the filler relation: {glued}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
