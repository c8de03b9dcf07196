"""Hunt for a filler that separates braid-equal combs.

On every bundled theory, equality of braid values is conclusive for the
filler relation, so this search is expected to come back empty.  It
exists to keep that claim falsifiable: a hit would print the context,
the filler, and the two differing values, and would mean the braid
shortcut is unsound on that theory.

Usage: python3 scripts/search_sigma_congruence.py [--bound 1] [--max-pairs 400]
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from opticomb import (  # noqa: E402
    FinFunBackend,
    IdempotentFreeBackend,
    MatrixBackend,
    ObjectWord,
    PointedFreeBackend,
    sigma_congruence_search,
)


def cases():
    a = ObjectWord.of("a")
    b = ObjectWord.of("b")
    s = ObjectWord.of("s")
    yield IdempotentFreeBackend(), [(a, a, a, a), (a @ a, a @ a, a, a)]
    yield PointedFreeBackend(), [(ObjectWord.unit(), ObjectWord.unit(), a, a)]
    yield MatrixBackend({"b": 2}, semiring="bool"), [(b, b, b, b)]
    yield FinFunBackend({"s": 2}), [(s, s, s, s)]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--bound", type=int, default=1)
    parser.add_argument("--max-pairs", type=int, default=400)
    args = parser.parse_args()

    found_any = False
    for backend, boundaries in cases():
        witness = sigma_congruence_search(
            backend, boundaries, bound=args.bound, max_pairs=args.max_pairs
        )
        if witness is None:
            print(f"{backend.name}: no separating filler (as predicted)")
        else:
            found_any = True
            print(f"{backend.name}: SEPARATING FILLER FOUND")
            print(f"  context: ({witness.c_word.pretty()}, {witness.d_word.pretty()})")
            print(f"  probe: {witness.probe!r}")
            print(f"  left:  {witness.left!r}")
            print(f"  right: {witness.right!r}")
    return 1 if found_any else 0


if __name__ == "__main__":
    raise SystemExit(main())
