"""Deterministic generators of objects, morphisms, and combs for searches.

Everything here iterates in a fixed order so that searches, experiment
scripts, and frozen test values are reproducible run to run.
"""
from __future__ import annotations

from typing import Iterator

import numpy as np

from .core import Backend, Budget, ObjectWord
from .comb import CombRep, comb


def words_of_length(backend: Backend, length: int) -> list[ObjectWord]:
    """All normalized object words of exactly this many factors, deduplicated."""
    names = sorted(backend.object_names())
    out: dict[ObjectWord, None] = {}
    def rec(prefix: tuple[str, ...]):
        if len(prefix) == length:
            out.setdefault(backend.normalize_word(ObjectWord(prefix)), None)
            return
        for n in names:
            rec(prefix + (n,))
    rec(())
    return list(out.keys())


def env_words_for(
    backend: Backend,
    source: tuple[ObjectWord, ObjectWord],
    target: tuple[ObjectWord, ObjectWord],
    bound: int,
) -> tuple[list[ObjectWord], bool]:
    """Candidate environment words for combs on a boundary.

    Returns ``(words, graded)`` where graded means the backend pinned the
    possible environment lengths exactly, so the list is exhaustive.
    """
    lengths = backend.env_lengths_for_boundary(source, target)
    if lengths is None:
        return (
            [w for k in range(bound + 1) for w in words_of_length(backend, k)],
            False,
        )
    return ([w for k in lengths for w in words_of_length(backend, k)], True)


def enumerate_combs(
    backend: Backend,
    source: tuple[ObjectWord, ObjectWord],
    target: tuple[ObjectWord, ObjectWord],
    bound: int = 2,
) -> Iterator[CombRep]:
    """All comb representatives within the budget, in a fixed order."""
    budget = Budget.of(bound)
    (a, a1), (b, b1) = source, target
    envs, _ = env_words_for(backend, source, target, bound)
    for e in envs:
        bottoms = backend.enumerate_hom(a, e @ b, budget.max_hom)
        tops = backend.enumerate_hom(e @ b1, a1, budget.max_hom)
        for f in bottoms.items:
            for g in tops.items:
                yield comb(backend, f, g, e)


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    """Haar-ish unitary from the QR factorization of a complex gaussian."""
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    phases = np.diag(r).copy()
    phases = phases / np.abs(phases)
    return q * phases


def random_isometry(rng: np.random.Generator, d_in: int, d_out: int) -> np.ndarray:
    """A d_out x d_in matrix with orthonormal columns (requires d_out >= d_in)."""
    if d_out < d_in:
        raise ValueError("an isometry needs d_out >= d_in")
    u = random_unitary(rng, d_out)
    return u[:, :d_in]
