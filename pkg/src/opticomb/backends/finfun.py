"""Finite sets and functions, with cartesian structure.

Objects are words of named finite sets; an object word denotes the product
of its factors, with elements encoded as mixed-radix integers (leftmost
factor most significant).  Morphisms are total functions stored as flat
lookup tables.  The backend is cartesian (copy, delete, projections, a
chosen point) and exactly enumerable.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Hashable, Mapping

from ..core import (
    Backend,
    DimensionMismatch,
    HomSet,
    NotInhabited,
    ObjectWord,
    TypeMismatch,
    UnknownGenerator,
)


@dataclass(frozen=True)
class FinMap:
    """A function between finite products; table[i] is the image of element i."""

    dom: ObjectWord
    cod: ObjectWord
    table: tuple[int, ...]

    def __repr__(self) -> str:
        return f"FinMap({self.dom.pretty()} -> {self.cod.pretty()}, {self.table})"


class FinFunBackend(Backend):
    cartesian = True
    enumerable = True
    # functions sit faithfully inside boolean matrices as their graphs, so
    # braid values settle filler agreement
    braid_conclusive = True

    def __init__(
        self,
        sizes: Mapping[str, int],
        generators: Mapping[str, tuple[Any, Any, Any]] | None = None,
        name: str = "finfun",
    ):
        for obj, s in sizes.items():
            if s < 0:
                raise DimensionMismatch(f"object {obj} has negative size {s}")
        self.sizes = dict(sizes)
        self.name = name
        self._gens: dict[str, FinMap] = {}
        for gname, (dom, cod, table) in (generators or {}).items():
            self.add_generator(gname, dom, cod, table)

    # -- construction ----------------------------------------------------------

    def add_generator(self, gname: str, dom: Any, cod: Any, table: Any) -> FinMap:
        dw = dom if isinstance(dom, ObjectWord) else ObjectWord.parse(dom)
        cw = cod if isinstance(cod, ObjectWord) else ObjectWord.parse(cod)
        m = self.fun(dw, cw, table)
        self._gens[gname] = m
        return m

    def fun(self, dom: ObjectWord, cod: ObjectWord, table: Any) -> FinMap:
        tab = tuple(int(x) for x in table)
        nd, nc = self.size(dom), self.size(cod)
        if len(tab) != nd:
            raise DimensionMismatch(
                f"table for {dom.pretty()} -> {cod.pretty()} must have {nd} entries, "
                f"got {len(tab)}"
            )
        for x in tab:
            if not 0 <= x < nc:
                raise DimensionMismatch(f"table value {x} outside codomain of size {nc}")
        return FinMap(dom, cod, tab)

    def size(self, word: ObjectWord) -> int:
        total = 1
        for f in word:
            if f not in self.sizes:
                raise UnknownGenerator(f"unknown object {f!r}")
            total *= self.sizes[f]
        return total

    # -- signature ----------------------------------------------------------------

    def object_names(self) -> tuple[str, ...]:
        return tuple(self.sizes)

    def generator_names(self) -> tuple[str, ...]:
        return tuple(self._gens)

    def gen_type(self, name: str) -> tuple[ObjectWord, ObjectWord]:
        if name not in self._gens:
            raise UnknownGenerator(f"unknown morphism {name!r}")
        g = self._gens[name]
        return (g.dom, g.cod)

    def generator(self, name: str) -> FinMap:
        if name not in self._gens:
            raise UnknownGenerator(f"unknown morphism {name!r}")
        return self._gens[name]

    # -- structure --------------------------------------------------------------------

    def dom(self, m: FinMap) -> ObjectWord:
        return m.dom

    def cod(self, m: FinMap) -> ObjectWord:
        return m.cod

    def identity(self, word: ObjectWord) -> FinMap:
        return FinMap(word, word, tuple(range(self.size(word))))

    def symmetry(self, left: ObjectWord, right: ObjectWord) -> FinMap:
        nl, nr = self.size(left), self.size(right)
        table = tuple(y * nl + x for x in range(nl) for y in range(nr))
        return FinMap(left @ right, right @ left, table)

    def compose(self, first: FinMap, then: FinMap) -> FinMap:
        self._require_composable(first, then)
        return FinMap(first.dom, then.cod, tuple(then.table[x] for x in first.table))

    def tensor(self, left: FinMap, right: FinMap) -> FinMap:
        ncr = self.size(right.cod)
        ndr = self.size(right.dom)
        table = tuple(
            left.table[x] * ncr + right.table[y]
            for x in range(self.size(left.dom))
            for y in range(ndr)
        )
        return FinMap(left.dom @ right.dom, left.cod @ right.cod, table)

    def equal(self, m1: FinMap, m2: FinMap) -> bool:
        if m1.dom != m2.dom or m1.cod != m2.cod:
            raise TypeMismatch(
                f"cannot compare {m1.dom.pretty()} -> {m1.cod.pretty()} with "
                f"{m2.dom.pretty()} -> {m2.cod.pretty()}"
            )
        return m1.table == m2.table

    # -- enumeration ---------------------------------------------------------------------

    def enumerate_hom(self, dom: ObjectWord, cod: ObjectWord, budget: int) -> HomSet:
        nd, nc = self.size(dom), self.size(cod)
        if nc == 0:
            if nd == 0:
                return HomSet((FinMap(dom, cod, ()),), complete=True)
            return HomSet((), complete=True)
        total = nc ** nd
        count = min(total, budget)
        items = []
        for k in range(count):
            table = []
            rest = k
            for _ in range(nd):
                table.append(rest % nc)
                rest //= nc
            items.append(FinMap(dom, cod, tuple(table)))
        return HomSet(tuple(items), complete=total <= budget)

    # -- cartesian structure ------------------------------------------------------------------

    def copy(self, word: ObjectWord) -> FinMap:
        n = self.size(word)
        return FinMap(word, word @ word, tuple(x * n + x for x in range(n)))

    def delete(self, word: ObjectWord) -> FinMap:
        return FinMap(word, ObjectWord.unit(), tuple(0 for _ in range(self.size(word))))

    def proj1(self, left: ObjectWord, right: ObjectWord) -> FinMap:
        nl, nr = self.size(left), self.size(right)
        table = tuple(x for x in range(nl) for _ in range(nr))
        return FinMap(left @ right, left, table)

    def proj2(self, left: ObjectWord, right: ObjectWord) -> FinMap:
        nl, nr = self.size(left), self.size(right)
        table = tuple(y for _ in range(nl) for y in range(nr))
        return FinMap(left @ right, right, table)

    def inhabitant(self, word: ObjectWord) -> FinMap:
        if self.size(word) == 0:
            raise NotInhabited(f"{word.pretty()} has no elements")
        return FinMap(ObjectWord.unit(), word, (0,))

    # -- hooks -------------------------------------------------------------------------------------

    def extension_word_len_needed(
        self,
        source: tuple[ObjectWord, ObjectWord],
        target: tuple[ObjectWord, ObjectWord],
    ) -> int | None:
        hole_in, hole_out = target
        return max(len(hole_in), len(hole_out))

    def canonical_key(self, m: FinMap) -> Hashable:
        return ("fun", m.dom, m.cod, m.table)


def functions_as_boolean_matrices(ff: FinFunBackend):
    """The graph model of a function backend inside boolean matrices.

    Returns ``(matrix_backend, value_map)`` where the matrix backend has one
    dimension per named set and ``value_map`` sends a function to its 0/1
    graph matrix, columns indexed by the domain.  The map preserves
    identities, composition, tensor, and symmetries, and is injective on
    every hom-set.
    """
    import numpy as np

    from .matrix import Mat, MatrixBackend

    target = MatrixBackend(dims=dict(ff.sizes), generators={}, semiring="bool")

    def value_map(m: FinMap) -> Mat:
        nr = target.dim(m.cod)
        nc = target.dim(m.dom)
        arr = np.zeros((nr, nc), dtype=np.int64)
        for i, j in enumerate(m.table):
            arr[j, i] = 1
        return Mat(m.dom, m.cod, arr)

    for gname in ff.generator_names():
        g = ff.generator(gname)
        target.add_generator(gname, g.dom, g.cod, value_map(g).array)
    return target, value_map
