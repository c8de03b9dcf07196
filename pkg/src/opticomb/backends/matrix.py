"""Matrix backends over three semirings: boolean, complex, and rational.

Objects are words of named finite dimensions, morphisms are matrices of
shape ``(dim(cod), dim(dom))``, and composition ``first`` then ``then`` is
``then @ first``.  All three semirings share the same compact closed
structure: the dual of a word reverses its factors, and cups and caps are
the flat pairing vectors, which satisfy both yanking identities on the
nose.

The boolean semiring is exact and fully enumerable, so it is the workhorse
for certified searches; the complex backend carries a tolerance and hosts
the positive-map constructions; the rational backend is exact arithmetic
for cross-checking numeric results.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Hashable, Mapping

import numpy as np

from ..core import (
    Backend,
    DimensionMismatch,
    HomSet,
    MorTerm,
    ObjectWord,
    TypeMismatch,
    UnknownGenerator,
)

SEMIRINGS = ("bool", "complex", "rational")


@dataclass(frozen=True, eq=False)
class Mat:
    """A matrix with its boundary words; shape is (dim(cod), dim(dom))."""

    dom: ObjectWord
    cod: ObjectWord
    array: np.ndarray

    def __repr__(self) -> str:
        return f"Mat({self.dom.pretty()} -> {self.cod.pretty()})"


def _as_fraction_array(data: Any) -> np.ndarray:
    arr = np.asarray(data, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    flat_in = arr.reshape(-1)
    flat_out = out.reshape(-1)
    for idx, x in enumerate(flat_in):
        flat_out[idx] = x if isinstance(x, Fraction) else Fraction(x)
    return out


class MatrixBackend(Backend):
    """Free matrix category on named dimensions, over a chosen semiring.

    ``dims`` names the generating objects; ``generators`` maps a morphism
    name to ``(dom, cod, entries)`` where dom and cod may be words or their
    string form and entries is anything ``np.asarray`` accepts.
    """

    compact_closed = True
    has_dagger = True
    braid_conclusive = True

    def __init__(
        self,
        dims: Mapping[str, int],
        generators: Mapping[str, tuple[Any, Any, Any]] | None = None,
        semiring: str = "complex",
        tolerance: float = 1e-9,
        name: str | None = None,
    ):
        if semiring not in SEMIRINGS:
            raise ValueError(f"unknown semiring {semiring!r}, expected one of {SEMIRINGS}")
        for obj, d in dims.items():
            if d < 0:
                raise DimensionMismatch(f"object {obj} has negative dimension {d}")
        self.semiring = semiring
        self.dims = dict(dims)
        self.name = name or f"matrix[{semiring}]"
        self.tolerance = tolerance if semiring == "complex" else None
        self.enumerable = semiring == "bool"
        self._gens: dict[str, Mat] = {}
        for gname, (dom, cod, entries) in (generators or {}).items():
            self.add_generator(gname, dom, cod, entries)

    # -- construction ---------------------------------------------------------

    def add_generator(self, gname: str, dom: Any, cod: Any, entries: Any) -> Mat:
        dw = dom if isinstance(dom, ObjectWord) else ObjectWord.parse(dom)
        cw = cod if isinstance(cod, ObjectWord) else ObjectWord.parse(cod)
        m = self.mat(dw, cw, entries)
        self._gens[gname] = m
        return m

    def coerce(self, data: Any) -> np.ndarray:
        if self.semiring == "bool":
            return (np.asarray(data) != 0).astype(np.int64)
        if self.semiring == "rational":
            return _as_fraction_array(data)
        arr = np.asarray(data, dtype=np.complex128)
        if arr.ndim == 3 and arr.shape[-1] == 2:
            # [re, im] pair entries, the wire format for complex literals
            arr = arr[..., 0] + 1j * arr[..., 1]
        return arr

    def mat(self, dom: ObjectWord, cod: ObjectWord, entries: Any) -> Mat:
        arr = self.coerce(entries)
        expected = (self.dim(cod), self.dim(dom))
        if arr.shape != expected:
            raise DimensionMismatch(
                f"matrix for {dom.pretty()} -> {cod.pretty()} must have shape "
                f"{expected}, got {arr.shape}"
            )
        return Mat(dom, cod, arr)

    def dim(self, word: ObjectWord) -> int:
        total = 1
        for f in word:
            if f not in self.dims:
                raise UnknownGenerator(f"unknown object {f!r}")
            total *= self.dims[f]
        return total

    # -- signature ------------------------------------------------------------

    def object_names(self) -> tuple[str, ...]:
        return tuple(self.dims)

    def generator_names(self) -> tuple[str, ...]:
        return tuple(self._gens)

    def gen_type(self, name: str) -> tuple[ObjectWord, ObjectWord]:
        if name not in self._gens:
            raise UnknownGenerator(f"unknown morphism {name!r}")
        g = self._gens[name]
        return (g.dom, g.cod)

    def generator(self, name: str) -> Mat:
        if name not in self._gens:
            raise UnknownGenerator(f"unknown morphism {name!r}")
        return self._gens[name]

    # -- structure --------------------------------------------------------------

    def dom(self, m: Mat) -> ObjectWord:
        return m.dom

    def cod(self, m: Mat) -> ObjectWord:
        return m.cod

    def _eye(self, d: int) -> np.ndarray:
        if self.semiring == "bool":
            return np.eye(d, dtype=np.int64)
        if self.semiring == "rational":
            out = np.full((d, d), Fraction(0), dtype=object)
            for i in range(d):
                out[i, i] = Fraction(1)
            return out
        return np.eye(d, dtype=np.complex128)

    def identity(self, word: ObjectWord) -> Mat:
        return Mat(word, word, self._eye(self.dim(word)))

    def symmetry(self, left: ObjectWord, right: ObjectWord) -> Mat:
        dl, dr = self.dim(left), self.dim(right)
        arr = np.zeros((dl * dr, dl * dr), dtype=np.int64)
        for x in range(dl):
            for y in range(dr):
                arr[y * dl + x, x * dr + y] = 1
        return Mat(left @ right, right @ left, self.coerce(arr))

    def compose(self, first: Mat, then: Mat) -> Mat:
        self._require_composable(first, then)
        prod = np.dot(then.array, first.array)
        if self.semiring == "bool":
            prod = (prod > 0).astype(np.int64)
        return Mat(first.dom, then.cod, prod)

    def tensor(self, left: Mat, right: Mat) -> Mat:
        return Mat(
            left.dom @ right.dom, left.cod @ right.cod, np.kron(left.array, right.array)
        )

    def equal(self, m1: Mat, m2: Mat) -> bool:
        if m1.dom != m2.dom or m1.cod != m2.cod:
            raise TypeMismatch(
                f"cannot compare {m1.dom.pretty()} -> {m1.cod.pretty()} with "
                f"{m2.dom.pretty()} -> {m2.cod.pretty()}"
            )
        if self.semiring == "complex":
            return bool(np.allclose(m1.array, m2.array, rtol=0.0, atol=self.tolerance))
        return bool(np.array_equal(m1.array, m2.array))

    # -- enumeration --------------------------------------------------------------

    def enumerate_hom(self, dom: ObjectWord, cod: ObjectWord, budget: int) -> HomSet:
        """0/1 matrices by binary counting on row-major cells.

        Over the boolean semiring this is the whole hom-set, complete when it
        fits the budget; over the other semirings it is a deterministic
        spanning sample and never complete.
        """
        dd, dc = self.dim(dom), self.dim(cod)
        cells = dd * dc
        if cells == 0:
            empty = self.mat(dom, cod, np.zeros((dc, dd), dtype=np.int64))
            return HomSet((empty,), complete=True)
        total = 2 ** cells if cells < 63 else None
        count = total if total is not None and total <= budget else budget
        items = []
        for k in range(count):
            arr = np.zeros(cells, dtype=np.int64)
            for bit in range(cells):
                if (k >> bit) & 1:
                    arr[bit] = 1
            items.append(self.mat(dom, cod, arr.reshape(dc, dd)))
        complete = (
            self.semiring == "bool" and total is not None and total <= budget
        )
        return HomSet(tuple(items), complete=complete)

    # -- compact structure -----------------------------------------------------------

    def dual(self, word: ObjectWord) -> ObjectWord:
        return word.reversed()

    def cup(self, word: ObjectWord) -> Mat:
        d = self.dim(word)
        arr = np.zeros((d * d, 1), dtype=np.int64)
        for i in range(d):
            arr[i * d + i, 0] = 1
        return Mat(ObjectWord.unit(), self.dual(word) @ word, self.coerce(arr))

    def cap(self, word: ObjectWord) -> Mat:
        d = self.dim(word)
        arr = np.zeros((1, d * d), dtype=np.int64)
        for i in range(d):
            arr[0, i * d + i] = 1
        return Mat(word @ self.dual(word), ObjectWord.unit(), self.coerce(arr))

    # -- dagger ------------------------------------------------------------------------

    def dagger(self, m: Mat) -> Mat:
        arr = m.array.conj().T if self.semiring == "complex" else m.array.T.copy()
        return Mat(m.cod, m.dom, arr)

    def conjugate(self, m: Mat) -> Mat:
        arr = m.array.conj() if self.semiring == "complex" else m.array.copy()
        return Mat(m.dom, m.cod, arr)

    # -- hooks ----------------------------------------------------------------------------

    def extension_word_len_needed(
        self,
        source: tuple[ObjectWord, ObjectWord],
        target: tuple[ObjectWord, ObjectWord],
    ) -> int | None:
        # the swap filler at context (B', B) recovers the braid value, and the
        # braid value settles filler agreement here
        hole_in, hole_out = target
        return max(len(hole_in), len(hole_out))

    def canonical_key(self, m: Mat) -> Hashable:
        if self.semiring == "bool":
            return ("mat", m.dom, m.cod, m.array.astype(np.uint8).tobytes())
        if self.semiring == "rational":
            return ("mat", m.dom, m.cod, tuple(m.array.reshape(-1)))
        rounded = np.round(m.array + 0.0, 9) + 0.0
        return ("mat", m.dom, m.cod, rounded.tobytes())

    def value_to_term(self, m: Mat) -> MorTerm | None:
        return None
