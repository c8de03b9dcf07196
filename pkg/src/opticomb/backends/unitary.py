"""Unitary matrices between words of named finite dimensions.

Values reuse the complex :class:`Mat` wrapper; every generator is checked
unitary at declaration, and identities, symmetries, composites, and
tensors all stay unitary.  There is no compact structure (pairing vectors
are not unitary), but braid values still settle filler agreement because
the same values sit inside the full complex matrix category.
"""
from __future__ import annotations

from typing import Any, Hashable, Mapping

import numpy as np

from ..core import DimensionMismatch, NotEnumerable, ObjectWord
from .matrix import Mat, MatrixBackend


class UnitaryBackend(MatrixBackend):
    compact_closed = False
    enumerable = False
    unitary_values = True
    braid_conclusive = True

    def __init__(
        self,
        dims: Mapping[str, int],
        generators: Mapping[str, tuple[Any, Any, Any]] | None = None,
        tolerance: float = 1e-9,
        name: str | None = None,
    ):
        super().__init__(
            dims, None, semiring="complex", tolerance=tolerance,
            name=name or "unitary",
        )
        self.enumerable = False
        for gname, (dom, cod, entries) in (generators or {}).items():
            self.add_generator(gname, dom, cod, entries)

    def mat(self, dom: ObjectWord, cod: ObjectWord, entries: Any) -> Mat:
        m = super().mat(dom, cod, entries)
        d = self.dim(dom)
        if self.dim(cod) != d:
            raise DimensionMismatch(
                f"unitary {dom.pretty()} -> {cod.pretty()} must preserve dimension"
            )
        gram = m.array.conj().T @ m.array
        if not np.allclose(gram, np.eye(d), rtol=0.0, atol=max(self.tolerance, 1e-9) * 10):
            raise DimensionMismatch(
                f"matrix for {dom.pretty()} -> {cod.pretty()} is not unitary"
            )
        return m

    def enumerate_hom(self, dom: ObjectWord, cod: ObjectWord, budget: int):
        raise NotEnumerable("unitary hom-sets are a continuum")

    def dual(self, word: ObjectWord) -> ObjectWord:
        raise self._no_compact()

    def cup(self, word: ObjectWord) -> Mat:
        raise self._no_compact()

    def cap(self, word: ObjectWord) -> Mat:
        raise self._no_compact()

    def _no_compact(self):
        from ..core import NotCompactClosed

        return NotCompactClosed("pairing vectors are not unitary")

    def canonical_key(self, m: Mat) -> Hashable:
        rounded = np.round(m.array + 0.0, 9) + 0.0
        return ("unitary", m.dom, m.cod, rounded.tobytes())


def tensor_separate(u: np.ndarray, d_left: int, d_right: int, tolerance: float = 1e-9):
    """Split ``u`` on a d_left*d_right space as ``u_left tensor identity``.

    Returns ``(u_left, residual)`` where ``u_left`` is the compression of
    ``u`` onto the first basis vector of the right factor and residual is
    the max-abs deviation of ``u`` from ``kron(u_left, eye(d_right))``.
    A residual within tolerance certifies the split.
    """
    if u.shape != (d_left * d_right, d_left * d_right):
        raise DimensionMismatch(
            f"expected a square matrix on {d_left}*{d_right}, got {u.shape}"
        )
    blocks = u.reshape(d_left, d_right, d_left, d_right)
    u_left = blocks[:, 0, :, 0].copy()
    residual = float(np.max(np.abs(u - np.kron(u_left, np.eye(d_right)))))
    return u_left, residual
