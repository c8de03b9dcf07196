"""Completely positive maps from dagger combs over complex matrices.

A dagger comb is a comb whose top is the adjoint of its bottom: taking
``f : A -> E (x) B`` with ``g = dagger(f)`` and tracing out the
environment turns the comb into the channel ``rho -> sum_x K_x rho
K_x^+``, where the Kraus pieces ``K_x`` are the row blocks of f's matrix
indexed by the environment basis.

Two independent equality routes are kept deliberately separate:

* ``cpm_equiv`` compares transfer matrices, the full linear action on
  vectorized inputs.
* ``cpinf_equiv`` never looks at transfer matrices: it pushes a spanning
  family of rank-one positive inputs through both channels via their
  Kraus pieces and compares outputs.  The family (basis projectors plus
  pairwise real and imaginary mixtures) spans all hermitian inputs, and
  channels are determined by their action on hermitian inputs, so full
  agreement on the family is conclusive, not just evidence.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    Backend,
    CategoryError,
    Decision,
    FactorWitness,
    NotDaggerBackend,
    ObjectWord,
    ProbeWitness,
)
from .backends.matrix import MatrixBackend
from .comb import CombRep, comb as make_comb


def dagger_comb(backend: Backend, f, env: ObjectWord) -> CombRep:
    """The comb whose top is the adjoint of its bottom."""
    if not backend.has_dagger:
        raise NotDaggerBackend(f"{backend.name} has no adjoints")
    return make_comb(backend, f, backend.dagger(f), env)


def is_dagger_comb(backend: Backend, c: CombRep) -> bool:
    if not backend.has_dagger:
        return False
    if c.source[0] != c.source[1] or c.target[0] != c.target[1]:
        return False
    return backend.equal(c.g, backend.dagger(c.f))


@dataclass(frozen=True)
class CpmMorphism:
    """A channel with its boundary words, Kraus pieces, and transfer matrix.

    The transfer matrix acts on row-major vectorizations: with
    ``vec(rho)[a*d+a'] = rho[a, a']``, it is ``sum_x kron(K_x, conj(K_x))``.
    """

    in_word: ObjectWord
    out_word: ObjectWord
    in_dim: int
    out_dim: int
    kraus: tuple
    transfer: np.ndarray

    def apply(self, rho: np.ndarray) -> np.ndarray:
        out = np.zeros((self.out_dim, self.out_dim), dtype=np.complex128)
        for k in self.kraus:
            out += k @ rho @ k.conj().T
        return out

    def choi(self) -> np.ndarray:
        return choi_matrix(self.transfer, self.in_dim, self.out_dim)

    def is_completely_positive(self, tolerance: float = 1e-9) -> bool:
        return is_completely_positive(self.transfer, self.in_dim, self.out_dim, tolerance)

    def is_trace_preserving(self, tolerance: float = 1e-9) -> bool:
        acc = np.zeros((self.in_dim, self.in_dim), dtype=np.complex128)
        for k in self.kraus:
            acc += k.conj().T @ k
        return bool(np.allclose(acc, np.eye(self.in_dim), rtol=0.0, atol=tolerance))


def kraus_slices(f_array: np.ndarray, env_dim: int, out_dim: int) -> tuple:
    """Row blocks of an ``A -> E (x) B`` matrix, one per environment index."""
    if f_array.shape[0] != env_dim * out_dim:
        raise CategoryError(
            f"cannot slice: {f_array.shape[0]} rows is not {env_dim} x {out_dim}"
        )
    return tuple(
        f_array[x * out_dim : (x + 1) * out_dim, :].copy() for x in range(env_dim)
    )


def to_cpm(backend: MatrixBackend, c: CombRep) -> CpmMorphism:
    """Trace out the environment of a dagger comb."""
    if not isinstance(backend, MatrixBackend) or backend.semiring != "complex":
        raise CategoryError("channels need a complex matrix backend")
    if not is_dagger_comb(backend, c):
        raise CategoryError(
            "only dagger combs (top adjoint to bottom) define channels"
        )
    a = c.source[0]
    b = c.target[0]
    d_a, d_b, d_e = backend.dim(a), backend.dim(b), backend.dim(c.env)
    kraus = kraus_slices(c.f.array, d_e, d_b)
    transfer = np.zeros((d_b * d_b, d_a * d_a), dtype=np.complex128)
    for k in kraus:
        transfer += np.kron(k, k.conj())
    return CpmMorphism(a, b, d_a, d_b, kraus, transfer)


def choi_matrix(transfer: np.ndarray, in_dim: int, out_dim: int) -> np.ndarray:
    """Reshuffle a transfer matrix into its Choi form.

    ``choi[(a,b), (a',b')] = transfer[(b,b'), (a,a')]``; positivity of this
    matrix is complete positivity of the channel.
    """
    t4 = transfer.reshape(out_dim, out_dim, in_dim, in_dim)
    return t4.transpose(2, 0, 3, 1).reshape(in_dim * out_dim, in_dim * out_dim)


def is_completely_positive(
    transfer: np.ndarray, in_dim: int, out_dim: int, tolerance: float = 1e-9
) -> bool:
    ch = choi_matrix(transfer, in_dim, out_dim)
    if not np.allclose(ch, ch.conj().T, rtol=0.0, atol=tolerance * 10):
        return False
    eigs = np.linalg.eigvalsh((ch + ch.conj().T) / 2)
    return bool(eigs.min() >= -tolerance * 10)


def cpm_equal(m1: CpmMorphism, m2: CpmMorphism, tolerance: float = 1e-9) -> bool:
    if (m1.in_word, m1.out_word) != (m2.in_word, m2.out_word):
        return False
    return bool(np.allclose(m1.transfer, m2.transfer, rtol=0.0, atol=tolerance))


def cpm_equiv(backend: MatrixBackend, c1: CombRep, c2: CombRep) -> Decision:
    """Transfer-matrix comparison of the channels of two dagger combs."""
    m1, m2 = to_cpm(backend, c1), to_cpm(backend, c2)
    tol = backend.tolerance or 1e-9
    if cpm_equal(m1, m2, tol):
        return Decision.equivalent("transfer-compare", tolerance=tol)
    diff = np.abs(m1.transfer - m2.transfer)
    flat = int(np.argmax(diff))
    row, col = divmod(flat, diff.shape[1])
    witness = FactorWitness(
        pieces={
            "max_abs_difference": float(diff.max()),
            "transfer_entry": (row, col),
        },
        note="transfer matrices differ",
    )
    return Decision.distinct("transfer-compare", witness, tolerance=tol)


def positive_probe_frame(d: int):
    """Rank-one positive matrices spanning the hermitian d x d matrices.

    Yields ``v v^+`` for v over basis vectors, pairwise sums, and pairwise
    imaginary sums, in a fixed order.
    """
    eye = np.eye(d, dtype=np.complex128)
    for i in range(d):
        yield np.outer(eye[i], eye[i].conj())
    for i in range(d):
        for j in range(i + 1, d):
            v = eye[i] + eye[j]
            yield np.outer(v, v.conj())
            w = eye[i] + 1j * eye[j]
            yield np.outer(w, w.conj())


def cpinf_equiv(backend: MatrixBackend, c1: CombRep, c2: CombRep) -> Decision:
    """Positive-probe comparison of the channels of two dagger combs.

    Pushes the spanning frame of rank-one inputs through both channels'
    Kraus pieces and compares outputs directly, without forming transfer
    matrices.  Agreement across the whole frame is conclusive because the
    frame spans hermitian inputs and the channels act linearly.
    """
    m1, m2 = to_cpm(backend, c1), to_cpm(backend, c2)
    tol = backend.tolerance or 1e-9
    if (m1.in_word, m1.out_word) != (m2.in_word, m2.out_word):
        witness = FactorWitness(
            pieces={"left": (m1.in_word, m1.out_word), "right": (m2.in_word, m2.out_word)},
            note="channel boundaries differ",
        )
        return Decision.distinct("positive-probes", witness, tolerance=tol)
    tried = 0
    for rho in positive_probe_frame(m1.in_dim):
        tried += 1
        out1, out2 = m1.apply(rho), m2.apply(rho)
        if not np.allclose(out1, out2, rtol=0.0, atol=tol * 10):
            witness = ProbeWitness(
                ObjectWord.unit(), ObjectWord.unit(), rho,
                left=out1, right=out2,
                note="a rank-one positive input separates the channels",
            )
            return Decision.distinct(
                "positive-probes", witness, tolerance=tol,
                coverage={"probes_tried": tried},
            )
    return Decision.equivalent(
        "positive-probes", tolerance=tol,
        coverage={"probes_tried": tried, "frame_spans_hermitian": True},
    )
