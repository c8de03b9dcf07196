"""Core vocabulary shared by every backend.

This module defines the pieces every other module builds on:

* :class:`ObjectWord` -- objects of a strict monoidal category, kept as flat
  words of generator names (the unit is the empty word).
* Morphism terms (:class:`Generator`, :class:`Identity`, :class:`Symmetry`,
  :class:`Compose`, :class:`Tensor`) -- a tiny syntax tree with a typed,
  functorial evaluator.
* :class:`Backend` -- the contract a concrete category has to satisfy to be
  used by the generic deciders: composition, tensor, symmetry, equality, and
  (optionally) enumeration, cartesian structure, duals, and a dagger.
* :class:`Decision` -- the three-valued answer type used by every
  equivalence procedure, together with its witness payloads.

Everything here is immutable and all operations are pure functions, so
values can be shared freely.

>>> a = ObjectWord.parse("a")
>>> a @ a
ObjectWord.parse('a*a')
>>> len(a @ a @ ObjectWord.unit())
2
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Any, Hashable, Iterator, Mapping, Sequence

__all__ = [
    "CategoryError",
    "UnknownGenerator",
    "TypeMismatch",
    "BoundaryMismatch",
    "NotEnumerable",
    "NotCartesian",
    "NotInhabited",
    "NotCompactClosed",
    "NotDaggerBackend",
    "IncompatibleStrategy",
    "NonComposableMove",
    "BadSplit",
    "DimensionMismatch",
    "IllTypedFunctor",
    "HoleMismatch",
    "UnsupportedShape",
    "ObjectWord",
    "MorTerm",
    "Generator",
    "Identity",
    "Symmetry",
    "Compose",
    "Tensor",
    "typecheck",
    "eval_term",
    "HomSet",
    "ObjectList",
    "Budget",
    "Backend",
    "permutation_term",
    "block_permutation",
    "Verdict",
    "ProbeWitness",
    "SlideStep",
    "SlidePathWitness",
    "ExhaustionWitness",
    "FactorWitness",
    "Decision",
]

DEFAULT_TOLERANCE = 1e-9


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------

class CategoryError(Exception):
    """Base class for structural errors raised by backends and deciders."""


class UnknownGenerator(CategoryError):
    """A term references a generator the backend does not declare."""


class TypeMismatch(CategoryError):
    """Composition of values or terms whose boundary words do not meet.

    Carries the offending term (when raised during term evaluation) so
    callers can point at the exact subterm.
    """

    def __init__(self, message: str, offender: "MorTerm | None" = None):
        super().__init__(message)
        self.offender = offender


class BoundaryMismatch(CategoryError):
    """Two comb representatives do not share the same boundary."""


class NotEnumerable(CategoryError):
    """The backend cannot enumerate the requested hom-set or object list."""


class NotCartesian(CategoryError):
    """Cartesian structure (copy/delete/projections) was requested but absent."""


class NotInhabited(CategoryError):
    """No chosen point exists for the requested object."""


class NotCompactClosed(CategoryError):
    """Duals / cups / caps were requested from a backend without them."""


class NotDaggerBackend(CategoryError):
    """A dagger was requested from a backend without an involution."""


class IncompatibleStrategy(CategoryError):
    """A probe strategy was requested that the backend cannot support."""


class NonComposableMove(CategoryError):
    """A slide move whose factorization does not reproduce the representative."""


class BadSplit(CategoryError):
    """A tensor split (environment vs. leg) that does not match the value's type."""


class DimensionMismatch(CategoryError):
    """Numeric dimensions disagree where they are required to match."""


class IllTypedFunctor(CategoryError):
    """A backend functor whose object/morphism maps do not preserve types."""


class HoleMismatch(CategoryError):
    """A plug or filler whose pair does not match the hole it is aimed at."""


class UnsupportedShape(CategoryError):
    """A polymorphism composition shape outside the supported fragment."""


# ---------------------------------------------------------------------------
# Object words
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ObjectWord:
    """A word of generator object names; the monoidal unit is the empty word.

    Tensor is concatenation, written ``@``:

    >>> ObjectWord.parse("a*b") @ ObjectWord.unit()
    ObjectWord.parse('a*b')
    """

    factors: tuple[str, ...] = ()

    @staticmethod
    def unit() -> "ObjectWord":
        return ObjectWord(())

    @staticmethod
    def of(*names: str) -> "ObjectWord":
        return ObjectWord(tuple(names))

    @staticmethod
    def parse(text: str) -> "ObjectWord":
        """Parse ``'a*b*c'``; ``'I'`` (or ``''``) denotes the unit."""
        text = text.strip()
        if text in ("I", ""):
            return ObjectWord(())
        return ObjectWord(tuple(part.strip() for part in text.split("*")))

    def __matmul__(self, other: "ObjectWord") -> "ObjectWord":
        return ObjectWord(self.factors + other.factors)

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self) -> Iterator[str]:
        return iter(self.factors)

    def __bool__(self) -> bool:
        return bool(self.factors)

    def reversed(self) -> "ObjectWord":
        return ObjectWord(tuple(reversed(self.factors)))

    def pretty(self) -> str:
        return "*".join(self.factors) if self.factors else "I"

    def __repr__(self) -> str:
        return f"ObjectWord.parse({self.pretty()!r})"


# ---------------------------------------------------------------------------
# Morphism terms
# ---------------------------------------------------------------------------

class MorTerm:
    """Base class of morphism syntax.

    ``>>`` is diagrammatic composition (left happens first) and ``@`` is
    tensor, mirroring the word operators.
    """

    def __rshift__(self, other: "MorTerm") -> "Compose":
        return Compose(self, other)

    def __matmul__(self, other: "MorTerm") -> "Tensor":
        return Tensor(self, other)


@dataclass(frozen=True)
class Generator(MorTerm):
    name: str


@dataclass(frozen=True)
class Identity(MorTerm):
    word: ObjectWord


@dataclass(frozen=True)
class Symmetry(MorTerm):
    left: ObjectWord
    right: ObjectWord


@dataclass(frozen=True)
class Compose(MorTerm):
    """``Compose(first, then)``: ``first`` happens first (diagrammatic order)."""

    first: MorTerm
    then: MorTerm


@dataclass(frozen=True)
class Tensor(MorTerm):
    left: MorTerm
    right: MorTerm


def typecheck(term: MorTerm, backend: "Backend") -> tuple[ObjectWord, ObjectWord]:
    """Return ``(dom, cod)`` of ``term`` or raise :class:`TypeMismatch`.

    Types are computed from the backend's generator signature alone; no
    values are produced.
    """
    if isinstance(term, Generator):
        return backend.gen_type(term.name)
    if isinstance(term, Identity):
        w = backend.normalize_word(term.word)
        return (w, w)
    if isinstance(term, Symmetry):
        l = backend.normalize_word(term.left)
        r = backend.normalize_word(term.right)
        return (l @ r, r @ l)
    if isinstance(term, Compose):
        d1, c1 = typecheck(term.first, backend)
        d2, c2 = typecheck(term.then, backend)
        if not backend.words_equal(c1, d2):
            raise TypeMismatch(
                f"cannot compose: left produces {c1.pretty()} but right consumes {d2.pretty()}",
                offender=term,
            )
        return (d1, c2)
    if isinstance(term, Tensor):
        d1, c1 = typecheck(term.left, backend)
        d2, c2 = typecheck(term.right, backend)
        return (d1 @ d2, c1 @ c2)
    raise TypeError(f"not a morphism term: {term!r}")


def eval_term(term: MorTerm, backend: "Backend") -> Any:
    """Evaluate a term to a backend value; evaluation is functorial by construction."""
    typecheck(term, backend)
    return _eval(term, backend)


def _eval(term: MorTerm, backend: "Backend") -> Any:
    if isinstance(term, Generator):
        return backend.generator(term.name)
    if isinstance(term, Identity):
        return backend.identity(backend.normalize_word(term.word))
    if isinstance(term, Symmetry):
        return backend.symmetry(
            backend.normalize_word(term.left), backend.normalize_word(term.right)
        )
    if isinstance(term, Compose):
        return backend.compose(_eval(term.first, backend), _eval(term.then, backend))
    if isinstance(term, Tensor):
        return backend.tensor(_eval(term.left, backend), _eval(term.right, backend))
    raise TypeError(f"not a morphism term: {term!r}")


# ---------------------------------------------------------------------------
# Enumeration records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HomSet:
    """A duplicate-free enumeration of a hom-set, flagged if truncated."""

    items: tuple
    complete: bool


@dataclass(frozen=True)
class ObjectList:
    words: tuple[ObjectWord, ...]
    complete: bool


@dataclass(frozen=True)
class Budget:
    """Enumeration budget derived from a single user-facing integer bound.

    ``max_word_len`` caps extension-object word length; ``max_hom`` caps how
    many morphisms a single hom-set enumeration may return before being
    flagged truncated.
    """

    max_word_len: int
    max_hom: int

    @staticmethod
    def of(bound: int) -> "Budget":
        if bound < 0:
            raise ValueError("bound must be >= 0")
        return Budget(bound, min(4 ** max(bound, 1), 65536))


# ---------------------------------------------------------------------------
# Backend contract
# ---------------------------------------------------------------------------

class Backend(ABC):
    """Operations a concrete symmetric monoidal category must provide.

    Morphism values are opaque to callers; they carry their own boundary
    words, reachable through :meth:`dom` / :meth:`cod`.  Capability flags
    advertise extra structure; deciders consult them before relying on it.
    """

    name: str = "backend"

    # capability flags
    cartesian: bool = False
    compact_closed: bool = False
    has_dagger: bool = False
    enumerable: bool = False
    commutative_symmetry: bool = False
    unitary_values: bool = False

    #: True when equality of braid values settles filler agreement in both
    #: directions, i.e. two combs evaluate the same under every filler exactly
    #: when their braid values coincide.  Compact closed structure gives this
    #: outright; a backend may also set it on the strength of a faithful
    #: tensor-preserving model inside a compact closed category.
    braid_conclusive: bool = False

    #: comparison tolerance for approximate backends, None when equality is exact
    tolerance: float | None = None

    # -- signature ----------------------------------------------------------

    @abstractmethod
    def object_names(self) -> tuple[str, ...]:
        """Generator object names, in declaration order."""

    @abstractmethod
    def generator_names(self) -> tuple[str, ...]:
        """Generator morphism names, in declaration order."""

    @abstractmethod
    def gen_type(self, name: str) -> tuple[ObjectWord, ObjectWord]:
        """(dom, cod) of a declared generator; raises UnknownGenerator."""

    @abstractmethod
    def generator(self, name: str) -> Any:
        """Value of a declared generator; raises UnknownGenerator."""

    def normalize_word(self, word: ObjectWord) -> ObjectWord:
        """Backend-specific word normal form (commutative backends sort)."""
        if self.commutative_symmetry:
            return ObjectWord(tuple(sorted(word.factors)))
        return word

    def words_equal(self, w1: ObjectWord, w2: ObjectWord) -> bool:
        return self.normalize_word(w1) == self.normalize_word(w2)

    # -- structure ----------------------------------------------------------

    @abstractmethod
    def dom(self, m: Any) -> ObjectWord: ...

    @abstractmethod
    def cod(self, m: Any) -> ObjectWord: ...

    @abstractmethod
    def identity(self, word: ObjectWord) -> Any: ...

    @abstractmethod
    def symmetry(self, left: ObjectWord, right: ObjectWord) -> Any:
        """The braiding left @ right -> right @ left."""

    @abstractmethod
    def compose(self, first: Any, then: Any) -> Any:
        """Diagrammatic composition: ``first`` then ``then``; raises TypeMismatch."""

    @abstractmethod
    def tensor(self, left: Any, right: Any) -> Any: ...

    @abstractmethod
    def equal(self, m1: Any, m2: Any) -> bool:
        """Semantic equality at the backend's tolerance; same-boundary values only."""

    def _require_composable(self, first: Any, then: Any) -> None:
        if not self.words_equal(self.cod(first), self.dom(then)):
            raise TypeMismatch(
                f"cannot compose {self.cod(first).pretty()} into {self.dom(then).pretty()}"
            )

    # -- enumeration ---------------------------------------------------------

    def enumerate_objects(self, max_len: int) -> ObjectList:
        """All object words up to the given length, shortest first then lexicographic."""
        names = self.object_names()
        words: list[ObjectWord] = []
        frontier: list[tuple[str, ...]] = [()]
        for _ in range(max_len + 1):
            words.extend(ObjectWord(f) for f in frontier)
            frontier = [f + (n,) for f in frontier for n in sorted(names)]
        seen: dict[ObjectWord, None] = {}
        for w in words:
            seen.setdefault(self.normalize_word(w), None)
        return ObjectList(tuple(seen.keys()), complete=False)

    def enumerate_hom(self, dom: ObjectWord, cod: ObjectWord, budget: int) -> HomSet:
        """Up to ``budget`` morphisms dom -> cod in a fixed deterministic order.

        ``complete=True`` only when the returned items exhaust the hom-set.
        """
        raise NotEnumerable(f"{self.name} cannot enumerate hom-sets")

    # -- cartesian structure --------------------------------------------------

    def copy(self, word: ObjectWord) -> Any:
        raise NotCartesian(f"{self.name} has no copy map")

    def delete(self, word: ObjectWord) -> Any:
        raise NotCartesian(f"{self.name} has no delete map")

    def proj1(self, left: ObjectWord, right: ObjectWord) -> Any:
        raise NotCartesian(f"{self.name} has no projections")

    def proj2(self, left: ObjectWord, right: ObjectWord) -> Any:
        raise NotCartesian(f"{self.name} has no projections")

    def inhabitant(self, word: ObjectWord) -> Any:
        """The chosen point I -> word; raises NotInhabited when none exists."""
        raise NotCartesian(f"{self.name} has no chosen points")

    # -- compact structure -----------------------------------------------------

    def dual(self, word: ObjectWord) -> ObjectWord:
        raise NotCompactClosed(f"{self.name} has no duals")

    def cup(self, word: ObjectWord) -> Any:
        """Unit I -> dual(word) @ word."""
        raise NotCompactClosed(f"{self.name} has no cups")

    def cap(self, word: ObjectWord) -> Any:
        """Counit word @ dual(word) -> I."""
        raise NotCompactClosed(f"{self.name} has no caps")

    # -- dagger ----------------------------------------------------------------

    def dagger(self, m: Any) -> Any:
        raise NotDaggerBackend(f"{self.name} has no dagger")

    def conjugate(self, m: Any) -> Any:
        raise NotDaggerBackend(f"{self.name} has no conjugation")

    # -- certification hooks -----------------------------------------------------

    def env_lengths_for_boundary(
        self,
        source: tuple[ObjectWord, ObjectWord],
        target: tuple[ObjectWord, ObjectWord],
    ) -> tuple[int, ...] | None:
        """Word lengths an environment can have for combs on this boundary.

        ``None`` means unknown or unbounded.  Backends whose hom-sets are
        graded (so most environment shapes host no representative at all)
        override this; it is what lets a bounded zigzag search certify that
        its state space was exhausted.
        """
        return None

    def extension_word_len_needed(
        self,
        source: tuple[ObjectWord, ObjectWord],
        target: tuple[ObjectWord, ObjectWord],
    ) -> int | None:
        """Extension word length at which probe agreement becomes conclusive.

        ``None`` means the backend offers no such certificate and enumerated
        probing can refute but never confirm.
        """
        return None

    def canonical_key(self, m: Any) -> Hashable:
        """A hashable key consistent with :meth:`equal`, for search dedup."""
        raise NotEnumerable(f"{self.name} has no canonical keys")

    def value_to_term(self, m: Any) -> MorTerm | None:
        """A term evaluating to ``m``, when the backend can reconstruct one."""
        return None


def permutation_term(words: Sequence[ObjectWord], perm: Sequence[int]) -> MorTerm:
    """A term permuting tensor blocks: output slot j holds input block ``perm[j]``.

    Built from adjacent transpositions, so it evaluates in any symmetric
    backend.  ``words[i]`` is the word of input block i.
    """
    order = list(perm)
    if sorted(order) != list(range(len(words))):
        raise ValueError(f"not a permutation of {len(words)} blocks: {perm}")
    current = list(range(len(words)))
    total = ObjectWord(tuple(f for w in words for f in w.factors))
    term: MorTerm = Identity(total)
    # bubble the blocks into place with adjacent swaps
    for target_pos in range(len(order)):
        src = current.index(order[target_pos])
        while src > target_pos:
            left = ObjectWord(tuple(f for i in current[: src - 1] for f in words[i]))
            a, b = words[current[src - 1]], words[current[src]]
            right = ObjectWord(tuple(f for i in current[src + 1 :] for f in words[i]))
            step: MorTerm = Symmetry(a, b)
            if left:
                step = Tensor(Identity(left), step)
            if right:
                step = Tensor(step, Identity(right))
            term = Compose(term, step)
            current[src - 1], current[src] = current[src], current[src - 1]
            src -= 1
    return term


def block_permutation(
    backend: Backend, words: Sequence[ObjectWord], perm: Sequence[int]
) -> Any:
    """Evaluated form of :func:`permutation_term` in the given backend."""
    return eval_term(permutation_term(words, perm), backend)


# ---------------------------------------------------------------------------
# Decisions
# ---------------------------------------------------------------------------

class Verdict(str, Enum):
    EQUIVALENT = "equivalent"
    DISTINCT = "distinct"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ProbeWitness:
    """A probe on which two representatives evaluate to different values."""

    c_word: ObjectWord
    d_word: ObjectWord
    probe: Any
    left: Any
    right: Any
    probe_term: MorTerm | None = None
    note: str = ""


@dataclass(frozen=True)
class SlideStep:
    direction: str  # "push_up" | "push_down"
    v: Any
    residual: Any


@dataclass(frozen=True)
class SlidePathWitness:
    """A chain of slide moves connecting two representatives."""

    steps: tuple[SlideStep, ...]


@dataclass(frozen=True)
class ExhaustionWitness:
    """Evidence that a certified-finite search space was fully explored."""

    states_explored: int
    environments: tuple[ObjectWord, ...]
    note: str = ""


@dataclass(frozen=True)
class FactorWitness:
    """Factorization data produced by a structural decision procedure."""

    pieces: Mapping[str, Any]
    note: str = ""


@dataclass(frozen=True)
class Decision:
    """Three-valued decision with provenance.

    Invariants enforced here: a DISTINCT verdict always carries a witness,
    and an EQUIVALENT verdict is only ever emitted as certified -- probe
    strategies that merely ran out of probes must return UNKNOWN with
    coverage statistics instead.
    """

    verdict: Verdict
    method: str
    certified: bool
    witness: Any = None
    tolerance: float | None = None
    coverage: Mapping[str, Any] | None = None

    def __post_init__(self) -> None:
        if self.verdict is Verdict.DISTINCT and self.witness is None:
            raise ValueError("a distinct verdict requires a witness")
        if self.verdict is Verdict.EQUIVALENT and not self.certified:
            raise ValueError("an uncertified equivalence must be reported unknown")

    @staticmethod
    def equivalent(method: str, witness: Any = None, tolerance: float | None = None,
                   coverage: Mapping[str, Any] | None = None) -> "Decision":
        return Decision(Verdict.EQUIVALENT, method, True, witness, tolerance, coverage)

    @staticmethod
    def distinct(method: str, witness: Any, certified: bool = True,
                 tolerance: float | None = None,
                 coverage: Mapping[str, Any] | None = None) -> "Decision":
        return Decision(Verdict.DISTINCT, method, certified, witness, tolerance, coverage)

    @staticmethod
    def unknown(method: str, coverage: Mapping[str, Any] | None = None,
                tolerance: float | None = None) -> "Decision":
        return Decision(Verdict.UNKNOWN, method, False, None, tolerance, coverage)

    def is_equivalent(self) -> bool:
        return self.verdict is Verdict.EQUIVALENT

    def is_distinct(self) -> bool:
        return self.verdict is Verdict.DISTINCT

    def is_unknown(self) -> bool:
        return self.verdict is Verdict.UNKNOWN
