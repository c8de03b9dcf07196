"""Combs with one hole, their evaluations, and extensional equivalences.

A comb on boundary ``(A, A') -> (B, B')`` is a pair of morphisms around a
hole: a bottom ``f : A -> E (x) B`` and a top ``g : E (x) B' -> A'``
sharing an environment ``E`` that bypasses the hole.  Plugging a filler
``lam : C (x) B -> D (x) B'`` into the hole yields the extended evaluation
``C (x) A -> D (x) A'``; two combs are extensionally equivalent when every
filler yields the same value.

Three progressively cheaper relations are decidable here:

* ``equiv_comb`` -- filler agreement itself, decided through braid values,
  lens components, or bounded probe enumeration, always with an explicit
  certification story.
* ``equiv_sigma`` -- equality of braid values (the hole bent around by a
  symmetry).  Filler agreement always implies it, because the swap filler
  at context ``(B', B)`` recovers the braid value.
* ``equiv_tau`` -- agreement on fillers with trivial context only, a
  cheap screen that can refute but rarely confirms.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable, Mapping

from .core import (
    Backend,
    BadSplit,
    BoundaryMismatch,
    Budget,
    Decision,
    IllTypedFunctor,
    IncompatibleStrategy,
    NotCartesian,
    NotInhabited,
    ObjectWord,
    ProbeWitness,
    Symmetry,
    TypeMismatch,
)

COMB_STRATEGIES = ("auto", "braid", "lens", "enumerate")


@dataclass(frozen=True)
class CombRep:
    """A one-hole comb representative.

    ``source`` is the outer boundary pair (A, A'), ``target`` the hole pair
    (B, B'), ``env`` the bypass word E, with ``f : A -> E (x) B`` below the
    hole and ``g : E (x) B' -> A'`` above it.
    """

    source: tuple[ObjectWord, ObjectWord]
    target: tuple[ObjectWord, ObjectWord]
    env: ObjectWord
    f: Any
    g: Any

    def boundary(self) -> tuple:
        return (self.source, self.target)

    def __repr__(self) -> str:
        (a, a1), (b, b1) = self.source, self.target
        return (
            f"CombRep(({a.pretty()},{a1.pretty()}) -> ({b.pretty()},{b1.pretty()})"
            f" env {self.env.pretty()})"
        )


def _split_env(backend: Backend, word: ObjectWord, env: ObjectWord) -> ObjectWord:
    env = backend.normalize_word(env)
    if len(word) < len(env) or ObjectWord(word.factors[: len(env)]) != env:
        raise BadSplit(
            f"{word.pretty()} does not start with environment {env.pretty()}"
        )
    return ObjectWord(word.factors[len(env) :])


def comb(backend: Backend, f: Any, g: Any, env: ObjectWord) -> CombRep:
    """Assemble a comb from its two pieces, inferring the boundary."""
    a = backend.dom(f)
    b = _split_env(backend, backend.cod(f), env)
    b1 = _split_env(backend, backend.dom(g), env)
    a1 = backend.cod(g)
    return CombRep((a, a1), (b, b1), backend.normalize_word(env), f, g)


def identity_comb(backend: Backend, b: ObjectWord, b1: ObjectWord) -> CombRep:
    b = backend.normalize_word(b)
    b1 = backend.normalize_word(b1)
    return CombRep(
        (b, b1), (b, b1), ObjectWord.unit(),
        backend.identity(b), backend.identity(b1),
    )


def comb_compose(backend: Backend, c1: CombRep, c2: CombRep) -> CombRep:
    """Nest c2 around the result of c1: the hole of the composite is c2's.

    The composite bottom runs c1's bottom and then c2's bottom beside c1's
    environment; the composite top runs c2's top first, then c1's.
    """
    if c1.target != c2.source:
        raise BoundaryMismatch(
            f"cannot nest: inner boundary {c1.target} does not match outer source "
            f"{c2.source}"
        )
    e1 = backend.identity(c1.env)
    f = backend.compose(c1.f, backend.tensor(e1, c2.f))
    g = backend.compose(backend.tensor(e1, c2.g), c1.g)
    return CombRep(c1.source, c2.target, c1.env @ c2.env, f, g)


def comb_tensor(backend: Backend, c1: CombRep, c2: CombRep) -> CombRep:
    """Side-by-side combs, with both environments routed to the left."""
    (a1, a1p), (b1, b1p) = c1.source, c1.target
    (a2, a2p), (b2, b2p) = c2.source, c2.target
    f = backend.compose(
        backend.tensor(c1.f, c2.f),
        backend.tensor(
            backend.tensor(backend.identity(c1.env), backend.symmetry(b1, c2.env)),
            backend.identity(b2),
        ),
    )
    g = backend.compose(
        backend.tensor(
            backend.tensor(backend.identity(c1.env), backend.symmetry(c2.env, b1p)),
            backend.identity(b2p),
        ),
        backend.tensor(c1.g, c2.g),
    )
    return CombRep(
        (a1 @ a2, a1p @ a2p), (b1 @ b2, b1p @ b2p), c1.env @ c2.env, f, g
    )


def extended_eval(
    backend: Backend, c: CombRep, filler: Any, c_word: ObjectWord, d_word: ObjectWord
) -> Any:
    """Plug ``filler : C (x) B -> D (x) B'`` into the hole.

    The result has type ``C (x) A -> D (x) A'``; the context legs C and D
    ride past the environment with two symmetries.
    """
    (b, b1) = c.target
    c_word = backend.normalize_word(c_word)
    d_word = backend.normalize_word(d_word)
    if not (
        backend.words_equal(backend.dom(filler), c_word @ b)
        and backend.words_equal(backend.cod(filler), d_word @ b1)
    ):
        raise TypeMismatch(
            f"filler must be {(c_word @ b).pretty()} -> {(d_word @ b1).pretty()}, got "
            f"{backend.dom(filler).pretty()} -> {backend.cod(filler).pretty()}"
        )
    e = c.env
    val = backend.tensor(backend.identity(c_word), c.f)
    val = backend.compose(
        val, backend.tensor(backend.symmetry(c_word, e), backend.identity(b))
    )
    val = backend.compose(val, backend.tensor(backend.identity(e), filler))
    val = backend.compose(
        val, backend.tensor(backend.symmetry(e, d_word), backend.identity(b1))
    )
    return backend.compose(val, backend.tensor(backend.identity(d_word), c.g))


def braid_eval(backend: Backend, c: CombRep) -> Any:
    """Bend the hole around: the value ``(g (x) 1_B) (1_E (x) sym) (f (x) 1_B')``.

    This is a complete invariant for filler agreement exactly when the
    backend advertises ``braid_conclusive``; it is always a sound refuter,
    because plugging the swap filler at context ``(B', B)`` reproduces it
    up to fixed symmetries.
    """
    (b, b1) = c.target
    val = backend.tensor(c.f, backend.identity(b1))
    val = backend.compose(
        val, backend.tensor(backend.identity(c.env), backend.symmetry(b, b1))
    )
    return backend.compose(val, backend.tensor(c.g, backend.identity(b)))


def swap_probe(backend: Backend, c: CombRep) -> tuple[Any, ObjectWord, ObjectWord]:
    """The filler that recovers the braid value: the swap at context (B', B)."""
    (b, b1) = c.target
    return backend.symmetry(b1, b), b1, b


# ---------------------------------------------------------------------------
# Lens components (cartesian backends)
# ---------------------------------------------------------------------------

def lens_pair(backend: Backend, c: CombRep) -> tuple[Any, Any]:
    """The (get, put) presentation of a comb over a cartesian backend.

    get = discard the environment leg of f; put feeds the outer input
    through f's environment leg and pairs it with the new hole output.
    """
    if not backend.cartesian:
        raise NotCartesian(f"{backend.name} is not cartesian")
    (a, a1), (b, b1) = c.source, c.target
    e = c.env
    get = backend.compose(c.f, backend.proj2(e, b))
    keep = backend.compose(
        backend.proj1(a, b1), backend.compose(c.f, backend.proj1(e, b))
    )
    fresh = backend.proj2(a, b1)
    paired = backend.compose(
        backend.copy(a @ b1), backend.tensor(keep, fresh)
    )
    put = backend.compose(paired, c.g)
    return get, put


# ---------------------------------------------------------------------------
# Equivalence deciders
# ---------------------------------------------------------------------------

def _check_same_boundary(c1: CombRep, c2: CombRep) -> None:
    if c1.boundary() != c2.boundary():
        raise BoundaryMismatch(
            f"combs live on different boundaries: {c1.boundary()} vs {c2.boundary()}"
        )


def equiv_sigma(backend: Backend, c1: CombRep, c2: CombRep) -> Decision:
    """Decide braid-value equality.  Always certified: it is a direct compare."""
    _check_same_boundary(c1, c2)
    v1, v2 = braid_eval(backend, c1), braid_eval(backend, c2)
    if backend.equal(v1, v2):
        return Decision.equivalent("braid-compare", tolerance=backend.tolerance)
    probe, cw, dw = swap_probe(backend, c1)
    witness = ProbeWitness(
        cw, dw, probe,
        left=v1, right=v2,
        probe_term=Symmetry(c1.target[1], c1.target[0]),
        note="braid values differ; the swap filler reproduces them",
    )
    return Decision.distinct("braid-compare", witness, tolerance=backend.tolerance)


def equiv_tau(backend: Backend, c1: CombRep, c2: CombRep, bound: int = 2) -> Decision:
    """Screen with trivial-context fillers ``B -> B'`` only.

    A disagreement certifies genuine inextensibility; agreement certifies
    equivalence only when the hom-set scan was complete and the backend
    pins the conclusive context size at zero.  Otherwise the verdict is
    unknown, with coverage counts.
    """
    _check_same_boundary(c1, c2)
    budget = Budget.of(bound)
    (b, b1) = c1.target
    unit = ObjectWord.unit()
    homs = backend.enumerate_hom(b, b1, budget.max_hom)
    tried = 0
    for lam in homs.items:
        tried += 1
        v1 = extended_eval(backend, c1, lam, unit, unit)
        v2 = extended_eval(backend, c2, lam, unit, unit)
        if not backend.equal(v1, v2):
            witness = ProbeWitness(
                unit, unit, lam, left=v1, right=v2,
                probe_term=backend.value_to_term(lam),
                note="trivial-context filler separates the combs",
            )
            return Decision.distinct(
                "trivial-context-probes", witness, tolerance=backend.tolerance,
                coverage={"probes_tried": tried},
            )
    needed = backend.extension_word_len_needed(c1.source, c1.target)
    coverage = {
        "probes_tried": tried,
        "hom_scan_complete": homs.complete,
        "disagreements": 0,
        "conclusive_context_len": needed,
    }
    if homs.complete and needed == 0:
        return Decision.equivalent(
            "trivial-context-probes", tolerance=backend.tolerance, coverage=coverage
        )
    return Decision.unknown(
        "trivial-context-probes", coverage=coverage, tolerance=backend.tolerance
    )


def _braid_route(backend: Backend, c1: CombRep, c2: CombRep) -> Decision:
    v1, v2 = braid_eval(backend, c1), braid_eval(backend, c2)
    if not backend.equal(v1, v2):
        probe, cw, dw = swap_probe(backend, c1)
        witness = ProbeWitness(
            cw, dw, probe,
            left=extended_eval(backend, c1, probe, cw, dw),
            right=extended_eval(backend, c2, probe, cw, dw),
            probe_term=Symmetry(c1.target[1], c1.target[0]),
            note="the swap filler already separates the combs",
        )
        return Decision.distinct("braid-value", witness, tolerance=backend.tolerance)
    if backend.braid_conclusive:
        return Decision.equivalent(
            "braid-value", tolerance=backend.tolerance,
            coverage={"conclusive": True},
        )
    return Decision.unknown(
        "braid-value",
        coverage={"braid_values_agree": True, "conclusive": False},
        tolerance=backend.tolerance,
    )


def _all_inhabited(backend: Backend, c: CombRep) -> bool:
    words = [c.source[0], c.source[1], c.target[0], c.target[1], c.env]
    try:
        for w in words:
            backend.inhabitant(w)
    except (NotInhabited, NotCartesian):
        return False
    return True


def _lens_route(backend: Backend, c1: CombRep, c2: CombRep) -> Decision:
    get1, put1 = lens_pair(backend, c1)
    get2, put2 = lens_pair(backend, c2)
    if backend.equal(get1, get2) and backend.equal(put1, put2):
        certified = backend.braid_conclusive and _all_inhabited(backend, c1) \
            and _all_inhabited(backend, c2)
        if certified:
            return Decision.equivalent("lens-components", tolerance=backend.tolerance)
        return Decision.unknown(
            "lens-components",
            coverage={"components_agree": True, "conclusive": False},
            tolerance=backend.tolerance,
        )
    probe, cw, dw = swap_probe(backend, c1)
    witness = ProbeWitness(
        cw, dw, probe,
        left=extended_eval(backend, c1, probe, cw, dw),
        right=extended_eval(backend, c2, probe, cw, dw),
        probe_term=Symmetry(c1.target[1], c1.target[0]),
        note="lens components differ, so the swap filler separates the combs",
    )
    return Decision.distinct("lens-components", witness, tolerance=backend.tolerance)


def _enumerate_route(
    backend: Backend, c1: CombRep, c2: CombRep, bound: int
) -> Decision:
    budget = Budget.of(bound)
    (b, b1) = c1.target
    words = backend.enumerate_objects(budget.max_word_len).words
    tried = 0
    scans_complete = True
    for cw in words:
        for dw in words:
            homs = backend.enumerate_hom(cw @ b, dw @ b1, budget.max_hom)
            scans_complete = scans_complete and homs.complete
            for lam in homs.items:
                tried += 1
                v1 = extended_eval(backend, c1, lam, cw, dw)
                v2 = extended_eval(backend, c2, lam, cw, dw)
                if not backend.equal(v1, v2):
                    witness = ProbeWitness(
                        cw, dw, lam, left=v1, right=v2,
                        probe_term=backend.value_to_term(lam),
                        note="enumerated filler separates the combs",
                    )
                    return Decision.distinct(
                        "enumerated-probes", witness,
                        tolerance=backend.tolerance,
                        coverage={"probes_tried": tried},
                    )
    needed = backend.extension_word_len_needed(c1.source, c1.target)
    coverage = {
        "probes_tried": tried,
        "context_words": len(words),
        "hom_scans_complete": scans_complete,
        "conclusive_context_len": needed,
        "bound": bound,
    }
    if needed is not None and bound >= needed and scans_complete:
        return Decision.equivalent(
            "enumerated-probes", tolerance=backend.tolerance, coverage=coverage
        )
    return Decision.unknown(
        "enumerated-probes", coverage=coverage, tolerance=backend.tolerance
    )


def equiv_comb(
    backend: Backend,
    c1: CombRep,
    c2: CombRep,
    strategy: str = "auto",
    bound: int = 2,
) -> Decision:
    """Decide whether two combs agree under every filler.

    Strategies: ``braid`` compares braid values (complete refuter
    everywhere, conclusive where the backend says so); ``lens`` compares
    cartesian components; ``enumerate`` plugs every enumerable filler up to
    the bound; ``auto`` picks the strongest available.
    """
    _check_same_boundary(c1, c2)
    if strategy == "auto":
        if backend.braid_conclusive:
            strategy = "braid"
        elif backend.cartesian:
            strategy = "lens"
        elif backend.enumerable:
            strategy = "enumerate"
        else:
            strategy = "braid"
    if strategy == "braid":
        return _braid_route(backend, c1, c2)
    if strategy == "lens":
        if not backend.cartesian:
            raise IncompatibleStrategy(
                f"lens strategy needs a cartesian backend, not {backend.name}"
            )
        return _lens_route(backend, c1, c2)
    if strategy == "enumerate":
        if not backend.enumerable:
            raise IncompatibleStrategy(
                f"enumerate strategy needs an enumerable backend, not {backend.name}"
            )
        return _enumerate_route(backend, c1, c2, bound)
    raise IncompatibleStrategy(
        f"unknown strategy {strategy!r}, expected one of {COMB_STRATEGIES}"
    )


# ---------------------------------------------------------------------------
# Congruence search
# ---------------------------------------------------------------------------

def sigma_congruence_search(
    backend: Backend,
    boundaries: Iterable[tuple[ObjectWord, ObjectWord, ObjectWord, ObjectWord]],
    bound: int = 2,
    max_pairs: int = 400,
) -> ProbeWitness | None:
    """Search for braid-equal combs that some filler tells apart.

    Enumerates comb representatives over the given boundaries, groups them
    by braid value, and probes every braid-equal pair with enumerated
    fillers.  Returns the first separating probe found, or None when the
    bounded search exhausts without one.  On every bundled backend braid
    agreement is conclusive, so None is the expected outcome; the search
    exists to keep that claim falsifiable.
    """
    from .sampling import enumerate_combs

    budget = Budget.of(bound)
    pairs_checked = 0
    for (a, a1, b, b1) in boundaries:
        groups: dict[Any, list[CombRep]] = {}
        for c in enumerate_combs(backend, (a, a1), (b, b1), bound):
            key = backend.canonical_key(braid_eval(backend, c))
            groups.setdefault(key, []).append(c)
        words = backend.enumerate_objects(budget.max_word_len).words
        for _, members in sorted(groups.items(), key=lambda kv: repr(kv[0])):
            for i in range(len(members)):
                for j in range(i + 1, len(members)):
                    pairs_checked += 1
                    if pairs_checked > max_pairs:
                        return None
                    c1, c2 = members[i], members[j]
                    for cw in words:
                        for dw in words:
                            homs = backend.enumerate_hom(
                                cw @ b, dw @ b1, budget.max_hom
                            )
                            for lam in homs.items:
                                v1 = extended_eval(backend, c1, lam, cw, dw)
                                v2 = extended_eval(backend, c2, lam, cw, dw)
                                if not backend.equal(v1, v2):
                                    return ProbeWitness(
                                        cw, dw, lam, left=v1, right=v2,
                                        probe_term=backend.value_to_term(lam),
                                        note="filler separates braid-equal combs",
                                    )
    return None


# ---------------------------------------------------------------------------
# Structure-preserving maps between backends
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BackendFunctor:
    """A strict monoidal map from one backend into another.

    ``object_map`` sends generator object names to target words;
    ``value_map`` sends morphism values to morphism values.
    """

    source: Backend
    target: Backend
    object_map: Mapping[str, ObjectWord]
    value_map: Callable[[Any], Any]

    def map_word(self, word: ObjectWord) -> ObjectWord:
        out: ObjectWord = ObjectWord.unit()
        for fct in word:
            if fct not in self.object_map:
                raise IllTypedFunctor(f"no image for object {fct!r}")
            out = out @ self.object_map[fct]
        return self.target.normalize_word(out)

    def map_comb(self, c: CombRep) -> CombRep:
        (a, a1), (b, b1) = c.source, c.target
        return CombRep(
            (self.map_word(a), self.map_word(a1)),
            (self.map_word(b), self.map_word(b1)),
            self.map_word(c.env),
            self.value_map(c.f),
            self.value_map(c.g),
        )


def lift_functor(
    source: Backend,
    target: Backend,
    object_map: Mapping[str, ObjectWord],
    value_map: Callable[[Any], Any],
) -> BackendFunctor:
    """Build a BackendFunctor after checking it preserves the structure.

    Verifies types of generator images, preservation of identities and
    symmetries on generator objects, and preservation of composition and
    tensor on all composable generator pairs.
    """
    fun = BackendFunctor(source, target, dict(object_map), value_map)
    for name in source.object_names():
        if name not in fun.object_map:
            raise IllTypedFunctor(f"object map misses {name!r}")
    for name in source.generator_names():
        gdom, gcod = source.gen_type(name)
        img = value_map(source.generator(name))
        if not (
            target.words_equal(target.dom(img), fun.map_word(gdom))
            and target.words_equal(target.cod(img), fun.map_word(gcod))
        ):
            raise IllTypedFunctor(f"image of {name!r} has the wrong boundary")
    for name in source.object_names():
        w = ObjectWord((name,))
        if not target.equal(
            value_map(source.identity(w)), target.identity(fun.map_word(w))
        ):
            raise IllTypedFunctor(f"identity on {name!r} is not preserved")
        for other in source.object_names():
            w2 = ObjectWord((other,))
            img = value_map(source.symmetry(w, w2))
            expect = target.symmetry(fun.map_word(w), fun.map_word(w2))
            if not target.equal(img, expect):
                raise IllTypedFunctor(f"symmetry on {name!r},{other!r} is not preserved")
    gens = [source.generator(n) for n in source.generator_names()]
    for g1 in gens:
        for g2 in gens:
            if source.words_equal(source.cod(g1), source.dom(g2)):
                lhs = value_map(source.compose(g1, g2))
                rhs = target.compose(value_map(g1), value_map(g2))
                if not target.equal(lhs, rhs):
                    raise IllTypedFunctor("composition is not preserved")
            lhs = value_map(source.tensor(g1, g2))
            rhs = target.tensor(value_map(g1), value_map(g2))
            if not target.equal(lhs, rhs):
                raise IllTypedFunctor("tensor is not preserved")
    return fun
