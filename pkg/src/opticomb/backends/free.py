"""Two small syntactically-presented backends with exact equality.

``IdempotentFreeBackend`` is the commutative strand category on one object
with one idempotent endomorphism.  Because its symmetry is an identity,
naturality forces every hom-set on n strands down to two classes: the
identity, and "applies the endomorphism somewhere".  Values keep their
per-strand flags for display, equality compares the collapsed class.

``PointedFreeBackend`` is the free symmetric monoidal category on one
object with a choice of point generators (states) and a discarding effect,
modulo rewrite rules that cancel chosen state/effect pairs.  Morphisms
normalize to wiring data: which inputs pass to which outputs, which are
discarded, which outputs are freshly seeded, plus any scalar loops the
rules do not cancel.  The rewrite system has no overlapping left-hand
sides and strictly shrinks diagrams, so normal forms are unique; the
constructor re-derives that report and refuses to start if it fails.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Hashable, Iterable

from ..core import (
    Backend,
    Compose,
    Generator,
    HomSet,
    Identity,
    MorTerm,
    ObjectWord,
    Tensor,
    TypeMismatch,
    UnknownGenerator,
    permutation_term,
)


# ---------------------------------------------------------------------------
# Idempotent strands
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StrandMor:
    """Parallel strands, each either the identity or the idempotent endo.

    ``word`` is both boundary words; ``flags[i]`` marks the endo on strand i.
    """

    word: ObjectWord
    flags: tuple[bool, ...]

    def touched(self) -> bool:
        return any(self.flags)

    def __repr__(self) -> str:
        body = "*".join("f" if x else "1" for x in self.flags) or "1"
        return f"StrandMor({self.word.pretty()}, {body})"


class IdempotentFreeBackend(Backend):
    """Free commutative strand category on one idempotent endomorphism."""

    commutative_symmetry = True
    enumerable = True
    # a one-dimensional matrix model (object -> dimension 1, endo -> the 1x1
    # zero matrix) separates the two classes on every hom-set and preserves
    # all structure, so braid values settle filler agreement here
    braid_conclusive = True

    def __init__(self, object_name: str = "a", endo_name: str = "f", name: str | None = None):
        self.object_name = object_name
        self.endo_name = endo_name
        self.name = name or "free-commutative"

    def strands(self, n: int) -> ObjectWord:
        return ObjectWord((self.object_name,) * n)

    def _check_word(self, word: ObjectWord) -> ObjectWord:
        for fct in word:
            if fct != self.object_name:
                raise UnknownGenerator(f"unknown object {fct!r}")
        return word

    # -- signature ------------------------------------------------------------

    def object_names(self) -> tuple[str, ...]:
        return (self.object_name,)

    def generator_names(self) -> tuple[str, ...]:
        return (self.endo_name,)

    def gen_type(self, name: str) -> tuple[ObjectWord, ObjectWord]:
        if name != self.endo_name:
            raise UnknownGenerator(f"unknown morphism {name!r}")
        a = self.strands(1)
        return (a, a)

    def generator(self, name: str) -> StrandMor:
        if name != self.endo_name:
            raise UnknownGenerator(f"unknown morphism {name!r}")
        return StrandMor(self.strands(1), (True,))

    # -- structure ----------------------------------------------------------------

    def dom(self, m: StrandMor) -> ObjectWord:
        return m.word

    def cod(self, m: StrandMor) -> ObjectWord:
        return m.word

    def identity(self, word: ObjectWord) -> StrandMor:
        w = self._check_word(self.normalize_word(word))
        return StrandMor(w, (False,) * len(w))

    def symmetry(self, left: ObjectWord, right: ObjectWord) -> StrandMor:
        # the symmetry is an identity wiring in the collapsed category
        return self.identity(left @ right)

    def compose(self, first: StrandMor, then: StrandMor) -> StrandMor:
        self._require_composable(first, then)
        return StrandMor(
            first.word, tuple(x or y for x, y in zip(first.flags, then.flags))
        )

    def tensor(self, left: StrandMor, right: StrandMor) -> StrandMor:
        return StrandMor(left.word @ right.word, left.flags + right.flags)

    def equal(self, m1: StrandMor, m2: StrandMor) -> bool:
        if len(m1.word) != len(m2.word):
            raise TypeMismatch("cannot compare strand bundles of different width")
        return m1.touched() == m2.touched()

    # -- enumeration -----------------------------------------------------------------

    def enumerate_hom(self, dom: ObjectWord, cod: ObjectWord, budget: int) -> HomSet:
        d = self._check_word(self.normalize_word(dom))
        c = self._check_word(self.normalize_word(cod))
        if len(d) != len(c):
            return HomSet((), complete=True)
        n = len(d)
        if n == 0:
            items: tuple = (self.identity(d),)
        else:
            items = (
                StrandMor(d, (False,) * n),
                StrandMor(d, (True,) + (False,) * (n - 1)),
            )
        if len(items) > budget:
            return HomSet(items[:budget], complete=False)
        return HomSet(items, complete=True)

    # -- hooks ----------------------------------------------------------------------

    def env_lengths_for_boundary(
        self,
        source: tuple[ObjectWord, ObjectWord],
        target: tuple[ObjectWord, ObjectWord],
    ) -> tuple[int, ...]:
        # every morphism preserves strand count, so the environment width
        # is pinned by the boundary
        e = len(source[0]) - len(target[0])
        if e >= 0 and len(source[1]) - len(target[1]) == e:
            return (e,)
        return ()

    def extension_word_len_needed(
        self,
        source: tuple[ObjectWord, ObjectWord],
        target: tuple[ObjectWord, ObjectWord],
    ) -> int:
        # the all-identity filler at the narrowest typable context already
        # separates the two collapsed classes any composite can land in
        return abs(len(target[0]) - len(target[1]))

    def canonical_key(self, m: StrandMor) -> Hashable:
        return ("strand", len(m.word), m.touched())

    def value_to_term(self, m: StrandMor) -> MorTerm:
        n = len(m.word)
        if not m.touched():
            return Identity(m.word)
        if n == 1:
            return Generator(self.endo_name)
        return Tensor(Generator(self.endo_name), Identity(self.strands(n - 1)))


# ---------------------------------------------------------------------------
# Pointed wirings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WiringMor:
    """Normal form of a diagram built from states, an effect, and wires.

    ``matching`` holds (input, output) pairs of through-wires, ``caps`` the
    discarded inputs as (input, effect name), ``seeds`` the freshly created
    outputs as (output, state name), and ``scalars`` the sorted multiset of
    (state, effect) loops the rewrite rules left behind.
    """

    dom: ObjectWord
    cod: ObjectWord
    matching: frozenset
    caps: frozenset
    seeds: frozenset
    scalars: tuple

    def __repr__(self) -> str:
        parts = []
        if self.matching:
            parts.append("wires " + str(sorted(self.matching)))
        if self.caps:
            parts.append("caps " + str(sorted(self.caps)))
        if self.seeds:
            parts.append("seeds " + str(sorted(self.seeds)))
        if self.scalars:
            parts.append("scalars " + str(list(self.scalars)))
        body = "; ".join(parts) or "empty"
        return f"WiringMor({self.dom.pretty()} -> {self.cod.pretty()}: {body})"


class PointedFreeBackend(Backend):
    """Free symmetric monoidal category on states and a discarding effect.

    ``rules`` lists (state, effect) pairs whose composite rewrites to the
    empty diagram.  Hom-set enumeration generates scalar-free wirings but
    is always reported as truncated: the backend treats its own hom-sets
    as open-ended, so downstream certification never leans on it.
    """

    enumerable = True
    # the braid value of a comb records the complete wiring of the open
    # diagram, and plugging a filler composes wirings, so braid agreement
    # settles filler agreement here as well
    braid_conclusive = True

    def __init__(
        self,
        object_name: str = "a",
        states: Iterable[str] = ("phi", "psi"),
        effects: Iterable[str] = ("bang",),
        rules: Iterable[tuple[str, str]] | None = None,
        name: str | None = None,
    ):
        self.object_name = object_name
        self.states = tuple(states)
        self.effects = tuple(effects)
        if rules is None:
            rules = [(s, e) for s in self.states for e in self.effects]
        self.rules = frozenset(rules)
        self.name = name or "free-pointed"
        for s, e in self.rules:
            if s not in self.states:
                raise UnknownGenerator(f"rule uses undeclared state {s!r}")
            if e not in self.effects:
                raise UnknownGenerator(f"rule uses undeclared effect {e!r}")
        report = self.rewrite_report()
        if not (report["terminating"] and report["confluent"]):
            raise ValueError(f"rewrite system is not canonical: {report}")

    def rewrite_report(self) -> dict:
        """Re-derive why normal forms are unique.

        Every rule erases one state node and one effect node, so rewriting
        strictly shrinks diagrams and terminates.  A left-hand side is a
        single state-to-effect wire; a state node has exactly one output
        wire, so two distinct rules can never fire on overlapping material.
        The count below scans rule pairs for equal left-hand sides anyway.
        """
        overlaps = 0
        rules = sorted(self.rules)
        for i, r1 in enumerate(rules):
            for r2 in rules[i + 1 :]:
                if r1 == r2:
                    overlaps += 1
        return {
            "terminating": True,
            "critical_pairs": overlaps,
            "confluent": overlaps == 0,
            "rules": rules,
        }

    def strands(self, n: int) -> ObjectWord:
        return ObjectWord((self.object_name,) * n)

    def _check_word(self, word: ObjectWord) -> ObjectWord:
        for fct in word:
            if fct != self.object_name:
                raise UnknownGenerator(f"unknown object {fct!r}")
        return word

    # -- signature ---------------------------------------------------------------

    def object_names(self) -> tuple[str, ...]:
        return (self.object_name,)

    def generator_names(self) -> tuple[str, ...]:
        return self.states + self.effects

    def gen_type(self, name: str) -> tuple[ObjectWord, ObjectWord]:
        if name in self.states:
            return (ObjectWord.unit(), self.strands(1))
        if name in self.effects:
            return (self.strands(1), ObjectWord.unit())
        raise UnknownGenerator(f"unknown morphism {name!r}")

    def generator(self, name: str) -> WiringMor:
        if name in self.states:
            return WiringMor(
                ObjectWord.unit(), self.strands(1),
                frozenset(), frozenset(), frozenset({(0, name)}), (),
            )
        if name in self.effects:
            return WiringMor(
                self.strands(1), ObjectWord.unit(),
                frozenset(), frozenset({(0, name)}), frozenset(), (),
            )
        raise UnknownGenerator(f"unknown morphism {name!r}")

    # -- structure ------------------------------------------------------------------

    def dom(self, m: WiringMor) -> ObjectWord:
        return m.dom

    def cod(self, m: WiringMor) -> ObjectWord:
        return m.cod

    def identity(self, word: ObjectWord) -> WiringMor:
        w = self._check_word(word)
        return WiringMor(
            w, w, frozenset((i, i) for i in range(len(w))),
            frozenset(), frozenset(), (),
        )

    def symmetry(self, left: ObjectWord, right: ObjectWord) -> WiringMor:
        nl, nr = len(self._check_word(left)), len(self._check_word(right))
        matching = frozenset(
            [(i, nr + i) for i in range(nl)] + [(nl + j, j) for j in range(nr)]
        )
        return WiringMor(left @ right, right @ left, matching, frozenset(), frozenset(), ())

    def compose(self, first: WiringMor, then: WiringMor) -> WiringMor:
        self._require_composable(first, then)
        out_of_mid = {t: o for (t, o) in then.matching}
        cap_of_mid = {t: e for (t, e) in then.caps}
        matching = []
        caps = list(first.caps)
        seeds = list(then.seeds)
        scalars = list(first.scalars) + list(then.scalars)
        for (i, t) in first.matching:
            if t in out_of_mid:
                matching.append((i, out_of_mid[t]))
            else:
                caps.append((i, cap_of_mid[t]))
        for (t, s) in first.seeds:
            if t in out_of_mid:
                seeds.append((out_of_mid[t], s))
            else:
                pair = (s, cap_of_mid[t])
                if pair not in self.rules:
                    scalars.append(pair)
        return WiringMor(
            first.dom, then.cod,
            frozenset(matching), frozenset(caps), frozenset(seeds),
            tuple(sorted(scalars)),
        )

    def tensor(self, left: WiringMor, right: WiringMor) -> WiringMor:
        di, do = len(left.dom), len(left.cod)
        matching = frozenset(
            list(left.matching) + [(di + i, do + j) for (i, j) in right.matching]
        )
        caps = frozenset(list(left.caps) + [(di + i, e) for (i, e) in right.caps])
        seeds = frozenset(list(left.seeds) + [(do + j, s) for (j, s) in right.seeds])
        return WiringMor(
            left.dom @ right.dom, left.cod @ right.cod,
            matching, caps, seeds, tuple(sorted(left.scalars + right.scalars)),
        )

    def equal(self, m1: WiringMor, m2: WiringMor) -> bool:
        if m1.dom != m2.dom or m1.cod != m2.cod:
            raise TypeMismatch("cannot compare wirings with different boundaries")
        return (
            m1.matching == m2.matching
            and m1.caps == m2.caps
            and m1.seeds == m2.seeds
            and m1.scalars == m2.scalars
        )

    # -- enumeration -------------------------------------------------------------------

    def enumerate_hom(self, dom: ObjectWord, cod: ObjectWord, budget: int) -> HomSet:
        """Scalar-free wirings in a fixed order; always flagged truncated."""
        m, n = len(self._check_word(dom)), len(self._check_word(cod))
        items: list[WiringMor] = []
        done = False
        for k in range(min(m, n), -1, -1):
            for ins in itertools.combinations(range(m), k):
                for outs in itertools.combinations(range(n), k):
                    for assigned in itertools.permutations(outs):
                        matching = frozenset(zip(ins, assigned))
                        rest_in = [i for i in range(m) if i not in ins]
                        rest_out = [j for j in range(n) if j not in outs]
                        for caps in itertools.product(self.effects, repeat=len(rest_in)):
                            for seeds in itertools.product(self.states, repeat=len(rest_out)):
                                items.append(WiringMor(
                                    dom, cod, matching,
                                    frozenset(zip(rest_in, caps)),
                                    frozenset(zip(rest_out, seeds)), (),
                                ))
                                if len(items) >= budget:
                                    done = True
                                if done:
                                    break
                            if done:
                                break
                        if done:
                            break
                    if done:
                        break
                if done:
                    break
            if done:
                break
        return HomSet(tuple(items), complete=False)

    # -- hooks ------------------------------------------------------------------------------

    def canonical_key(self, m: WiringMor) -> Hashable:
        return (
            "wiring", m.dom, m.cod,
            tuple(sorted(m.matching)), tuple(sorted(m.caps)),
            tuple(sorted(m.seeds)), m.scalars,
        )

    def value_to_term(self, m: WiringMor) -> MorTerm:
        """Reconstruct a term whose evaluation is this wiring."""
        p, q = len(m.dom), len(m.cod)
        pairs = sorted(m.matching, key=lambda ij: ij[1])
        k = len(pairs)
        capped = sorted(i for (i, _) in m.caps)
        cap_name = dict(m.caps)
        seeded = sorted(j for (j, _) in m.seeds)
        seed_name = dict(m.seeds)
        strand = ObjectWord((self.object_name,))

        term: MorTerm = Identity(m.dom)
        if p:
            perm = [i for (i, _) in pairs] + capped
            term = Compose(term, permutation_term([strand] * p, perm))
        effect_layer: MorTerm | None = None
        for i in capped:
            g: MorTerm = Generator(cap_name[i])
            effect_layer = g if effect_layer is None else Tensor(effect_layer, g)
        if effect_layer is not None:
            term = Compose(
                term,
                Tensor(Identity(self.strands(k)), effect_layer) if k else effect_layer,
            )
        state_layer: MorTerm | None = None
        for j in seeded:
            g = Generator(seed_name[j])
            state_layer = g if state_layer is None else Tensor(state_layer, g)
        if state_layer is not None:
            term = Compose(
                term,
                Tensor(Identity(self.strands(k)), state_layer) if k else state_layer,
            )
        if q:
            # current block order: matched outputs by ascending target, then seeds
            current = [j for (_, j) in pairs] + seeded
            perm = [current.index(t) for t in range(q)]
            term = Compose(term, permutation_term([strand] * q, perm))
        for (s, e) in m.scalars:
            term = Tensor(term, Compose(Generator(s), Generator(e)))
        return term
