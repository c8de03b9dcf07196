"""Optics: combs identified only up to environment slides.

The optic relation is finer than filler agreement.  Two representatives
are slide-equivalent when a chain of moves connects them, each move
re-expressing one side of the environment:

* ``push_down``: factor the bottom as ``f = (v (x) 1_B) . f0`` with
  ``v : E0 -> E`` and absorb v into the top, shrinking the environment to
  E0.
* ``push_up``: factor the top as ``g = g0 . (v (x) 1_B')`` with
  ``v : E -> E1`` and absorb v into the bottom.

The two moves are mutually inverse, so slide classes are the connected
components of the move graph and a breadth-first search from one
representative decides membership.  A reached representative yields a
certified yes with the move chain as witness; exhausting the component
yields a certified no only when the backend pins all environment shapes
and every hom-set scan along the way was complete.

On structured backends the search is bypassed: braid values classify
optics over compact closed backends, (get, put) components classify them
over cartesian ones, and environment-rotation factoring classifies them
over unitary ones.
"""
from __future__ import annotations

from collections import deque
from typing import Any

from .core import (
    Backend,
    BoundaryMismatch,
    Budget,
    Decision,
    ExhaustionWitness,
    FactorWitness,
    IncompatibleStrategy,
    NonComposableMove,
    ObjectWord,
    ProbeWitness,
    SlidePathWitness,
    SlideStep,
    Symmetry,
)
from .comb import CombRep, braid_eval, comb as make_comb, extended_eval, lens_pair, swap_probe
from .sampling import env_words_for

OpticRep = CombRep

OPTIC_STRATEGIES = ("auto", "name-form", "lens", "unitary-factor", "zigzag")


def slide_related(backend: Backend, f: Any, v: Any, g: Any) -> tuple[CombRep, CombRep]:
    """The canonical slide-equivalent pair built around ``v : E -> E1``.

    With ``f : A -> E (x) B`` and ``g : E1 (x) B' -> A'``, the lower
    representative keeps v in its top and the upper one absorbs v into its
    bottom; one ``push_up`` move connects them.
    """
    e = backend.cod(f)
    e0 = backend.dom(v)
    e1 = backend.cod(v)
    b = ObjectWord(e.factors[len(e0):])
    if ObjectWord(e.factors[: len(e0)]) != e0:
        raise NonComposableMove(
            f"cod(f) = {e.pretty()} does not start with dom(v) = {e0.pretty()}"
        )
    b1 = ObjectWord(backend.dom(g).factors[len(e1):])
    lower = make_comb(
        backend, f, backend.compose(backend.tensor(v, backend.identity(b1)), g), e0
    )
    upper = make_comb(
        backend, backend.compose(f, backend.tensor(v, backend.identity(b))), g, e1
    )
    return lower, upper


def _state_key(backend: Backend, e: ObjectWord, f: Any, g: Any):
    return (e, backend.canonical_key(f), backend.canonical_key(g))


def _zigzag(backend: Backend, o1: CombRep, o2: CombRep, bound: int,
            max_states: int = 4096) -> Decision:
    budget = Budget.of(bound)
    (a, a1), (b, b1) = o1.source, o1.target
    id_b = backend.identity(b)
    id_b1 = backend.identity(b1)
    envs, graded = env_words_for(backend, o1.source, o1.target, bound)
    env_list = list(envs)
    for extra in (o1.env, o2.env):
        if extra not in env_list:
            env_list.append(extra)

    scans_complete = True
    hom_cache: dict[tuple[ObjectWord, ObjectWord], tuple] = {}

    def hom(dom: ObjectWord, cod: ObjectWord):
        nonlocal scans_complete
        key = (dom, cod)
        if key not in hom_cache:
            hs = backend.enumerate_hom(dom, cod, budget.max_hom)
            scans_complete = scans_complete and hs.complete
            hom_cache[key] = hs.items
        return hom_cache[key]

    start = (o1.env, o1.f, o1.g)
    goal_key = _state_key(backend, o2.env, o2.f, o2.g)
    start_key = _state_key(backend, *start)
    parents: dict[Any, tuple[Any, SlideStep] | None] = {start_key: None}
    queue = deque([start])
    truncated = False

    def emit_path(end_key) -> SlidePathWitness:
        steps = []
        cur = end_key
        while parents[cur] is not None:
            prev, step = parents[cur]
            steps.append(step)
            cur = prev
        return SlidePathWitness(tuple(reversed(steps)))

    if start_key == goal_key:
        return Decision.equivalent(
            "slide-search", witness=SlidePathWitness(()), tolerance=backend.tolerance
        )

    while queue:
        e, f, g = queue.popleft()
        cur_key = _state_key(backend, e, f, g)
        neighbors = []
        for e0 in env_list:
            # push_down: f = (v (x) 1_B) . f0 moves v out of the bottom
            for v in hom(e0, e):
                for f0 in hom(a, e0 @ b):
                    cand = backend.compose(f0, backend.tensor(v, id_b))
                    if backend.equal(cand, f):
                        g0 = backend.compose(backend.tensor(v, id_b1), g)
                        neighbors.append(
                            ((e0, f0, g0), SlideStep("push_down", v, e0))
                        )
            # push_up: g = g0 . (v (x) 1_B') moves v out of the top
            for v in hom(e, e0):
                for g0 in hom(e0 @ b1, a1):
                    cand = backend.compose(backend.tensor(v, id_b1), g0)
                    if backend.equal(cand, g):
                        f1 = backend.compose(f, backend.tensor(v, id_b))
                        neighbors.append(
                            ((e0, f1, g0), SlideStep("push_up", v, e0))
                        )
        for (state, step) in neighbors:
            key = _state_key(backend, *state)
            if key in parents:
                continue
            parents[key] = (cur_key, step)
            if key == goal_key:
                return Decision.equivalent(
                    "slide-search", witness=emit_path(key),
                    tolerance=backend.tolerance,
                )
            if len(parents) >= max_states:
                truncated = True
            else:
                queue.append(state)

    coverage = {
        "states_explored": len(parents),
        "environments_graded": graded,
        "hom_scans_complete": scans_complete,
        "frontier_truncated": truncated,
    }
    if graded and scans_complete and not truncated:
        witness = ExhaustionWitness(
            states_explored=len(parents),
            environments=tuple(env_list),
            note="the full slide component of the left representative was "
                 "explored and never met the right one",
        )
        return Decision.distinct(
            "slide-search", witness, tolerance=backend.tolerance, coverage=coverage
        )
    return Decision.unknown("slide-search", coverage=coverage, tolerance=backend.tolerance)


def unitary_comb_factor(backend: Backend, o1: CombRep, o2: CombRep) -> Decision:
    """Decide slide equivalence of unitary combs by factoring the change of
    environment.

    ``u = f2 . dagger(f1)`` must be an environment rotation beside an
    identity on the hole input, ``v = dagger(g1) . g2`` one beside an
    identity on the hole output, and the two rotations must cancel.  All
    slides in a unitary backend are invertible, so a whole zigzag collapses
    to one rotation and this check is complete.
    """
    from .backends.unitary import tensor_separate

    (b, b1) = o1.target
    d_b = backend.dim(b)
    d_b1 = backend.dim(b1)
    d_e1 = backend.dim(o1.env)
    import numpy as np

    u = backend.compose(backend.dagger(o1.f), o2.f)
    v = backend.compose(o2.g, backend.dagger(o1.g))
    u_left, res_u = tensor_separate(u.array, d_e1, d_b, backend.tolerance)
    v_left, res_v = tensor_separate(v.array, backend.dim(o2.env), d_b1, backend.tolerance)
    cancel = float(np.max(np.abs(np.dot(v_left, u_left) - np.eye(d_e1))))
    ok = res_u <= backend.tolerance * 10 and res_v <= backend.tolerance * 10 \
        and cancel <= backend.tolerance * 10
    pieces = {
        "rotation": u_left,
        "inverse_rotation": v_left,
        "bottom_residual": res_u,
        "top_residual": res_v,
        "cancellation_residual": cancel,
    }
    if ok:
        witness = FactorWitness(
            pieces=pieces,
            note="both sides factor through one environment rotation",
        )
        return Decision.equivalent(
            "unitary-factorization", witness=witness, tolerance=backend.tolerance
        )
    witness = FactorWitness(
        pieces=pieces,
        note="no environment rotation relates the representatives",
    )
    return Decision.distinct(
        "unitary-factorization", witness, tolerance=backend.tolerance
    )


def equiv_optic(
    backend: Backend,
    o1: CombRep,
    o2: CombRep,
    strategy: str = "auto",
    bound: int = 2,
    max_states: int = 4096,
) -> Decision:
    """Decide slide equivalence of two representatives on one boundary."""
    if o1.boundary() != o2.boundary():
        raise BoundaryMismatch(
            f"representatives live on different boundaries: {o1.boundary()} vs "
            f"{o2.boundary()}"
        )
    if strategy == "auto":
        if backend.unitary_values:
            strategy = "unitary-factor"
        elif backend.compact_closed:
            strategy = "name-form"
        elif backend.cartesian:
            strategy = "lens"
        else:
            strategy = "zigzag"
    if strategy == "name-form":
        if not backend.compact_closed:
            raise IncompatibleStrategy(
                f"name forms need a compact closed backend, not {backend.name}"
            )
        n1, n2 = braid_eval(backend, o1), braid_eval(backend, o2)
        if backend.equal(n1, n2):
            return Decision.equivalent("name-form", tolerance=backend.tolerance)
        probe, cw, dw = swap_probe(backend, o1)
        witness = ProbeWitness(
            cw, dw, probe, left=n1, right=n2,
            probe_term=Symmetry(o1.target[1], o1.target[0]),
            note="name values differ",
        )
        return Decision.distinct("name-form", witness, tolerance=backend.tolerance)
    if strategy == "lens":
        if not backend.cartesian:
            raise IncompatibleStrategy(
                f"lens strategy needs a cartesian backend, not {backend.name}"
            )
        get1, put1 = lens_pair(backend, o1)
        get2, put2 = lens_pair(backend, o2)
        same_get = backend.equal(get1, get2)
        same_put = backend.equal(put1, put2)
        if same_get and same_put:
            return Decision.equivalent("lens-components", tolerance=backend.tolerance)
        which = "get" if not same_get else "put"
        witness = FactorWitness(
            pieces={
                "get_left": get1, "get_right": get2,
                "put_left": put1, "put_right": put2,
            },
            note=f"the {which} components differ",
        )
        return Decision.distinct("lens-components", witness, tolerance=backend.tolerance)
    if strategy == "unitary-factor":
        if not backend.unitary_values:
            raise IncompatibleStrategy(
                f"factorization needs a unitary backend, not {backend.name}"
            )
        return unitary_comb_factor(backend, o1, o2)
    if strategy == "zigzag":
        if not backend.enumerable:
            raise IncompatibleStrategy(
                f"slide search needs an enumerable backend, not {backend.name}"
            )
        return _zigzag(backend, o1, o2, bound, max_states)
    raise IncompatibleStrategy(
        f"unknown strategy {strategy!r}, expected one of {OPTIC_STRATEGIES}"
    )


def check_probe_witness(backend: Backend, o1: CombRep, o2: CombRep,
                        witness: ProbeWitness) -> bool:
    """Re-run a probe witness: do the two combs really disagree on it?"""
    v1 = extended_eval(backend, o1, witness.probe, witness.c_word, witness.d_word)
    v2 = extended_eval(backend, o2, witness.probe, witness.c_word, witness.d_word)
    return not backend.equal(v1, v2)
