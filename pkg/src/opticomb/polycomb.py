"""Combs with several ordered holes and their plugging structure.

A poly representative has holes ``(A_i, A_i')``, outer pairs
``(B_j, B_j')``, environments ``M_i`` threading between consecutive
holes, and segments ``s_0 ... s_n``: the bottom segment turns the outer
inputs into the first environment and hole input, each middle segment
turns one hole's output into the next environment and hole input, and
the top segment turns the last hole's output into the outer outputs.

Composition plugs one representative into a hole of another.  Two shapes
are supported: an inner piece with exactly one outer pair splices its
hole chain into place, and a hole-free inner piece (a single segment)
plugs one of its ports into the hole while its remaining ports join the
host's outer boundary.  Together these cover unit/counit plugging and
the yanking identities.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Sequence

from .core import (
    Backend,
    Budget,
    Decision,
    FactorWitness,
    HoleMismatch,
    NotCompactClosed,
    ObjectWord,
    TypeMismatch,
    UnsupportedShape,
    block_permutation,
)
from .comb import CombRep, identity_comb

Pair = tuple[ObjectWord, ObjectWord]


def _join(words: Sequence[ObjectWord]) -> ObjectWord:
    return ObjectWord(tuple(f for w in words for f in w.factors))


def _pp(pair: Pair) -> str:
    return f"({pair[0].pretty()},{pair[1].pretty()})"


@dataclass(frozen=True)
class PolyCombRep:
    holes: tuple[Pair, ...]
    outers: tuple[Pair, ...]
    envs: tuple[ObjectWord, ...]
    segments: tuple[Any, ...]

    def outer_ins(self) -> ObjectWord:
        return _join([p[0] for p in self.outers])

    def outer_outs(self) -> ObjectWord:
        return _join([p[1] for p in self.outers])

    def __repr__(self) -> str:
        hs = ", ".join(_pp(p) for p in self.holes)
        os_ = ", ".join(_pp(p) for p in self.outers)
        return f"PolyCombRep(holes=[{hs}] outers=[{os_}])"


def poly(
    backend: Backend,
    holes: Sequence[Pair],
    outers: Sequence[Pair],
    envs: Sequence[ObjectWord],
    segments: Sequence[Any],
) -> PolyCombRep:
    """Assemble and type-check a poly representative."""
    holes = tuple((backend.normalize_word(a), backend.normalize_word(b)) for a, b in holes)
    outers = tuple((backend.normalize_word(a), backend.normalize_word(b)) for a, b in outers)
    envs = tuple(backend.normalize_word(e) for e in envs)
    segments = tuple(segments)
    n = len(holes)
    if len(envs) != n:
        raise TypeMismatch(f"{n} holes need {n} environments, got {len(envs)}")
    if len(segments) != n + 1:
        raise TypeMismatch(f"{n} holes need {n + 1} segments, got {len(segments)}")
    ins = _join([p[0] for p in outers])
    outs = _join([p[1] for p in outers])
    expected: list[tuple[ObjectWord, ObjectWord]] = []
    if n == 0:
        expected.append((ins, outs))
    else:
        expected.append((ins, envs[0] @ holes[0][0]))
        for i in range(1, n):
            expected.append((envs[i - 1] @ holes[i - 1][1], envs[i] @ holes[i][0]))
        expected.append((envs[n - 1] @ holes[n - 1][1], outs))
    for i, (d, c) in enumerate(expected):
        got_d, got_c = backend.dom(segments[i]), backend.cod(segments[i])
        if not (backend.words_equal(got_d, d) and backend.words_equal(got_c, c)):
            raise TypeMismatch(
                f"segment {i} must be {d.pretty()} -> {c.pretty()}, got "
                f"{got_d.pretty()} -> {got_c.pretty()}"
            )
    return PolyCombRep(holes, outers, envs, segments)


def from_comb(backend: Backend, c: CombRep) -> PolyCombRep:
    return poly(backend, [c.target], [c.source], [c.env], [c.f, c.g])


def to_comb(backend: Backend, p: PolyCombRep) -> CombRep:
    if len(p.holes) != 1 or len(p.outers) != 1:
        raise UnsupportedShape("only one-hole, one-outer representatives are combs")
    return CombRep(p.outers[0], p.holes[0], p.envs[0], p.segments[0], p.segments[1])


def identity_poly(backend: Backend, b: ObjectWord, b1: ObjectWord) -> PolyCombRep:
    return from_comb(backend, identity_comb(backend, b, b1))


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def poly_extended_eval(
    backend: Backend,
    p: PolyCombRep,
    fillers: Sequence[Any],
    contexts: Sequence[tuple[ObjectWord, ObjectWord]],
) -> Any:
    """Plug ``fillers[i] : C_i (x) A_i -> D_i (x) A_i'`` into every hole.

    The result runs ``C_0 .. C_{n-1} (x) B -> D_0 .. D_{n-1} (x) B'``.
    Context legs wait on the far left; each round moves one leg across,
    applies the filler, parks its output leg, and runs the next segment.
    For a single hole this is the one-hole extended evaluation, factor
    for factor.
    """
    n = len(p.holes)
    if len(fillers) != n or len(contexts) != n:
        raise HoleMismatch(f"expected {n} fillers and {n} contexts")
    cs = [backend.normalize_word(c) for (c, _) in contexts]
    ds = [backend.normalize_word(d) for (_, d) in contexts]
    for i, lam in enumerate(fillers):
        want_d = cs[i] @ p.holes[i][0]
        want_c = ds[i] @ p.holes[i][1]
        if not (
            backend.words_equal(backend.dom(lam), want_d)
            and backend.words_equal(backend.cod(lam), want_c)
        ):
            raise TypeMismatch(
                f"filler {i} must be {want_d.pretty()} -> {want_c.pretty()}, got "
                f"{backend.dom(lam).pretty()} -> {backend.cod(lam).pretty()}"
            )
    val = backend.tensor(backend.identity(_join(cs)), p.segments[0])
    for i in range(n):
        pending = _join(cs[i + 1 :])
        parked = _join(ds[:i])
        across = pending @ parked @ p.envs[i]
        val = backend.compose(
            val,
            backend.tensor(
                backend.symmetry(cs[i], across), backend.identity(p.holes[i][0])
            ),
        )
        val = backend.compose(
            val, backend.tensor(backend.identity(across), fillers[i])
        )
        val = backend.compose(
            val,
            backend.tensor(
                backend.tensor(
                    backend.identity(pending @ parked),
                    backend.symmetry(p.envs[i], ds[i]),
                ),
                backend.identity(p.holes[i][1]),
            ),
        )
        val = backend.compose(
            val,
            backend.tensor(
                backend.identity(pending @ parked @ ds[i]), p.segments[i + 1]
            ),
        )
    return val


def poly_name(backend: Backend, p: PolyCombRep) -> Any:
    """The one-shot value ``B (x) A_0' .. A_{n-1}' -> A_0 .. A_{n-1} (x) B'``.

    Feeds every hole output straight back in and parks each hole input on
    the left as it appears.  Offered over compact closed backends, where
    this value classifies representatives up to plugging behaviour.
    """
    if not backend.compact_closed:
        raise NotCompactClosed(
            f"name forms are only offered over compact closed backends, "
            f"not {backend.name}"
        )
    n = len(p.holes)
    rest = [p.holes[i][1] for i in range(n)]
    val = backend.tensor(p.segments[0], backend.identity(_join(rest)))
    parked: list[ObjectWord] = []
    for i in range(n):
        tail = _join(rest[i + 1 :])
        val = backend.compose(
            val,
            backend.tensor(
                backend.tensor(
                    backend.identity(_join(parked)),
                    backend.symmetry(p.envs[i], p.holes[i][0]),
                ),
                backend.identity(p.holes[i][1] @ tail),
            ),
        )
        parked.append(p.holes[i][0])
        val = backend.compose(
            val,
            backend.tensor(
                backend.tensor(backend.identity(_join(parked)), p.segments[i + 1]),
                backend.identity(tail),
            ),
        )
    return val


def poly_equiv(
    backend: Backend, p: PolyCombRep, q: PolyCombRep, bound: int = 2
) -> Decision:
    """Decide plugging equivalence of two poly representatives.

    Over compact closed backends the name values classify completely.
    Elsewhere a bounded family of trivial-context filler tuples can
    refute, never confirm.
    """
    if p.holes != q.holes or p.outers != q.outers:
        raise HoleMismatch(f"representatives live on different shapes: {p!r} vs {q!r}")
    if backend.compact_closed:
        n1, n2 = poly_name(backend, p), poly_name(backend, q)
        if backend.equal(n1, n2):
            return Decision.equivalent("poly-name", tolerance=backend.tolerance)
        witness = FactorWitness(
            pieces={"left_name": n1, "right_name": n2},
            note="name values differ",
        )
        return Decision.distinct("poly-name", witness, tolerance=backend.tolerance)
    if backend.enumerable:
        budget = Budget.of(bound)
        unit = ObjectWord.unit()
        hom_sets = [
            backend.enumerate_hom(a, a1, budget.max_hom) for (a, a1) in p.holes
        ]
        tried = 0
        for combo in itertools.product(*[hs.items for hs in hom_sets]):
            tried += 1
            ctx = [(unit, unit)] * len(p.holes)
            v1 = poly_extended_eval(backend, p, list(combo), ctx)
            v2 = poly_extended_eval(backend, q, list(combo), ctx)
            if not backend.equal(v1, v2):
                witness = FactorWitness(
                    pieces={"fillers": combo, "left": v1, "right": v2},
                    note="a tuple of trivial-context fillers separates the "
                         "representatives",
                )
                return Decision.distinct(
                    "poly-probes",
                    witness,
                    tolerance=backend.tolerance,
                    coverage={"filler_tuples_tried": tried},
                )
        return Decision.unknown(
            "poly-probes",
            coverage={
                "filler_tuples_tried": tried,
                "hom_scans_complete": all(hs.complete for hs in hom_sets),
            },
            tolerance=backend.tolerance,
        )
    raise NotCompactClosed(
        f"{backend.name} offers neither name forms nor enumerable fillers"
    )


# ---------------------------------------------------------------------------
# Plugging
# ---------------------------------------------------------------------------

def poly_compose_at(
    backend: Backend,
    outer: PolyCombRep,
    inner: PolyCombRep,
    hole_index: int,
    inner_port: int | None = None,
) -> PolyCombRep:
    """Plug ``inner`` into hole ``hole_index`` of ``outer``.

    Supported shapes: an inner with exactly one outer pair (its hole chain
    is spliced into the host), or an inner with no holes (one chosen port
    fills the host hole, the remaining ports are appended to the host's
    outer boundary).
    """
    n = len(outer.holes)
    if not 0 <= hole_index < n:
        raise HoleMismatch(f"no hole {hole_index} in a {n}-hole representative")
    pair = outer.holes[hole_index]
    if len(inner.outers) == 1 and inner_port in (None, 0):
        if inner.outers[0] != pair:
            raise HoleMismatch(
                f"inner boundary {_pp(inner.outers[0])} does not fit hole {_pp(pair)}"
            )
        return _splice(backend, outer, inner, hole_index)
    if len(inner.holes) == 0:
        if inner_port is not None:
            if not 0 <= inner_port < len(inner.outers):
                raise HoleMismatch(f"inner has no port {inner_port}")
            if inner.outers[inner_port] != pair:
                raise HoleMismatch(
                    f"port {inner_port} is {_pp(inner.outers[inner_port])}, "
                    f"hole is {_pp(pair)}"
                )
            port = inner_port
        else:
            fits = [l for l, pr in enumerate(inner.outers) if pr == pair]
            if not fits:
                raise HoleMismatch(f"no port of the inner piece fits hole {_pp(pair)}")
            port = fits[0]
        return _plug_segment(backend, outer, inner, hole_index, port)
    raise UnsupportedShape(
        "plugging supports a one-outer inner or a hole-free inner only"
    )


def _splice(
    backend: Backend, outer: PolyCombRep, inner: PolyCombRep, j: int
) -> PolyCombRep:
    """Case one: the inner piece has a single outer pair matching the hole."""
    k = len(inner.holes)
    m_j = outer.envs[j]
    id_mj = backend.identity(m_j)
    segs = list(outer.segments)
    if k == 0:
        merged = backend.compose(
            backend.compose(segs[j], backend.tensor(id_mj, inner.segments[0])),
            segs[j + 1],
        )
        return poly(
            backend,
            outer.holes[:j] + outer.holes[j + 1 :],
            outer.outers,
            outer.envs[:j] + outer.envs[j + 1 :],
            segs[:j] + [merged] + segs[j + 2 :],
        )
    first = backend.compose(segs[j], backend.tensor(id_mj, inner.segments[0]))
    middle = [backend.tensor(id_mj, inner.segments[i]) for i in range(1, k)]
    last = backend.compose(backend.tensor(id_mj, inner.segments[k]), segs[j + 1])
    return poly(
        backend,
        outer.holes[:j] + inner.holes + outer.holes[j + 1 :],
        outer.outers,
        outer.envs[:j] + tuple(m_j @ ne for ne in inner.envs) + outer.envs[j + 1 :],
        segs[:j] + [first] + middle + [last] + segs[j + 2 :],
    )


def _plug_segment(
    backend: Backend, outer: PolyCombRep, inner: PolyCombRep, j: int, port: int
) -> PolyCombRep:
    """Case two: a hole-free inner piece with spare ports.

    The spare port inputs ride in the environment up to the plugged hole,
    the inner segment runs there, and the spare outputs ride in the
    environment from the hole on, leaving with the top segment.
    """
    m = len(inner.outers)
    x_in = [pr[0] for pr in inner.outers]
    x_out = [pr[1] for pr in inner.outers]
    others = [l for l in range(m) if l != port]
    l_in = _join([x_in[l] for l in others])
    l_out = _join([x_out[l] for l in others])
    n = len(outer.holes)
    segs = outer.segments

    def carry(seg: Any, env_in: ObjectWord, hole_out: ObjectWord,
              env_out: ObjectWord, produced: ObjectWord,
              luggage: ObjectWord, last: bool) -> Any:
        # env_in (x) luggage (x) hole_out -> env_out (x) luggage (x) produced
        val = backend.tensor(
            backend.identity(env_in), backend.symmetry(luggage, hole_out)
        )
        val = backend.compose(val, backend.tensor(seg, backend.identity(luggage)))
        if not last:
            val = backend.compose(
                val,
                backend.tensor(
                    backend.identity(env_out), backend.symmetry(produced, luggage)
                ),
            )
        return val

    new_segments: list[Any] = []
    new_envs: list[ObjectWord] = []

    # below the plugged hole: luggage is the spare inputs
    if j > 0:
        s0 = backend.tensor(segs[0], backend.identity(l_in))
        s0 = backend.compose(
            s0,
            backend.tensor(
                backend.identity(outer.envs[0]),
                backend.symmetry(outer.holes[0][0], l_in),
            ),
        )
        new_segments.append(s0)
        new_envs.append(outer.envs[0] @ l_in)
        for i in range(1, j):
            new_segments.append(
                carry(
                    segs[i], outer.envs[i - 1], outer.holes[i - 1][1],
                    outer.envs[i], outer.holes[i][0], l_in, last=False,
                )
            )
            new_envs.append(outer.envs[i] @ l_in)

    # the merged segment at the plugged hole
    m_j = outer.envs[j]
    id_mj = backend.identity(m_j)
    if j == 0:
        merged = backend.tensor(segs[0], backend.identity(l_in))
    else:
        merged = backend.tensor(
            backend.identity(outer.envs[j - 1]),
            backend.symmetry(l_in, outer.holes[j - 1][1]),
        )
        merged = backend.compose(
            merged, backend.tensor(segs[j], backend.identity(l_in))
        )
    # now at M_j (x) A_j (x) L_in; gather the inner segment's inputs
    lst = [port] + others
    assemble = block_permutation(
        backend,
        [x_in[l] for l in lst],
        [lst.index(q) for q in range(m)],
    )
    merged = backend.compose(merged, backend.tensor(id_mj, assemble))
    merged = backend.compose(merged, backend.tensor(id_mj, inner.segments[0]))
    scatter = block_permutation(backend, x_out, others + [port])
    merged = backend.compose(merged, backend.tensor(id_mj, scatter))
    # now at M_j (x) L_out (x) A_j'; hand the hole output to the next segment
    merged = backend.compose(
        merged,
        backend.tensor(id_mj, backend.symmetry(l_out, outer.holes[j][1])),
    )
    merged = backend.compose(
        merged, backend.tensor(segs[j + 1], backend.identity(l_out))
    )
    if j < n - 1:
        merged = backend.compose(
            merged,
            backend.tensor(
                backend.identity(outer.envs[j + 1]),
                backend.symmetry(outer.holes[j + 1][0], l_out),
            ),
        )
        new_envs.append(outer.envs[j + 1] @ l_out)
    new_segments.append(merged)

    # above the plugged hole: luggage is the spare outputs
    for i in range(j + 2, n + 1):
        new_segments.append(
            carry(
                segs[i], outer.envs[i - 1], outer.holes[i - 1][1],
                outer.envs[i] if i < n else ObjectWord.unit(),
                outer.holes[i][0] if i < n else ObjectWord.unit(),
                l_out, last=(i == n),
            )
        )
        if i < n:
            new_envs.append(outer.envs[i] @ l_out)

    return poly(
        backend,
        outer.holes[:j] + outer.holes[j + 1 :],
        outer.outers + tuple(inner.outers[l] for l in others),
        new_envs,
        new_segments,
    )


# ---------------------------------------------------------------------------
# Unit and counit for the hole pairing
# ---------------------------------------------------------------------------

def star_unit(backend: Backend, a: ObjectWord, a1: ObjectWord) -> PolyCombRep:
    """The hole-free piece with ports ``(A,A')`` and ``(A',A)`` joined by a swap."""
    return poly(
        backend,
        holes=(),
        outers=((a, a1), (a1, a)),
        envs=(),
        segments=(backend.symmetry(a, a1),),
    )


def star_counit(backend: Backend, a: ObjectWord, a1: ObjectWord) -> PolyCombRep:
    """The closed two-hole piece pairing ``(A,A')`` against ``(A',A)``.

    Needs compact structure: the first hole's input is created against a
    dual leg that the second hole's output later annihilates.
    """
    if not backend.compact_closed:
        raise NotCompactClosed(
            f"the counit needs cups and caps, absent from {backend.name}"
        )
    a_star = backend.dual(a)
    return poly(
        backend,
        holes=((a, a1), (a1, a)),
        outers=(),
        envs=(a_star, a_star),
        segments=(
            backend.cup(a),
            backend.identity(a_star @ a1),
            backend.cap(a_star),
        ),
    )
