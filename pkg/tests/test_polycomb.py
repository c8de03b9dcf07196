import numpy as np
import pytest

from opticomb import (
    FactorWitness,
    HoleMismatch,
    NotCompactClosed,
    ObjectWord,
    TypeMismatch,
    UnsupportedShape,
    Verdict,
    braid_eval,
    comb,
    comb_compose,
    extended_eval,
    from_comb,
    identity_poly,
    poly,
    poly_compose_at,
    poly_equiv,
    poly_extended_eval,
    poly_name,
    star_counit,
    star_unit,
    to_comb,
)

from conftest import rand_mat, word

U = ObjectWord.unit()


@pytest.fixture
def one_hole(cbe, rng):
    """A random comb: source (x, y), hole (y, x), env x*y."""
    e = word("x", "y")
    f = rand_mat(cbe, rng, word("x"), e @ word("y"))
    g = rand_mat(cbe, rng, e @ word("x"), word("y"))
    return comb(cbe, f, g, env=e)


@pytest.fixture
def two_hole(cbe, rng):
    """Outer (x, y); holes (y, x) then (x, y); envs x then y."""
    x, y = word("x"), word("y")
    s0 = rand_mat(cbe, rng, x, x @ y)
    s1 = rand_mat(cbe, rng, x @ x, y @ x)
    s2 = rand_mat(cbe, rng, y @ y, y)
    return poly(cbe, [(y, x), (x, y)], [(x, y)], [x, y], [s0, s1, s2])


class TestShape:
    def test_count_mismatches(self, cbe, rng):
        x, y = word("x"), word("y")
        s0 = rand_mat(cbe, rng, x, x @ y)
        with pytest.raises(TypeMismatch):
            poly(cbe, [(y, x)], [(x, y)], [], [s0, s0])
        with pytest.raises(TypeMismatch):
            poly(cbe, [(y, x)], [(x, y)], [x], [s0])

    def test_segment_boundary_checked(self, cbe, rng):
        x, y = word("x"), word("y")
        s0 = rand_mat(cbe, rng, x, x @ y)
        bad_top = rand_mat(cbe, rng, x @ y, y)  # wants x*x -> y
        with pytest.raises(TypeMismatch):
            poly(cbe, [(y, x)], [(x, y)], [x], [s0, bad_top])

    def test_comb_round_trip(self, cbe, one_hole):
        p = from_comb(cbe, one_hole)
        back = to_comb(cbe, p)
        assert back.boundary() == one_hole.boundary()
        assert back.env == one_hole.env
        assert cbe.equal(back.f, one_hole.f) and cbe.equal(back.g, one_hole.g)

    def test_to_comb_needs_one_hole_one_outer(self, cbe, two_hole):
        with pytest.raises(UnsupportedShape):
            to_comb(cbe, two_hole)

    def test_identity_poly_shape(self, cbe):
        p = identity_poly(cbe, word("x"), word("y"))
        assert p.holes == p.outers == ((word("x"), word("y")),)
        assert p.envs == (U,)


class TestEvaluation:
    def test_single_hole_matches_comb_evaluation_exactly(self, cbe, rng, one_hole):
        p = from_comb(cbe, one_hole)
        cw, dw = word("y"), word("x")
        lam = rand_mat(cbe, rng, cw @ word("y"), dw @ word("x"))
        via_comb = extended_eval(cbe, one_hole, lam, cw, dw)
        via_poly = poly_extended_eval(cbe, p, [lam], [(cw, dw)])
        # same factors in the same order: equality is exact, not approximate
        assert np.array_equal(via_comb.array, via_poly.array)

    def test_filler_count_checked(self, cbe, rng, two_hole):
        lam = rand_mat(cbe, rng, word("y"), word("x"))
        with pytest.raises(HoleMismatch):
            poly_extended_eval(cbe, two_hole, [lam], [(U, U)])

    def test_filler_boundary_checked(self, cbe, rng, two_hole):
        good = rand_mat(cbe, rng, word("y"), word("x"))
        bad = rand_mat(cbe, rng, word("y"), word("y"))
        with pytest.raises(TypeMismatch):
            poly_extended_eval(cbe, two_hole, [good, bad], [(U, U), (U, U)])

    def test_two_hole_types(self, cbe, rng, two_hole):
        lam0 = rand_mat(cbe, rng, word("y"), word("x"))
        lam1 = rand_mat(cbe, rng, word("x"), word("y"))
        val = poly_extended_eval(cbe, two_hole, [lam0, lam1], [(U, U), (U, U)])
        assert cbe.dom(val) == word("x") and cbe.cod(val) == word("y")

    def test_name_braid_coherence(self, cbe, one_hole):
        """For one hole, the name is the braid value with its legs swapped."""
        p = from_comb(cbe, one_hole)
        name = poly_name(cbe, p)
        (a, a1) = one_hole.source
        (b, b1) = one_hole.target
        rebuilt = cbe.compose(braid_eval(cbe, one_hole), cbe.symmetry(a1, b))
        assert cbe.equal(name, rebuilt)

    def test_name_needs_compact_closure(self, ffb):
        p = identity_poly(ffb, word("s"), word("s"))
        with pytest.raises(NotCompactClosed):
            poly_name(ffb, p)


class TestEquivalence:
    def test_name_route_confirms_and_refutes(self, cbe, rng, two_hole):
        d = poly_equiv(cbe, two_hole, two_hole)
        assert d.verdict is Verdict.EQUIVALENT and d.certified
        assert d.method == "poly-name"
        x, y = word("x"), word("y")
        other = poly(
            cbe, [(y, x), (x, y)], [(x, y)], [x, y],
            [
                rand_mat(cbe, rng, x, x @ y),
                rand_mat(cbe, rng, x @ x, y @ x),
                rand_mat(cbe, rng, y @ y, y),
            ],
        )
        d2 = poly_equiv(cbe, two_hole, other)
        assert d2.verdict is Verdict.DISTINCT and d2.certified
        assert isinstance(d2.witness, FactorWitness)
        assert "name" in d2.witness.note

    def test_shape_mismatch_raises(self, cbe, two_hole):
        with pytest.raises(HoleMismatch):
            poly_equiv(cbe, two_hole, identity_poly(cbe, word("x"), word("y")))

    def test_probe_route_refutes_on_enumerable(self, idem):
        a = word("a")
        f = idem.generator("f")
        p = from_comb(idem, comb(idem, f, idem.identity(a), env=U))
        q = from_comb(idem, comb(idem, f, f, env=U))
        d = poly_equiv(idem, p, q)
        assert d.method == "poly-probes"
        assert d.verdict in (Verdict.DISTINCT, Verdict.UNKNOWN)

    def test_probe_route_cannot_confirm(self, idem):
        a = word("a")
        f = idem.generator("f")
        p = from_comb(idem, comb(idem, f, idem.identity(a), env=U))
        q = from_comb(idem, comb(idem, idem.identity(a), f, env=U))
        d = poly_equiv(idem, p, q)
        assert d.verdict is Verdict.UNKNOWN
        assert d.coverage["filler_tuples_tried"] >= 1

    def test_no_route_available(self, ube):
        p = identity_poly(ube, word("q"), word("q"))
        with pytest.raises(NotCompactClosed):
            poly_equiv(ube, p, p)


class TestPlugging:
    def test_splice_agrees_with_comb_compose(self, cbe, rng):
        host = comb(
            cbe,
            rand_mat(cbe, rng, word("x"), word("x", "y")),
            rand_mat(cbe, rng, word("x", "x"), word("y")),
            env=word("x"),
        )
        nested = comb(
            cbe,
            rand_mat(cbe, rng, word("y"), word("y", "x")),
            rand_mat(cbe, rng, word("y", "y"), word("x")),
            env=word("y"),
        )
        via_comb = from_comb(cbe, comb_compose(cbe, host, nested))
        via_poly = poly_compose_at(
            cbe, from_comb(cbe, host), from_comb(cbe, nested), 0
        )
        assert via_poly.holes == via_comb.holes
        assert via_poly.outers == via_comb.outers
        lam = rand_mat(cbe, rng, word("x"), word("y"))
        v1 = poly_extended_eval(cbe, via_comb, [lam], [(U, U)])
        v2 = poly_extended_eval(cbe, via_poly, [lam], [(U, U)])
        assert cbe.equal(v1, v2)

    def test_splice_into_two_hole_host(self, cbe, rng, two_hole):
        """Splicing then filling equals filling the inner value directly."""
        y, x = word("y"), word("x")
        inner = comb(
            cbe,
            rand_mat(cbe, rng, y, y @ y),
            rand_mat(cbe, rng, y @ x, x),
            env=y,
        )  # boundary (y, x), hole (y, x)
        spliced = poly_compose_at(cbe, two_hole, from_comb(cbe, inner), 0)
        assert spliced.holes == ((y, x), (x, y))
        lam0 = rand_mat(cbe, rng, y, x)
        lam1 = rand_mat(cbe, rng, x, y)
        direct = poly_extended_eval(cbe, spliced, [lam0, lam1], [(U, U), (U, U)])
        inner_value = extended_eval(cbe, inner, lam0, U, U)
        staged = poly_extended_eval(
            cbe, two_hole, [inner_value, lam1], [(U, U), (U, U)]
        )
        assert cbe.equal(direct, staged)

    def test_plug_hole_free_single_port(self, cbe, rng, two_hole):
        y, x = word("y"), word("x")
        m = rand_mat(cbe, rng, y, x)
        flat = poly(cbe, [], [(y, x)], [], [m])
        plugged = poly_compose_at(cbe, two_hole, flat, 0)
        assert plugged.holes == ((x, y),)
        lam1 = rand_mat(cbe, rng, x, y)
        direct = poly_extended_eval(cbe, plugged, [lam1], [(U, U)])
        staged = poly_extended_eval(cbe, two_hole, [m, lam1], [(U, U), (U, U)])
        assert cbe.equal(direct, staged)

    def test_plug_hole_free_with_luggage(self, cbe, rng, two_hole):
        """A spare port on the inner piece becomes a new outer port."""
        x, y = word("x"), word("y")
        ins, outs = x, y  # host outer boundary
        l_in, l_out = x, x
        m = rand_mat(cbe, rng, y @ l_in, x @ l_out)  # port0 (y,x), port1 (x,x)
        inner = poly(cbe, [], [(y, x), (l_in, l_out)], [], [m])
        plugged = poly_compose_at(cbe, two_hole, inner, 0, inner_port=0)
        assert plugged.outers == ((ins, outs), (l_in, l_out))
        assert plugged.holes == ((x, y),)
        lam1 = rand_mat(cbe, rng, x, y)
        direct = poly_extended_eval(cbe, plugged, [lam1], [(U, U)])
        # same plug via a context-shaped filler: the spare port rides as context
        fill0 = cbe.compose(
            cbe.compose(cbe.symmetry(l_in, y), m), cbe.symmetry(x, l_out)
        )
        ctx = poly_extended_eval(
            cbe, two_hole, [fill0, lam1], [(l_in, l_out), (U, U)]
        )
        rebuilt = cbe.compose(
            cbe.compose(cbe.symmetry(ins, l_in), ctx), cbe.symmetry(l_out, outs)
        )
        assert cbe.equal(direct, rebuilt)

    def test_plug_errors(self, cbe, rng, two_hole):
        y, x = word("y"), word("x")
        m = rand_mat(cbe, rng, y, x)
        flat = poly(cbe, [], [(y, x)], [], [m])
        with pytest.raises(HoleMismatch):
            poly_compose_at(cbe, two_hole, flat, 5)
        with pytest.raises(HoleMismatch):
            poly_compose_at(cbe, two_hole, flat, 1)  # hole 1 is (x, y)
        with pytest.raises(HoleMismatch):
            poly_compose_at(cbe, two_hole, flat, 0, inner_port=3)
        hole_and_ports = poly(
            cbe, [(y, x)], [(y, x), (x, y)],
            [U],
            [
                rand_mat(cbe, rng, y @ x, y),
                rand_mat(cbe, rng, x, x @ y),
            ],
        )
        with pytest.raises(UnsupportedShape):
            poly_compose_at(cbe, two_hole, hole_and_ports, 0)


class TestStars:
    def test_shapes(self, cbe):
        x, y = word("x"), word("y")
        unit = star_unit(cbe, x, y)
        counit = star_counit(cbe, x, y)
        assert unit.holes == () and unit.outers == ((x, y), (y, x))
        assert counit.holes == ((x, y), (y, x)) and counit.outers == ()

    def test_snake_at_first_hole(self, cbe):
        x, y = word("x"), word("y")
        snake = poly_compose_at(
            cbe, star_counit(cbe, x, y), star_unit(cbe, x, y), 0
        )
        assert snake.holes == ((y, x),) and snake.outers == ((y, x),)
        d = poly_equiv(cbe, snake, identity_poly(cbe, y, x))
        assert d.verdict is Verdict.EQUIVALENT and d.certified

    def test_snake_at_second_hole(self, cbe):
        x, y = word("x"), word("y")
        snake = poly_compose_at(
            cbe, star_counit(cbe, x, y), star_unit(cbe, x, y), 1
        )
        assert snake.holes == ((x, y),) and snake.outers == ((x, y),)
        d = poly_equiv(cbe, snake, identity_poly(cbe, x, y))
        assert d.verdict is Verdict.EQUIVALENT and d.certified

    def test_counit_needs_compact_closure(self, ffb):
        with pytest.raises(NotCompactClosed):
            star_counit(ffb, word("s"), word("s"))
