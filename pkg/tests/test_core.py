import numpy as np
import pytest

from opticomb import (
    Budget,
    Compose,
    Decision,
    Generator,
    Identity,
    MatrixBackend,
    ObjectWord,
    ProbeWitness,
    Symmetry,
    Tensor,
    TypeMismatch,
    UnknownGenerator,
    Verdict,
    block_permutation,
    eval_term,
    permutation_term,
    typecheck,
)


class TestObjectWord:
    def test_parse_and_pretty(self):
        w = ObjectWord.parse("x*y*x")
        assert w.factors == ("x", "y", "x")
        assert w.pretty() == "x*y*x"
        assert ObjectWord.parse("I") == ObjectWord.unit()
        assert ObjectWord.parse("").pretty() == "I"

    def test_concat_and_len(self):
        u = ObjectWord.of("x") @ ObjectWord.of("y")
        assert len(u) == 2
        assert list(u) == ["x", "y"]
        assert not ObjectWord.unit()
        assert u

    def test_reversed(self):
        assert ObjectWord.of("x", "y").reversed() == ObjectWord.of("y", "x")


class TestTerms:
    def test_typecheck_generator(self, cbe):
        cbe.add_generator("h", "x", "y", np.ones((3, 2)))
        dom, cod = typecheck(Generator("h"), cbe)
        assert dom == ObjectWord.of("x")
        assert cod == ObjectWord.of("y")

    def test_typecheck_unknown_generator(self, cbe):
        with pytest.raises(UnknownGenerator):
            typecheck(Generator("nope"), cbe)

    def test_typecheck_bad_compose_names_offender(self, cbe):
        cbe.add_generator("h", "x", "y", np.ones((3, 2)))
        bad = Compose(Generator("h"), Generator("h"))
        with pytest.raises(TypeMismatch) as err:
            typecheck(bad, cbe)
        assert err.value.offender is bad

    def test_eval_identity_symmetry(self, cbe):
        x, y = ObjectWord.of("x"), ObjectWord.of("y")
        v = eval_term(Tensor(Identity(x), Identity(y)), cbe)
        assert np.array_equal(v.array, np.eye(6))
        s = eval_term(Symmetry(x, y), cbe)
        assert s.array.shape == (6, 6)
        # swapping twice is the identity
        assert np.array_equal(
            cbe.compose(s, cbe.symmetry(y, x)).array, np.eye(6)
        )


class TestPermutationTerm:
    def test_rejects_non_permutation(self):
        with pytest.raises(ValueError):
            permutation_term([ObjectWord.of("x")], [1])

    def test_output_slot_holds_chosen_block(self, cbe):
        # three blocks of different dimension so mistakes change shapes
        words = [ObjectWord.of("x"), ObjectWord.of("y"), ObjectWord.of("x", "x")]
        perm = [2, 0, 1]
        val = block_permutation(cbe, words, perm)
        dims = [cbe.dim(w) for w in words]
        vecs = [np.arange(d, dtype=float) + 1 for d in dims]
        inp = np.kron(np.kron(vecs[0], vecs[1]), vecs[2])
        out = val.array @ inp
        expect = np.kron(np.kron(vecs[2], vecs[0]), vecs[1])
        assert np.allclose(out, expect)

    def test_identity_permutation(self, cbe):
        words = [ObjectWord.of("x"), ObjectWord.of("y")]
        val = block_permutation(cbe, words, [0, 1])
        assert np.array_equal(val.array, np.eye(6))


class TestBudget:
    def test_of_scales_with_bound(self):
        assert Budget.of(1) == Budget(1, 4)
        assert Budget.of(2) == Budget(2, 16)
        assert Budget.of(0).max_hom == 4
        assert Budget.of(9).max_hom == 65536


class TestDecision:
    def test_distinct_requires_witness(self):
        with pytest.raises(ValueError):
            Decision(Verdict.DISTINCT, "m", certified=True, witness=None)

    def test_equivalent_certified_flag(self):
        with pytest.raises(ValueError):
            Decision(Verdict.EQUIVALENT, "m", certified=False)

    def test_helpers(self):
        w = ProbeWitness(
            ObjectWord.unit(), ObjectWord.unit(), probe=None, left=1, right=2
        )
        d = Decision.distinct("m", w)
        assert d.verdict is Verdict.DISTINCT and d.certified
        u = Decision.unknown("m", coverage={"probes_tried": 3})
        assert u.verdict is Verdict.UNKNOWN and not u.certified
        e = Decision.equivalent("m")
        assert e.verdict is Verdict.EQUIVALENT and e.certified
