import numpy as np
import pytest

from opticomb import (
    CategoryError,
    MatrixBackend,
    NotDaggerBackend,
    ObjectWord,
    Verdict,
    choi_matrix,
    comb,
    comb_compose,
    cpinf_equiv,
    cpm_equiv,
    dagger_comb,
    is_completely_positive,
    is_dagger_comb,
    kraus_slices,
    to_cpm,
)

from conftest import TOL, word


S = 1 / np.sqrt(2)
Z = np.array([[1, 0], [0, -1]], dtype=complex)


@pytest.fixture
def qb():
    return MatrixBackend({"q": 2}, semiring="complex", tolerance=TOL)


@pytest.fixture
def q():
    return word("q")


def copy_comb(qb, q):
    """Dephasing as measure-and-forget: the copy isometry with itself."""
    v = qb.mat(q, q @ q, [[1, 0], [0, 0], [0, 0], [0, 1]])
    return dagger_comb(qb, v, env=q)


def mix_comb(qb, q):
    """Dephasing again, through the alternate pieces I and Z over sqrt 2."""
    rows = np.vstack([np.eye(2) * S, Z * S])
    v = qb.mat(q, q @ q, rows)
    return dagger_comb(qb, v, env=q)


class TestDaggerCombs:
    def test_constructor_round_trip(self, qb, q):
        c = copy_comb(qb, q)
        assert is_dagger_comb(qb, c)
        assert c.source == (q, q) and c.target == (q, q)

    def test_rejects_backends_without_adjoints(self, idem):
        f = idem.generator("f")
        with pytest.raises(NotDaggerBackend):
            dagger_comb(idem, f, env=ObjectWord.unit())

    def test_detects_non_dagger_top(self, qb, q):
        x = qb.mat(q, q, [[0, 1], [1, 0]])
        c = comb(qb, x, qb.identity(q), env=ObjectWord.unit())
        assert not is_dagger_comb(qb, c)


class TestKrausAndTransfer:
    def test_identity_channel_transfer(self, qb, q):
        c = dagger_comb(qb, qb.identity(q), env=ObjectWord.unit())
        m = to_cpm(qb, c)
        assert np.allclose(m.transfer, np.eye(4))
        assert m.is_completely_positive() and m.is_trace_preserving()

    def test_dephasing_transfer_frozen(self, qb, q):
        m = to_cpm(qb, copy_comb(qb, q))
        assert np.allclose(m.transfer, np.diag([1, 0, 0, 1]))

    def test_alternate_pieces_same_transfer(self, qb, q):
        m = to_cpm(qb, mix_comb(qb, q))
        assert np.allclose(m.transfer, np.diag([1, 0, 0, 1]))

    def test_unitary_conjugation_transfer(self, qb, q):
        u = np.array([[0.6, -0.8], [0.8, 0.6]], dtype=complex)
        c = dagger_comb(qb, qb.mat(q, q, u), env=ObjectWord.unit())
        m = to_cpm(qb, c)
        assert np.allclose(m.transfer, np.kron(u, u.conj()))

    def test_kraus_slices_shape_guard(self):
        with pytest.raises(CategoryError):
            kraus_slices(np.eye(3), 2, 2)

    def test_slices_are_row_blocks(self, qb, q):
        c = mix_comb(qb, q)
        k0, k1 = kraus_slices(c.f.array, 2, 2)
        assert np.allclose(k0, np.eye(2) * S)
        assert np.allclose(k1, Z * S)

    def test_to_cpm_rejects_plain_combs(self, qb, q):
        x = qb.mat(q, q, [[0, 1], [1, 0]])
        c = comb(qb, x, qb.identity(q), env=ObjectWord.unit())
        with pytest.raises(CategoryError):
            to_cpm(qb, c)

    def test_to_cpm_rejects_non_complex_backend(self, bbe):
        c = comb(
            bbe, bbe.identity(word("b")), bbe.identity(word("b")),
            env=ObjectWord.unit(),
        )
        with pytest.raises(CategoryError):
            to_cpm(bbe, c)


class TestPositivity:
    def test_transpose_transfer_is_not_cp(self):
        # the transpose map permutes vec entries: its transfer is the swap
        swap = np.zeros((4, 4))
        for i in range(2):
            for j in range(2):
                swap[i * 2 + j, j * 2 + i] = 1
        assert not is_completely_positive(swap, 2, 2, tolerance=TOL)
        ch = choi_matrix(swap, 2, 2)
        assert np.allclose(ch, swap)
        assert np.isclose(np.linalg.eigvalsh(ch).min(), -1.0)

    def test_dephasing_is_cp_and_tp(self, qb, q):
        m = to_cpm(qb, copy_comb(qb, q))
        assert m.is_completely_positive() and m.is_trace_preserving()

    def test_projector_kraus_not_tp(self, qb, q):
        p = qb.mat(q, q, [[1, 0], [0, 0]])
        m = to_cpm(qb, dagger_comb(qb, p, env=ObjectWord.unit()))
        assert m.is_completely_positive()
        assert not m.is_trace_preserving()


class TestEquivalenceRoutes:
    def test_two_presentations_agree_on_both_routes(self, qb, q):
        c1, c2 = copy_comb(qb, q), mix_comb(qb, q)
        d_transfer = cpm_equiv(qb, c1, c2)
        d_probe = cpinf_equiv(qb, c1, c2)
        assert d_transfer.verdict is Verdict.EQUIVALENT and d_transfer.certified
        assert d_probe.verdict is Verdict.EQUIVALENT and d_probe.certified
        assert d_probe.coverage["frame_spans_hermitian"] is True
        assert d_probe.coverage["probes_tried"] == 4

    def test_routes_agree_on_distinct_channels(self, qb, q):
        c1 = copy_comb(qb, q)
        c2 = dagger_comb(qb, qb.identity(q), env=ObjectWord.unit())
        d_transfer = cpm_equiv(qb, c1, c2)
        d_probe = cpinf_equiv(qb, c1, c2)
        assert d_transfer.verdict is Verdict.DISTINCT
        assert d_probe.verdict is Verdict.DISTINCT
        assert d_transfer.witness.pieces["max_abs_difference"] == pytest.approx(1.0)
        # the separating probe really is a positive rank-one input
        rho = d_probe.witness.probe
        assert np.allclose(rho, rho.conj().T)
        assert np.linalg.eigvalsh(rho).min() >= -TOL

    def test_probe_route_never_builds_transfers(self, qb, q):
        """The probe route sees outputs only; its witness carries states."""
        c1 = copy_comb(qb, q)
        c2 = dagger_comb(qb, qb.identity(q), env=ObjectWord.unit())
        d = cpinf_equiv(qb, c1, c2)
        out_left, out_right = d.witness.left, d.witness.right
        assert out_left.shape == (2, 2) and out_right.shape == (2, 2)
        m1, m2 = to_cpm(qb, c1), to_cpm(qb, c2)
        assert np.allclose(m1.apply(d.witness.probe), out_left)
        assert np.allclose(m2.apply(d.witness.probe), out_right)


class TestFunctoriality:
    def test_nesting_composes_transfers(self, qb, q):
        c1 = copy_comb(qb, q)
        u = np.array([[0.6, -0.8], [0.8, 0.6]], dtype=complex)
        c2 = dagger_comb(qb, qb.mat(q, q, u), env=ObjectWord.unit())
        both = comb_compose(qb, c1, c2)
        assert is_dagger_comb(qb, both)
        t1 = to_cpm(qb, c1).transfer
        t2 = to_cpm(qb, c2).transfer
        assert np.allclose(to_cpm(qb, both).transfer, t2 @ t1)
