import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

import svcalc as sv
from svcalc.cdss import NotCdssError


def _alignment(rng, d):
    """Alignment matrix of two random matrices: always cdss."""
    a = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    b = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    da, db = sv.svd(a), sv.svd(b)
    return np.conj(db.v.conj().T @ da.v) * (db.u.conj().T @ da.u)


class TestPermutationPhase:
    def test_to_matrix(self):
        pp = sv.PermutationPhase((1, 0), (1j, -1j))
        assert_allclose(pp.to_matrix(), [[0.0, 1j], [-1j, 0.0]])
        assert_allclose(sv.pp_to_matrix(pp), pp.to_matrix())

    def test_row_convention(self):
        pp = sv.PermutationPhase((2, 0, 1), (1.0, 1j, -1.0))
        m = pp.to_matrix()
        assert m[0, 2] == 1.0 and m[1, 0] == 1j and m[2, 1] == -1.0

    def test_is_cdss_with_zero_tol(self):
        # exactly representable phases give exact l1 sums of 1
        pp = sv.PermutationPhase((1, 2, 0), (1.0, -1.0, 1j))
        assert sv.is_cdss(pp.to_matrix(), tol=0.0)

    def test_validation(self):
        with pytest.raises(ValueError):
            sv.PermutationPhase((0, 0), (1.0, 1.0))  # not a permutation
        with pytest.raises(ValueError):
            sv.PermutationPhase((0, 1), (1.0,))  # length mismatch
        with pytest.raises(ValueError):
            sv.PermutationPhase((0, 1), (1.0, 0.5))  # not unimodular
        with pytest.raises(ValueError):
            sv.PermutationPhase((), ())


class TestIsCdss:
    def test_identity(self):
        assert sv.is_cdss(np.eye(3))

    def test_uniform(self):
        assert sv.is_cdss(np.full((4, 4), 0.25))

    def test_row_sum_exceeds(self):
        assert not sv.is_cdss(np.array([[0.9, 0.2], [0.0, 0.5]]))

    def test_column_sum_exceeds(self):
        assert not sv.is_cdss(np.array([[0.9, 0.0], [0.2, 0.5]]))

    def test_unitary_hadamard_product(self):
        u = sv.random_unitary(8, 3)
        v = sv.random_unitary(8, 4)
        assert sv.is_cdss(sv.hadamard(u, np.conj(v)), tol=1e-12)

    def test_requires_square(self):
        with pytest.raises(ValueError):
            sv.is_cdss(np.ones((2, 3)) * 0.1)

    def test_tolerance(self):
        m = np.eye(2) * (1.0 + 5e-13)
        assert sv.is_cdss(m, tol=1e-12)
        assert not sv.is_cdss(m, tol=1e-14)


class TestDecompose:
    def test_single_extreme_point(self):
        pp = sv.PermutationPhase((1, 0, 2), (1j, -1.0, 1.0))
        dec = sv.decompose(pp.to_matrix())
        assert dec.n_terms == 1
        w, got = dec.terms[0]
        assert w == pytest.approx(1.0)
        assert got == pp

    def test_zero_matrix(self):
        dec = sv.decompose(np.zeros((2, 2)))
        assert dec.n_terms == 2
        assert_allclose(dec.weights, [0.5, 0.5])
        assert_allclose(dec.reconstruct(), 0.0, atol=1e-15)

    def test_halved_permutation(self):
        m = 0.5 * sv.PermutationPhase((1, 0), (1.0, 1j)).to_matrix()
        dec = sv.decompose(m)
        assert_allclose(dec.reconstruct(), m, atol=1e-12)
        assert dec.weights.sum() == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("d", [2, 3, 6, 11])
    def test_alignment_matrices(self, d):
        rng = np.random.default_rng(d)
        m = _alignment(rng, d)
        dec = sv.decompose(m)
        assert np.all(dec.weights >= 0.0)
        assert dec.weights.sum() == pytest.approx(1.0, abs=1e-12)
        assert dec.n_terms <= sv.term_bound(d)
        assert sv.frobenius_norm(dec.reconstruct() - m) <= 1e-10

    def test_substochastic_with_slack(self):
        m = np.array([[0.3, 0.2], [0.1, 0.4]]) * np.exp(1j * 0.7)
        dec = sv.decompose(m)
        assert_allclose(dec.reconstruct(), m, atol=1e-12)

    def test_deterministic(self):
        m = _alignment(np.random.default_rng(42), 5)
        assert sv.decompose(m).terms == sv.decompose(m).terms

    def test_rejects_non_cdss(self):
        with pytest.raises(NotCdssError):
            sv.decompose(np.array([[1.5]]))

    def test_rejects_rectangular(self):
        with pytest.raises(ValueError):
            sv.decompose(np.ones((2, 3)) * 0.1)

    def test_convex_combination_is_not_extreme(self):
        # strict mixtures leave the extreme points of the cdss body
        p1 = sv.PermutationPhase((0, 1), (1.0, 1.0))
        p2 = sv.PermutationPhase((1, 0), (1.0, -1.0))
        mix = 0.3 * p1.to_matrix() + 0.7 * p2.to_matrix()
        mods = np.abs(mix)
        assert np.any((mods > 1e-9) & (mods < 1.0 - 1e-9))
        dec = sv.decompose(mix)
        assert dec.n_terms >= 2


class TestDecompositionRecord:
    def test_weights_validation(self):
        pp = sv.PermutationPhase((0,), (1.0,))
        with pytest.raises(ValueError):
            sv.CdssDecomposition(((-0.1, pp),))
        with pytest.raises(ValueError):
            sv.CdssDecomposition(())

    def test_mixed_dimension_rejected(self):
        p1 = sv.PermutationPhase((0,), (1.0,))
        p2 = sv.PermutationPhase((0, 1), (1.0, 1.0))
        with pytest.raises(ValueError):
            sv.CdssDecomposition(((0.5, p1), (0.5, p2)))

    def test_json_round_trip(self):
        dec = sv.decompose(_alignment(np.random.default_rng(3), 4))
        payload = json.loads(json.dumps(dec.to_dict()))
        back = sv.CdssDecomposition.from_dict(payload)
        assert back == dec

    def test_serialized_perms_are_one_based(self):
        dec = sv.decompose(np.eye(3))
        d = dec.to_dict()
        assert d["terms"][0]["perm"] == [1, 2, 3]

    def test_from_dict_malformed(self):
        with pytest.raises(ValueError):
            sv.CdssDecomposition.from_dict({"nope": []})
        with pytest.raises(ValueError):
            sv.CdssDecomposition.from_dict({"terms": [{"weight": 1.0}]})


class TestDistanceIdentity:
    def test_equal_matrices(self):
        a = _alignment(np.random.default_rng(0), 3)  # any square matrix works
        lhs, rhs = sv.distance_identity_check(a, a)
        assert lhs == pytest.approx(0.0, abs=1e-14)
        assert rhs == pytest.approx(0.0, abs=1e-12)

    def test_diagonal_example(self):
        lhs, rhs = sv.distance_identity_check(np.diag([2.0, 1.0]), np.diag([1.0, 1.0]))
        assert lhs == pytest.approx(1.0)
        assert rhs == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("d", [2, 4, 7])
    def test_random_pairs(self, d):
        rng = np.random.default_rng(d + 100)
        for _ in range(10):
            a = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
            b = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
            lhs, rhs = sv.distance_identity_check(a, b)
            assert abs(lhs - rhs) <= 1e-8 * (1.0 + lhs)

    def test_alignment_is_cdss(self):
        w = _alignment(np.random.default_rng(12), 6)
        assert sv.is_cdss(w, tol=1e-12)

    def test_lipschitz_transfer_per_term(self):
        # each aligned scalar distance is stretched by at most sqrt(2) * lip
        rng = np.random.default_rng(21)
        d = 5
        a = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
        b = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
        da, db = sv.svd(a), sv.svd(b)
        w = np.conj(db.v.conj().T @ da.v) * (db.u.conj().T @ da.u)
        f = sv.tight_function(0.3 + 0.8j)
        lip = sv.lip_modulus(f)
        fa = np.asarray(f(da.sigma))
        fb = np.asarray(f(db.sigma))
        for _, pp in sv.decompose(w).terms:
            gam = np.asarray(pp.phases)
            perm = np.asarray(pp.perm)
            num = np.abs(fb - gam * fa[perm])
            den = np.abs(db.sigma - gam * da.sigma[perm])
            assert np.all(num <= sv.SQRT2 * lip * den + 1e-12)

    def test_shape_validation(self):
        with pytest.raises(ValueError):
            sv.distance_identity_check(np.eye(2), np.eye(3))
        with pytest.raises(ValueError):
            sv.distance_identity_check(np.ones((2, 3)), np.ones((2, 3)))
