import math

import numpy as np
import pytest

from divischeck import pauli_family as pf
from divischeck import superop as so
from divischeck.linalg import PAULI, NumericalError


def random_state(rng, d):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def random_operator(rng, d):
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def transpose_map():
    mat = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            e = np.zeros((2, 2), dtype=complex)
            e[i, j] = 1.0
            mat[:, j * 2 + i] = so.vec(e.T)
    return so.Superoperator(2, mat, trace_preserving=True)


class TestVec:
    def test_column_stacking_roundtrip(self):
        a = np.arange(4.0).reshape(2, 2)
        v = so.vec(a)
        np.testing.assert_allclose(v, [0.0, 2.0, 1.0, 3.0])
        np.testing.assert_allclose(so.unvec(v, 2), a)

    def test_vec_of_product(self):
        rng = np.random.default_rng(0)
        a, x, b = (random_operator(rng, 3) for _ in range(3))
        lhs = so.vec(a @ x @ b)
        rhs = np.kron(b.T, a) @ so.vec(x)
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)


class TestApply:
    def test_identity(self):
        rng = np.random.default_rng(1)
        rho = random_state(rng, 3)
        np.testing.assert_allclose(so.apply(so.identity(3), rho), rho, atol=1e-14)

    def test_model_map_is_unital(self):
        ch = pf.channel(1.3, 0.8)
        np.testing.assert_allclose(so.apply(ch, np.eye(2) / 2), np.eye(2) / 2,
                                   atol=1e-12)

    def test_model_map_contracts_transverse_bloch(self):
        # Bloch vector (1, 0, 0) picks up the transverse contraction
        ch = pf.channel(1.0, 1.0)
        rho = 0.5 * (np.eye(2) + PAULI[1])
        out = so.apply(ch, rho)
        r1 = np.real(np.trace(out @ PAULI[1]))
        assert r1 == pytest.approx(math.exp(-1.0) * math.cosh(1.0), abs=1e-12)
        assert abs(np.trace(out @ PAULI[2])) < 1e-12
        assert abs(np.trace(out @ PAULI[3])) < 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            so.apply(so.identity(2), np.eye(3))


class TestCompose:
    def test_identity_neutral(self):
        ch = pf.channel(0.7, 0.6)
        np.testing.assert_allclose(so.compose(ch, so.identity(2)).mat, ch.mat)

    def test_pauli_channels_multiply_eigenvalues(self):
        s1 = pf.pauli_channel(0.9, 0.8, 0.7)
        s2 = pf.pauli_channel(0.5, 0.4, 0.3)
        expected = pf.pauli_channel(0.45, 0.32, 0.21)
        np.testing.assert_allclose(so.compose(s1, s2).mat, expected.mat, atol=1e-12)

    def test_intermediate_recomposes_to_closed_form(self):
        alpha = 0.75
        s_t, s_s = pf.channel(2.0, alpha), pf.channel(0.8, alpha)
        inter = so.intermediate(s_t, s_s)
        np.testing.assert_allclose(so.compose(inter, s_s).mat, s_t.mat, atol=1e-10)

    def test_apply_compose_consistency(self):
        rng = np.random.default_rng(2)
        s1, s2 = pf.channel(0.5, 0.6), pf.channel(1.5, 0.6)
        for _ in range(10):
            x = random_operator(rng, 2)
            lhs = so.apply(so.compose(s1, s2), x)
            rhs = so.apply(s1, so.apply(s2, x))
            np.testing.assert_allclose(lhs, rhs, atol=1e-12)


class TestTensor:
    def test_identity(self):
        t = so.tensor(so.identity(2), so.identity(2))
        np.testing.assert_allclose(t.mat, np.eye(16), atol=1e-14)

    def test_product_action(self):
        rng = np.random.default_rng(3)
        s1, s2 = pf.channel(0.9, 0.7), pf.channel(0.4, 1.2)
        big = so.tensor(s1, s2)
        for _ in range(10):
            rho, tau = random_state(rng, 2), random_state(rng, 2)
            lhs = so.apply(big, np.kron(rho, tau))
            rhs = np.kron(so.apply(s1, rho), so.apply(s2, tau))
            np.testing.assert_allclose(lhs, rhs, atol=1e-10)

    def test_choi_spectrum_of_tensor_is_product_multiset(self):
        alpha, t = 1.0, 0.9
        ch = pf.channel(t, alpha)
        big = so.tensor(ch, ch)
        eigs = np.sort(np.linalg.eigvalsh(so.choi(big).mat))
        p = pf.pauli_weights(t, alpha).as_array()
        expected = np.sort([4 * a * b for a in p for b in p])
        np.testing.assert_allclose(eigs, expected, atol=1e-10)

    def test_choi_spectrum_multiplies_for_distinct_channels(self):
        s1 = pf.channel(0.7, 0.6)
        s2 = pf.channel(1.8, 1.4)
        eigs = np.sort(np.linalg.eigvalsh(so.choi(so.tensor(s1, s2)).mat))
        e1 = np.linalg.eigvalsh(so.choi(s1).mat)
        e2 = np.linalg.eigvalsh(so.choi(s2).mat)
        expected = np.sort([a * b for a in e1 for b in e2])
        np.testing.assert_allclose(eigs, expected, atol=1e-10)


class TestChoi:
    def test_identity_choi(self):
        c = so.choi(so.identity(2))
        eigs = np.sort(np.linalg.eigvalsh(c.mat))
        np.testing.assert_allclose(eigs, [0.0, 0.0, 0.0, 2.0], atol=1e-12)
        assert np.trace(c.mat).real == pytest.approx(2.0)

    def test_transpose_map_choi_is_swap(self):
        c = so.choi(transpose_map())
        swap = np.zeros((4, 4), dtype=complex)
        for i in range(2):
            for j in range(2):
                swap[j * 2 + i, i * 2 + j] = 1.0
        np.testing.assert_allclose(c.mat, swap, atol=1e-14)
        assert np.linalg.eigvalsh(c.mat)[0] == pytest.approx(-1.0)

    def test_pauli_channel_choi_spectrum(self):
        rng = np.random.default_rng(4)
        w = rng.dirichlet(np.ones(4))
        mat = sum(wi * np.kron(s.conj(), s) for wi, s in zip(w, PAULI))
        ch = so.Superoperator(2, mat, trace_preserving=True)
        eigs = np.sort(np.linalg.eigvalsh(so.choi(ch).mat))
        np.testing.assert_allclose(eigs, np.sort(2 * w), atol=1e-12)


class TestIsCp:
    def test_model_cp_at_unit_strength(self):
        for t in (0.0, 0.5, 1.0, 3.0):
            ok, min_eig = so.is_cp(pf.channel(t, 1.0))
            assert ok
            assert min_eig >= -1e-12

    def test_model_not_cp_below_unit_strength(self):
        ok, min_eig = so.is_cp(pf.channel(1.0, 0.75))
        assert not ok
        assert min_eig == pytest.approx(2 * pf.pauli_weights(1.0, 0.75).p3, abs=1e-12)

    def test_transpose_map_not_cp(self):
        ok, min_eig = so.is_cp(transpose_map())
        assert not ok
        assert min_eig == pytest.approx(-1.0, abs=1e-12)

    def test_min_choi_eig_tracks_p3_on_grid(self):
        alpha = 0.8
        for t in np.linspace(0.0, 5.0, 26):
            _, min_eig = so.is_cp(pf.channel(float(t), alpha))
            assert min_eig == pytest.approx(
                2 * pf.pauli_weights(float(t), alpha).p3, abs=1e-10)


class TestFlags:
    def test_model_maps_preserve_trace_and_hermiticity(self):
        ch = pf.channel(1.7, 0.65)
        assert so.is_trace_preserving(ch, samples=20, seed=0, tol=1e-10)
        assert so.is_hermiticity_preserving(ch, samples=20, seed=0, tol=1e-10)

    def test_tensor_preserves_flags(self):
        big = so.tensor(pf.channel(0.9, 0.6), pf.channel(0.9, 0.6))
        assert big.trace_preserving
        assert so.is_trace_preserving(big, samples=20, seed=1, tol=1e-9)


class TestPositivityProbe:
    def test_identity_clean(self):
        result = so.positivity_probe(so.identity(2), restarts=10, steps=200,
                                     tol=1e-9, seed=0)
        assert result.verdict == so.HOLDS_NO_VIOLATION
        assert result.min_value >= -1e-12

    def test_tensor_square_of_model_positive(self):
        ch = pf.channel(1.0, 0.6)
        big = so.tensor(ch, ch)
        result = so.positivity_probe(big, restarts=25, steps=400, tol=1e-9, seed=1)
        assert result.verdict == so.HOLDS_NO_VIOLATION
        assert result.min_value >= -1e-9

    def test_finds_tensor_intermediate_violation(self):
        inter = pf.intermediate_channel(1.2, 1.0, 0.6)
        big = so.tensor(inter, inter)
        result = so.positivity_probe(big, restarts=40, steps=400, tol=1e-6, seed=2)
        assert result.verdict == so.VIOLATED
        assert result.min_value < -1e-3
        again = so.min_output_eigenvalue(big, result.argmin_state)
        assert again == pytest.approx(result.min_value, abs=1e-10)

    def test_early_stop(self):
        inter = pf.intermediate_channel(1.2, 1.0, 0.6)
        big = so.tensor(inter, inter)
        result = so.positivity_probe(big, restarts=200, steps=400, tol=1e-6,
                                     seed=3, stop_at=-1e-6)
        assert result.verdict == so.VIOLATED
        assert result.restarts_used < 200

    def test_deterministic_given_seed(self):
        ch = pf.channel(0.8, 0.55)
        big = so.tensor(ch, ch)
        r1 = so.positivity_probe(big, restarts=5, steps=100, seed=7)
        r2 = so.positivity_probe(big, restarts=5, steps=100, seed=7)
        assert r1.min_value == r2.min_value
        np.testing.assert_array_equal(r1.argmin_state, r2.argmin_state)

    def test_cp_implies_no_violation_across_grid(self):
        alpha = 1.25
        for t in (0.5, 1.5, 3.0):
            ch = pf.channel(t, alpha)
            ok, _ = so.is_cp(ch)
            assert ok
            result = so.positivity_probe(ch, restarts=10, steps=200, seed=8)
            assert result.verdict == so.HOLDS_NO_VIOLATION


class TestIntermediate:
    def test_self_intermediate_is_identity(self):
        ch = pf.channel(1.1, 0.7)
        inter = so.intermediate(ch, ch)
        np.testing.assert_allclose(inter.mat, np.eye(4), atol=1e-10)

    def test_intermediate_from_origin_is_the_map(self):
        ch_t, ch_0 = pf.channel(1.4, 0.7), pf.channel(0.0, 0.7)
        inter = so.intermediate(ch_t, ch_0)
        np.testing.assert_allclose(inter.mat, ch_t.mat, atol=1e-12)

    def test_matches_closed_form_ratios(self):
        alpha, s, t = 0.6, 0.9, 2.2
        inter = so.intermediate(pf.channel(t, alpha), pf.channel(s, alpha))
        np.testing.assert_allclose(inter.mat,
                                   pf.intermediate_channel(t, s, alpha).mat,
                                   atol=1e-10)

    def test_rejects_singular(self):
        bad = so.Superoperator(2, np.diag([1.0, 1.0, 1.0, 1e-13]).astype(complex))
        with pytest.raises(NumericalError):
            so.intermediate(so.identity(2), bad)
