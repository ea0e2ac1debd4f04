import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import random_psd, random_spd
from invreg.errors import DenominatorTooSmall, NegativeProjection, ZeroTruth
from invreg.linalg import (PinvState, matrix_rank, penrose_residuals, pinv_oracle, pinv_rank1_update_baseline,
                           pinv_rank1_update_proposed, rank_one_workspace, relative_error, relative_frobenius,
                           sherman_morrison_scaled_update)


class TestShermanMorrison:
    def test_diagonal_case(self):
        out = sherman_morrison_scaled_update(np.eye(2), np.array([1.0, 0.0]), 1.0)
        np.testing.assert_allclose(out, np.diag([0.5, 1.0]), atol=1e-15)

    def test_zero_vector_is_rescaling(self):
        out = sherman_morrison_scaled_update(np.eye(3), np.zeros(3), 2.0)
        np.testing.assert_allclose(out, 0.5 * np.eye(3), atol=1e-15)

    def test_matches_direct_inverse(self):
        rng = np.random.default_rng(8)
        a = random_spd(rng, 8)
        u = rng.standard_normal(8)
        out = sherman_morrison_scaled_update(np.linalg.inv(a), u, 0.99)
        truth = np.linalg.inv(0.99 * a + np.outer(u, u))
        assert relative_frobenius(out, truth) <= 1e-10

    def test_result_is_exactly_symmetric(self):
        rng = np.random.default_rng(1)
        a_inv = np.linalg.inv(random_spd(rng, 5))
        out = sherman_morrison_scaled_update(a_inv, rng.standard_normal(5), 0.9)
        assert np.array_equal(out, out.T)

    def test_vanishing_denominator(self):
        # A = -I has inverse -I; gamma + u'A^-1 u = 1 - 1 = 0
        with pytest.raises(DenominatorTooSmall):
            sherman_morrison_scaled_update(-np.eye(2), np.array([1.0, 0.0]), 1.0)

    @pytest.mark.parametrize("n", [2, 8, 32])
    @pytest.mark.parametrize("gamma", [0.9, 0.99, 1.0])
    def test_equivalence_many_seeds(self, n, gamma):
        for seed in range(100 // 9 + 1):
            rng = np.random.default_rng([n, int(gamma * 100), seed])
            a = random_spd(rng, n)
            u = rng.standard_normal(n)
            out = sherman_morrison_scaled_update(np.linalg.inv(a), u, gamma)
            resid = out @ (gamma * a + np.outer(u, u)) - np.eye(n)
            assert np.linalg.norm(resid) <= 1e-8


class TestPinvOracle:
    def test_diag(self):
        np.testing.assert_allclose(pinv_oracle(np.diag([2.0, 0.0])), np.diag([0.5, 0.0]))

    @pytest.mark.parametrize("n", [1, 3, 7])
    def test_zero(self, n):
        assert np.array_equal(pinv_oracle(np.zeros((n, n))), np.zeros((n, n)))

    def test_penrose_rank2(self):
        h = random_psd(np.random.default_rng(5), 5, 2)
        assert max(penrose_residuals(h, pinv_oracle(h))) <= 1e-10
        assert matrix_rank(h) == 2

    def test_agrees_with_svd_pinv(self):
        h = random_psd(np.random.default_rng(6), 9, 4)
        np.testing.assert_allclose(pinv_oracle(h), np.linalg.pinv(h, rcond=1e-12), atol=1e-10)


class TestRelativeError:
    def test_identical(self):
        a = np.arange(4.0).reshape(2, 2) + 1
        assert relative_error(a, a) == 0.0

    def test_double(self):
        assert relative_error(2 * np.eye(2), np.eye(2)) == 1.0

    def test_zero_estimate(self):
        assert relative_error(np.zeros((3, 3)), np.eye(3)) == 1.0

    def test_zero_truth(self):
        with pytest.raises(ZeroTruth):
            relative_error(np.eye(2), np.zeros((2, 2)))


class TestPinvUpdate:
    def test_proposed_from_zero(self):
        out = pinv_rank1_update_proposed(PinvState.zeros(2), np.array([1.0, 0.0]))
        np.testing.assert_allclose(out.h_pinv, [[1.0, 0.0], [0.0, 0.0]], atol=1e-15)
        assert out.rank_hint == 1

    def test_proposed_zero_branch(self):
        state = PinvState(np.eye(2), np.eye(2), 2)
        out = pinv_rank1_update_proposed(state, np.array([1.0, 0.0]))
        np.testing.assert_allclose(out.h_pinv, np.diag([0.5, 1.0]), atol=1e-15)
        assert out.rank_hint == 2
        np.testing.assert_array_equal(out.h, np.diag([2.0, 1.0]))

    def test_baseline_from_zero(self):
        out = pinv_rank1_update_baseline(PinvState.zeros(2), np.array([1.0, 0.0]))
        np.testing.assert_allclose(out.h_pinv, [[1.0, 0.0], [0.0, 0.0]], atol=1e-15)

    def test_baseline_zero_branch(self):
        out = pinv_rank1_update_baseline(PinvState(np.eye(2), np.eye(2), 2), np.array([0.0, 1.0]))
        np.testing.assert_allclose(out.h_pinv, np.diag([1.0, 0.5]), atol=1e-15)

    def test_rank3_matches_oracle(self):
        rng = np.random.default_rng(3)
        h = random_psd(rng, 6, 3)
        c = rng.standard_normal(6)
        out = pinv_rank1_update_proposed(PinvState.from_matrix(h), c)
        assert relative_frobenius(out.h_pinv, pinv_oracle(h + np.outer(c, c))) <= 1e-9

    def test_inputs_not_mutated(self):
        rng = np.random.default_rng(4)
        state = PinvState.from_matrix(random_psd(rng, 4, 2))
        h, p = state.h.copy(), state.h_pinv.copy()
        pinv_rank1_update_proposed(state, rng.standard_normal(4))
        assert np.array_equal(state.h, h) and np.array_equal(state.h_pinv, p)

    def test_negative_projection_detected(self):
        # h_pinv claims 2I for H = I, so I - H+H = -I and u.c = -|c|^2
        state = PinvState(np.eye(2), 2 * np.eye(2), 2)
        with pytest.raises(NegativeProjection):
            pinv_rank1_update_proposed(state, np.array([1.0, 1.0]))

    def test_full_rank_takes_zero_branch(self):
        # ill-conditioned full-rank H: u.c is pure round-off and may land on either side of the threshold
        rng = np.random.default_rng(21)
        q, _ = np.linalg.qr(rng.standard_normal((6, 6)))
        h = (q * np.logspace(0, -9, 6)) @ q.T
        for _ in range(20):
            c = rng.standard_normal(6)
            out = pinv_rank1_update_proposed(PinvState(h, pinv_oracle(h), 6), c)
            assert out.rank_hint == 6
            assert relative_frobenius(out.h_pinv, pinv_oracle(h + np.outer(c, c))) <= 1e-6

    def test_small_negative_projection_is_round_off(self):
        # u.c in [-1e-8, 1e-9] * c.c is treated as the zero branch rather than corruption
        p = np.eye(2) * (1 + 5e-9)
        out = pinv_rank1_update_proposed(PinvState(np.eye(2), p, 1), np.array([1.0, 0.0]))
        assert out.rank_hint == 1

    def test_oracle_agreement_all_ranks(self):
        count = 0
        for seed in range(200):
            rng = np.random.default_rng([77, seed])
            n = int(rng.integers(1, 17))
            r = int(rng.integers(0, n + 1))
            h = random_psd(rng, n, r)
            c = rng.standard_normal(n)
            out = pinv_rank1_update_proposed(PinvState.from_matrix(h), c)
            assert relative_frobenius(out.h_pinv, pinv_oracle(h + np.outer(c, c))) <= 1e-8, (seed, n, r)
            count += 1
        assert count == 200

    @pytest.mark.parametrize("n", [1, 4, 12])
    def test_branches_and_penrose_from_zero(self, n):
        rng = np.random.default_rng(n)
        state = PinvState.zeros(n)
        for t in range(1, 2 * n + 1):
            c = rng.standard_normal(n)
            ws = rank_one_workspace(state, c)
            assert ws.u_dot_c >= -1e-8 * (c @ c)
            assert ws.positive == (t <= n)
            state = pinv_rank1_update_proposed(state, c)
            assert state.rank_hint == min(t, n)
            if t <= n:
                assert max(penrose_residuals(state.h, state.h_pinv)) <= 1e-6

    def test_proposed_beats_baseline_n32(self):
        rng = np.random.default_rng(32)
        prop = base = PinvState.zeros(32)
        h = np.zeros((32, 32))
        for _ in range(32):
            c = rng.standard_normal(32)
            h += np.outer(c, c)
            prop = pinv_rank1_update_proposed(prop, c)
            base = pinv_rank1_update_baseline(base, c)
        truth = pinv_oracle(h)
        assert relative_error(prop.h_pinv, truth) < relative_error(base.h_pinv, truth)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 10), rank=st.integers(0, 10), seed=st.integers(0, 2**32 - 1))
def test_single_update_matches_oracle(n, rank, seed):
    rng = np.random.default_rng(seed)
    h = random_psd(rng, n, min(rank, n))
    c = rng.standard_normal(n)
    out = pinv_rank1_update_proposed(PinvState.from_matrix(h), c)
    assert relative_frobenius(out.h_pinv, pinv_oracle(h + np.outer(c, c))) <= 1e-8
    assert np.array_equal(out.h_pinv, out.h_pinv.T)
    assert np.all(np.isfinite(out.h_pinv))


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 12), k=st.integers(1, 12), seed=st.integers(0, 2**32 - 1))
def test_penrose_after_sequence(n, k, seed):
    rng = np.random.default_rng(seed)
    state = PinvState.zeros(n)
    for _ in range(min(k, n)):
        state = pinv_rank1_update_proposed(state, rng.standard_normal(n))
    # round-off in H+ grows with the condition number of the nonzero spectrum
    w = np.linalg.eigvalsh(state.h)
    w = w[w > 1e-12 * w.max()]
    assume(w.max() / w.min() <= 1e6)
    assert max(penrose_residuals(state.h, state.h_pinv)) <= 1e-6
