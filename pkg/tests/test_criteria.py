import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entrank import linalg
from entrank.criteria import (
    Overall,
    Verdict,
    analyze,
    entropy_inequality_test,
    filter_operator,
    local_filter,
    min_cancelling_states,
    participation_ratio,
    ppt_test,
    rank_criterion,
    rank_two_decomposition,
    reduction_test,
    renyi_entropy,
    two_qubit_mixture_test,
)
from entrank.exceptions import DimensionNotTwoByTwo, SingularScaling
from entrank.states import (
    BipartiteState,
    PureState,
    basis_state,
    bell_state,
    maximally_mixed,
    mix,
    pure_from_schmidt,
    random_pure,
    random_separable,
    random_state,
    random_unitary,
)


def rotate(state, seed):
    UA = random_unitary(state.dA, (seed, 0))
    UB = random_unitary(state.dB, (seed, 1))
    return state.local_rotate(UA, UB)


class TestPPT:
    def test_bell(self, bell):
        res = ppt_test(bell)
        assert not res.ppt
        assert res.min_eigenvalue == pytest.approx(-0.5, abs=1e-14)
        assert res.verdict is Verdict.DISTILLABLE

    def test_product_separable(self):
        res = ppt_test(basis_state(0, 0, 2, 2).density())
        assert res.ppt and res.verdict is Verdict.SEPARABLE

    def test_maximally_mixed(self):
        res = ppt_test(maximally_mixed(3, 3))
        assert res.ppt and res.verdict is Verdict.SEPARABLE_CONSISTENT

    def test_npt_in_3x3_is_only_violated(self):
        res = ppt_test(bell_state().density().local_rotate(np.eye(2), np.eye(2)))
        assert res.exact_in_these_dims
        res = ppt_test(pure_from_schmidt([0.6, 0.8], 3, 3).density())
        assert res.verdict is Verdict.VIOLATED


class TestReduction:
    def test_bell(self, bell):
        res = reduction_test(bell)
        assert res.violated
        assert res.witness_value == pytest.approx(-0.5, abs=1e-14)
        assert res.verdict is Verdict.DISTILLABLE

    def test_product(self):
        assert not reduction_test(basis_state(0, 1, 2, 2).density()).violated

    def test_witness_vector(self, bell):
        res = reduction_test(bell)
        op = linalg.tensor(bell.marginal("A"), np.eye(2)) - bell.rho
        v = res.witness_vector
        assert np.vdot(v, op @ v).real == pytest.approx(res.witness_value, abs=1e-12)

    def test_tiles_satisfied(self, tiles):
        res = reduction_test(tiles)
        assert not res.violated
        assert min(res.min_eigenvalue_A, res.min_eigenvalue_B) > 0.01


class TestLocalFilter:
    def test_three_four_gives_bell(self):
        psi = PureState.from_amplitudes([3, 0, 0, 4], 2, 2)
        out = local_filter(psi.density(), "A")
        assert out.success_probability == pytest.approx(18 / 25, abs=1e-12)
        assert np.allclose(out.filtered_state.rho, bell_state().density().rho, atol=1e-12)
        assert out.marginal_flatness < 1e-12

    def test_kraus_contraction(self):
        rho = random_state(3, 3, 4, 1)
        K, R = filter_operator(rho.marginal("A"))
        assert R == 3
        assert np.max(np.linalg.eigvalsh(K.conj().T @ K)) <= 1 + 1e-12

    @pytest.mark.parametrize("side", "AB")
    def test_flat_marginal(self, side):
        rho = random_state(3, 4, 2, 5)
        out = local_filter(rho, side)
        R = out.marginal_rank
        vals = linalg.eigvalsh_desc(out.filtered_state.marginal(side))
        assert np.allclose(vals[:R], 1 / R, atol=1e-10)

    def test_singular(self):
        with pytest.raises(SingularScaling):
            filter_operator(np.diag([1.0, 1e-15]), epsilon=1e-16)


class TestRankCriterion:
    def test_bell(self, bell):
        res = rank_criterion(bell)
        assert res.verdict is Verdict.DISTILLABLE
        assert res.case == "rank-below-marginal"
        assert res.witness_value <= res.bound + 1e-8

    def test_product(self):
        res = rank_criterion(basis_state(0, 0, 2, 2).density())
        assert res.verdict is Verdict.INCONCLUSIVE

    def test_tiles_equal_rank_case(self, tiles):
        res = rank_criterion(tiles)
        assert res.case == "rank-above-marginal"
        assert res.verdict is Verdict.INCONCLUSIVE

    def test_equal_rank_flat_is_inconclusive(self, bell_mixture):
        res = rank_criterion(bell_mixture)
        assert res.case == "rank-equals-marginal"
        assert res.filtered_flat
        assert res.verdict is Verdict.INCONCLUSIVE

    def test_equal_rank_non_flat_witness(self, half_product_half_bell):
        res = rank_criterion(half_product_half_bell)
        assert res.case == "rank-equals-marginal"
        assert not res.filtered_flat
        assert res.verdict is Verdict.DISTILLABLE

    @pytest.mark.parametrize("seed", range(20))
    def test_distillable_implies_npt(self, seed):
        dA, dB = 2 + seed % 3, 2 + (seed // 3) % 3
        rank = 1 + seed % 4
        rho = random_state(dA, dB, rank, seed)
        if rank_criterion(rho).verdict is Verdict.DISTILLABLE:
            assert not ppt_test(rho).ppt

    @pytest.mark.parametrize("seed", range(10))
    def test_local_unitary_invariance(self, seed):
        rho = random_state(3, 3, 2, seed)
        a, b = rank_criterion(rho), rank_criterion(rotate(rho, seed))
        assert a.verdict is b.verdict
        assert (a.rank, a.rank_A, a.rank_B) == (b.rank, b.rank_A, b.rank_B)
        assert a.witness_value == pytest.approx(b.witness_value, abs=1e-9)


class TestRenyi:
    def test_alpha_zero_is_log_rank(self, tiles):
        assert renyi_entropy(tiles, 0) == pytest.approx(2.0)

    def test_von_neumann(self):
        assert renyi_entropy(np.diag([0.5, 0.5]), 1) == pytest.approx(1.0)

    def test_inf(self):
        assert renyi_entropy(np.diag([0.75, 0.25]), "inf") == pytest.approx(-math.log2(0.75))

    def test_two(self):
        assert renyi_entropy(np.diag([0.75, 0.25]), 2) == pytest.approx(-math.log2(0.625))

    def test_monotone_in_alpha(self):
        rho = random_state(3, 3, 5, 2)
        vals = [renyi_entropy(rho, a) for a in (0, 0.5, 1, 2, 3, math.inf)]
        assert all(x >= y - 1e-12 for x, y in zip(vals, vals[1:]))


class TestEntropyInequality:
    def test_bell_alpha_zero_margin(self, bell):
        res = entropy_inequality_test(bell, 0)
        assert res.verdict is Verdict.DISTILLABLE
        assert res.margin == pytest.approx(-1.0, abs=1e-12)

    @pytest.mark.parametrize("alpha", [1, 2, math.inf])
    def test_bell_other_orders_only_violated(self, bell, alpha):
        assert entropy_inequality_test(bell, alpha).verdict is Verdict.VIOLATED

    def test_unproved_order_flagged(self, bell):
        res = entropy_inequality_test(bell, 0.5)
        assert not res.proved and res.verdict is Verdict.INCONCLUSIVE

    @given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 9), st.integers(0, 10**6))
    @settings(max_examples=60, deadline=None)
    def test_separable_never_violates(self, dA, dB, terms, seed):
        rho = random_separable(dA, dB, terms, seed)
        for alpha in (0, 1, 2, math.inf):
            assert not entropy_inequality_test(rho, alpha).violated


class TestParticipationRatio:
    def test_pure(self, bell):
        assert participation_ratio(bell) == pytest.approx(1.0)

    def test_maximally_mixed(self):
        assert participation_ratio(maximally_mixed(2, 4)) == pytest.approx(8.0)

    @given(st.integers(1, 8), st.integers(0, 10**6))
    @settings(max_examples=40, deadline=None)
    def test_bounds(self, rank, seed):
        rho = random_state(2, 4, rank, seed)
        pr = participation_ratio(rho)
        assert 1 - 1e-12 <= pr <= rank + 1e-9


def random_entangled_2q(seed):
    while True:
        psi = random_pure(2, 2, seed)
        a, b, c, d = psi.amplitudes
        if abs(a * d - b * c) > 1e-3:
            return psi
        seed = (seed, 1)


class TestMixture2x2:
    def test_bell_quarter_values(self):
        # psi = phi+: |d|^2 = 1/2, |ad - bc|^2 = 1/4, so the first term is -p/8
        for p in (0.0, 0.3, 1.0, 2.5):
            res = two_qubit_mixture_test(p, bell_state())
            assert res.det_cofactor_term == pytest.approx(-p / 8, abs=1e-14)
            assert res.closed_form_term == pytest.approx(-p / 8, abs=1e-14)
            assert res.det_pure_term == pytest.approx(-1 / 16, abs=1e-14)
            assert res.verdict is Verdict.DISTILLABLE

    def test_product_psi_is_separable(self):
        res = two_qubit_mixture_test(0.7, basis_state(1, 1, 2, 2))
        assert res.verdict is Verdict.SEPARABLE
        assert res.agree

    def test_pure_term_oracle(self):
        # det of the partial transpose of a pure state is -|ad - bc|^4
        for seed in range(50):
            psi = random_pure(2, 2, seed)
            a, b, c, d = psi.amplitudes
            res = two_qubit_mixture_test(0.5, psi)
            assert res.det_pure_term == pytest.approx(-abs(a * d - b * c) ** 4, abs=1e-13)

    @pytest.mark.parametrize("seed", range(30))
    def test_cramer_split_with_rotated_product(self, seed):
        rng = np.random.default_rng(seed)
        p = float(rng.uniform(0.01, 5))
        psi = random_entangled_2q(seed)
        prod = PureState.from_amplitudes(
            np.kron(random_pure(1, 2, (seed, 2)).amplitudes, random_pure(1, 2, (seed, 3)).amplitudes), 2, 2
        )
        res = two_qubit_mixture_test(p, psi, prod)
        total = res.det_cofactor_term + res.det_pure_term
        assert abs(res.det_total - total) <= 1e-10 * max(1.0, abs(res.det_total))
        assert res.det_cofactor_term == pytest.approx(res.closed_form_term, abs=1e-10)
        assert res.verdict is Verdict.DISTILLABLE
        # the rotation really maps the product state to |00>
        v = linalg.tensor(res.rotation_A, res.rotation_B) @ prod.amplitudes
        assert abs(v[0]) == pytest.approx(1.0, abs=1e-12)
        # the direct test on the actual mixed state agrees
        rho = (p * prod.density().rho + psi.density().rho) / (1 + p)
        assert linalg.min_eigenvalue(linalg.partial_transpose(rho, 2, 2)) < 0

    def test_wrong_dims(self):
        with pytest.raises(DimensionNotTwoByTwo):
            two_qubit_mixture_test(0.5, random_pure(2, 3, 0))


class TestRankTwoDecomposition:
    @pytest.mark.parametrize("seed", range(20))
    def test_reconstructs(self, seed):
        rho = random_state(2, 2, 2, seed)
        p, psi, prod = rank_two_decomposition(rho)
        assert p >= 0
        sd_rank = np.linalg.matrix_rank(prod.matrix, tol=1e-10)
        assert sd_rank == 1
        rebuilt = (p * prod.density().rho + psi.density().rho) / (1 + p)
        assert np.allclose(rebuilt, rho.rho, atol=1e-9)

    def test_embedded_in_3x3(self):
        rho = random_state(2, 2, 2, 4)
        W = np.zeros((3, 2))
        W[[0, 2], [0, 1]] = 1
        iso = linalg.tensor(W, W)
        big = BipartiteState.from_matrix(iso @ rho.rho @ iso.T, 3, 3)
        assert rank_two_decomposition(big) is not None
        assert analyze(big).verdicts["mixture_2x2"] is analyze(rho).verdicts["mixture_2x2"]

    def test_not_applicable(self, tiles):
        assert rank_two_decomposition(tiles) is None


class TestCancellingStates:
    def test_counts(self):
        assert [min_cancelling_states(n) for n in (1, 2, 3, 5)] == [0, 1, 2, 4]

    @pytest.mark.parametrize("n", [3, 4])
    def test_too_few_partners_stay_distillable(self, n):
        # n - 2 partners leave the rank below the marginal rank
        psi = pure_from_schmidt(np.ones(n) / math.sqrt(n), n, n)
        for seed in range(10):
            partners = [random_pure(n, n, (seed, j)) for j in range(n - 2)]
            w = np.full(n - 1, 1.0 / (n - 1))
            rho = mix([(w[0], psi)] + [(w[j + 1], s) for j, s in enumerate(partners)])
            assert rank_criterion(rho).verdict is Verdict.DISTILLABLE

    def test_two_entangled_pure_states_can_be_separable(self, bell_mixture):
        report = analyze(bell_mixture)
        assert report.verdicts["ppt"] is Verdict.SEPARABLE


class TestAnalyze:
    def test_bell(self, bell):
        rep = analyze(bell)
        assert rep.overall is Overall.DISTILLABLE
        assert {"ppt", "reduction", "rank", "entropy_0"} <= set(rep.distillable_by)

    def test_tiles(self, tiles):
        rep = analyze(tiles)
        assert rep.overall is Overall.NOT_DISTILLABLE_BY_THESE_TESTS
        assert rep.verdicts["ppt"] is Verdict.SEPARABLE_CONSISTENT
        assert any("not certified" in n for n in rep.notes)
        assert rep.participation_ratio == pytest.approx(4.0)

    def test_half_product_half_bell(self, half_product_half_bell):
        rep = analyze(half_product_half_bell)
        assert rep.overall is Overall.DISTILLABLE
        mt = rep.witnesses["mixture_2x2"]
        assert mt["p"] == pytest.approx(1.0, abs=1e-9)
        assert mt["det_total"] == pytest.approx(-3 / 16, abs=1e-9)

    def test_bell_mixture(self, bell_mixture):
        rep = analyze(bell_mixture)
        assert rep.overall is Overall.NOT_DISTILLABLE_BY_THESE_TESTS
        assert rep.verdicts["mixture_2x2"] is Verdict.SEPARABLE
        assert not rep.notes

    def test_open_problem_note(self):
        # rank 3 with both marginal ranks 3 in 3x3
        classical = BipartiteState.from_matrix(np.diag([1, 0, 0, 0, 1, 0, 0, 0, 1]) / 3, 3, 3)
        rep = analyze(classical)
        assert any("open problem" in n for n in rep.notes)

    def test_summary_and_dict(self, bell):
        rep = analyze(bell)
        assert "Distillable" in rep.summary()
        d = rep.to_dict()
        assert d["overall"] == "Distillable"
        assert d["verdicts"]["ppt"] == "Distillable"

    @given(st.integers(2, 3), st.integers(2, 3), st.integers(1, 9), st.integers(0, 10**6))
    @settings(max_examples=40, deadline=None)
    def test_separable_never_flagged(self, dA, dB, terms, seed):
        rep = analyze(random_separable(dA, dB, terms, seed))
        assert rep.overall is Overall.NOT_DISTILLABLE_BY_THESE_TESTS

    @pytest.mark.parametrize("seed", range(10))
    def test_local_unitary_invariance(self, seed):
        rho = random_state(2, 3, 2 + seed % 3, seed)
        a, b = analyze(rho), analyze(rotate(rho, seed))
        assert a.overall is b.overall
        for key in ("ppt", "reduction", "rank", "entropy_0", "entropy_1", "entropy_2", "entropy_inf", "support"):
            assert a.verdicts[key] is b.verdicts[key]
