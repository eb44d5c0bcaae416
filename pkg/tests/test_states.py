import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entrank import linalg
from entrank.exceptions import (
    DimensionMismatch,
    InvalidState,
    NotNormalized,
    RankOutOfRange,
    WeightSumInvalid,
)
from entrank.states import (
    BipartiteState,
    PureState,
    basis_state,
    bell_state,
    make_rng,
    mix,
    pure_entanglement,
    random_pure,
    random_separable,
    random_state,
    schmidt_decompose,
    tiles_fixture,
    tiles_vectors,
)


def von_neumann_bits(m):
    vals = np.linalg.eigvalsh(m)
    vals = vals[vals > 1e-15]
    return float(-np.sum(vals * np.log2(vals)))


def binary_entropy(x):
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


class TestPureState:
    def test_rejects_unnormalized(self):
        with pytest.raises(NotNormalized):
            PureState(2, 2, np.array([1, 1, 0, 0], dtype=complex))

    def test_rejects_wrong_length(self):
        with pytest.raises(DimensionMismatch):
            PureState(2, 2, np.array([1, 0, 0], dtype=complex))

    def test_immutable(self):
        psi = bell_state()
        with pytest.raises(ValueError):
            psi.amplitudes[0] = 0


class TestBipartiteState:
    def test_rejects_bad_trace(self):
        with pytest.raises(InvalidState):
            BipartiteState(2, 2, np.eye(4))

    def test_rejects_negative(self):
        with pytest.raises(InvalidState):
            BipartiteState(1, 2, np.diag([1.1, -0.1]))

    def test_rejects_dims(self):
        with pytest.raises(DimensionMismatch):
            BipartiteState(2, 3, np.eye(4) / 4)


class TestSchmidt:
    def test_product(self):
        sd = schmidt_decompose(basis_state(0, 0, 2, 2))
        assert sd.schmidt_rank == 1
        assert np.allclose(sd.coefficients, [1])

    def test_bell(self):
        sd = schmidt_decompose(bell_state())
        assert sd.schmidt_rank == 2
        assert np.allclose(sd.coefficients, [1 / math.sqrt(2)] * 2)

    def test_three_four(self):
        sd = schmidt_decompose(PureState.from_amplitudes([3, 0, 0, 4], 2, 2))
        assert np.allclose(sd.coefficients, [0.8, 0.6], atol=1e-14)

    @pytest.mark.parametrize("dA", range(1, 5))
    @pytest.mark.parametrize("dB", range(1, 5))
    def test_reconstruction_fidelity(self, dA, dB):
        for seed in range(100):
            psi = random_pure(dA, dB, (dA, dB, seed))
            sd = schmidt_decompose(psi)
            fid = abs(np.vdot(sd.reconstruct(), psi.amplitudes)) ** 2
            assert fid >= 1 - 1e-10
            assert abs(np.sum(sd.coefficients**2) - 1) <= 1e-10
            assert np.allclose(sd.left.conj().T @ sd.left, np.eye(sd.left.shape[1]), atol=1e-10)
            assert np.allclose(sd.right.conj().T @ sd.right, np.eye(sd.right.shape[1]), atol=1e-10)
            assert np.all(np.diff(sd.coefficients) <= 1e-15)

    def test_coefficients_squared_are_marginal_spectrum(self):
        psi = random_pure(3, 4, 5)
        sd = schmidt_decompose(psi)
        marg = np.sort(np.linalg.eigvalsh(psi.density().marginal("A")))[::-1]
        assert np.allclose(sd.coefficients**2, marg[: sd.schmidt_rank], atol=1e-12)

    def test_degenerate_is_deterministic(self):
        psi = bell_state()
        a, b = schmidt_decompose(psi), schmidt_decompose(psi)
        assert np.array_equal(a.left, b.left) and np.array_equal(a.right, b.right)


class TestPureEntanglement:
    def test_product(self):
        assert pure_entanglement(basis_state(0, 1, 2, 2)) == 0

    def test_bell(self):
        assert pure_entanglement(bell_state()) == pytest.approx(1.0, abs=1e-14)

    def test_three_four(self):
        psi = PureState.from_amplitudes([3, 0, 0, 4], 2, 2)
        assert pure_entanglement(psi) == pytest.approx(binary_entropy(0.36), abs=1e-14)
        assert pure_entanglement(psi) == pytest.approx(0.9427, abs=1e-4)

    @given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 10**6))
    @settings(max_examples=60, deadline=None)
    def test_equals_both_marginal_entropies(self, dA, dB, seed):
        psi = random_pure(dA, dB, seed)
        rho = psi.density()
        e = pure_entanglement(psi)
        assert abs(e - von_neumann_bits(rho.marginal("A"))) <= 1e-10
        assert abs(e - von_neumann_bits(rho.marginal("B"))) <= 1e-10


class TestMix:
    def test_single(self, bell):
        m = mix([(1.0, bell_state())])
        assert np.allclose(m.rho, bell.rho)
        assert m.rank() == 1

    def test_bell_pair_is_classical(self, bell_mixture):
        expected = np.diag([0.5, 0, 0, 0.5])
        assert np.allclose(bell_mixture.rho, expected)
        assert linalg.is_psd(bell_mixture.partial_transpose())

    def test_product_plus_bell_npt(self, half_product_half_bell):
        assert half_product_half_bell.rank() == 2
        assert linalg.min_eigenvalue(half_product_half_bell.partial_transpose()) < 0

    def test_weights(self):
        with pytest.raises(WeightSumInvalid):
            mix([(0.5, bell_state())])
        with pytest.raises(WeightSumInvalid):
            mix([(1.5, bell_state()), (-0.5, bell_state("phi-"))])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            mix([(0.5, bell_state()), (0.5, basis_state(0, 0, 2, 3))])

    @given(st.integers(1, 6), st.integers(0, 10**6))
    @settings(max_examples=40, deadline=None)
    def test_rank_at_most_components(self, n, seed):
        rng = make_rng(seed)
        w = rng.dirichlet(np.ones(n))
        w = w / w.sum()
        comps = [(float(x), random_pure(3, 3, (seed, i))) for i, x in enumerate(w)]
        comps[-1] = (1.0 - sum(x for x, _ in comps[:-1]), comps[-1][1])
        assert mix(comps).rank() <= n


class TestRandomState:
    def test_full_rank(self):
        assert random_state(2, 2, 4, 1).rank() == 4

    def test_pure(self):
        s = random_state(3, 3, 1, 2)
        assert s.rank() == 1

    @pytest.mark.parametrize("rank", [1, 2, 3, 5, 8])
    def test_requested_rank(self, rank):
        for seed in range(5):
            assert random_state(2, 4, rank, seed).rank() == rank

    def test_bit_reproducible(self):
        assert np.array_equal(random_state(3, 3, 4, 99).rho, random_state(3, 3, 4, 99).rho)
        assert not np.array_equal(random_state(3, 3, 4, 99).rho, random_state(3, 3, 4, 100).rho)

    def test_rank_range(self):
        with pytest.raises(RankOutOfRange):
            random_state(2, 2, 5, 0)
        with pytest.raises(RankOutOfRange):
            random_state(2, 2, 0, 0)

    def test_substreams_differ(self):
        assert not np.array_equal(random_state(2, 2, 2, (1, 0)).rho, random_state(2, 2, 2, (1, 1)).rho)


class TestRandomSeparable:
    def test_single_term_is_pure_product(self):
        s = random_separable(2, 2, 1, 3)
        assert s.rank() == 1
        assert s.marginal_ranks() == (1, 1)
        assert linalg.min_eigenvalue(s.partial_transpose()) >= -1e-12

    def test_reproducible(self):
        assert np.array_equal(random_separable(3, 3, 9, 5).rho, random_separable(3, 3, 9, 5).rho)


class TestTiles:
    def test_vectors_orthonormal(self):
        v = tiles_vectors()
        gram = np.array([[a.conj() @ b for b in v] for a in v])
        assert np.max(np.abs(gram - np.eye(5))) <= 1e-14

    def test_properties(self, tiles):
        assert tiles.rank() == 4
        assert tiles.marginal_ranks() == (3, 3)
        assert linalg.min_eigenvalue(tiles.partial_transpose()) >= -1e-12
        assert np.allclose(np.linalg.eigvalsh(tiles.rho)[-4:], 0.25)

    def test_is_a_projector_over_four(self, tiles):
        assert np.allclose(4 * tiles.rho @ tiles.rho, tiles.rho)
