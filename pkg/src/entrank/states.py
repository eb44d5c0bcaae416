"""
Pure and mixed bipartite states, Schmidt data, fixtures and seeded generators.

All randomness goes through ``numpy.random.Generator`` (PCG64) built by
:func:`make_rng`; a seed is either an int, a tuple of ints (the master seed
followed by sub-stream keys) or an existing ``Generator``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .exceptions import (
    DimensionMismatch,
    DimensionZero,
    InvalidState,
    NotNormalized,
    RankOutOfRange,
    WeightSumInvalid,
)

NORM_TOL = 1e-12
TRACE_TOL = 1e-12
SCHMIDT_CUTOFF = 1e-10


def make_rng(seed, *keys: int) -> np.random.Generator:
    """Seeded PCG64 generator; ``make_rng(s, i)`` is the i-th independent sub-stream of ``s``."""
    if isinstance(seed, np.random.Generator):
        if keys:
            raise TypeError("sub-stream keys require an integer seed")
        return seed
    if isinstance(seed, (tuple, list)):
        entropy = [int(x) for x in seed] + [int(k) for k in keys]
    else:
        entropy = [int(seed), *(int(k) for k in keys)]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.flags.writeable = False
    return a


def _check_dims(dA: int, dB: int) -> None:
    if int(dA) < 1 or int(dB) < 1:
        raise DimensionZero(f"local dimensions must be positive, got {dA}x{dB}")


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized vector in ``C^dA (x) C^dB`` (A-major amplitudes)."""

    dA: int
    dB: int
    amplitudes: np.ndarray

    def __post_init__(self):
        _check_dims(self.dA, self.dB)
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != self.dA * self.dB:
            raise DimensionMismatch(f"{amps.size} amplitudes for a {self.dA}x{self.dB} system")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise NotNormalized(f"state norm is {norm!r}, expected 1")
        object.__setattr__(self, "amplitudes", _readonly(amps))

    @classmethod
    def from_amplitudes(cls, amps, dA: int, dB: int, normalize: bool = True) -> "PureState":
        amps = np.asarray(amps, dtype=complex).reshape(-1)
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise NotNormalized("zero vector cannot be normalized")
            amps = amps / norm
        return cls(dA, dB, amps)

    @property
    def matrix(self) -> np.ndarray:
        """Amplitudes reshaped to ``dA x dB``; ``psi = sum_ij M[i, j] |i>|j>``."""
        return self.amplitudes.reshape(self.dA, self.dB)

    def density(self) -> "BipartiteState":
        return BipartiteState.from_matrix(np.outer(self.amplitudes, self.amplitudes.conj()), self.dA, self.dB)

    def __repr__(self):
        return f"PureState(dA={self.dA}, dB={self.dB})"


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Density matrix on ``C^dA (x) C^dB``; validated Hermitian, unit trace, PSD."""

    dA: int
    dB: int
    rho: np.ndarray
    label: str = field(default="", compare=False)

    def __post_init__(self):
        _check_dims(self.dA, self.dB)
        rho = linalg.as_square(self.rho)
        if rho.shape[0] != self.dA * self.dB:
            raise DimensionMismatch(f"matrix of size {rho.shape[0]} for a {self.dA}x{self.dB} system")
        linalg.check_hermitian(rho)
        tr = np.trace(rho)
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvalidState(f"trace is {tr.real!r}, expected 1 within {TRACE_TOL:g}")
        lam_min = linalg.min_eigenvalue(rho)
        if lam_min < -linalg.PSD_TOL:
            raise InvalidState(f"minimum eigenvalue {lam_min:.3e} is below -{linalg.PSD_TOL:g}")
        object.__setattr__(self, "rho", _readonly(rho))

    @classmethod
    def from_matrix(cls, rho, dA: int, dB: int, normalize: bool = False, label: str = "") -> "BipartiteState":
        """Hermitize (and optionally trace-normalize) ``rho`` before validation."""
        rho = linalg.hermitize(linalg.as_square(rho))
        if normalize:
            rho = rho / np.trace(rho).real
        return cls(dA, dB, rho, label)

    @property
    def dim(self) -> int:
        return self.dA * self.dB

    def marginal(self, side: str = "A") -> np.ndarray:
        """Reduced density matrix of party ``side`` (``"A"`` keeps A, tracing out B)."""
        if side == "A":
            return linalg.partial_trace(self.rho, self.dA, self.dB, "B")
        if side == "B":
            return linalg.partial_trace(self.rho, self.dA, self.dB, "A")
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")

    def partial_transpose(self) -> np.ndarray:
        return linalg.partial_transpose(self.rho, self.dA, self.dB)

    def rank(self, epsilon: float = linalg.RANK_EPSILON) -> int:
        return linalg.numerical_rank(self.rho, epsilon)

    def marginal_ranks(self, epsilon: float = linalg.RANK_EPSILON) -> tuple[int, int]:
        return (
            linalg.numerical_rank(self.marginal("A"), epsilon),
            linalg.numerical_rank(self.marginal("B"), epsilon),
        )

    def local_rotate(self, UA, UB) -> "BipartiteState":
        U = linalg.tensor(UA, UB)
        return BipartiteState.from_matrix(U @ self.rho @ U.conj().T, self.dA, self.dB, label=self.label)

    def __repr__(self):
        tag = f", label={self.label!r}" if self.label else ""
        return f"BipartiteState(dA={self.dA}, dB={self.dB}{tag})"


@dataclass(frozen=True, eq=False)
class SchmidtData:
    """``psi = sum_i coefficients[i] * left[:, i] (x) right[:, i]``."""

    coefficients: np.ndarray
    left: np.ndarray
    right: np.ndarray

    @property
    def schmidt_rank(self) -> int:
        return int(np.count_nonzero(self.coefficients > SCHMIDT_CUTOFF))

    def reconstruct(self) -> np.ndarray:
        return sum(c * np.kron(self.left[:, i], self.right[:, i]) for i, c in enumerate(self.coefficients))


def _mgs(vectors: np.ndarray, passes: int = 2) -> np.ndarray:
    q = np.array(vectors, dtype=complex, copy=True)
    for _ in range(passes):
        for i in range(q.shape[1]):
            for j in range(i):
                q[:, i] -= (q[:, j].conj() @ q[:, i]) * q[:, j]
            q[:, i] /= np.linalg.norm(q[:, i])
    return q


def schmidt_decompose(psi: PureState) -> SchmidtData:
    """
    Schmidt decomposition by diagonalizing the A marginal.

    Left vectors are eigenvectors of ``Tr_B |psi><psi|`` (degenerate clusters
    in canonical basis); right vectors are recovered from
    ``M^T conj(l_i) = c_i r_i`` and re-orthonormalized. The coefficients are
    taken as the norms of those back-solved vectors rather than square roots
    of marginal eigenvalues, which would turn 1e-16 rounding into 1e-8.
    Coefficients at or below 1e-10 are dropped.
    """
    if not isinstance(psi, PureState):
        raise TypeError("schmidt_decompose expects a PureState")
    M = psi.matrix
    eig = linalg.hermitian_eig(M @ M.conj().T)
    n = min(psi.dA, psi.dB)
    left = eig.eigenvectors[:, :n]
    raw = M.T @ left.conj()
    coeffs = np.linalg.norm(raw, axis=0)
    keep = coeffs > SCHMIDT_CUTOFF
    coeffs, left, raw = coeffs[keep], left[:, keep], raw[:, keep]
    order = np.argsort(-coeffs, kind="stable")
    coeffs, left, raw = coeffs[order], left[:, order], raw[:, order]
    right = _mgs(raw / coeffs)
    return SchmidtData(coeffs, left, right)


def _entropy_bits(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def pure_entanglement(psi: PureState) -> float:
    """Entanglement entropy of a pure state in bits (von Neumann entropy of either marginal)."""
    if not isinstance(psi, PureState):
        raise TypeError("pure_entanglement expects a PureState")
    s = np.linalg.svd(psi.matrix, compute_uv=False)
    return max(_entropy_bits(s**2), 0.0)


def mix(components: Iterable[tuple[float, PureState]]) -> BipartiteState:
    """Convex mixture ``sum_i p_i |psi_i><psi_i|``; weights must sum to one."""
    components = list(components)
    if not components:
        raise WeightSumInvalid("empty mixture")
    dA, dB = components[0][1].dA, components[0][1].dB
    weights = np.array([float(w) for w, _ in components])
    if np.any(weights < 0):
        raise WeightSumInvalid("negative mixture weight")
    if abs(weights.sum() - 1.0) > 1e-12:
        raise WeightSumInvalid(f"weights sum to {weights.sum()!r}, expected 1")
    rho = np.zeros((dA * dB, dA * dB), dtype=complex)
    for w, psi in components:
        if (psi.dA, psi.dB) != (dA, dB):
            raise DimensionMismatch("mixture components have different local dimensions")
        v = psi.amplitudes
        rho += w * np.outer(v, v.conj())
    return BipartiteState.from_matrix(rho, dA, dB)


def basis_state(i: int, j: int, dA: int, dB: int) -> PureState:
    v = np.zeros(dA * dB, dtype=complex)
    v[i * dB + j] = 1.0
    return PureState(dA, dB, v)


def product_state(a, b) -> PureState:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return PureState.from_amplitudes(np.kron(a, b), a.size, b.size)


def bell_state(kind: str = "phi+") -> PureState:
    s = 1 / np.sqrt(2)
    table = {
        "phi+": [s, 0, 0, s],
        "phi-": [s, 0, 0, -s],
        "psi+": [0, s, s, 0],
        "psi-": [0, s, -s, 0],
    }
    if kind not in table:
        raise ValueError(f"unknown Bell state {kind!r}; choose from {sorted(table)}")
    return PureState(2, 2, np.array(table[kind], dtype=complex))


def maximally_mixed(dA: int, dB: int) -> BipartiteState:
    n = dA * dB
    return BipartiteState(dA, dB, np.eye(n, dtype=complex) / n, label="maximally-mixed")


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_pure(dA: int, dB: int, seed) -> PureState:
    rng = make_rng(seed)
    return PureState.from_amplitudes(_complex_gaussian(rng, dA * dB), dA, dB)


def random_unitary(d: int, seed) -> np.ndarray:
    """Haar-random ``d x d`` unitary (QR of a complex Ginibre matrix with phase fix)."""
    rng = make_rng(seed)
    q, r = np.linalg.qr(_complex_gaussian(rng, (d, d)))
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_state(dA: int, dB: int, rank: int, seed) -> BipartiteState:
    """``G G^dagger / Tr(G G^dagger)`` with ``G`` a (dA*dB) x rank complex Gaussian matrix."""
    _check_dims(dA, dB)
    if not 1 <= rank <= dA * dB:
        raise RankOutOfRange(f"rank {rank} outside [1, {dA * dB}]")
    rng = make_rng(seed)
    G = _complex_gaussian(rng, (dA * dB, rank))
    rho = G @ G.conj().T
    return BipartiteState.from_matrix(rho / np.trace(rho).real, dA, dB, label=f"random-rank{rank}")


def random_separable(dA: int, dB: int, terms: int, seed) -> BipartiteState:
    """Mixture of ``terms`` random product pure states with flat-Dirichlet weights."""
    _check_dims(dA, dB)
    if terms < 1:
        raise ValueError("terms must be at least 1")
    rng = make_rng(seed)
    weights = rng.dirichlet(np.ones(terms))
    rho = np.zeros((dA * dB, dA * dB), dtype=complex)
    for w in weights:
        a = _complex_gaussian(rng, dA)
        b = _complex_gaussian(rng, dB)
        v = np.kron(a / np.linalg.norm(a), b / np.linalg.norm(b))
        rho += w * np.outer(v, v.conj())
    return BipartiteState.from_matrix(rho / np.trace(rho).real, dA, dB, label=f"random-separable{terms}")


def tiles_vectors() -> list[np.ndarray]:
    """The five product vectors of the 3x3 Tiles unextendible product basis."""
    e = np.eye(3, dtype=complex)
    s = 1 / np.sqrt(2)
    return [
        np.kron(e[0], (e[0] - e[1]) * s),
        np.kron(e[2], (e[1] - e[2]) * s),
        np.kron((e[0] - e[1]) * s, e[2]),
        np.kron((e[1] - e[2]) * s, e[0]),
        np.kron(e[0] + e[1] + e[2], e[0] + e[1] + e[2]) / 3,
    ]


def tiles_fixture() -> BipartiteState:
    """
    Rank-4 PPT state on 3x3: normalized projector onto the complement of the Tiles UPB.

    The construction is re-verified on every call (orthogonality, product
    structure, rank 4, full marginal ranks, PPT); any failure raises
    ``AssertionError``.
    """
    vecs = tiles_vectors()
    gram = np.array([[u.conj() @ v for v in vecs] for u in vecs])
    assert np.max(np.abs(gram - np.eye(5))) <= 1e-14, "Tiles vectors are not orthonormal"
    for v in vecs:
        sv = np.linalg.svd(v.reshape(3, 3), compute_uv=False)
        assert sv[1] <= 1e-14, "Tiles vector is not a product state"
    proj = sum(np.outer(v, v.conj()) for v in vecs)
    state = BipartiteState.from_matrix((np.eye(9) - proj) / 4, 3, 3, label="tiles")
    assert state.rank() == 4, "Tiles state must have rank 4"
    assert state.marginal_ranks() == (3, 3), "Tiles marginals must have rank 3"
    assert linalg.is_psd(state.partial_transpose()), "Tiles state must be PPT"
    return state


def pure_from_schmidt(coefficients: Sequence[float], dA: int, dB: int) -> PureState:
    """``sum_i c_i |i>|i>`` (normalized), handy for Schmidt-rank fixtures."""
    v = np.zeros(dA * dB, dtype=complex)
    for i, c in enumerate(coefficients):
        v[i * dB + i] = c
    return PureState.from_amplitudes(v, dA, dB)
