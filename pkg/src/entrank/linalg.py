"""
Dense complex linear algebra on bipartite operators.

Matrices are plain square ``numpy`` arrays. A composite index ``(i, j)``
of a space ``H_A (x) H_B`` maps to ``i * dB + j`` (A-major), which is the
ordering produced by ``np.kron`` and assumed by every other module.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.linalg

from .exceptions import DimensionMismatch, DimensionZero, NonHermitianInput

HERMITIAN_RTOL = 1e-12
RANK_EPSILON = 1e-10
PSD_TOL = 1e-9
DEGENERACY_TOL = 1e-12


class EigenDecomposition(NamedTuple):
    """Eigenvalues in descending order; ``eigenvectors[:, i]`` pairs with ``eigenvalues[i]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_square(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {M.shape}")
    if M.shape[0] == 0:
        raise DimensionZero("matrix has dimension 0")
    return M


def hermiticity_error(M: np.ndarray) -> float:
    """Largest ``|M[i, j] - conj(M[j, i])|`` divided by ``max(1, max|M|)``."""
    scale = max(1.0, float(np.max(np.abs(M))))
    return float(np.max(np.abs(M - M.conj().T))) / scale


def check_hermitian(M, rtol: float = HERMITIAN_RTOL) -> np.ndarray:
    M = as_square(M)
    err = hermiticity_error(M)
    if err > rtol:
        raise NonHermitianInput(f"matrix is not Hermitian (relative asymmetry {err:.3e} > {rtol:g})")
    return M


def hermitize(M: np.ndarray) -> np.ndarray:
    """Return ``(M + M^dagger) / 2``; the result is exactly Hermitian and idempotent under reapplication."""
    return (M + M.conj().T) / 2


def phase_normalize(vectors: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rotate each column so its first entry with modulus > ``tol`` is real positive."""
    out = np.array(vectors, dtype=complex, copy=True)
    mask = np.abs(out) > tol
    first = mask.argmax(axis=0)
    lead = out[first, np.arange(out.shape[1])]
    factor = np.ones(out.shape[1], dtype=complex)
    has = mask.any(axis=0)
    factor[has] = np.abs(lead[has]) / lead[has]
    return out * factor


def canonical_basis(vectors: np.ndarray) -> np.ndarray:
    """
    Deterministic orthonormal basis of ``span(vectors)``.

    The projector onto the span is factored with column-pivoted QR, so the
    result depends on the subspace only, not on the particular input basis.
    Subspaces spanned by standard basis vectors come back as those vectors.
    """
    m = vectors.shape[1]
    if m == 1:
        return phase_normalize(vectors)
    proj = vectors @ vectors.conj().T
    q, _, _ = scipy.linalg.qr(proj, pivoting=True)
    return phase_normalize(q[:, :m])


def _canonicalize_clusters(vals: np.ndarray, vecs: np.ndarray, tol: float) -> np.ndarray:
    scale = max(1.0, float(np.max(np.abs(vals))))
    out = vecs.copy()
    start = 0
    n = len(vals)
    while start < n:
        stop = start + 1
        while stop < n and abs(vals[stop - 1] - vals[stop]) <= tol * scale:
            stop += 1
        out[:, start:stop] = canonical_basis(vecs[:, start:stop])
        start = stop
    return out


def jacobi_eigh(M: np.ndarray, tol: float = 1e-15, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """
    Cyclic Jacobi diagonalization of a Hermitian matrix.

    Each rotation first removes the phase of the pivot ``M[p, q]`` with a
    diagonal unitary and then applies a real plane rotation that zeroes it.
    Returns unsorted ``(eigenvalues, eigenvectors)``.
    """
    A = np.array(M, dtype=complex, copy=True)
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    norm = np.linalg.norm(A)
    if n == 1 or norm == 0.0:
        return np.real(np.diag(A)).copy(), V
    for _ in range(max_sweeps):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off <= tol * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = A[p, q]
                mag = abs(g)
                if mag == 0.0:
                    continue
                phase = g / mag
                tau = (A[q, q].real - A[p, p].real) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # G = diag(1, conj(phase)) on (p, q) followed by the real rotation [[c, s], [-s, c]]
                g_pp, g_pq = c, s
                g_qp, g_qq = -s * np.conj(phase), c * np.conj(phase)
                colp = A[:, p].copy()
                colq = A[:, q].copy()
                A[:, p] = colp * g_pp + colq * g_qp
                A[:, q] = colp * g_pq + colq * g_qq
                rowp = A[p, :].copy()
                rowq = A[q, :].copy()
                A[p, :] = np.conj(g_pp) * rowp + np.conj(g_qp) * rowq
                A[q, :] = np.conj(g_pq) * rowp + np.conj(g_qq) * rowq
                A[p, q] = 0.0
                A[q, p] = 0.0
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = vp * g_pp + vq * g_qp
                V[:, q] = vp * g_pq + vq * g_qq
    return np.real(np.diag(A)).copy(), V


def hermitian_eig(M, method: str = "lapack", canonical: bool = True) -> EigenDecomposition:
    """
    Eigendecomposition of a Hermitian matrix with descending eigenvalues.

    Parameters
    ----------
    M : array_like
        Square Hermitian matrix.
    method : {"lapack", "jacobi"}
        ``"lapack"`` calls ``numpy.linalg.eigh``; ``"jacobi"`` uses the
        pure-numpy cyclic Jacobi solver in this module.
    canonical : bool
        Replace the eigenvectors of each degenerate cluster by the
        deterministic basis of :func:`canonical_basis`.

    Raises
    ------
    NonHermitianInput
        If ``M`` fails the Hermiticity check.
    DimensionZero
        If ``M`` is 0x0.
    """
    M = hermitize(check_hermitian(M))
    if method == "lapack":
        vals, vecs = np.linalg.eigh(M)
    elif method == "jacobi":
        vals, vecs = jacobi_eigh(M)
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    order = np.argsort(-vals, kind="stable")
    vals = np.asarray(vals[order], dtype=float)
    vecs = vecs[:, order]
    if canonical:
        vecs = _canonicalize_clusters(vals, vecs, DEGENERACY_TOL)
    return EigenDecomposition(vals, vecs)


def eigvalsh_desc(M) -> np.ndarray:
    M = hermitize(check_hermitian(M))
    return np.linalg.eigvalsh(M)[::-1]


def tensor(A, B) -> np.ndarray:
    """Kronecker product; entry ``(i*dB + j, k*dB + l)`` equals ``A[i, k] * B[j, l]``."""
    return np.kron(np.asarray(A, dtype=complex), np.asarray(B, dtype=complex))


def _check_split(M: np.ndarray, dA: int, dB: int) -> None:
    if dA < 1 or dB < 1:
        raise DimensionZero(f"local dimensions must be positive, got {dA}x{dB}")
    if dA * dB != M.shape[0]:
        raise DimensionMismatch(f"dA*dB = {dA * dB} does not match matrix dimension {M.shape[0]}")


def partial_trace(M, dA: int, dB: int, side: str = "B") -> np.ndarray:
    """
    Trace out one party.

    ``side="B"`` returns the dA x dA matrix ``Tr_B M``; ``side="A"`` returns
    ``Tr_A M`` of size dB x dB.
    """
    M = as_square(M)
    _check_split(M, dA, dB)
    t = M.reshape(dA, dB, dA, dB)
    if side == "B":
        return np.einsum("ijkj->ik", t)
    if side == "A":
        return np.einsum("ijil->jl", t)
    raise ValueError(f"side must be 'A' or 'B', got {side!r}")


def partial_transpose(M, dA: int, dB: int) -> np.ndarray:
    """Transpose the B indices: ``out[(i,j),(k,l)] = M[(i,l),(k,j)]``. Exact involution."""
    M = as_square(M)
    _check_split(M, dA, dB)
    return M.reshape(dA, dB, dA, dB).transpose(0, 3, 2, 1).reshape(dA * dB, dA * dB)


def numerical_rank(M, epsilon: float = RANK_EPSILON) -> int:
    """Number of eigenvalues above ``epsilon * max(lambda_max, 1e-300)``."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    return rank_from_eigenvalues(eigvalsh_desc(M), epsilon)


def rank_from_eigenvalues(vals: np.ndarray, epsilon: float = RANK_EPSILON) -> int:
    cutoff = epsilon * max(float(np.max(vals)), 1e-300)
    return int(np.count_nonzero(vals > cutoff))


def min_eigenvalue(M) -> float:
    return float(eigvalsh_desc(M)[-1])


def is_psd(M, tol: float = PSD_TOL) -> bool:
    """``M`` counts as positive semi-definite iff ``lambda_min >= -tol * max(1, lambda_max)``."""
    vals = eigvalsh_desc(M)
    return bool(vals[-1] >= -tol * max(1.0, float(vals[0])))
