"""
Entanglement of formation: ensemble search, two-qubit closed form and a
tensor-power explorer.

Every decomposition of a rank-R state into k pure states is generated by a
k x R isometry ``V``: with eigenpairs ``(lambda_i, e_i)`` of ``rho`` the
unnormalized members are ``u_j = sum_i V[j, i] sqrt(lambda_i) e_i``. The
average entanglement is minimized over ``V`` by descent along Cayley
curves on the isometry manifold, from several starts. Any value returned
is realized by an explicit ensemble, so it is an upper bound on E_f.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import linalg
from .exceptions import (
    BudgetExceeded,
    DimensionNotTwoByTwo,
    KTooSmall,
    NotIsometry,
    ResourceCapExceeded,
)
from .linalg import RANK_EPSILON
from .states import BipartiteState, PureState, make_rng, pure_entanglement

LOG2 = math.log(2.0)
DIM_CAP = 256
K_CAP = 64
SWEEP = 10
DECREASE_TOL = 1e-10
GRAD_TOL = 1e-9
INITIAL_STEP = 0.1
ARMIJO = 1e-4
WEIGHT_CUTOFF = 1e-14


@dataclass
class Ensemble:
    weights: np.ndarray
    members: list[PureState]
    realized_state: BipartiteState

    def density(self) -> np.ndarray:
        n = self.realized_state.dim
        out = np.zeros((n, n), dtype=complex)
        for w, psi in zip(self.weights, self.members):
            out += w * np.outer(psi.amplitudes, psi.amplitudes.conj())
        return out

    def residual(self) -> float:
        """Largest entry of ``|sum_i p_i |psi_i><psi_i| - rho|``."""
        return float(np.max(np.abs(self.density() - self.realized_state.rho)))

    def average_entanglement(self) -> float:
        return float(sum(w * pure_entanglement(psi) for w, psi in zip(self.weights, self.members)))

    def __len__(self):
        return len(self.members)


@dataclass
class EfResult:
    value: float
    best_ensemble: Ensemble
    restarts: int
    converged: bool
    per_restart_values: list[float]
    k: int
    iterations: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "upper_bound": True,
            "k": self.k,
            "restarts": self.restarts,
            "converged": self.converged,
            "per_restart_values": list(self.per_restart_values),
            "iterations": list(self.iterations),
            "ensemble_size": len(self.best_ensemble),
            "ensemble_residual": self.best_ensemble.residual(),
        }


class _Problem:
    """Average-entanglement objective over k x R isometries, in nats."""

    def __init__(self, state: BipartiteState, epsilon: float):
        eig = linalg.hermitian_eig(state.rho)
        R = linalg.rank_from_eigenvalues(eig.eigenvalues, epsilon)
        lam = eig.eigenvalues[:R]
        self.state = state
        self.rank = R
        self.eigenvalues = lam
        self.eigenvectors = eig.eigenvectors[:, :R]
        self.B = self.eigenvectors * np.sqrt(lam)  # N x R
        self.dA, self.dB = state.dA, state.dB

    def members(self, V: np.ndarray) -> np.ndarray:
        """Rows are the unnormalized ensemble vectors."""
        return V @ self.B.T

    def value(self, V: np.ndarray) -> float:
        U = self.members(V).reshape(-1, self.dA, self.dB)
        s = np.linalg.svd(U, compute_uv=False)
        mu = s * s
        p = mu.sum(axis=1)
        return float(_xlogx(p).sum() - _xlogx(mu).sum())

    def value_and_grad(self, V: np.ndarray) -> tuple[float, np.ndarray]:
        U = self.members(V).reshape(-1, self.dA, self.dB)
        left, s, vh = np.linalg.svd(U, full_matrices=False)
        mu = s * s
        p = mu.sum(axis=1)
        f = float(_xlogx(p).sum() - _xlogx(mu).sum())
        with np.errstate(divide="ignore", invalid="ignore"):
            coef = np.where(s > 0, (np.log(p)[:, None] - np.log(np.where(s > 0, mu, 1.0))) * s, 0.0)
        G = np.einsum("kat,kt,ktb->kab", left, coef, vh).reshape(U.shape[0], -1)
        grad = 2.0 * (G @ self.B.conj())
        return f, grad


def _xlogx(x: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(x > 0, x * np.log(np.where(x > 0, x, 1.0)), 0.0)


def _cayley(V: np.ndarray, omega: np.ndarray, tau: float) -> np.ndarray:
    k = V.shape[0]
    eye = np.eye(k)
    return np.linalg.solve(eye + 0.5 * tau * omega, (eye - 0.5 * tau * omega) @ V)


def _descend(problem: _Problem, V: np.ndarray, max_iter: int) -> tuple[np.ndarray, float, bool, int]:
    """
    Curvilinear descent with Barzilai-Borwein steps and a non-monotone
    Armijo rule; the first trial step rotates by ``INITIAL_STEP`` radians
    and rejected trials halve the step.
    """
    f, X = problem.value_and_grad(V)
    omega = X @ V.conj().T - V @ X.conj().T
    rgrad = omega @ V
    gnorm2 = float(np.sum(np.abs(omega) ** 2))
    tau = INITIAL_STEP / max(math.sqrt(gnorm2), 1e-300)
    ref, q_weight = f, 1.0
    history = [f]
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        if gnorm2 < GRAD_TOL**2:
            converged = True
            break
        slope = 0.5 * gnorm2
        while True:
            cand = _cayley(V, omega, tau)
            f_new = problem.value(cand)
            if f_new <= ref - ARMIJO * tau * slope:
                break
            tau *= 0.5
            if tau * math.sqrt(gnorm2) < 1e-15:
                break
        if f_new > ref - ARMIJO * tau * slope:
            converged = True
            break
        f_new, X = problem.value_and_grad(cand)
        omega_new = X @ cand.conj().T - cand @ X.conj().T
        rgrad_new = omega_new @ cand
        S = cand - V
        Y = rgrad_new - rgrad
        sy = abs(float(np.real(np.vdot(S, Y))))
        V, f, omega, rgrad = cand, f_new, omega_new, rgrad_new
        gnorm2 = float(np.sum(np.abs(omega) ** 2))
        if sy > 0:
            if it % 2:
                tau = float(np.real(np.vdot(S, S))) / sy
            else:
                tau = sy / float(np.real(np.vdot(Y, Y)))
        tau = min(max(tau, 1e-20), 1e20)
        q_new = 0.85 * q_weight + 1.0
        ref = (0.85 * q_weight * ref + f) / q_new
        q_weight = q_new
        history.append(f)
        if len(history) > SWEEP and abs(history[-SWEEP - 1] - f) < DECREASE_TOL:
            converged = True
            break
    # re-orthonormalize against drift from repeated solves
    q, r = np.linalg.qr(V)
    V = q * (np.diag(r) / np.abs(np.diag(r)))
    return V, problem.value(V), converged, it


def random_isometry(k: int, R: int, seed) -> np.ndarray:
    rng = make_rng(seed)
    z = rng.standard_normal((k, R)) + 1j * rng.standard_normal((k, R))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def identity_isometry(k: int, R: int) -> np.ndarray:
    V = np.zeros((k, R), dtype=complex)
    V[:R, :R] = np.eye(R)
    return V


def _check_isometry(V: np.ndarray) -> None:
    R = V.shape[1]
    err = float(np.max(np.abs(V.conj().T @ V - np.eye(R))))
    if V.shape[0] < R or err > 1e-10:
        raise NotIsometry(f"V^dagger V deviates from identity by {err:.3e}")


def ensemble_from_isometry(state: BipartiteState, V, epsilon: float = RANK_EPSILON) -> Ensemble:
    """
    The ensemble generated by the k x R isometry ``V``.

    Members of zero weight are dropped. Raises ``NotIsometry`` when
    ``V^dagger V`` differs from the identity by more than 1e-10.
    """
    problem = _Problem(state, epsilon)
    V = np.asarray(V, dtype=complex)
    if V.ndim != 2 or V.shape[1] != problem.rank:
        raise NotIsometry(f"isometry must have {problem.rank} columns, got shape {V.shape}")
    _check_isometry(V)
    return _ensemble(problem, V)


def _ensemble(problem: _Problem, V: np.ndarray) -> Ensemble:
    U = problem.members(V)
    weights = np.sum(np.abs(U) ** 2, axis=1)
    keep = weights > WEIGHT_CUTOFF
    members = [PureState.from_amplitudes(u, problem.dA, problem.dB) for u in U[keep]]
    w = weights[keep]
    return Ensemble(w / w.sum(), members, problem.state)


def ef_minimize(
    state: BipartiteState,
    k: Optional[int] = None,
    restarts: int = 20,
    seed: int = 0,
    max_iter: int = 10_000,
    epsilon: float = RANK_EPSILON,
) -> EfResult:
    """
    Upper bound on the entanglement of formation (bits) by multi-start descent.

    Start 0 is the eigen-ensemble (identity isometry); start ``i >= 1`` is a
    Haar-random isometry drawn from sub-stream ``(seed, i)``. The best final
    value wins, ties going to the lower start index, so the result does not
    depend on the order in which starts are evaluated.

    Parameters
    ----------
    k : int, optional
        Ensemble size; defaults to ``rank**2``.
    restarts : int
        Number of starts including the eigen-ensemble start.
    """
    problem = _Problem(state, epsilon)
    R = problem.rank
    if k is None:
        k = R * R
    if k < R:
        raise KTooSmall(f"k={k} is smaller than rank(rho)={R}")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")

    values, iters, results = [], [], []
    for i in range(restarts):
        V0 = identity_isometry(k, R) if i == 0 else random_isometry(k, R, (seed, i))
        if R == 1 and k == 1:
            V, f, conv, it = V0, problem.value(V0), True, 0
        else:
            V, f, conv, it = _descend(problem, V0, max_iter)
        ens = _ensemble(problem, V)
        values.append(ens.average_entanglement())
        iters.append(it)
        results.append((ens, conv))
    best = int(np.argmin(values))
    ens, conv = results[best]
    return EfResult(
        value=values[best],
        best_ensemble=ens,
        restarts=restarts,
        converged=conv,
        per_restart_values=values,
        k=k,
        iterations=iters,
    )


_SIGMA_Y = np.array([[0, -1j], [1j, 0]])


def concurrence_2q(state: BipartiteState) -> float:
    if (state.dA, state.dB) != (2, 2):
        raise DimensionNotTwoByTwo(f"expected a 2x2 state, got {state.dA}x{state.dB}")
    # With rho = W W^dagger over its numerical range, the spin-flip values are
    # the singular values of W^T (Y (x) Y) W; no square roots of noisy
    # eigenvalues are taken.
    yy = np.kron(_SIGMA_Y, _SIGMA_Y)
    eig = linalg.hermitian_eig(state.rho, canonical=False)
    R = linalg.rank_from_eigenvalues(eig.eigenvalues, RANK_EPSILON)
    W = eig.eigenvectors[:, :R] * np.sqrt(eig.eigenvalues[:R])
    lam = np.zeros(4)
    lam[:R] = np.linalg.svd(W.T @ yy @ W, compute_uv=False)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def ef_oracle_2q(state: BipartiteState) -> float:
    """Closed-form two-qubit entanglement of formation (bits) from the spin-flip concurrence."""
    c = concurrence_2q(state)
    x = (1.0 + math.sqrt(max(0.0, 1.0 - c * c))) / 2.0
    if x >= 1.0 or x <= 0.0:
        return 0.0
    return float(-x * math.log2(x) - (1 - x) * math.log2(1 - x))


def regroup_tensor_power(state: BipartiteState, n: int) -> BipartiteState:
    """
    ``rho^(x)n`` with parties regrouped as ``(A1..An) | (B1..Bn)``.

    ``np.kron`` orders the factors ``A1 B1 A2 B2 ...``; row and column axes are
    permuted to ``A1 .. An B1 .. Bn`` before flattening.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    dA, dB = state.dA, state.dB
    big = state.rho
    for _ in range(n - 1):
        big = np.kron(big, state.rho)
    if n == 1:
        return state
    axes = [dA, dB] * n
    t = big.reshape(axes + axes)
    order = [2 * i for i in range(n)] + [2 * i + 1 for i in range(n)]
    perm = order + [2 * n + a for a in order]
    N = (dA * dB) ** n
    out = t.transpose(perm).reshape(N, N)
    return BipartiteState.from_matrix(out, dA**n, dB**n, normalize=True, label=f"{state.label}^{n}")


@dataclass
class AdditivityRow:
    n: int
    ef_upper_bound: float
    per_copy: float
    k: int
    rank: int
    k_capped: bool
    seconds: float

    def to_dict(self):
        return {
            "n": self.n,
            "ef_upper_bound": self.ef_upper_bound,
            "per_copy": self.per_copy,
            "k": self.k,
            "rank": self.rank,
            "k_capped": self.k_capped,
        }


@dataclass
class AdditivityTable:
    rows: list[AdditivityRow]
    k_cap: int
    subadditivity_evidence: bool

    def to_dict(self):
        return {
            "rows": [r.to_dict() for r in self.rows],
            "k_cap": self.k_cap,
            "subadditivity_evidence": self.subadditivity_evidence,
            "note": "all values are upper bounds from explicit ensembles; comparisons are not proofs",
        }


def additivity_explore(
    state: BipartiteState,
    n_max: int,
    budget: Optional[float] = None,
    k_cap: int = K_CAP,
    restarts: int = 20,
    seed: int = 0,
    epsilon: float = RANK_EPSILON,
) -> AdditivityTable:
    """
    E_f upper bounds for ``rho^(x)n``, ``n = 1..n_max``.

    The search for n copies uses ``k = min(rank**2, k_cap)`` ensemble members.
    ``subadditivity_evidence`` is set only if some ``bound(n)/n`` falls below
    ``bound(1) - 1e-4``. ``budget`` is wall-clock seconds, checked before each
    n > 1 (the single-copy row is always computed); when it runs out
    ``BudgetExceeded`` is raised carrying the finished rows.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if (state.dA * state.dB) ** n_max > DIM_CAP:
        raise ResourceCapExceeded(
            f"(dA*dB)^n = {(state.dA * state.dB) ** n_max} exceeds the cap of {DIM_CAP}; "
            "an n-copy search needs up to r^(2n) ensemble vectors of dimension r^n"
        )
    start = time.monotonic()
    rows: list[AdditivityRow] = []
    for n in range(1, n_max + 1):
        if n > 1 and budget is not None and time.monotonic() - start > budget:
            raise BudgetExceeded(f"time budget of {budget}s exhausted before n={n}", rows)
        t0 = time.monotonic()
        power = regroup_tensor_power(state, n)
        r = power.rank(epsilon)
        k = min(r * r, k_cap)
        res = ef_minimize(power, k=max(k, r), restarts=restarts, seed=seed, epsilon=epsilon)
        rows.append(AdditivityRow(n, res.value, res.value / n, max(k, r), r, r * r > k_cap, time.monotonic() - t0))
    base = rows[0].per_copy
    evidence = any(row.per_copy < base - 1e-4 for row in rows[1:])
    return AdditivityTable(rows, k_cap, evidence)
