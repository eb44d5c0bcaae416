"""
Separability and distillability tests for bipartite density matrices.

Every test returns a small result object carrying its verdict together with
the raw numbers that produced it, so borderline cases can be re-judged with
a different tolerance. :func:`analyze` runs the whole battery and combines
the verdicts into a :class:`CriterionReport`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

import numpy as np

from . import linalg
from .exceptions import DimensionNotTwoByTwo, NegativeAlpha, SingularScaling
from .linalg import PSD_TOL, RANK_EPSILON
from .states import BipartiteState, PureState, schmidt_decompose

FLATNESS_TOL = 1e-8
SINGULAR_RATIO = 1e-14
PROVED_ALPHAS = (0.0, 1.0, 2.0, math.inf)

__all__ = [
    "Verdict",
    "Overall",
    "PPTResult",
    "ReductionResult",
    "FilterOutcome",
    "RankResult",
    "EntropyResult",
    "MixtureTestResult",
    "CriterionReport",
    "ppt_test",
    "reduction_test",
    "local_filter",
    "rank_criterion",
    "renyi_entropy",
    "entropy_inequality_test",
    "participation_ratio",
    "two_qubit_mixture_test",
    "rank_two_decomposition",
    "min_cancelling_states",
    "analyze",
]


class Verdict(str, Enum):
    DISTILLABLE = "Distillable"
    SEPARABLE = "Separable"
    SEPARABLE_CONSISTENT = "SeparableConsistent"
    VIOLATED = "Violated"
    INCONCLUSIVE = "Inconclusive"
    NOT_APPLICABLE = "NotApplicable"


class Overall(str, Enum):
    DISTILLABLE = "Distillable"
    NOT_DISTILLABLE_BY_THESE_TESTS = "NotDistillableByTheseTests"


def _small_dims(state: BipartiteState) -> bool:
    # 2x2 and 2x3: PPT <=> separable, NPT <=> distillable
    return state.dA * state.dB <= 6


@dataclass
class PPTResult:
    ppt: bool
    min_eigenvalue: float
    verdict: Verdict
    exact_in_these_dims: bool

    def to_dict(self):
        return {
            "ppt": self.ppt,
            "min_eigenvalue": self.min_eigenvalue,
            "verdict": self.verdict.value,
            "exact_in_these_dims": self.exact_in_these_dims,
        }


def ppt_test(state: BipartiteState, tol: float = PSD_TOL) -> PPTResult:
    """
    Positivity of the partial transpose.

    NPT iff the smallest eigenvalue of the partial transpose is below
    ``-tol``. In 2x2 and 2x3 the verdict is exact (Separable / Distillable);
    elsewhere NPT means the separability test is violated and PPT is only
    consistent with separability.
    """
    vals = linalg.eigvalsh_desc(state.partial_transpose())
    lam_min = float(vals[-1])
    ppt = lam_min >= -tol * max(1.0, float(vals[0]))
    exact = _small_dims(state)
    if exact:
        verdict = Verdict.SEPARABLE if ppt else Verdict.DISTILLABLE
    else:
        verdict = Verdict.SEPARABLE_CONSISTENT if ppt else Verdict.VIOLATED
    return PPTResult(ppt, lam_min, verdict, exact)


@dataclass
class ReductionResult:
    violated: bool
    min_eigenvalue_A: float  # of rho^A (x) 1 - rho
    min_eigenvalue_B: float  # of 1 (x) rho^B - rho
    witness_side: Optional[str]
    witness_value: float
    witness_vector: np.ndarray
    verdict: Verdict

    def to_dict(self):
        return {
            "violated": self.violated,
            "min_eigenvalue_A": self.min_eigenvalue_A,
            "min_eigenvalue_B": self.min_eigenvalue_B,
            "witness_side": self.witness_side,
            "witness_value": self.witness_value,
            "witness_vector": _complex_list(self.witness_vector),
            "verdict": self.verdict.value,
        }


def reduction_operators(state: BipartiteState) -> tuple[np.ndarray, np.ndarray]:
    """``(rho^A (x) 1 - rho, 1 (x) rho^B - rho)``."""
    rho = state.rho
    op_a = linalg.tensor(state.marginal("A"), np.eye(state.dB)) - rho
    op_b = linalg.tensor(np.eye(state.dA), state.marginal("B")) - rho
    return op_a, op_b


def reduction_test(state: BipartiteState, tol: float = PSD_TOL) -> ReductionResult:
    """
    Reduction criterion. Both ``rho^A (x) 1 - rho`` and ``1 (x) rho^B - rho``
    must be positive semi-definite for a separable state; a negative
    eigenvalue below ``-tol`` proves distillability and its eigenvector is
    returned as the witness.
    """
    op_a, op_b = reduction_operators(state)
    eig_a = linalg.hermitian_eig(op_a)
    eig_b = linalg.hermitian_eig(op_b)
    min_a = float(eig_a.eigenvalues[-1])
    min_b = float(eig_b.eigenvalues[-1])
    if min_a <= min_b:
        side, value, vec = "A", min_a, eig_a.eigenvectors[:, -1]
    else:
        side, value, vec = "B", min_b, eig_b.eigenvectors[:, -1]
    violated = value < -tol
    return ReductionResult(
        violated=violated,
        min_eigenvalue_A=min_a,
        min_eigenvalue_B=min_b,
        witness_side=side if violated else None,
        witness_value=value,
        witness_vector=vec,
        verdict=Verdict.DISTILLABLE if violated else Verdict.SEPARABLE_CONSISTENT,
    )


@dataclass
class FilterOutcome:
    filtered_state: BipartiteState
    success_probability: float
    marginal_flatness: float
    side: str
    marginal_rank: int
    kraus: np.ndarray

    def to_dict(self):
        return {
            "side": self.side,
            "marginal_rank": self.marginal_rank,
            "success_probability": self.success_probability,
            "marginal_flatness": self.marginal_flatness,
        }


def filter_operator(marginal: np.ndarray, epsilon: float = RANK_EPSILON) -> tuple[np.ndarray, int]:
    """
    Local Kraus operator ``K = sum_i sqrt(mu_min / mu_i) |mu_i><mu_i|`` over the
    range of ``marginal``. ``K^dagger K <= 1`` and ``K rho_loc K^dagger`` has a
    flat spectrum on the range.
    """
    eig = linalg.hermitian_eig(marginal)
    R = linalg.rank_from_eigenvalues(eig.eigenvalues, epsilon)
    mu = eig.eigenvalues[:R]
    vecs = eig.eigenvectors[:, :R]
    if mu[-1] / mu[0] < SINGULAR_RATIO:
        raise SingularScaling(f"marginal eigenvalue ratio {mu[-1] / mu[0]:.3e} below {SINGULAR_RATIO:g}")
    scale = np.sqrt(mu[-1] / mu)
    return (vecs * scale) @ vecs.conj().T, R


def local_filter(state: BipartiteState, side: str = "A", epsilon: float = RANK_EPSILON) -> FilterOutcome:
    """
    Filter one party so that its marginal becomes ``1_R / R`` on its range.

    The filtered state is ``(K (x) 1) rho (K (x) 1)^dagger / p`` with
    ``p`` the success probability of the filter.
    """
    k_loc, R = filter_operator(state.marginal(side), epsilon)
    if side == "A":
        K = linalg.tensor(k_loc, np.eye(state.dB))
    else:
        K = linalg.tensor(np.eye(state.dA), k_loc)
    sigma = K @ state.rho @ K.conj().T
    p = float(np.trace(sigma).real)
    filtered = BipartiteState.from_matrix(sigma / p, state.dA, state.dB, label=f"filtered-{side}")
    vals = linalg.eigvalsh_desc(filtered.marginal(side))
    flatness = float(np.max(np.abs(vals[:R] - 1.0 / R)))
    if R < vals.size:
        flatness = max(flatness, float(np.max(np.abs(vals[R:]))))
    return FilterOutcome(filtered, p, flatness, side, R, k_loc)


@dataclass
class RankResult:
    verdict: Verdict
    rank: int
    rank_A: int
    rank_B: int
    case: str
    filter_side: Optional[str] = None
    witness_value: Optional[float] = None
    bound: Optional[float] = None
    filtered_flat: Optional[bool] = None
    filter: Optional[FilterOutcome] = None
    reduction: Optional[ReductionResult] = None
    note: str = ""

    def to_dict(self):
        return {
            "verdict": self.verdict.value,
            "rank": self.rank,
            "rank_A": self.rank_A,
            "rank_B": self.rank_B,
            "case": self.case,
            "filter_side": self.filter_side,
            "witness_value": self.witness_value,
            "bound": self.bound,
            "filtered_flat": self.filtered_flat,
            "filter": self.filter.to_dict() if self.filter else None,
            "note": self.note,
        }


def _filtered_reduction(state, side, epsilon, tol):
    outcome = local_filter(state, side, epsilon)
    red = reduction_test(outcome.filtered_state, tol)
    value = red.min_eigenvalue_A if side == "A" else red.min_eigenvalue_B
    return outcome, red, value


def rank_criterion(state: BipartiteState, epsilon: float = RANK_EPSILON, tol: float = PSD_TOL) -> RankResult:
    """
    Rank versus marginal rank.

    If ``rank(rho) < max(rank rho^A, rank rho^B)`` the state is distillable;
    the witness is built by filtering the larger-rank side flat and exhibiting
    a reduction-criterion eigenvalue ``<= 1/R - 1/r``. When the ranks are
    equal the same witness works unless the filtered state has a flat
    spectrum, in which case the result is Inconclusive.
    """
    r = state.rank(epsilon)
    ra, rb = state.marginal_ranks(epsilon)
    big = max(ra, rb)
    side = "A" if ra >= rb else "B"

    if r < big:
        outcome, red, value = _filtered_reduction(state, side, epsilon, tol)
        bound = 1.0 / big - 1.0 / r
        note = "" if value < -tol else "filtered reduction witness did not reach the tolerance"
        return RankResult(
            Verdict.DISTILLABLE, r, ra, rb, "rank-below-marginal", side, value, bound,
            filter=outcome, reduction=red, note=note,
        )

    if r == big:
        sides = [s for s, rk in (("A", ra), ("B", rb)) if rk == big]
        last = None
        for s in sides:
            outcome, red, value = _filtered_reduction(state, s, epsilon, tol)
            spectrum = linalg.eigvalsh_desc(outcome.filtered_state.rho)[:r]
            flat = bool(np.max(np.abs(spectrum - 1.0 / r)) <= FLATNESS_TOL)
            bound = 1.0 / big - float(spectrum[0])
            last = (s, outcome, red, value, flat, bound)
            if not flat and value < -tol:
                return RankResult(
                    Verdict.DISTILLABLE, r, ra, rb, "rank-equals-marginal", s, value, bound, flat,
                    outcome, red,
                )
        s, outcome, red, value, flat, bound = last
        note = (
            "filtered state is proportional to a projector; no conclusion"
            if flat
            else "filtered spectrum not flat but no reduction violation above tolerance"
        )
        return RankResult(
            Verdict.INCONCLUSIVE, r, ra, rb, "rank-equals-marginal", s, value, bound, flat,
            outcome, red, note,
        )

    return RankResult(Verdict.INCONCLUSIVE, r, ra, rb, "rank-above-marginal")


def _spectrum(obj) -> np.ndarray:
    rho = obj.rho if isinstance(obj, BipartiteState) else obj
    return linalg.eigvalsh_desc(rho)


def _parse_alpha(alpha) -> float:
    if isinstance(alpha, str):
        alpha = math.inf if alpha.lower() in ("inf", "infinity") else float(alpha)
    alpha = float(alpha)
    if alpha < 0 or math.isnan(alpha):
        raise NegativeAlpha(f"Renyi order must be >= 0, got {alpha}")
    return alpha


def renyi_entropy(state, alpha, epsilon: float = RANK_EPSILON) -> float:
    """
    Renyi entropy in bits of a state (or a bare density matrix).

    ``alpha=0`` is ``log2 rank``, ``alpha=1`` the von Neumann entropy and
    ``alpha=inf`` the min-entropy ``-log2 lambda_max``. Eigenvalues at or below
    the rank cutoff are treated as zero.
    """
    alpha = _parse_alpha(alpha)
    vals = _spectrum(state)
    r = linalg.rank_from_eigenvalues(vals, epsilon)
    lam = vals[:r]
    if alpha == 0.0:
        return math.log2(r)
    if alpha == 1.0:
        return max(float(-np.sum(lam * np.log2(lam))), 0.0)
    if math.isinf(alpha):
        return -math.log2(float(lam[0]))
    return float(np.log2(np.sum(lam**alpha)) / (1.0 - alpha))


@dataclass
class EntropyResult:
    alpha: float
    entropy: float
    entropy_A: float
    entropy_B: float
    violated: bool
    verdict: Verdict
    proved: bool

    @property
    def margin(self) -> float:
        """``S(rho) - max(S(rho^A), S(rho^B))``; negative when violated."""
        return self.entropy - max(self.entropy_A, self.entropy_B)

    def to_dict(self):
        return {
            "alpha": "inf" if math.isinf(self.alpha) else self.alpha,
            "entropy": self.entropy,
            "entropy_A": self.entropy_A,
            "entropy_B": self.entropy_B,
            "margin": self.margin,
            "violated": self.violated,
            "verdict": self.verdict.value,
            "proved": self.proved,
        }


def entropy_inequality_test(
    state: BipartiteState, alpha, epsilon: float = RANK_EPSILON, tol: float = 1e-9
) -> EntropyResult:
    """
    Check ``S_a(rho) >= S_a(rho^A)`` and ``S_a(rho) >= S_a(rho^B)``.

    For ``alpha = 0`` a violation is the rank criterion in entropic form and
    proves distillability. For ``alpha`` in {1, 2, inf} a violation proves
    entanglement only. Other orders are computed but flagged ``proved=False``.
    """
    alpha = _parse_alpha(alpha)
    s = renyi_entropy(state, alpha, epsilon)
    sa = renyi_entropy(state.marginal("A"), alpha, epsilon)
    sb = renyi_entropy(state.marginal("B"), alpha, epsilon)
    violated = s < sa - tol or s < sb - tol
    proved = alpha in PROVED_ALPHAS
    if not violated:
        verdict = Verdict.SEPARABLE_CONSISTENT
    elif alpha == 0.0:
        verdict = Verdict.DISTILLABLE
    elif proved:
        verdict = Verdict.VIOLATED
    else:
        verdict = Verdict.INCONCLUSIVE
    return EntropyResult(alpha, s, sa, sb, violated, verdict, proved)


def participation_ratio(state) -> float:
    """``1 / Tr(rho^2)``; lies in ``[1, rank]``."""
    rho = state.rho if isinstance(state, BipartiteState) else np.asarray(state)
    return float(1.0 / np.sum(np.abs(rho) ** 2))


@dataclass
class MixtureTestResult:
    p: float
    amplitudes: np.ndarray  # (a, b, c, d) after aligning the product state to |00>
    ad_minus_bc: complex
    det_total: float
    det_cofactor_term: float
    det_pure_term: float
    closed_form_term: float
    direct_min_eigenvalue: float
    direct_verdict: Verdict
    closed_form_verdict: Verdict
    fallback_used: bool
    rotation_A: np.ndarray
    rotation_B: np.ndarray

    @property
    def verdict(self) -> Verdict:
        return self.direct_verdict

    @property
    def agree(self) -> bool:
        return self.direct_verdict == self.closed_form_verdict

    def to_dict(self):
        return {
            "p": self.p,
            "amplitudes": _complex_list(self.amplitudes),
            "ad_minus_bc": [self.ad_minus_bc.real, self.ad_minus_bc.imag],
            "det_total": self.det_total,
            "det_cofactor_term": self.det_cofactor_term,
            "det_pure_term": self.det_pure_term,
            "closed_form_term": self.closed_form_term,
            "direct_min_eigenvalue": self.direct_min_eigenvalue,
            "direct_verdict": self.direct_verdict.value,
            "closed_form_verdict": self.closed_form_verdict.value,
            "fallback_used": self.fallback_used,
            "agree": self.agree,
            "rotation_A": _complex_matrix(self.rotation_A),
            "rotation_B": _complex_matrix(self.rotation_B),
        }


def _aligning_unitary(v: np.ndarray) -> np.ndarray:
    """2x2 unitary mapping the unit vector ``v`` to ``|0>``."""
    v = v / np.linalg.norm(v)
    perp = np.array([-np.conj(v[1]), np.conj(v[0])])
    return np.vstack([v.conj(), perp.conj()])


def two_qubit_mixture_test(
    p: float, psi: PureState, product: Optional[PureState] = None, tol: float = PSD_TOL
) -> MixtureTestResult:
    """
    Distillability of ``(p |prod><prod| + |psi><psi|) / (1 + p)`` on 2x2.

    Local unitaries first rotate the product state to ``|00>``; ``psi`` then
    reads ``a|00> + b|01> + c|10> + d|11>``. The determinant of the partial
    transpose ``rho'`` (without the ``1 + p`` normalization) splits along its
    top row into ``p det(C11)`` and ``det(PT |psi><psi|)``, the first equal to
    ``-p |d|^2 |ad - bc|^2 <= 0`` and the second negative iff ``psi`` is
    entangled. The direct partial-transpose eigenvalue test is always run
    as well and is the returned verdict; the determinant verdict falls back
    to it when ``|det rho'|`` is below 1e-12.
    """
    if (psi.dA, psi.dB) != (2, 2):
        raise DimensionNotTwoByTwo(f"expected a 2x2 pure state, got {psi.dA}x{psi.dB}")
    if p < 0:
        raise ValueError("mixing weight p must be non-negative")
    if product is None:
        ua = ub = np.eye(2, dtype=complex)
    else:
        if (product.dA, product.dB) != (2, 2):
            raise DimensionNotTwoByTwo("product state must be 2x2")
        sd = schmidt_decompose(product)
        if sd.schmidt_rank != 1:
            raise ValueError("product argument has Schmidt rank > 1")
        ua = _aligning_unitary(sd.left[:, 0])
        ub = _aligning_unitary(sd.right[:, 0])
    v = linalg.tensor(ua, ub) @ psi.amplitudes
    a, b, c, d = v
    e00 = np.zeros((4, 4), dtype=complex)
    e00[0, 0] = 1.0
    pure = np.outer(v, v.conj())
    rho_un = p * e00 + pure
    rho_pt = linalg.partial_transpose(rho_un, 2, 2)
    det_total = float(np.linalg.det(rho_pt).real)
    cofactor = p * float(np.linalg.det(rho_pt[1:, 1:]).real)
    pure_term = float(np.linalg.det(linalg.partial_transpose(pure, 2, 2)).real)
    amb = complex(a * d - b * c)
    closed = -p * abs(d) ** 2 * abs(amb) ** 2

    lam_min = float(linalg.eigvalsh_desc(rho_pt / (1.0 + p))[-1])
    direct = Verdict.DISTILLABLE if lam_min < -tol else Verdict.SEPARABLE
    fallback = abs(det_total) < 1e-12
    if fallback:
        closed_verdict = direct
    else:
        closed_verdict = Verdict.DISTILLABLE if det_total < 0 else Verdict.SEPARABLE
    return MixtureTestResult(
        p=float(p),
        amplitudes=v,
        ad_minus_bc=amb,
        det_total=det_total,
        det_cofactor_term=cofactor,
        det_pure_term=pure_term,
        closed_form_term=closed,
        direct_min_eigenvalue=lam_min,
        direct_verdict=direct,
        closed_form_verdict=closed_verdict,
        fallback_used=fallback,
        rotation_A=ua,
        rotation_B=ub,
    )


def _support_isometry(marginal: np.ndarray, d: int) -> np.ndarray:
    if d == 2:
        return np.eye(2, dtype=complex)
    return linalg.hermitian_eig(marginal).eigenvectors[:, :2]


def rank_two_decomposition(
    state: BipartiteState, epsilon: float = RANK_EPSILON
) -> Optional[tuple[float, PureState, PureState]]:
    """
    Write a rank-2 state with local supports of dimension <= 2 as
    ``p |prod><prod| + |psi><psi|`` (up to normalization) on a 2x2 frame.

    Returns ``(p, psi, product)`` in the compressed frame, or ``None`` when the
    state is not of that shape. A two-dimensional subspace of ``C^2 (x) C^2``
    always contains a product vector; it is found as a root of
    ``det(M1 + t M2) = 0`` with ``M1, M2`` the range vectors as 2x2 matrices.
    """
    if state.rank(epsilon) != 2 or min(state.dA, state.dB) < 2:
        return None
    ra, rb = state.marginal_ranks(epsilon)
    if ra > 2 or rb > 2:
        return None
    wa = _support_isometry(state.marginal("A"), state.dA)
    wb = _support_isometry(state.marginal("B"), state.dB)
    W = linalg.tensor(wa, wb)
    rho = linalg.hermitize(W.conj().T @ state.rho @ W)
    eig = linalg.hermitian_eig(rho)
    v1, v2 = eig.eigenvectors[:, 0], eig.eigenvectors[:, 1]
    m1, m2 = v1.reshape(2, 2), v2.reshape(2, 2)
    a0 = np.linalg.det(m1)
    a2 = np.linalg.det(m2)
    a1 = np.linalg.det(m1 + m2) - a0 - a2
    if abs(a2) < 1e-13:
        u = v2
    else:
        roots = sorted(np.roots([a2, a1, a0]), key=lambda z: (round(abs(z), 12), round(np.angle(z), 12)))
        u = v1 + roots[0] * v2
    u = u / np.linalg.norm(u)
    lam = eig.eigenvalues[:2]
    vecs = eig.eigenvectors[:, :2]
    coeff = vecs.conj().T @ u
    w = 1.0 / float(np.sum(np.abs(coeff) ** 2 / lam))
    rest = rho - w * np.outer(u, u.conj())
    rest_eig = linalg.hermitian_eig(linalg.hermitize(rest))
    q = float(rest_eig.eigenvalues[0])
    psi = PureState.from_amplitudes(rest_eig.eigenvectors[:, 0], 2, 2)
    left, _, vh = np.linalg.svd(u.reshape(2, 2))
    product = PureState.from_amplitudes(np.kron(left[:, 0], vh[0]), 2, 2)
    return w / q, psi, product


def min_cancelling_states(schmidt_rank: int) -> int:
    """
    Fewest extra pure states that could make a mixture with a Schmidt-rank-n
    pure state non-distillable: with ``n - 2`` or fewer the mixture's rank
    stays below its marginal rank, so at least ``n - 1`` are needed.
    """
    if schmidt_rank < 1:
        raise ValueError("Schmidt rank must be positive")
    return max(schmidt_rank - 1, 0)


@dataclass
class CriterionReport:
    dA: int
    dB: int
    overall: Overall
    verdicts: dict[str, Verdict]
    witnesses: dict[str, Any]
    rank: int
    rank_A: int
    rank_B: int
    participation_ratio: float
    notes: list[str] = field(default_factory=list)
    tolerances: dict[str, float] = field(default_factory=dict)

    @property
    def distillable(self) -> bool:
        return self.overall is Overall.DISTILLABLE

    @property
    def distillable_by(self) -> list[str]:
        return [k for k, v in self.verdicts.items() if v is Verdict.DISTILLABLE]

    def to_dict(self) -> dict:
        return {
            "dims": [self.dA, self.dB],
            "overall": self.overall.value,
            "distillable_by": self.distillable_by,
            "verdicts": {k: v.value for k, v in self.verdicts.items()},
            "witnesses": self.witnesses,
            "rank": self.rank,
            "marginal_ranks": [self.rank_A, self.rank_B],
            "participation_ratio": self.participation_ratio,
            "notes": list(self.notes),
            "tolerances": dict(self.tolerances),
        }

    def summary(self) -> str:
        lines = [
            f"state: {self.dA}x{self.dB}, rank {self.rank}, marginal ranks {self.rank_A}x{self.rank_B}",
            f"overall: {self.overall.value}",
        ]
        for name, verdict in self.verdicts.items():
            lines.append(f"  {name:<16} {verdict.value}")
        ppt = self.witnesses.get("ppt", {})
        if ppt:
            lines.append(f"  PT min eigenvalue: {ppt['min_eigenvalue']:.6g}")
        red = self.witnesses.get("reduction", {})
        if red:
            lines.append(
                f"  reduction min eigenvalues: A {red['min_eigenvalue_A']:.6g}, B {red['min_eigenvalue_B']:.6g}"
            )
        lines.append(f"  participation ratio: {self.participation_ratio:.6g}")
        for note in self.notes:
            lines.append(f"note: {note}")
        return "\n".join(lines)


def _alpha_key(alpha: float) -> str:
    return "entropy_inf" if math.isinf(alpha) else f"entropy_{int(alpha)}"


def analyze(state: BipartiteState, epsilon: float = RANK_EPSILON, tol: float = PSD_TOL) -> CriterionReport:
    """Run every test on ``state`` and aggregate the verdicts."""
    verdicts: dict[str, Verdict] = {}
    witnesses: dict[str, Any] = {}
    notes: list[str] = []

    ppt = ppt_test(state, tol)
    verdicts["ppt"] = ppt.verdict
    witnesses["ppt"] = ppt.to_dict()

    red = reduction_test(state, tol)
    verdicts["reduction"] = red.verdict
    witnesses["reduction"] = red.to_dict()

    rk = rank_criterion(state, epsilon, tol)
    verdicts["rank"] = rk.verdict
    witnesses["rank"] = rk.to_dict()

    for alpha in PROVED_ALPHAS:
        ent = entropy_inequality_test(state, alpha, epsilon, tol)
        verdicts[_alpha_key(alpha)] = ent.verdict
        witnesses[_alpha_key(alpha)] = ent.to_dict()

    decomposition = rank_two_decomposition(state, epsilon)
    if decomposition is None:
        verdicts["mixture_2x2"] = Verdict.NOT_APPLICABLE
    else:
        p, psi, prod = decomposition
        mt = two_qubit_mixture_test(p, psi, prod, tol)
        verdicts["mixture_2x2"] = mt.verdict
        witnesses["mixture_2x2"] = mt.to_dict()
        if not mt.agree:
            notes.append("determinant and eigenvalue forms of the 2x2 mixture test disagree")

    r, ra, rb = rk.rank, rk.rank_A, rk.rank_B
    support_ok = r >= max(ra, rb)
    verdicts["support"] = Verdict.SEPARABLE_CONSISTENT if support_ok else Verdict.DISTILLABLE
    witnesses["support"] = {
        "rank": r,
        "support_dims": [ra, rb],
        "message": (
            f"rank-{r} state confined to a {ra}x{rb} support (at most {r}x{r}): consistent"
            if support_ok
            else f"rank-{r} state needs a {ra}x{rb} support, larger than {r}x{r}: distillable"
        ),
    }

    pr = participation_ratio(state)
    witnesses["participation_ratio"] = pr

    distillable = any(v is Verdict.DISTILLABLE for v in verdicts.values())
    overall = Overall.DISTILLABLE if distillable else Overall.NOT_DISTILLABLE_BY_THESE_TESTS

    if not distillable and ppt.ppt and not ppt.exact_in_these_dims:
        notes.append("PPT: entanglement not certified by this toolkit")
    if not distillable and ppt.ppt and not ppt.exact_in_these_dims and state.dA == state.dB == r == ra == rb:
        notes.append(
            "open problem: it is unknown whether a state whose rank equals both marginal ranks "
            "can be bound entangled; no verdict is drawn"
        )

    return CriterionReport(
        dA=state.dA,
        dB=state.dB,
        overall=overall,
        verdicts=verdicts,
        witnesses=witnesses,
        rank=r,
        rank_A=ra,
        rank_B=rb,
        participation_ratio=pr,
        notes=notes,
        tolerances={"epsilon_rank": epsilon, "tol_psd": tol, "flatness": FLATNESS_TOL},
    )


def _complex_list(v) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v).reshape(-1)]


def _complex_matrix(m) -> list:
    return [_complex_list(row) for row in np.asarray(m)]
