"""
Random search for low-rank states that pass every necessary condition for
non-distillability.

Trial ``i`` always draws its state from sub-stream ``(seed, i)``, so results
are reproducible trial by trial whatever order trials run in.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from .criteria import (
    CriterionReport,
    Overall,
    Verdict,
    analyze,
    participation_ratio,
    ppt_test,
    rank_criterion,
)
from .linalg import PSD_TOL, RANK_EPSILON
from .states import BipartiteState, random_state

MAX_DIM = 4
MAX_TRIALS = 10**7
HIST_BINS = 20

NECESSARY = ("ppt", "reduction", "entropy_0", "entropy_1", "entropy_2", "entropy_inf", "support")


def passes_necessary_conditions(report: CriterionReport) -> bool:
    """PPT, reduction, every entropy inequality, support dimensions, and nothing proving distillability."""
    if report.overall is not Overall.NOT_DISTILLABLE_BY_THESE_TESTS:
        return False
    ok = (Verdict.SEPARABLE, Verdict.SEPARABLE_CONSISTENT)
    return all(report.verdicts[name] in ok for name in NECESSARY)


def classify(state: BipartiteState, report: CriterionReport) -> Optional[str]:
    """
    ``None`` if the state fails the filter; ``"separable"`` where PPT already
    proves separability (2x2, 2x3); otherwise ``"candidate"``. A candidate only
    passes the necessary conditions and is never claimed to be bound entangled.
    """
    if not passes_necessary_conditions(report):
        return None
    if report.verdicts["ppt"] is Verdict.SEPARABLE:
        return "separable"
    return "candidate"


@dataclass
class Survivor:
    trial: int
    classification: str
    state: BipartiteState
    report: CriterionReport


@dataclass
class SearchSummary:
    dims: tuple[int, int]
    rank: int
    trials: int
    seed: int
    ppt_count: int = 0
    npt_count: int = 0
    npt_flagged_distillable: int = 0
    rank_criterion_distillable: int = 0
    separable_survivors: int = 0
    candidate_survivors: int = 0
    pr_values: list[float] = field(default_factory=list, repr=False)
    pr_values_ppt: list[float] = field(default_factory=list, repr=False)
    survivors: list[Survivor] = field(default_factory=list, repr=False)

    def histogram(self, values: list[float]) -> dict:
        counts, edges = np.histogram(np.asarray(values, dtype=float), bins=HIST_BINS, range=(1.0, float(self.rank)))
        return {"edges": [float(e) for e in edges], "counts": [int(c) for c in counts], "n": len(values)}

    def to_dict(self) -> dict:
        pr = np.asarray(self.pr_values, dtype=float)
        out = {
            "dims": list(self.dims),
            "rank": self.rank,
            "trials": self.trials,
            "seed": self.seed,
            "ppt_count": self.ppt_count,
            "npt_count": self.npt_count,
            "npt_flagged_distillable": self.npt_flagged_distillable,
            "rank_criterion_distillable": self.rank_criterion_distillable,
            "separable_survivors": self.separable_survivors,
            "candidate_survivors": self.candidate_survivors,
            "candidate_bound_entangled": 0,
            "pass_rate": (self.separable_survivors + self.candidate_survivors) / self.trials if self.trials else 0.0,
            "participation_ratio": {
                "min": float(pr.min()) if pr.size else None,
                "max": float(pr.max()) if pr.size else None,
                "mean": float(pr.mean()) if pr.size else None,
                "histogram_all": self.histogram(self.pr_values),
                "histogram_ppt": self.histogram(self.pr_values_ppt),
            },
            "survivor_trials": [s.trial for s in self.survivors],
            "note": (
                "survivors pass necessary conditions only; 'candidate' never means "
                "certified bound entangled"
            ),
        }
        return out


def iter_trials(dA: int, dB: int, rank: int, trials: int, seed: int) -> Iterator[tuple[int, BipartiteState]]:
    for i in range(trials):
        yield i, random_state(dA, dB, rank, (seed, i))


def run_search(
    dA: int,
    dB: int,
    rank: int,
    trials: int,
    seed: int = 0,
    epsilon: float = RANK_EPSILON,
    tol: float = PSD_TOL,
    keep_survivors: int = 1000,
    extra_states: Optional[list[BipartiteState]] = None,
) -> SearchSummary:
    """
    Screen ``trials`` random rank-``rank`` states.

    NPT trials are not candidates; they are only checked for a
    distillability proof (exact NPT in 2x2/2x3, or the rank criterion).
    PPT trials go through the full :func:`analyze` pipeline. Up to
    ``keep_survivors`` survivors are stored with their reports.
    ``extra_states`` are screened after the random trials and numbered
    from ``trials`` on.
    """
    if max(dA, dB) > MAX_DIM:
        raise ValueError(f"search is limited to {MAX_DIM}x{MAX_DIM}")
    if not 1 <= trials <= MAX_TRIALS:
        raise ValueError(f"trials must be in [1, {MAX_TRIALS}]")
    summary = SearchSummary((dA, dB), rank, trials, seed)

    def screen(i: int, state: BipartiteState) -> None:
        summary.pr_values.append(participation_ratio(state))
        ppt = ppt_test(state, tol)
        if not ppt.ppt:
            summary.npt_count += 1
            rk = rank_criterion(state, epsilon, tol)
            if rk.verdict is Verdict.DISTILLABLE:
                summary.rank_criterion_distillable += 1
            if ppt.verdict is Verdict.DISTILLABLE or rk.verdict is Verdict.DISTILLABLE:
                summary.npt_flagged_distillable += 1
            return
        summary.ppt_count += 1
        summary.pr_values_ppt.append(summary.pr_values[-1])
        report = analyze(state, epsilon, tol)
        if report.verdicts["rank"] is Verdict.DISTILLABLE:
            summary.rank_criterion_distillable += 1
        kind = classify(state, report)
        if kind is None:
            return
        if kind == "separable":
            summary.separable_survivors += 1
        else:
            summary.candidate_survivors += 1
        if len(summary.survivors) < keep_survivors:
            summary.survivors.append(Survivor(i, kind, state, report))

    for i, state in iter_trials(dA, dB, rank, trials, seed):
        screen(i, state)
    for j, state in enumerate(extra_states or []):
        screen(trials + j, state)
    return summary
