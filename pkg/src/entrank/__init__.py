"""Rank-based distillability and separability tests for bipartite quantum states."""

__version__ = "0.1.0"

from .criteria import (  # noqa: E402
    CriterionReport,
    Overall,
    Verdict,
    analyze,
    entropy_inequality_test,
    local_filter,
    participation_ratio,
    ppt_test,
    rank_criterion,
    reduction_test,
    renyi_entropy,
    two_qubit_mixture_test,
)
from .ef import additivity_explore, ef_minimize, ef_oracle_2q, ensemble_from_isometry  # noqa: E402
from .estimators import EntanglementOfFormation, LocalFilter, SeparabilityAnalyzer  # noqa: E402
from .states import (  # noqa: E402
    BipartiteState,
    PureState,
    bell_state,
    mix,
    random_separable,
    random_state,
    schmidt_decompose,
    tiles_fixture,
)

__all__ = [
    "BipartiteState",
    "CriterionReport",
    "EntanglementOfFormation",
    "LocalFilter",
    "Overall",
    "PureState",
    "SeparabilityAnalyzer",
    "Verdict",
    "additivity_explore",
    "analyze",
    "bell_state",
    "ef_minimize",
    "ef_oracle_2q",
    "ensemble_from_isometry",
    "entropy_inequality_test",
    "local_filter",
    "mix",
    "participation_ratio",
    "ppt_test",
    "random_separable",
    "random_state",
    "rank_criterion",
    "reduction_test",
    "renyi_entropy",
    "schmidt_decompose",
    "tiles_fixture",
    "two_qubit_mixture_test",
]
