"""
scikit-learn style wrappers.

The functional API in :mod:`entrank.criteria` and :mod:`entrank.ef` does the
work; these classes add ``get_params``/``set_params``/``clone`` support and
the fit/transform/predict vocabulary so the tests plug into generic
tooling. ``X`` is a single state (``BipartiteState``, ``PureState`` or a
square array with ``dims``) or, for ``predict``, an iterable of states.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .criteria import analyze, filter_operator
from .ef import ef_minimize, ef_oracle_2q
from .linalg import PSD_TOL, RANK_EPSILON, tensor
from .states import BipartiteState
from .validation import check_state, check_states


def _check_fitted(est, attr):
    if not hasattr(est, attr):
        raise NotFittedError(f"{type(est).__name__} is not fitted yet; call fit first")


class LocalFilter(TransformerMixin, BaseEstimator):
    """
    Learns the one-sided filter that flattens a state's marginal on ``side``
    and applies it to states of the same shape.

    Attributes
    ----------
    kraus_ : ndarray
        Local Kraus operator.
    marginal_rank_ : int
    success_probability_ : float
        Filter success probability on the fitted state.
    """

    def __init__(self, side="A", epsilon=RANK_EPSILON):
        self.side = side
        self.epsilon = epsilon

    def fit(self, X, y=None, dims=None):
        state = check_state(X, dims)
        marg = state.marginal(self.side)
        self.kraus_, self.marginal_rank_ = filter_operator(marg, self.epsilon)
        self.dims_ = (state.dA, state.dB)
        self.success_probability_ = self._apply(state)[1]
        return self

    def _apply(self, state):
        if self.side == "A":
            K = tensor(self.kraus_, np.eye(state.dB))
        else:
            K = tensor(np.eye(state.dA), self.kraus_)
        sigma = K @ state.rho @ K.conj().T
        p = float(np.trace(sigma).real)
        return BipartiteState.from_matrix(sigma / p, state.dA, state.dB), p

    def transform(self, X, dims=None):
        _check_fitted(self, "kraus_")
        state = check_state(X, dims)
        if (state.dA, state.dB) != self.dims_:
            raise ValueError(f"filter was fitted on {self.dims_}, got {(state.dA, state.dB)}")
        return self._apply(state)[0]

    def fit_transform(self, X, y=None, dims=None):
        return self.fit(X, dims=dims).transform(X, dims=dims)


class SeparabilityAnalyzer(BaseEstimator):
    """Runs the full criterion battery; ``predict`` returns the overall verdict strings."""

    def __init__(self, epsilon_rank=RANK_EPSILON, tol_psd=PSD_TOL):
        self.epsilon_rank = epsilon_rank
        self.tol_psd = tol_psd

    def fit(self, X, y=None, dims=None):
        self.report_ = analyze(check_state(X, dims), self.epsilon_rank, self.tol_psd)
        self.overall_ = self.report_.overall.value
        return self

    def predict(self, X, dims=None):
        return np.array(
            [analyze(s, self.epsilon_rank, self.tol_psd).overall.value for s in check_states(X, dims)],
            dtype=object,
        )


class EntanglementOfFormation(BaseEstimator):
    """
    Upper bound on the entanglement of formation from a multi-start ensemble
    search. For two-qubit inputs the closed-form value is stored alongside
    in ``oracle_``.
    """

    def __init__(self, k=None, restarts=20, seed=0, max_iter=10_000, epsilon_rank=RANK_EPSILON):
        self.k = k
        self.restarts = restarts
        self.seed = seed
        self.max_iter = max_iter
        self.epsilon_rank = epsilon_rank

    def _run(self, state):
        return ef_minimize(state, self.k, self.restarts, self.seed, self.max_iter, self.epsilon_rank)

    def fit(self, X, y=None, dims=None):
        state = check_state(X, dims)
        self.result_ = self._run(state)
        self.value_ = self.result_.value
        self.ensemble_ = self.result_.best_ensemble
        self.oracle_ = ef_oracle_2q(state) if (state.dA, state.dB) == (2, 2) else None
        return self

    def predict(self, X, dims=None):
        return np.array([self._run(s).value for s in check_states(X, dims)])
