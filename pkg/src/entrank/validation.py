"""Input coercion helpers in the spirit of ``sklearn.utils.validation``."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .exceptions import DimensionMismatch
from .states import BipartiteState, PureState


def check_dims(dims, n: Optional[int] = None) -> tuple[int, int]:
    """Parse ``(dA, dB)`` or ``"mxn"`` and optionally check ``dA*dB == n``."""
    if isinstance(dims, str):
        try:
            dA, dB = (int(x) for x in dims.lower().split("x"))
        except ValueError:
            raise DimensionMismatch(f"dimensions must look like '2x3', got {dims!r}") from None
    else:
        dA, dB = (int(x) for x in dims)
    if dA < 1 or dB < 1:
        raise DimensionMismatch(f"local dimensions must be positive, got {dA}x{dB}")
    if n is not None and dA * dB != n:
        raise DimensionMismatch(f"{dA}x{dB} does not factor a space of dimension {n}")
    return dA, dB


def check_state(X, dims: Optional[Sequence[int]] = None) -> BipartiteState:
    """
    Coerce ``X`` into a :class:`BipartiteState`.

    Accepts a ``BipartiteState``, a ``PureState`` (converted to its projector),
    or a square array together with ``dims``. A bare 4x4 array defaults to
    two qubits.
    """
    if isinstance(X, BipartiteState):
        return X
    if isinstance(X, PureState):
        return X.density()
    arr = np.asarray(X, dtype=complex)
    if arr.ndim == 1:
        if dims is None:
            raise DimensionMismatch("a state vector needs explicit dims")
        dA, dB = check_dims(dims, arr.size)
        return PureState.from_amplitudes(arr, dA, dB, normalize=False).density()
    if dims is None:
        if arr.shape == (4, 4):
            dims = (2, 2)
        else:
            raise DimensionMismatch("dims are required unless the matrix is 4x4")
    dA, dB = check_dims(dims, arr.shape[0])
    return BipartiteState.from_matrix(arr, dA, dB)


def check_states(X, dims=None) -> list[BipartiteState]:
    """Single state or an iterable of states -> list of states."""
    if isinstance(X, (BipartiteState, PureState)):
        return [X.density() if isinstance(X, PureState) else X]
    if isinstance(X, np.ndarray) and X.ndim == 2:
        return [check_state(X, dims)]
    return [check_state(x, dims) for x in X]
