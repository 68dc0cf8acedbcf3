# thgsp/nn/layers.py
from __future__ import annotations

from typing import Callable, Dict, Sequence

import numpy as np

from thgsp.errors import ShapeError
from thgsp.talg.product import tprod
from thgsp.talg.tensor import SymTensor3, has_reflection

ACTIVATIONS: Dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "relu": lambda z: np.maximum(z, 0.0),
    "tanh": np.tanh,
    "identity": lambda z: z,
}


def lift(w: np.ndarray, n_slices: int) -> SymTensor3:
    """Weight tensor with ``w`` in the first frontal slice and zeros elsewhere."""
    data = np.zeros((n_slices,) + np.shape(w))
    data[0] = w
    return SymTensor3(data)


def transform(x_s: SymTensor3, weights: Sequence[np.ndarray], activation: str = "relu") -> SymTensor3:
    """Slice-shared MLP: every frontal slice goes through the same bias-free layers.

    The activation is applied between linear maps, never after the last one.
    """
    act = ACTIVATIONS[activation]
    h = x_s.data
    for i, w in enumerate(weights):
        if h.shape[-1] != w.shape[0]:
            raise ShapeError(f"layer {i}: input dim {h.shape[-1]} does not match weight {w.shape}")
        h = h @ w
        if i < len(weights) - 1:
            h = act(h)
    return SymTensor3(h, symmetrized=x_s.symmetrized)


def _shift(a_s: SymTensor3, y: SymTensor3) -> SymTensor3:
    out = tprod(a_s, y)
    # Convolving reflection-symmetric operands stays reflection-symmetric.
    assert not (a_s.symmetrized and y.symmetrized) or has_reflection(out.data, atol=1e-9 * max(out.max_abs(), 1.0))
    return out


def thgcn_forward(x_s: SymTensor3, a_s: SymTensor3, weights: Sequence[np.ndarray], activation: str = "relu") -> SymTensor3:
    """One T-HGCN layer: Y = A_s * MLP(X_s)."""
    return _shift(a_s, transform(x_s, weights, activation))


def propagate(x_t: SymTensor3, a_s: SymTensor3, alpha: float, K: int) -> SymTensor3:
    """Y(k) = alpha X' + (1 - alpha) A_s * Y(k-1), Y(0) = X'."""
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    anchored = alpha * x_t
    y = x_t
    for _ in range(K):
        mixed = (1.0 - alpha) * _shift(a_s, y)
        y = mixed if alpha == 0.0 else anchored + mixed
    return y


def thgin_forward(
    x_s: SymTensor3,
    a_s: SymTensor3,
    weights: Sequence[np.ndarray],
    alpha: float,
    K: int,
    activation: str = "relu",
) -> SymTensor3:
    """One T-HGIN layer: transform once, then K teleporting shifts."""
    return propagate(transform(x_s, weights, activation), a_s, alpha, K)


def readout(y_s: SymTensor3, mode: str = "slice_sum") -> np.ndarray:
    """Per-node class scores from a tensor output.

    slice_sum adds all frontal slices, so readout(symmetrize(S)) == S.
    leading_slice takes twice frontal slice 2, the first reflected data slice.
    """
    if mode == "slice_sum":
        return y_s.data.sum(axis=0)
    if mode == "leading_slice":
        if y_s.n_slices == 1:
            return y_s.data[0].copy()
        return 2.0 * y_s.data[1]
    raise ValueError(f"unknown readout mode {mode!r}")
