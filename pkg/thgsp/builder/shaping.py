# thgsp/builder/shaping.py
from __future__ import annotations

from typing import Optional, Tuple, Union

import numpy as np

from thgsp.builder.adjacency import AdjacencySpec, build_adjacency
from thgsp.builder.signal import SignalSpec, build_signal
from thgsp.errors import ShapeError
from thgsp.hypergraph.model import Hypergraph
from thgsp.talg.tensor import SymTensor3, identity_tensor


def slice_index(tail: Tuple[int, ...], dim: int) -> int:
    """Row-major flat index of (p3, ..., pM); 0 for order-2 tensors."""
    if not tail:
        return 0
    return int(np.ravel_multi_index(tail, (dim,) * len(tail)))


def flatten_to_slices(t: Union[AdjacencySpec, SignalSpec]) -> np.ndarray:
    """Third-order, slice-major form of an M-order tensor.

    Indices p3..pM become one frontal-slice index, so the result has shape
    (N^(M-2), N, C) with C = N for adjacency and C = D for signals.
    """
    if isinstance(t, SignalSpec):
        return np.ascontiguousarray(np.transpose(t.values, (2, 0, 1)))
    if t.order < 2:
        raise ValueError(f"flattening needs order M >= 2, got {t.order}")
    n = t.dim
    out = np.zeros((n ** (t.order - 2), n, n))
    for idx, w in t.entries.items():
        out[slice_index(idx[2:], n), idx[0], idx[1]] = w
    return out


def symmetrize(slices: np.ndarray) -> SymTensor3:
    """Prepend a zero slice, append the slices in reverse, halve everything.

    N_f input slices give N_s = 2 N_f + 1 output slices.
    """
    s = np.asarray(slices, dtype=float)
    if s.ndim != 3:
        raise ShapeError(f"expected (N_f, N, C) slices, got shape {s.shape}")
    zero = np.zeros((1,) + s.shape[1:])
    return SymTensor3(0.5 * np.concatenate([zero, s, s[::-1]], axis=0), symmetrized=True)


def laplacian(a_s: SymTensor3) -> SymTensor3:
    """L_s = I_s - A_s."""
    if a_s.n_rows != a_s.n_cols:
        raise ShapeError(f"laplacian needs square slices, got {a_s.shape}")
    return identity_tensor(a_s.n_rows, a_s.n_slices) - a_s


def adjacency_tensor(g: Hypergraph, order: Optional[int] = None) -> SymTensor3:
    return symmetrize(flatten_to_slices(build_adjacency(g, order)))


def signal_tensor(features: np.ndarray, order: int) -> SymTensor3:
    return symmetrize(flatten_to_slices(build_signal(features, order)))


def shift_operands(g: Hypergraph, features: np.ndarray, order: Optional[int] = None) -> Tuple[SymTensor3, SymTensor3]:
    """(A_s, X_s) for hypergraph signal shifting at order max(M, 2)."""
    m = max(g.order, 2) if order is None else order
    return adjacency_tensor(g, m), signal_tensor(features, m)


def slice_sum_adjacency(spec: AdjacencySpec) -> np.ndarray:
    """Sum of all frontal slices of the symmetrized adjacency tensor.

    The halving in ``symmetrize`` cancels against the doubled slices, so this is
    sum over p3..pM of a[p1, p2, p3, ..., pM].
    """
    out = np.zeros((spec.dim, spec.dim))
    for idx, w in spec.entries.items():
        out[idx[0], idx[1]] += w
    return out
