# thgsp/builder/signal.py
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from thgsp.errors import ShapeError


@dataclass(frozen=True, eq=False)
class SignalSpec:
    """Hypergraph signal tensor before symmetrisation.

    ``values`` has shape N x D x N^(M-2); column d holds the (M-1)-fold outer
    power of feature column d with indices p3..pM flattened row-major.
    """

    order: int
    values: np.ndarray

    @property
    def dim(self) -> int:
        return self.values.shape[0]

    @property
    def feature_dim(self) -> int:
        return self.values.shape[1]


def outer_power(v: np.ndarray, times: int) -> np.ndarray:
    out = np.asarray(v, dtype=float)
    for _ in range(times - 1):
        out = np.multiply.outer(out, v)
    return out


def build_signal(features: np.ndarray, order: int) -> SignalSpec:
    x = np.asarray(features, dtype=float)
    if x.ndim != 2:
        raise ShapeError(f"features must be N x D, got shape {x.shape}")
    if order < 2:
        raise ValueError(f"signal tensors need order M >= 2, got {order}")
    n, d = x.shape
    if order == 2:
        return SignalSpec(order, x.reshape(n, d, 1).copy())
    values = np.empty((n, d, n ** (order - 2)))
    for col in range(d):
        values[:, col, :] = outer_power(x[:, col], order - 1).reshape(n, -1)
    return SignalSpec(order, values)


@dataclass(frozen=True, eq=False)
class PooledSignal:
    """Distinct rows of the data slices of a signal tensor.

    Row i of the slice with tail (p3..pM) is x_i * x_p3 * ... * x_pM, which
    only depends on the multiset {i, p3, ..., pM}. ``rows`` holds one product
    per multiset (R x D), ``members`` the sorted multiset (R x (M-1)) and
    ``weights`` how many tails each member position stands for, so that

        sum over tails of f(slice)[i] = sum_r weights[r] * f(rows[r]) * #{t: members[r, t] == i}

    for any row-wise f.
    """

    order: int
    num_nodes: int
    rows: np.ndarray
    members: np.ndarray
    weights: np.ndarray

    @property
    def n_rows(self) -> int:
        return self.rows.shape[0]


def tail_multiplicities(members: np.ndarray) -> np.ndarray:
    """(M-2)! / prod(c_e!) for sorted multisets with multiplicities c_e."""
    members = np.asarray(members)
    width = members.shape[1]
    run = np.ones(members.shape[0])
    denom = np.ones(members.shape[0])
    for t in range(1, width):
        run = np.where(members[:, t] == members[:, t - 1], run + 1.0, 1.0)
        denom *= run
    return math.factorial(width - 1) / denom


def pooled_signal(features: np.ndarray, order: int) -> PooledSignal:
    x = np.asarray(features, dtype=float)
    if x.ndim != 2:
        raise ShapeError(f"features must be N x D, got shape {x.shape}")
    if order < 2:
        raise ValueError(f"signal tensors need order M >= 2, got {order}")
    n = x.shape[0]
    members = np.array(
        list(itertools.combinations_with_replacement(range(n), order - 1)), dtype=np.intp
    ).reshape(-1, order - 1)
    rows = x[members[:, 0]].copy()
    for t in range(1, order - 1):
        rows *= x[members[:, t]]
    return PooledSignal(order, n, rows, members, tail_multiplicities(members))
