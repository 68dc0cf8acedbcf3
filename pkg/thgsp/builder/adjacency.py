# thgsp/builder/adjacency.py
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from thgsp.errors import ShapeError
from thgsp.hypergraph.model import Hypergraph, degrees

Index = Tuple[int, ...]


@lru_cache(maxsize=None)
def multinomial_alpha(c: int, order: int) -> int:
    """Sum of multinomial coefficients M!/(r_1!...r_c!) over r_i >= 1, sum r_i = M.

    Equals the number of surjections from M positions onto c nodes, computed by
    inclusion-exclusion.
    """
    if c < 1 or order < 1:
        raise ValueError(f"need c >= 1 and M >= 1, got c={c}, M={order}")
    if c > order:
        raise ValueError(f"hyperedge cardinality {c} exceeds order M={order}")
    return sum((-1) ** j * math.comb(c, j) * (c - j) ** order for j in range(c + 1))


def surjective_indices(edge: Sequence[int], order: int) -> Iterator[Index]:
    """Length-M sequences over ``edge`` in which every node appears at least once."""
    need = len(set(edge))
    for seq in itertools.product(edge, repeat=order):
        if len(set(seq)) == need:
            yield seq


@dataclass(frozen=True)
class AdjacencySpec:
    """Sparse M-order normalised adjacency tensor, keys sorted."""

    order: int
    dim: int
    entries: Dict[Index, float]

    def __post_init__(self) -> None:
        for idx, w in self.entries.items():
            if len(idx) != self.order:
                raise ShapeError(f"index {idx} does not have order {self.order}")
            if any(p < 0 or p >= self.dim for p in idx):
                raise ShapeError(f"index {idx} outside [0, {self.dim})")
            if not w > 0:
                raise ShapeError(f"entry {idx} has non-positive weight {w}")

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def row_sums(self) -> np.ndarray:
        """sum over p2..pM of a[v, p2, ..., pM] for every node v."""
        out = np.zeros(self.dim)
        for idx, w in self.entries.items():
            out[idx[0]] += w
        return out

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.dim,) * self.order)
        for idx, w in self.entries.items():
            out[idx] = w
        return out

    def relabel(self, perm: Sequence[int]) -> "AdjacencySpec":
        moved = {tuple(perm[p] for p in idx): w for idx, w in self.entries.items()}
        return AdjacencySpec(self.order, self.dim, dict(sorted(moved.items())))


def _edge_entries(edge: Sequence[int], order: int, deg: np.ndarray) -> List[Tuple[Index, float]]:
    c = len(edge)
    share = c / multinomial_alpha(c, order)
    return [(idx, share / deg[idx[0]]) for idx in surjective_indices(edge, order)]


def build_adjacency(g: Hypergraph, order: Optional[int] = None, *, workers: int = 1) -> AdjacencySpec:
    """Normalised adjacency tensor: a[p1..pM] = (1/d(p1)) * c/alpha(c, M).

    Entries generated by different hyperedges at the same index add up, which
    keeps every non-isolated row summing to one. Isolated nodes get zero rows.
    """
    m = g.order if order is None else int(order)
    if m < g.order:
        raise ValueError(f"order {m} is below the hypergraph order {g.order}")
    if m < 2:
        raise ValueError(f"adjacency tensors need order M >= 2, got {m}")
    deg = degrees(g)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_edge = list(pool.map(lambda e: _edge_entries(e, m, deg), g.hyperedges))
    else:
        per_edge = [_edge_entries(e, m, deg) for e in g.hyperedges]

    acc: Dict[Index, float] = {}
    for contributions in per_edge:
        for idx, w in contributions:
            acc[idx] = acc.get(idx, 0.0) + w
    return AdjacencySpec(order=m, dim=g.num_nodes, entries=dict(sorted(acc.items())))
