# thgsp/hypergraph/model.py
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from thgsp.errors import DatasetError, HypergraphError


@dataclass(frozen=True)
class Hypergraph:
    """Node set [0, N) plus an ordered list of hyperedges.

    Each hyperedge is stored as a sorted tuple of distinct node ids. Duplicate
    hyperedges are kept because they raise degrees.
    """

    num_nodes: int
    hyperedges: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.num_nodes < 1:
            raise HypergraphError(f"num_nodes must be positive, got {self.num_nodes}")
        edges = []
        for k, e in enumerate(self.hyperedges):
            members = tuple(sorted(set(int(v) for v in e)))
            if not members:
                raise HypergraphError(f"hyperedge {k} is empty")
            bad = [v for v in members if v < 0 or v >= self.num_nodes]
            if bad:
                raise HypergraphError(
                    f"hyperedge {k} has node ids {bad} outside [0, {self.num_nodes})"
                )
            edges.append(members)
        object.__setattr__(self, "hyperedges", tuple(edges))

    @classmethod
    def from_edges(cls, edges: Iterable[Iterable[int]], num_nodes: Optional[int] = None) -> "Hypergraph":
        edge_list = [tuple(e) for e in edges]
        if num_nodes is None:
            num_nodes = 1 + max((max(e) for e in edge_list if e), default=-1)
        return cls(num_nodes=num_nodes, hyperedges=tuple(edge_list))

    @property
    def order(self) -> int:
        """m.c.e.: the maximum hyperedge cardinality."""
        return max((len(e) for e in self.hyperedges), default=0)

    @property
    def num_edges(self) -> int:
        return len(self.hyperedges)

    def relabel(self, perm: Sequence[int]) -> "Hypergraph":
        """Rename node v to perm[v]."""
        return Hypergraph(self.num_nodes, tuple(tuple(perm[v] for v in e) for e in self.hyperedges))


def degrees(g: Hypergraph) -> np.ndarray:
    """d(v): number of hyperedges containing v."""
    d = np.zeros(g.num_nodes, dtype=np.int64)
    for e in g.hyperedges:
        d[list(e)] += 1
    return d


def clique_expansion(g: Hypergraph) -> np.ndarray:
    """Connect every pair of distinct nodes sharing a hyperedge."""
    w = np.zeros((g.num_nodes, g.num_nodes), dtype=np.int64)
    for e in g.hyperedges:
        for i, j in itertools.combinations(e, 2):
            w[i, j] = w[j, i] = 1
    return w


def clique_operator(g: Hypergraph) -> np.ndarray:
    """Row-normalised clique expansion with self loops (matrix shifting baseline)."""
    w = clique_expansion(g).astype(float) + np.eye(g.num_nodes)
    return w / w.sum(axis=1, keepdims=True)


SPLITS = ("train", "val", "test")


@dataclass(frozen=True, eq=False)
class Dataset:
    graph: Hypergraph
    features: np.ndarray
    labels: np.ndarray
    train_mask: np.ndarray
    val_mask: np.ndarray
    test_mask: np.ndarray
    name: str = field(default="dataset")

    def __post_init__(self) -> None:
        n = self.graph.num_nodes
        feats = np.asarray(self.features, dtype=float)
        if feats.ndim != 2 or feats.shape[0] != n:
            raise DatasetError(f"features must be {n} x D, got shape {feats.shape}")
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.shape != (n,):
            raise DatasetError(f"labels must have length {n}, got shape {labels.shape}")
        masks = [np.asarray(m, dtype=bool) for m in (self.train_mask, self.val_mask, self.test_mask)]
        for name, m in zip(SPLITS, masks):
            if m.shape != (n,):
                raise DatasetError(f"{name} mask must have length {n}")
            missing = np.flatnonzero(m & (labels < 0))
            if missing.size:
                raise DatasetError(f"{name} nodes without labels: {missing[:5].tolist()}")
        for (na, a), (nb, b) in itertools.combinations(zip(SPLITS, masks), 2):
            both = np.flatnonzero(a & b)
            if both.size:
                raise DatasetError(f"{na} and {nb} masks overlap at nodes {both[:5].tolist()}")
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "train_mask", masks[0])
        object.__setattr__(self, "val_mask", masks[1])
        object.__setattr__(self, "test_mask", masks[2])

    @property
    def num_nodes(self) -> int:
        return self.graph.num_nodes

    @property
    def num_features(self) -> int:
        return self.features.shape[1]

    @property
    def num_classes(self) -> int:
        return int(self.labels.max()) + 1 if (self.labels >= 0).any() else 0

    def mask(self, split: str) -> np.ndarray:
        return {"train": self.train_mask, "val": self.val_mask, "test": self.test_mask}[split]
