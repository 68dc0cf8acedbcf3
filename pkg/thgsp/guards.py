# thgsp/guards.py
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional

import numpy as np

from thgsp.builder.adjacency import AdjacencySpec, build_adjacency
from thgsp.errors import ConsistencyError
from thgsp.hypergraph.model import Hypergraph, clique_expansion, degrees
from thgsp.talg.tensor import SymTensor3

ROWSUM_TOL = 1e-12
IDENTITY_TOL = 1e-10


@dataclass
class RowSumReport:
    max_deviation: float
    worst_node: Optional[int]
    isolated_nodes: List[int]
    tol: float
    ok: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class AgreementReport:
    what: str
    max_abs: float
    tol: float
    ok: bool


@dataclass
class InjectivityVerdict:
    first: List[List[int]]
    second: List[List[int]]
    order: int
    cliques_equal: bool
    tensors_differ: bool
    tensor_max_diff: float
    ok: bool
    reason: str

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def assess_rowsum(spec: AdjacencySpec, g: Hypergraph, *, tol: float = ROWSUM_TOL) -> RowSumReport:
    """Every node with d(v) > 0 must have adjacency row sum 1; isolated rows must be 0."""
    sums = spec.row_sums()
    deg = degrees(g)
    active = deg > 0
    dev = np.abs(sums - 1.0)
    dev[~active] = np.abs(sums[~active])
    worst = int(np.argmax(dev)) if dev.size else None
    max_dev = float(dev.max()) if dev.size else 0.0
    return RowSumReport(
        max_deviation=max_dev,
        worst_node=worst,
        isolated_nodes=np.flatnonzero(~active).tolist(),
        tol=tol,
        ok=max_dev <= tol,
    )


def enforce_rowsum(spec: AdjacencySpec, g: Hypergraph, *, tol: float = ROWSUM_TOL) -> RowSumReport:
    rep = assess_rowsum(spec, g, tol=tol)
    if not rep.ok:
        raise ConsistencyError(
            f"adjacency row sum deviates by {rep.max_deviation:.3e} at node {rep.worst_node}"
        )
    return rep


def assess_agreement(a: SymTensor3, b: SymTensor3, *, what: str, tol: float = IDENTITY_TOL) -> AgreementReport:
    if a.shape != b.shape:
        return AgreementReport(what=what, max_abs=float("inf"), tol=tol, ok=False)
    diff = float(np.max(np.abs(a.data - b.data), initial=0.0))
    return AgreementReport(what=what, max_abs=diff, tol=tol, ok=diff <= tol)


def enforce_finite(values: np.ndarray, *, what: str) -> None:
    if not np.all(np.isfinite(values)):
        raise ConsistencyError(f"{what} contains non-finite values")


def assess_injectivity(first: Hypergraph, second: Hypergraph, *, order: Optional[int] = None) -> InjectivityVerdict:
    """Witness that two hypergraphs share a clique expansion but not an adjacency tensor."""
    m = order or max(first.order, second.order, 2)
    n = max(first.num_nodes, second.num_nodes)
    g1 = Hypergraph(n, first.hyperedges)
    g2 = Hypergraph(n, second.hyperedges)
    cliques_equal = bool(np.array_equal(clique_expansion(g1), clique_expansion(g2)))
    diff = float(np.max(np.abs(build_adjacency(g1, m).to_dense() - build_adjacency(g2, m).to_dense())))
    tensors_differ = diff > 0.0
    reasons = []
    if not cliques_equal:
        reasons.append("clique expansions differ")
    if not tensors_differ:
        reasons.append("adjacency tensors coincide")
    return InjectivityVerdict(
        first=[list(e) for e in g1.hyperedges],
        second=[list(e) for e in g2.hyperedges],
        order=m,
        cliques_equal=cliques_equal,
        tensors_differ=tensors_differ,
        tensor_max_diff=diff,
        ok=cliques_equal and tensors_differ,
        reason="; ".join(reasons) or "OK",
    )
