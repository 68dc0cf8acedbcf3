# thgsp/hypergraph/stats.py
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Dict, Optional

import networkx as nx

from thgsp.hypergraph.model import Dataset, Hypergraph, clique_expansion


@dataclass
class HypergraphStats:
    num_nodes: int
    num_edges: int
    order: int
    feature_dim: Optional[int]
    num_classes: Optional[int]
    max_shortest_path: int
    connected_components: int

    def to_dict(self) -> Dict[str, Optional[int]]:
        return asdict(self)


def pairwise_graph(g: Hypergraph) -> nx.Graph:
    G = nx.from_numpy_array(clique_expansion(g))
    G.add_nodes_from(range(g.num_nodes))
    return G


def max_shortest_path(g: Hypergraph) -> int:
    """Largest finite shortest-path length, taken over every connected component."""
    G = pairwise_graph(g)
    best = 0
    for comp in nx.connected_components(G):
        if len(comp) > 1:
            best = max(best, nx.diameter(G.subgraph(comp)))
    return best


def hypergraph_stats(g: Hypergraph, dataset: Optional[Dataset] = None) -> HypergraphStats:
    G = pairwise_graph(g)
    return HypergraphStats(
        num_nodes=g.num_nodes,
        num_edges=g.num_edges,
        order=g.order,
        feature_dim=dataset.num_features if dataset is not None else None,
        num_classes=dataset.num_classes if dataset is not None else None,
        max_shortest_path=max_shortest_path(g),
        connected_components=nx.number_connected_components(G),
    )
