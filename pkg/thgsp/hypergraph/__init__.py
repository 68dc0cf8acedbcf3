from .model import Dataset, Hypergraph, clique_expansion, clique_operator, degrees
from .io import (
    load_dataset,
    load_dataset_dir,
    load_features,
    load_hypergraph,
    load_labels,
    load_splits,
    save_dataset_dir,
    save_hypergraph,
)
from .stats import HypergraphStats, hypergraph_stats, max_shortest_path
from .synthetic import planted_communities

__all__ = [
    "Dataset",
    "Hypergraph",
    "clique_expansion",
    "clique_operator",
    "degrees",
    "load_dataset",
    "load_dataset_dir",
    "load_features",
    "load_hypergraph",
    "load_labels",
    "load_splits",
    "save_dataset_dir",
    "save_hypergraph",
    "HypergraphStats",
    "hypergraph_stats",
    "max_shortest_path",
    "planted_communities",
]
