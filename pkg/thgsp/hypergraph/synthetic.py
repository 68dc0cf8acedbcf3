# thgsp/hypergraph/synthetic.py
from __future__ import annotations

import numpy as np

from thgsp.hypergraph.model import Dataset, Hypergraph
from thgsp.rng import substream


def planted_communities(
    *,
    num_nodes: int = 60,
    num_communities: int = 2,
    num_edges: int = 30,
    min_size: int = 3,
    max_size: int = 4,
    feature_dim: int = 8,
    noise: float = 1.0,
    split: tuple[float, float, float] = (0.5, 0.25, 0.25),
    seed: int = 0,
) -> Dataset:
    """Seeded hypergraph with planted communities and noisy indicator features.

    Nodes are assigned to communities round-robin. Every hyperedge is drawn
    inside one community. Feature block ``c`` (``feature_dim / num_communities``
    columns) is 1 for members of community ``c``; Gaussian noise of std ``noise``
    is added everywhere.
    """
    if feature_dim < num_communities:
        raise ValueError("feature_dim must be at least num_communities")
    labels = np.arange(num_nodes) % num_communities
    members = [np.flatnonzero(labels == c) for c in range(num_communities)]

    rng = substream(seed, "synthetic-structure")
    edges = []
    for _ in range(num_edges):
        c = int(rng.integers(num_communities))
        size = int(rng.integers(min_size, max_size + 1))
        edges.append(tuple(sorted(rng.choice(members[c], size=size, replace=False).tolist())))
    graph = Hypergraph(num_nodes, tuple(edges))

    frng = substream(seed, "synthetic-features")
    block = np.array_split(np.arange(feature_dim), num_communities)
    features = np.zeros((num_nodes, feature_dim))
    for c, cols in enumerate(block):
        features[np.ix_(labels == c, cols)] = 1.0
    features += noise * frng.standard_normal(features.shape)

    srng = substream(seed, "synthetic-split")
    order = srng.permutation(num_nodes)
    n_train = int(round(split[0] * num_nodes))
    n_val = int(round(split[1] * num_nodes))
    masks = [np.zeros(num_nodes, dtype=bool) for _ in range(3)]
    masks[0][order[:n_train]] = True
    masks[1][order[n_train:n_train + n_val]] = True
    masks[2][order[n_train + n_val:]] = True

    return Dataset(
        graph=graph,
        features=features,
        labels=labels,
        train_mask=masks[0],
        val_mask=masks[1],
        test_mask=masks[2],
        name=f"planted-{num_communities}x{num_nodes}-s{seed}",
    )
