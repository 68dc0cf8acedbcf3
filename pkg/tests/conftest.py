# tests/conftest.py
from __future__ import annotations

import numpy as np
import pytest
from hypothesis import strategies as st

from thgsp.hypergraph.model import Dataset, Hypergraph
from thgsp.hypergraph.synthetic import planted_communities
from thgsp.talg.tensor import SymTensor3


@pytest.fixture(autouse=True)
def _isolated_runtime(tmp_path, monkeypatch):
    """Keep audit logs and default outputs inside the test's tmp dir."""
    monkeypatch.setenv("THGSP_AUDIT_LOG", str(tmp_path / "audit.log.jsonl"))
    monkeypatch.setenv("THGSP_OUT_DIR", str(tmp_path / "runs"))


def random_hypergraph(rng: np.random.Generator, n: int, max_order: int, n_edges: int) -> Hypergraph:
    edges = []
    for _ in range(n_edges):
        size = int(rng.integers(1, max_order + 1))
        edges.append(tuple(rng.choice(n, size=min(size, n), replace=False).tolist()))
    return Hypergraph(n, tuple(edges))


def random_tensor(rng: np.random.Generator, rows: int, cols: int, slices: int) -> SymTensor3:
    return SymTensor3(rng.standard_normal((slices, rows, cols)))


@st.composite
def hypergraphs(draw, max_nodes: int = 8, max_order: int = 3, max_edges: int = 6):
    n = draw(st.integers(min_value=max_order, max_value=max_nodes))
    k = draw(st.integers(min_value=1, max_value=max_edges))
    edges = draw(
        st.lists(
            st.sets(st.integers(min_value=0, max_value=n - 1), min_size=1, max_size=max_order),
            min_size=k,
            max_size=k,
        )
    )
    return Hypergraph(n, tuple(tuple(sorted(e)) for e in edges))


@pytest.fixture
def small_dataset() -> Dataset:
    """12 nodes, two planted communities, 3-node hyperedges."""
    return planted_communities(
        num_nodes=12, num_communities=2, num_edges=8, min_size=3, max_size=3, feature_dim=4, noise=0.5, seed=3
    )
