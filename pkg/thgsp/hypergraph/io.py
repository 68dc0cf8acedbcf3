# thgsp/hypergraph/io.py
from __future__ import annotations

import csv
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from thgsp.errors import DatasetError, HypergraphParseError
from thgsp.hypergraph.model import SPLITS, Dataset, Hypergraph
from thgsp.observability import warn

GRAPH_FILE = "hypergraph.txt"
FEATURES_FILE = "features.csv"
LABELS_FILE = "labels.csv"
SPLITS_FILE = "splits.csv"


def _parse_ids(tokens: List[str], line_no: int, path: str) -> List[int]:
    ids: List[int] = []
    for tok in tokens:
        try:
            ids.append(int(tok))
        except ValueError:
            raise HypergraphParseError(f"malformed node id {tok!r}", line_no=line_no, path=path) from None
    return ids


def load_hypergraph(path: str | Path) -> Hypergraph:
    """Read the text format: optional ``N <num_nodes>`` header, one hyperedge per line.

    Lines that are empty or start with ``#`` are skipped. Without a header N is
    inferred as max id + 1.
    """
    p = str(path)
    num_nodes: Optional[int] = None
    edges: List[Tuple[int, List[int]]] = []
    with open(p, "r", encoding="utf-8") as f:
        for line_no, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if tokens[0] == "N":
                if num_nodes is not None or edges:
                    raise HypergraphParseError("header must precede all hyperedges", line_no=line_no, path=p)
                if len(tokens) != 2:
                    raise HypergraphParseError("header must read 'N <num_nodes>'", line_no=line_no, path=p)
                try:
                    num_nodes = int(tokens[1])
                except ValueError:
                    raise HypergraphParseError(f"malformed node count {tokens[1]!r}", line_no=line_no, path=p) from None
                if num_nodes < 1:
                    raise HypergraphParseError("node count must be positive", line_no=line_no, path=p)
                continue
            ids = _parse_ids(tokens, line_no, p)
            if any(v < 0 for v in ids):
                raise HypergraphParseError(f"negative node id in {ids}", line_no=line_no, path=p)
            if num_nodes is not None and any(v >= num_nodes for v in ids):
                raise HypergraphParseError(
                    f"node id out of range [0, {num_nodes}) in {ids}", line_no=line_no, path=p
                )
            if len(set(ids)) != len(ids):
                warn("hypergraph", f"{p}:line {line_no}: duplicate node ids collapsed in {ids}")
            edges.append((line_no, ids))

    if not edges:
        raise HypergraphParseError("no hyperedges", path=p)
    if num_nodes is None:
        num_nodes = 1 + max(max(ids) for _, ids in edges)
    return Hypergraph(num_nodes, tuple(tuple(ids) for _, ids in edges))


def save_hypergraph(g: Hypergraph, path: str | Path) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"N {g.num_nodes}"] + [" ".join(str(v) for v in e) for e in g.hyperedges]
    p.write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_features(path: str | Path, num_nodes: int) -> np.ndarray:
    x = np.loadtxt(path, delimiter=",", dtype=float, ndmin=2)
    if x.shape[0] != num_nodes:
        raise DatasetError(f"{path}: expected {num_nodes} feature rows, got {x.shape[0]}")
    return x


def _read_pairs(path: str | Path) -> List[Tuple[int, str, int]]:
    rows: List[Tuple[int, str, int]] = []
    with open(path, "r", encoding="utf-8", newline="") as f:
        for line_no, row in enumerate(csv.reader(f), start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 2:
                raise DatasetError(f"{path}:line {line_no}: expected 'node_id,value'")
            try:
                node = int(row[0])
            except ValueError:
                raise DatasetError(f"{path}:line {line_no}: malformed node id {row[0]!r}") from None
            rows.append((node, row[1].strip(), line_no))
    return rows


def load_labels(path: str | Path, num_nodes: int) -> np.ndarray:
    labels = np.full(num_nodes, -1, dtype=np.int64)
    for node, value, line_no in _read_pairs(path):
        if not 0 <= node < num_nodes:
            raise DatasetError(f"{path}:line {line_no}: node {node} out of range")
        try:
            labels[node] = int(value)
        except ValueError:
            raise DatasetError(f"{path}:line {line_no}: malformed class id {value!r}") from None
        if labels[node] < 0:
            raise DatasetError(f"{path}:line {line_no}: class ids must be non-negative")
    return labels


def load_splits(path: str | Path, num_nodes: int) -> Dict[str, np.ndarray]:
    masks = {s: np.zeros(num_nodes, dtype=bool) for s in SPLITS}
    seen: Dict[int, str] = {}
    for node, value, line_no in _read_pairs(path):
        if not 0 <= node < num_nodes:
            raise DatasetError(f"{path}:line {line_no}: node {node} out of range")
        if value not in masks:
            raise DatasetError(f"{path}:line {line_no}: split must be one of {SPLITS}, got {value!r}")
        if node in seen and seen[node] != value:
            raise DatasetError(f"{path}:line {line_no}: node {node} already in split {seen[node]!r}")
        seen[node] = value
        masks[value][node] = True
    return masks


def load_dataset(
    graph: str | Path,
    features: str | Path,
    labels: str | Path,
    splits: str | Path,
    *,
    name: Optional[str] = None,
) -> Dataset:
    g = load_hypergraph(graph)
    masks = load_splits(splits, g.num_nodes)
    return Dataset(
        graph=g,
        features=load_features(features, g.num_nodes),
        labels=load_labels(labels, g.num_nodes),
        train_mask=masks["train"],
        val_mask=masks["val"],
        test_mask=masks["test"],
        name=name or Path(graph).stem,
    )


def load_dataset_dir(directory: str | Path) -> Dataset:
    d = Path(directory)
    return load_dataset(
        d / GRAPH_FILE, d / FEATURES_FILE, d / LABELS_FILE, d / SPLITS_FILE, name=d.name
    )


def save_dataset_dir(ds: Dataset, directory: str | Path) -> Path:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    save_hypergraph(ds.graph, d / GRAPH_FILE)
    np.savetxt(d / FEATURES_FILE, ds.features, delimiter=",", fmt="%.17g")
    with open(d / LABELS_FILE, "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f)
        for node in np.flatnonzero(ds.labels >= 0):
            w.writerow([int(node), int(ds.labels[node])])
    with open(d / SPLITS_FILE, "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f)
        for split in SPLITS:
            for node in np.flatnonzero(ds.mask(split)):
                w.writerow([int(node), split])
    return d
