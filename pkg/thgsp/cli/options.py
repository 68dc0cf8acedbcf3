# thgsp/cli/options.py
from __future__ import annotations

import argparse
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional

from thgsp.cli.common import RunContext
from thgsp.config import ModelConfig, TrainConfig, build_config
from thgsp.errors import ConfigError
from thgsp.hypergraph.io import (
    FEATURES_FILE,
    GRAPH_FILE,
    LABELS_FILE,
    SPLITS_FILE,
    load_dataset,
    load_hypergraph,
)
from thgsp.hypergraph.model import Dataset, Hypergraph

DATASET_DEFAULTS: Dict[str, Any] = {"data": None, "graph": None, "features": None, "labels": None, "splits": None}

MODEL_DEFAULTS: Dict[str, Any] = {
    "variant": "thgin",
    "hidden": "64",
    "alpha": 0.1,
    "K": 3,
    "activation": "relu",
    "readout": "slice_sum",
    "stacked": False,
    "tensor_path": False,
    "order": None,
}

TRAIN_DEFAULTS: Dict[str, Any] = {
    "lr": 0.01,
    "weight_decay": 0.0005,
    "epochs": 200,
    "patience": None,
}


def parse_ints(v: Any) -> List[int]:
    if v is None or v == "":
        return []
    if isinstance(v, (list, tuple)):
        return [int(x) for x in v]
    if isinstance(v, int):
        return [v]
    try:
        return [int(x) for x in str(v).split(",") if x.strip()]
    except ValueError as e:
        raise ConfigError(f"expected comma-separated integers, got {v!r}") from e


def parse_floats(v: Any) -> List[float]:
    if v is None or v == "":
        return []
    if isinstance(v, (list, tuple)):
        return [float(x) for x in v]
    if isinstance(v, (int, float)):
        return [float(v)]
    try:
        return [float(x) for x in str(v).split(",") if x.strip()]
    except ValueError as e:
        raise ConfigError(f"expected comma-separated numbers, got {v!r}") from e


def add_dataset_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", default=None, help=f"Dataset directory ({GRAPH_FILE}, {FEATURES_FILE}, {LABELS_FILE}, {SPLITS_FILE})")
    p.add_argument("--graph", default=None, help="Hypergraph file (overrides the one in --data)")
    p.add_argument("--features", default=None, help="Features CSV, N x D")
    p.add_argument("--labels", default=None, help="Labels CSV node_id,class_id")
    p.add_argument("--splits", default=None, help="Splits CSV node_id,{train|val|test}")


def add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--variant", choices=["thgcn", "thgin", "mlp", "clique"], default=None)
    p.add_argument("--hidden", default=None, help="Hidden dims, comma separated (empty: one linear map)")
    p.add_argument("--alpha", type=float, default=None, help="Teleport probability in [0, 1]")
    p.add_argument("--K", type=int, default=None, help="Propagation steps")
    p.add_argument("--activation", choices=["relu", "tanh", "identity"], default=None)
    p.add_argument("--readout", choices=["slice_sum", "leading_slice"], default=None)
    p.add_argument("--stacked", action="store_true", default=None, help="T-HGCN: one shifting per weight layer")
    p.add_argument("--tensor-path", action="store_true", default=None, help="Propagate full tensors even when slice sums suffice")
    p.add_argument("--order", type=int, default=None, help="Tensor order M (default: max hyperedge size)")


def add_train_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lr", type=float, default=None)
    p.add_argument("--weight-decay", type=float, default=None)
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--patience", type=int, default=None, help="Stop after this many epochs without val improvement")


def _path(cfg: Mapping[str, Any], key: str, fallback: str) -> Optional[Path]:
    if cfg.get(key):
        return Path(str(cfg[key]))
    if cfg.get("data"):
        return Path(str(cfg["data"])) / fallback
    return None


def load_graph_from(cfg: Mapping[str, Any], ctx: RunContext) -> Hypergraph:
    gp = _path(cfg, "graph", GRAPH_FILE)
    if gp is None:
        raise ConfigError("give --graph or --data")
    ctx.digest("graph", gp)
    return load_hypergraph(gp)


def load_dataset_from(cfg: Mapping[str, Any], ctx: RunContext) -> Dataset:
    paths = {
        "graph": _path(cfg, "graph", GRAPH_FILE),
        "features": _path(cfg, "features", FEATURES_FILE),
        "labels": _path(cfg, "labels", LABELS_FILE),
        "splits": _path(cfg, "splits", SPLITS_FILE),
    }
    missing = [k for k, v in paths.items() if v is None]
    if missing:
        raise ConfigError(f"missing dataset inputs {missing}: give --data or the individual files")
    for label, p in paths.items():
        ctx.digest(label, p)  # type: ignore[arg-type]
    name = Path(str(cfg["data"])).name if cfg.get("data") else None
    return load_dataset(paths["graph"], paths["features"], paths["labels"], paths["splits"], name=name)  # type: ignore[arg-type]


def model_config_from(cfg: Mapping[str, Any], dataset: Dataset, seed: int, **override: Any) -> ModelConfig:
    values = {**cfg, **override}
    dims = [dataset.num_features, *parse_ints(values.get("hidden")), max(dataset.num_classes, 1)]
    return build_config(
        ModelConfig,
        {
            "layer_dims": dims,
            "variant": values["variant"],
            "alpha": values["alpha"],
            "K": values["K"],
            "activation": values["activation"],
            "readout": values["readout"],
            "stacked": bool(values.get("stacked")),
            "tensor_path": bool(values.get("tensor_path")),
            "seed": seed,
        },
    )


def train_config_from(cfg: Mapping[str, Any]) -> TrainConfig:
    return build_config(TrainConfig, {k: cfg[k] for k in TRAIN_DEFAULTS if cfg.get(k) is not None})
