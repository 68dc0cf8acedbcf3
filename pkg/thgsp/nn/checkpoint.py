# thgsp/nn/checkpoint.py
"""
Checkpoint files.

Two containers hold the same record:

- JSON (``.json``): one object with keys
  ``version, model_config, train_config, weights, optimizer, epoch, rng_state, extra``.
  Arrays are nested lists; floats are written with full precision, so
  load -> save reproduces the file byte for byte.
- npz (``.npz``): arrays ``weight_<i>``, ``adam_m_<i>``, ``adam_v_<i>`` and a
  ``meta`` entry holding the remaining fields as a JSON string.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from thgsp.errors import CheckpointError

FORMAT_VERSION = 1


@dataclass
class Checkpoint:
    model_config: Dict[str, Any]
    weights: List[np.ndarray]
    optimizer: Dict[str, Any]
    epoch: int
    rng_state: Dict[str, Any]
    train_config: Dict[str, Any] = field(default_factory=dict)
    extra: Dict[str, Any] = field(default_factory=dict)
    version: int = FORMAT_VERSION

    def to_dict(self) -> Dict[str, Any]:
        opt = dict(self.optimizer)
        opt["m"] = [np.asarray(a).tolist() for a in opt.get("m", [])]
        opt["v"] = [np.asarray(a).tolist() for a in opt.get("v", [])]
        return {
            "version": self.version,
            "model_config": self.model_config,
            "train_config": self.train_config,
            "weights": [np.asarray(w).tolist() for w in self.weights],
            "optimizer": opt,
            "epoch": self.epoch,
            "rng_state": self.rng_state,
            "extra": self.extra,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Checkpoint":
        try:
            version = int(data["version"])
            if version != FORMAT_VERSION:
                raise CheckpointError(f"unsupported checkpoint version {version}")
            opt = dict(data["optimizer"])
            opt["m"] = [np.array(a, dtype=float) for a in opt.get("m", [])]
            opt["v"] = [np.array(a, dtype=float) for a in opt.get("v", [])]
            return cls(
                model_config=dict(data["model_config"]),
                weights=[np.array(w, dtype=float) for w in data["weights"]],
                optimizer=opt,
                epoch=int(data["epoch"]),
                rng_state=dict(data["rng_state"]),
                train_config=dict(data.get("train_config") or {}),
                extra=dict(data.get("extra") or {}),
                version=version,
            )
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, CheckpointError):
                raise
            raise CheckpointError(f"malformed checkpoint: {e}") from e


def _dumps(ckpt: Checkpoint) -> str:
    return json.dumps(ckpt.to_dict(), sort_keys=True, indent=None, separators=(",", ":"))


def save_checkpoint(ckpt: Checkpoint, path: str | Path) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    if p.suffix == ".npz":
        meta = ckpt.to_dict()
        arrays: Dict[str, np.ndarray] = {}
        for i, w in enumerate(ckpt.weights):
            arrays[f"weight_{i}"] = np.asarray(w)
        for i, (m, v) in enumerate(zip(ckpt.optimizer.get("m", []), ckpt.optimizer.get("v", []))):
            arrays[f"adam_m_{i}"] = np.asarray(m)
            arrays[f"adam_v_{i}"] = np.asarray(v)
        meta["weights"] = len(ckpt.weights)
        meta["optimizer"] = {**meta["optimizer"], "m": len(ckpt.optimizer.get("m", [])), "v": None}
        arrays["meta"] = np.array(json.dumps(meta, sort_keys=True))
        with open(p, "wb") as f:
            np.savez(f, **arrays)
        return p
    p.write_text(_dumps(ckpt) + "\n", encoding="utf-8")
    return p


def load_checkpoint(path: str | Path) -> Checkpoint:
    p = Path(path)
    if not p.exists():
        raise CheckpointError(f"checkpoint not found: {p}")
    if p.suffix == ".npz":
        with np.load(p, allow_pickle=False) as z:
            meta = json.loads(str(z["meta"]))
            n_w = int(meta["weights"])
            n_m = int(meta["optimizer"]["m"])
            meta["weights"] = [z[f"weight_{i}"] for i in range(n_w)]
            meta["optimizer"]["m"] = [z[f"adam_m_{i}"] for i in range(n_m)]
            meta["optimizer"]["v"] = [z[f"adam_v_{i}"] for i in range(n_m)]
        return Checkpoint.from_dict(meta)
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise CheckpointError(f"{p}: not a JSON checkpoint ({e})") from e
    return Checkpoint.from_dict(data)


def rng_state(gen: Optional[np.random.Generator]) -> Dict[str, Any]:
    return dict(gen.bit_generator.state) if gen is not None else {}


def restore_rng(state: Dict[str, Any]) -> np.random.Generator:
    gen = np.random.default_rng()
    if state:
        try:
            gen.bit_generator.state = state
        except (KeyError, TypeError, ValueError) as e:
            raise CheckpointError(f"malformed rng state: {e}") from e
    return gen
