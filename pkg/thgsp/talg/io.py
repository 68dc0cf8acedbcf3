# thgsp/talg/io.py
from __future__ import annotations

import json
from pathlib import Path
from typing import List

import numpy as np
from pydantic import BaseModel, ValidationError, model_validator

from thgsp.errors import ShapeError
from thgsp.talg.tensor import SymTensor3


class TensorDump(BaseModel):
    """JSON layout of a dumped tensor (debug output and test fixtures)."""

    n_rows: int
    n_cols: int
    n_slices: int
    slices: List[List[List[float]]]
    symmetrized: bool = False

    @model_validator(mode="after")
    def _dims_match(self) -> "TensorDump":
        if len(self.slices) != self.n_slices:
            raise ValueError(f"expected {self.n_slices} slices, got {len(self.slices)}")
        for k, s in enumerate(self.slices):
            if len(s) != self.n_rows or any(len(row) != self.n_cols for row in s):
                raise ValueError(f"slice {k + 1} is not {self.n_rows} x {self.n_cols}")
        return self


def tensor_to_dict(t: SymTensor3) -> dict:
    return {
        "n_rows": t.n_rows,
        "n_cols": t.n_cols,
        "n_slices": t.n_slices,
        "slices": t.data.tolist(),
        "symmetrized": t.symmetrized,
    }


def tensor_from_dict(obj: dict) -> SymTensor3:
    try:
        dump = TensorDump.model_validate(obj)
    except ValidationError as e:
        raise ShapeError(f"invalid tensor dump: {e}") from e
    data = np.asarray(dump.slices, dtype=float).reshape(dump.n_slices, dump.n_rows, dump.n_cols)
    return SymTensor3(data, dump.symmetrized)


def dump_tensor(t: SymTensor3, path: str | Path) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(json.dumps(tensor_to_dict(t)), encoding="utf-8")


def load_tensor(path: str | Path) -> SymTensor3:
    return tensor_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
