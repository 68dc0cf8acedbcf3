# thgsp/config.py
from __future__ import annotations

import os
from pathlib import Path
from typing import Any, Dict, Iterable, List, Literal, Mapping, Optional, Tuple

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from thgsp.errors import ConfigError


# ---------------- env helpers ----------------

def _env(name: str, default: Optional[str] = None) -> Optional[str]:
    v = os.getenv(name)
    return v if v not in (None, "") else default


def _env_int(name: str, default: int) -> int:
    v = _env(name)
    return int(v) if v is not None else default


def _env_float(name: str, default: float) -> float:
    v = _env(name)
    return float(v) if v is not None else default


def default_seed() -> int:
    return _env_int("THGSP_SEED", 0)


def default_out_dir() -> str:
    return _env("THGSP_OUT_DIR", "runs") or "runs"


def fft_min_slices() -> int:
    return _env_int("THGSP_FFT_MIN_SLICES", 8)


# ---------------- typed configs ----------------

class DenoiseConfig(BaseModel):
    """Parameters of the iterative HyperGSD solver.

    When ``alpha`` is set it overrides ``b`` and ``c`` through
    ``alpha = 2b`` and ``1 - alpha = 2bc``.
    """

    model_config = ConfigDict(extra="forbid")

    b: float = Field(0.5, gt=0)
    c: float = Field(0.2, ge=0)
    K: int = Field(10, ge=0)
    tol: float = Field(1e-10, gt=0)
    alpha: Optional[float] = Field(None, gt=0, le=1)

    @model_validator(mode="before")
    @classmethod
    def _derive_from_alpha(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("alpha") is not None:
            alpha = float(data["alpha"])
            if 0 < alpha <= 1:
                data = {**data, "b": alpha / 2.0, "c": (1.0 - alpha) / alpha}
        return data

    @property
    def keep(self) -> float:
        return 1.0 - 2.0 * self.b - 2.0 * self.b * self.c

    @property
    def anchor(self) -> float:
        return 2.0 * self.b

    @property
    def shift(self) -> float:
        return 2.0 * self.b * self.c

    @property
    def contraction_bound(self) -> float:
        return abs(self.keep) + self.shift

    @property
    def stationary_weight(self) -> float:
        # The recurrence's limit solves (I + c L) * Y = X.
        return self.c


Variant = Literal["thgcn", "thgin", "mlp", "clique"]
Activation = Literal["relu", "tanh", "identity"]
Readout = Literal["slice_sum", "leading_slice"]


class ModelConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    layer_dims: List[int]
    variant: Variant = "thgin"
    alpha: float = Field(0.1, ge=0, le=1)
    K: int = Field(3, ge=1)
    activation: Activation = "relu"
    readout: Readout = "slice_sum"
    stacked: bool = False
    tensor_path: bool = False
    seed: int = 0

    @model_validator(mode="before")
    @classmethod
    def _thgcn_is_one_step(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("variant") == "thgcn":
            data = {**data, "K": 1, "alpha": 0.0}
        return data

    @field_validator("layer_dims")
    @classmethod
    def _dims_positive(cls, v: List[int]) -> List[int]:
        if len(v) < 2:
            raise ValueError("layer_dims needs at least input and output dims")
        if any(d <= 0 for d in v):
            raise ValueError(f"layer_dims must be positive, got {v}")
        return v

    @model_validator(mode="after")
    def _stacking_is_thgcn_only(self) -> "ModelConfig":
        if self.stacked and self.variant != "thgcn":
            raise ValueError("stacked shifting layers are only defined for variant=thgcn")
        return self


class TrainConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    lr: float = Field(0.01, ge=0)
    weight_decay: float = Field(0.0005, ge=0)
    epochs: int = Field(200, ge=1)
    patience: Optional[int] = Field(None, ge=1)
    betas: Tuple[float, float] = (0.9, 0.999)
    eps: float = Field(1e-8, gt=0)

    @field_validator("betas")
    @classmethod
    def _betas_in_range(cls, v: Tuple[float, float]) -> Tuple[float, float]:
        if not all(0 <= b < 1 for b in v):
            raise ValueError(f"betas must lie in [0, 1), got {v}")
        return v


class GridConfig(BaseModel):
    """Axes of the hyper-parameter sweep.

    Empty ``lrs``, ``weight_decays`` or ``hiddens`` keep the base training
    and model values, so the default sweep is K x alpha only.
    """

    model_config = ConfigDict(extra="forbid")

    Ks: List[int] = Field(default_factory=lambda: [1, 2, 3, 4, 5])
    alphas: List[float] = Field(default_factory=lambda: [0.1, 0.2, 0.3, 0.4, 0.5])
    lrs: List[float] = Field(default_factory=list)
    weight_decays: List[float] = Field(default_factory=list)
    hiddens: List[int] = Field(default_factory=list)
    repeats: int = Field(10, ge=1)
    workers: int = Field(1, ge=1)
    seed: int = 0

    @field_validator("Ks", "alphas")
    @classmethod
    def _non_empty(cls, v: List[Any]) -> List[Any]:
        if not v:
            raise ValueError("grid axes K and alpha need at least one value")
        return v

    @field_validator("lrs", "weight_decays")
    @classmethod
    def _non_negative(cls, v: List[float]) -> List[float]:
        if any(x < 0 for x in v):
            raise ValueError(f"learning rates and weight decays must be >= 0, got {v}")
        return v

    @field_validator("hiddens")
    @classmethod
    def _positive_widths(cls, v: List[int]) -> List[int]:
        if any(h < 1 for h in v):
            raise ValueError(f"hidden widths must be >= 1, got {v}")
        return v


def build_config(model: type[BaseModel], values: Mapping[str, Any]) -> Any:
    """Validate ``values`` into ``model``, raising ConfigError on failure."""
    try:
        return model.model_validate(dict(values))
    except ValidationError as e:
        raise ConfigError(f"invalid {model.__name__}: {e}") from e


# ---------------- config files ----------------

def load_config_file(path: str | Path | None) -> Dict[str, Any]:
    """Read a flat ``key: value`` YAML mapping. Missing path -> empty mapping."""
    if not path:
        return {}
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    with open(p, "r", encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise ConfigError(f"config file {p} must contain a mapping")
    for k, v in data.items():
        if isinstance(v, dict):
            raise ConfigError(f"config file {p}: nested section '{k}' is not supported")
    return {str(k).replace("-", "_"): v for k, v in data.items()}


def resolve_config(
    defaults: Mapping[str, Any],
    file_values: Mapping[str, Any],
    flag_values: Mapping[str, Any],
    *,
    allowed: Iterable[str] | None = None,
) -> Dict[str, Any]:
    """Merge with precedence flags > config file > defaults. ``None`` flags are unset."""
    keys = set(allowed) if allowed is not None else set(defaults)
    unknown = sorted(k for k in file_values if k not in keys)
    if unknown:
        raise ConfigError(f"unknown config keys: {unknown}")
    out: Dict[str, Any] = dict(defaults)
    out.update(file_values)
    out.update({k: v for k, v in flag_values.items() if v is not None})
    return out
