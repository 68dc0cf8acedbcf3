# thgsp/cli/common.py
from __future__ import annotations

import argparse
import hashlib
import json
import time
from contextlib import contextmanager
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, Iterator, Mapping, Optional

from pydantic import BaseModel, Field

from thgsp import __version__
from thgsp.config import default_out_dir, default_seed, load_config_file, resolve_config
from thgsp.errors import (
    CheckpointError,
    ConfigError,
    ConsistencyError,
    DatasetError,
    DivergenceError,
    HypergraphError,
    ShapeError,
    SingularSliceError,
    THGSPError,
    TrainingDivergedError,
)
from thgsp.observability import audit_log, echo, new_run_id, warn

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

# numerical checks that did not hold -> 1; bad input -> 2
_FAILURES = (ConsistencyError, DivergenceError, TrainingDivergedError, SingularSliceError)
_USAGE = (HypergraphError, DatasetError, ConfigError, CheckpointError, ShapeError, OSError, ValueError)


class RunManifest(BaseModel):
    command: str
    run_id: str
    version: str = __version__
    seed: int
    config: Dict[str, Any] = Field(default_factory=dict)
    inputs: Dict[str, str] = Field(default_factory=dict)
    outputs: list[str] = Field(default_factory=list)
    timings: Dict[str, float] = Field(default_factory=dict)
    started_at: str
    status: str = "running"
    exit_code: Optional[int] = None


def file_digest(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None, help="Run seed (default: $THGSP_SEED or 0)")
    p.add_argument("--config", default=None, help="YAML file of flat key: value defaults")
    p.add_argument("--out-dir", default=None, help="Output directory (default: $THGSP_OUT_DIR or runs)")
    p.add_argument("--json", action="store_true", help="Print machine-readable output")


def resolve_args(
    args: argparse.Namespace,
    defaults: Mapping[str, Any],
    *,
    keys: Optional[Iterable[str]] = None,
) -> Dict[str, Any]:
    """Flags > config file > defaults for the keys a command owns."""
    keys = list(keys if keys is not None else defaults)
    file_values = load_config_file(getattr(args, "config", None))
    flags = {k: getattr(args, k, None) for k in keys}
    allowed = set(keys) | {"seed", "out_dir"}
    return resolve_config(
        {**defaults, "seed": default_seed(), "out_dir": default_out_dir()},
        file_values,
        {**flags, "seed": getattr(args, "seed", None), "out_dir": getattr(args, "out_dir", None)},
        allowed=allowed,
    )


class RunContext:
    """Manifest, timings and audit events of one CLI invocation."""

    def __init__(self, command: str, config: Mapping[str, Any]):
        self.command = command
        self.run_id = new_run_id(command)
        self.out_dir = Path(str(config.get("out_dir") or default_out_dir()))
        self.manifest = RunManifest(
            command=command,
            run_id=self.run_id,
            seed=int(config.get("seed", 0)),
            config={k: v for k, v in config.items()},
            started_at=datetime.now(timezone.utc).isoformat(),
        )
        self._t0 = time.perf_counter()
        audit_log(run_id=self.run_id, action=command, status="start", params=dict(self.manifest.config))

    @property
    def seed(self) -> int:
        return self.manifest.seed

    def digest(self, label: str, path: str | Path) -> None:
        self.manifest.inputs[label] = file_digest(path)

    def output(self, name: str) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        p = self.out_dir / name
        if name not in self.manifest.outputs:
            self.manifest.outputs.append(name)
        return p

    @contextmanager
    def timed(self, name: str) -> Iterator[None]:
        t = time.perf_counter()
        try:
            yield
        finally:
            self.manifest.timings[name] = round(time.perf_counter() - t, 6)

    def finish(self, code: int, message: str = "") -> int:
        self.manifest.timings["total"] = round(time.perf_counter() - self._t0, 6)
        self.manifest.status = "ok" if code == EXIT_OK else "error"
        self.manifest.exit_code = code
        self.out_dir.mkdir(parents=True, exist_ok=True)
        (self.out_dir / "manifest.json").write_text(
            self.manifest.model_dump_json(indent=2) + "\n", encoding="utf-8"
        )
        audit_log(
            run_id=self.run_id,
            action=self.command,
            status=self.manifest.status,
            message=message,
            extra={"exit_code": code, "out_dir": str(self.out_dir)},
        )
        return code


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, _FAILURES):
        return EXIT_FAILED
    if isinstance(exc, _USAGE):
        return EXIT_USAGE
    return EXIT_FAILED


def run_command(
    command: str,
    args: argparse.Namespace,
    defaults: Mapping[str, Any],
    body: Callable[[RunContext, Dict[str, Any], argparse.Namespace], int],
) -> int:
    """Resolve the config, run ``body`` and close the manifest; library errors become exit codes."""
    try:
        cfg = resolve_args(args, defaults)
    except (THGSPError, OSError) as e:
        warn(command, str(e))
        audit_log(run_id=new_run_id(command), action=command, status="error", message=str(e))
        return EXIT_USAGE
    ctx = RunContext(command, cfg)
    try:
        code = body(ctx, cfg, args)
    except (THGSPError, OSError, ValueError) as e:
        code = exit_code_for(e)
        warn(command, str(e))
        return ctx.finish(code, str(e))
    return ctx.finish(code)


def print_json(obj: Any) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True, default=str))


__all__ = [
    "EXIT_OK",
    "EXIT_FAILED",
    "EXIT_USAGE",
    "RunContext",
    "RunManifest",
    "add_common_flags",
    "echo",
    "exit_code_for",
    "file_digest",
    "print_json",
    "resolve_args",
    "run_command",
    "warn",
]
