# thgsp/cli/eval.py
from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Dict, Optional

from thgsp.cli.common import EXIT_OK, RunContext, add_common_flags, echo, print_json, run_command
from thgsp.cli.options import DATASET_DEFAULTS, add_dataset_flags, load_dataset_from
from thgsp.config import ModelConfig, build_config
from thgsp.errors import ConfigError
from thgsp.nn.checkpoint import load_checkpoint
from thgsp.nn.model import Model, prepare_operands
from thgsp.nn.trainer import evaluate

DEFAULTS: Dict[str, Any] = {**DATASET_DEFAULTS, "checkpoint": None, "order": None}


def configure(p: argparse.ArgumentParser) -> argparse.ArgumentParser:
    add_dataset_flags(p)
    p.add_argument("--checkpoint", default=None, help="Checkpoint written by train (.json or .npz)")
    p.add_argument("--order", type=int, default=None)
    add_common_flags(p)
    p.set_defaults(handler=run)
    return p


def _body(ctx: RunContext, cfg: Dict[str, Any], args: argparse.Namespace) -> int:
    if not cfg.get("checkpoint"):
        raise ConfigError("give --checkpoint")
    ctx.digest("checkpoint", cfg["checkpoint"])
    ckpt = load_checkpoint(cfg["checkpoint"])
    ds = load_dataset_from(cfg, ctx)
    model_cfg = build_config(ModelConfig, ckpt.model_config)
    model = Model(model_cfg, ckpt.weights)
    with ctx.timed("evaluate"):
        scores = evaluate(model, prepare_operands(ds, model_cfg, cfg.get("order")), ds)
    out = {"variant": model_cfg.variant, "epoch": ckpt.epoch, "accuracy": scores}
    ctx.output("eval.json").write_text(json.dumps(out, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    if args.json:
        print_json(out)
    else:
        echo("eval", " ".join(f"{k}={v:.4f}" for k, v in scores.items()))
    return EXIT_OK


def run(args: argparse.Namespace) -> int:
    return run_command("eval", args, DEFAULTS, _body)


def main(argv: Optional[list[str]] = None) -> int:
    return run(configure(argparse.ArgumentParser(prog="thgsp eval")).parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
