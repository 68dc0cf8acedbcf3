# thgsp/cli/train.py
from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Dict, List, Optional

from thgsp.cli.common import EXIT_OK, RunContext, add_common_flags, echo, print_json, run_command
from thgsp.cli.options import (
    DATASET_DEFAULTS,
    MODEL_DEFAULTS,
    TRAIN_DEFAULTS,
    add_dataset_flags,
    add_model_flags,
    add_train_flags,
    load_dataset_from,
    model_config_from,
    train_config_from,
)
from thgsp.config import ModelConfig, build_config
from thgsp.errors import ConfigError
from thgsp.nn.checkpoint import load_checkpoint, save_checkpoint
from thgsp.nn.model import Model, prepare_operands
from thgsp.nn.trainer import Trainer, evaluate, run_protocol, write_metrics_csv
from thgsp.reports.registry import render_report

DEFAULTS: Dict[str, Any] = {
    **DATASET_DEFAULTS,
    **MODEL_DEFAULTS,
    **TRAIN_DEFAULTS,
    "runs": 1,
    "compare": "",
    "checkpoint_format": "json",
    "resume": None,
    "workers": 1,
}


def configure(p: argparse.ArgumentParser) -> argparse.ArgumentParser:
    add_dataset_flags(p)
    add_model_flags(p)
    add_train_flags(p)
    p.add_argument("--runs", type=int, default=None, help="Repeated runs with seeds seed..seed+runs-1")
    p.add_argument("--compare", default=None, help="Extra variants to run under the same protocol, e.g. mlp,clique")
    p.add_argument("--checkpoint-format", choices=["json", "npz"], default=None)
    p.add_argument("--resume", default=None, help="Checkpoint to continue training from")
    p.add_argument("--workers", type=int, default=None, help="Threads for repeated runs")
    add_common_flags(p)
    p.set_defaults(handler=run)
    return p


def _compare_variants(cfg: Dict[str, Any]) -> List[str]:
    extra = [v.strip() for v in str(cfg.get("compare") or "").split(",") if v.strip()]
    bad = [v for v in extra if v not in ("thgcn", "thgin", "mlp", "clique")]
    if bad:
        raise ConfigError(f"unknown variants in --compare: {bad}")
    return [v for v in extra if v != cfg["variant"]]


def _single(ctx: RunContext, cfg: Dict[str, Any], args: argparse.Namespace) -> int:
    ds = load_dataset_from(cfg, ctx)
    train_cfg = train_config_from(cfg)
    ckpt = None
    if cfg.get("resume"):
        ctx.digest("resume", cfg["resume"])
        ckpt = load_checkpoint(cfg["resume"])
        model_cfg = build_config(ModelConfig, ckpt.model_config)
    else:
        model_cfg = model_config_from(cfg, ds, ctx.seed)
    with ctx.timed("operands"):
        ops = prepare_operands(ds, model_cfg, cfg.get("order"))

    if ckpt is not None:
        trainer = Trainer.from_checkpoint(ckpt, ds, train_cfg, operands=ops)
        echo("train", f"resuming at epoch {trainer.epoch}")
    else:
        trainer = Trainer(ds, model_cfg, train_cfg, operands=ops)
    with ctx.timed("train"):
        res = trainer.fit(verbose=not args.json)

    ext = cfg.get("checkpoint_format") or "json"
    save_checkpoint(res.best, ctx.output(f"checkpoint.{ext}"))
    save_checkpoint(trainer.checkpoint(), ctx.output(f"last.{ext}"))
    write_metrics_csv(res.history, ctx.output("metrics.csv"))
    scores = evaluate(Model(trainer.model_cfg, res.best.weights), ops, ds)
    summary = {
        "variant": model_cfg.variant,
        "mode": ops.mode,
        "best_epoch": res.best_epoch,
        "best_val_acc": res.best_val_acc,
        "epochs_run": trainer.epoch,
        "stopped_early": res.stopped_early,
        "accuracy": scores,
    }
    ctx.output("summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    if args.json:
        print_json(summary)
    else:
        echo(
            "train",
            f"best epoch {res.best_epoch}: train={scores['train']:.3f} val={scores['val']:.3f} test={scores['test']:.3f}",
        )
    return EXIT_OK


def _protocol(ctx: RunContext, cfg: Dict[str, Any], args: argparse.Namespace) -> int:
    ds = load_dataset_from(cfg, ctx)
    train_cfg = train_config_from(cfg)
    runs = int(cfg["runs"])
    rows = []
    for variant in [cfg["variant"], *_compare_variants(cfg)]:
        override: Dict[str, Any] = {"variant": variant}
        if variant != "thgcn":
            override["stacked"] = False
        model_cfg = model_config_from(cfg, ds, ctx.seed, **override)
        with ctx.timed(f"protocol_{variant}"):
            result = run_protocol(
                ds,
                model_cfg,
                train_cfg,
                runs=runs,
                base_seed=ctx.seed,
                order=cfg.get("order"),
                workers=int(cfg["workers"]),
            )
        rows.append({"name": variant, "mean": result.mean, "std": result.std, "runs": result.runs})
        if not args.json:
            echo("train", f"{variant}: test {result.mean:.4f} ± {result.std:.4f} over {runs} runs")

    ctx.output("protocol.json").write_text(json.dumps(rows, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    if args.json:
        print_json(rows)
    else:
        seeds = list(range(ctx.seed, ctx.seed + runs))
        print(render_report("experiment", {"runs": runs, "seeds": seeds, "rows": rows, "readout": cfg["readout"]}))
    return EXIT_OK


def _body(ctx: RunContext, cfg: Dict[str, Any], args: argparse.Namespace) -> int:
    if int(cfg.get("runs") or 1) > 1 or _compare_variants(cfg):
        if cfg.get("resume"):
            raise ConfigError("--resume applies to single runs only")
        return _protocol(ctx, cfg, args)
    return _single(ctx, cfg, args)


def run(args: argparse.Namespace) -> int:
    return run_command("train", args, DEFAULTS, _body)


def main(argv: Optional[list[str]] = None) -> int:
    return run(configure(argparse.ArgumentParser(prog="thgsp train")).parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
