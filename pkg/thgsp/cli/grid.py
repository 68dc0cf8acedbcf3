# thgsp/cli/grid.py
from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Dict, Optional

from thgsp.cli.common import EXIT_OK, RunContext, add_common_flags, print_json, run_command
from thgsp.cli.options import (
    DATASET_DEFAULTS,
    MODEL_DEFAULTS,
    TRAIN_DEFAULTS,
    add_dataset_flags,
    add_model_flags,
    add_train_flags,
    load_dataset_from,
    model_config_from,
    parse_floats,
    parse_ints,
    train_config_from,
)
from thgsp.config import GridConfig, build_config
from thgsp.hypergraph.stats import max_shortest_path
from thgsp.nn.grid import grid_search, write_grid_csv
from thgsp.reports.registry import render_report

DEFAULTS: Dict[str, Any] = {
    **DATASET_DEFAULTS,
    **MODEL_DEFAULTS,
    **TRAIN_DEFAULTS,
    "Ks": "1,2,3,4,5",
    "alphas": "0.1,0.2,0.3,0.4,0.5",
    "lrs": "",
    "weight_decays": "",
    "hiddens": "",
    "repeats": 10,
    "workers": 1,
}


def configure(p: argparse.ArgumentParser) -> argparse.ArgumentParser:
    add_dataset_flags(p)
    add_model_flags(p)
    add_train_flags(p)
    p.add_argument("--Ks", default=None, help="Comma-separated K values")
    p.add_argument("--alphas", default=None, help="Comma-separated alpha values")
    p.add_argument("--lrs", default=None, help="Comma-separated learning rates (default: --lr only)")
    p.add_argument("--weight-decays", default=None, help="Comma-separated weight decays (default: --weight-decay only)")
    p.add_argument("--hiddens", default=None, help="Comma-separated hidden widths (default: --hidden only)")
    p.add_argument("--repeats", type=int, default=None, help="Seeded runs per cell")
    p.add_argument("--workers", type=int, default=None, help="Cells trained in parallel")
    add_common_flags(p)
    p.set_defaults(handler=run)
    return p


def _body(ctx: RunContext, cfg: Dict[str, Any], args: argparse.Namespace) -> int:
    ds = load_dataset_from(cfg, ctx)
    grid = build_config(
        GridConfig,
        {
            "Ks": parse_ints(cfg["Ks"]),
            "alphas": parse_floats(cfg["alphas"]),
            "lrs": parse_floats(cfg["lrs"]),
            "weight_decays": parse_floats(cfg["weight_decays"]),
            "hiddens": parse_ints(cfg["hiddens"]),
            "repeats": cfg["repeats"],
            "workers": cfg["workers"],
            "seed": ctx.seed,
        },
    )
    model_cfg = model_config_from(cfg, ds, ctx.seed)
    with ctx.timed("grid"):
        res = grid_search(ds, grid, model_cfg, train_config_from(cfg), order=cfg.get("order"))
    table = write_grid_csv(res.rows, ctx.output("grid.csv"))
    diameter = max_shortest_path(ds.graph)
    best = {
        "K": res.best.K,
        "alpha": res.best.alpha,
        "lr": res.best.lr,
        "weight_decay": res.best.weight_decay,
        "hidden": res.best.hidden,
        "mean_acc": res.best.mean_acc,
        "std_acc": res.best.std_acc,
        "mean_val_acc": res.best.mean_val_acc,
        "layer_dims": res.best_config.layer_dims,
    }
    out = {"best": best, "max_shortest_path": diameter, "cells": len(res.rows), "table": str(table)}
    ctx.output("grid_best.json").write_text(json.dumps(out, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    if args.json:
        print_json(out)
    else:
        print(
            render_report(
                "grid",
                {
                    "Ks": grid.Ks,
                    "alphas": grid.alphas,
                    "repeats": grid.repeats,
                    "best": best,
                    "diameter": diameter,
                    "table": str(table),
                },
            )
        )
    return EXIT_OK


def run(args: argparse.Namespace) -> int:
    return run_command("grid", args, DEFAULTS, _body)


def main(argv: Optional[list[str]] = None) -> int:
    return run(configure(argparse.ArgumentParser(prog="thgsp grid")).parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
