# thgsp/cli/denoise.py
from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path
from typing import Any, Dict, Optional

from thgsp.cli.common import EXIT_OK, RunContext, add_common_flags, print_json, run_command
from thgsp.cli.options import load_graph_from
from thgsp.config import DenoiseConfig, build_config
from thgsp.denoise.pipeline import denoise_features
from thgsp.errors import ConfigError
from thgsp.hypergraph.io import FEATURES_FILE, load_features
from thgsp.reports.registry import render_report
from thgsp.talg.io import dump_tensor

DEFAULTS: Dict[str, Any] = {
    "graph": None,
    "data": None,
    "features": None,
    "order": None,
    "b": 0.5,
    "c": 0.2,
    "alpha": None,
    "K": 10,
    "tol": 1e-10,
    "noise_sigma": 0.0,
    "out": None,
    "trace": None,
}


def configure(p: argparse.ArgumentParser) -> argparse.ArgumentParser:
    p.add_argument("--graph", default=None, help="Hypergraph file")
    p.add_argument("--data", default=None, help="Dataset directory (hypergraph.txt, features.csv)")
    p.add_argument("--features", default=None, help="Features CSV, N x D")
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--b", type=float, default=None, help="Smoothness weight b > 0")
    p.add_argument("--c", type=float, default=None, help="Step weight c >= 0")
    p.add_argument("--alpha", type=float, default=None, help="PageRank form: b = alpha/2, c = (1-alpha)/alpha")
    p.add_argument("--K", type=int, default=None, help="Iterations (0 copies the input)")
    p.add_argument("--tol", type=float, default=None, help="Stop once an update is smaller than this")
    p.add_argument("--noise-sigma", type=float, default=None, help="Std of Gaussian noise added to the features")
    p.add_argument("--out", default=None, help="Denoised tensor JSON (default: <out-dir>/denoised.json)")
    p.add_argument("--trace", default=None, help="Per-step trace CSV (default: <out-dir>/trace.csv)")
    add_common_flags(p)
    p.set_defaults(handler=run)
    return p


def _target(ctx: RunContext, given: Optional[str], default_name: str) -> Path:
    if not given:
        return ctx.output(default_name)
    p = Path(given)
    p.parent.mkdir(parents=True, exist_ok=True)
    ctx.manifest.outputs.append(str(p))
    return p


def _body(ctx: RunContext, cfg: Dict[str, Any], args: argparse.Namespace) -> int:
    g = load_graph_from(cfg, ctx)
    fpath = cfg.get("features") or (f"{cfg['data']}/{FEATURES_FILE}" if cfg.get("data") else None)
    if not fpath:
        raise ConfigError("give --features or --data")
    ctx.digest("features", fpath)
    features = load_features(fpath, g.num_nodes)
    dcfg = build_config(
        DenoiseConfig,
        {k: cfg[k] for k in ("b", "c", "K", "tol", "alpha") if cfg.get(k) is not None},
    )

    with ctx.timed("denoise"):
        res = denoise_features(
            g, features, dcfg, noise_sigma=float(cfg.get("noise_sigma") or 0.0), seed=ctx.seed, order=cfg.get("order")
        )

    out_path = _target(ctx, cfg.get("out"), "denoised.json")
    trace_path = _target(ctx, cfg.get("trace"), "trace.csv")
    dump_tensor(res.denoised, out_path)
    with open(trace_path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["step", "monitor", "delta"])
        for s in res.trace:
            w.writerow([s.step, repr(s.monitor), repr(s.delta)])

    summary = {**res.summary(), "b": dcfg.b, "c": dcfg.c, "K": dcfg.K, "out": str(out_path), "trace": str(trace_path)}
    if args.json:
        print_json(summary)
    else:
        print(
            render_report(
                "denoise",
                {
                    "b": f"{dcfg.b:g}",
                    "c": f"{dcfg.c:g}",
                    "steps": res.trace[-1].step,
                    "order": res.extra["order"],
                    "bound": f"{dcfg.contraction_bound:.4f}",
                    "rate": f"{res.rate:.4f}",
                    "limit_gap": res.limit_gap,
                    "error_observed": res.error_observed,
                    "error_denoised": res.error_denoised,
                },
            )
        )
    return EXIT_OK


def run(args: argparse.Namespace) -> int:
    return run_command("denoise", args, DEFAULTS, _body)


def main(argv: Optional[list[str]] = None) -> int:
    return run(configure(argparse.ArgumentParser(prog="thgsp denoise")).parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
