# thgsp/cli/synth.py
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any, Dict, Optional

from thgsp.cli.common import EXIT_OK, RunContext, add_common_flags, echo, print_json, run_command
from thgsp.hypergraph.io import save_dataset_dir
from thgsp.hypergraph.stats import hypergraph_stats
from thgsp.hypergraph.synthetic import planted_communities

DEFAULTS: Dict[str, Any] = {
    "num_nodes": 60,
    "communities": 2,
    "edges": 30,
    "min_size": 3,
    "max_size": 4,
    "feature_dim": 8,
    "noise": 1.0,
    "dest": None,
}


def configure(p: argparse.ArgumentParser) -> argparse.ArgumentParser:
    p.add_argument("--num-nodes", type=int, default=None)
    p.add_argument("--communities", type=int, default=None)
    p.add_argument("--edges", type=int, default=None, help="Within-community hyperedges")
    p.add_argument("--min-size", type=int, default=None)
    p.add_argument("--max-size", type=int, default=None)
    p.add_argument("--feature-dim", type=int, default=None)
    p.add_argument("--noise", type=float, default=None, help="Std of the feature noise")
    p.add_argument("--dest", default=None, help="Dataset directory (default: <out-dir>/dataset)")
    add_common_flags(p)
    p.set_defaults(handler=run)
    return p


def _body(ctx: RunContext, cfg: Dict[str, Any], args: argparse.Namespace) -> int:
    ds = planted_communities(
        num_nodes=int(cfg["num_nodes"]),
        num_communities=int(cfg["communities"]),
        num_edges=int(cfg["edges"]),
        min_size=int(cfg["min_size"]),
        max_size=int(cfg["max_size"]),
        feature_dim=int(cfg["feature_dim"]),
        noise=float(cfg["noise"]),
        seed=ctx.seed,
    )
    dest = Path(cfg["dest"]) if cfg.get("dest") else ctx.out_dir / "dataset"
    save_dataset_dir(ds, dest)
    ctx.manifest.outputs.append(str(dest))
    stats = hypergraph_stats(ds.graph, ds).to_dict()
    if args.json:
        print_json({"dest": str(dest), **stats})
    else:
        echo("synth", f"wrote {dest} (N={stats['num_nodes']}, |E|={stats['num_edges']}, M={stats['order']})")
    return EXIT_OK


def run(args: argparse.Namespace) -> int:
    return run_command("synth", args, DEFAULTS, _body)


def main(argv: Optional[list[str]] = None) -> int:
    return run(configure(argparse.ArgumentParser(prog="thgsp synth")).parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
