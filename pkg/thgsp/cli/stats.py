# thgsp/cli/stats.py
from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Dict, Optional

from thgsp.cli.common import EXIT_OK, RunContext, add_common_flags, print_json, run_command
from thgsp.cli.options import DATASET_DEFAULTS, add_dataset_flags, load_dataset_from, load_graph_from
from thgsp.hypergraph.stats import hypergraph_stats
from thgsp.reports.registry import render_report

DEFAULTS: Dict[str, Any] = dict(DATASET_DEFAULTS)


def configure(p: argparse.ArgumentParser) -> argparse.ArgumentParser:
    add_dataset_flags(p)
    add_common_flags(p)
    p.set_defaults(handler=run)
    return p


def _body(ctx: RunContext, cfg: Dict[str, Any], args: argparse.Namespace) -> int:
    if cfg.get("data") or all(cfg.get(k) for k in ("features", "labels", "splits")):
        ds = load_dataset_from(cfg, ctx)
        stats, name = hypergraph_stats(ds.graph, ds), ds.name
    else:
        g = load_graph_from(cfg, ctx)
        stats, name = hypergraph_stats(g), str(cfg["graph"])
    out = stats.to_dict()
    ctx.output("stats.json").write_text(json.dumps(out, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    if args.json:
        print_json(out)
    else:
        print(render_report("stats", {"name": name, "stats": out}))
    return EXIT_OK


def run(args: argparse.Namespace) -> int:
    return run_command("stats", args, DEFAULTS, _body)


def main(argv: Optional[list[str]] = None) -> int:
    return run(configure(argparse.ArgumentParser(prog="thgsp stats")).parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
