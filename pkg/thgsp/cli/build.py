# thgsp/cli/build.py
from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Dict, Optional

from thgsp.builder.adjacency import build_adjacency
from thgsp.builder.shaping import flatten_to_slices, symmetrize
from thgsp.cli.common import EXIT_FAILED, EXIT_OK, RunContext, add_common_flags, echo, print_json, run_command
from thgsp.cli.options import load_graph_from
from thgsp.guards import assess_rowsum
from thgsp.talg.io import dump_tensor

DEFAULTS: Dict[str, Any] = {"graph": None, "data": None, "order": None, "check_rowsum": False, "workers": 1}


def configure(p: argparse.ArgumentParser) -> argparse.ArgumentParser:
    p.add_argument("--graph", default=None, help="Hypergraph file")
    p.add_argument("--data", default=None, help="Dataset directory holding hypergraph.txt")
    p.add_argument("--order", type=int, default=None, help="Tensor order M (default: max hyperedge size)")
    p.add_argument("--check-rowsum", action="store_true", default=None, help="Fail unless every row sums to 1")
    p.add_argument("--workers", type=int, default=None, help="Threads for per-hyperedge generation")
    add_common_flags(p)
    p.set_defaults(handler=run)
    return p


def _body(ctx: RunContext, cfg: Dict[str, Any], args: argparse.Namespace) -> int:
    g = load_graph_from(cfg, ctx)
    with ctx.timed("adjacency"):
        spec = build_adjacency(g, cfg.get("order"), workers=int(cfg.get("workers") or 1))
    with ctx.timed("symmetrize"):
        a_s = symmetrize(flatten_to_slices(spec))

    entries = [{"index": list(idx), "value": w} for idx, w in spec.entries.items()]
    ctx.output("adjacency_entries.json").write_text(
        json.dumps({"order": spec.order, "dim": spec.dim, "entries": entries}) + "\n", encoding="utf-8"
    )
    dump_tensor(a_s, ctx.output("adjacency_tensor.json"))
    rep = assess_rowsum(spec, g)

    summary = {
        "num_nodes": g.num_nodes,
        "order": spec.order,
        "nnz": spec.nnz,
        "shape": list(a_s.shape),
        "rowsum_max_deviation": rep.max_deviation,
        "isolated_nodes": rep.isolated_nodes,
        "out_dir": str(ctx.out_dir),
    }
    if args.json:
        print_json(summary)
    else:
        echo("build", f"N={g.num_nodes} M={spec.order} nnz={spec.nnz} -> A_s {a_s.shape}")
        if cfg.get("check_rowsum"):
            echo("build", f"row-sum max deviation {rep.max_deviation:.3e} (tol {rep.tol:g})")
    if cfg.get("check_rowsum") and not rep.ok:
        echo("build", f"row-sum check failed at node {rep.worst_node}")
        return EXIT_FAILED
    return EXIT_OK


def run(args: argparse.Namespace) -> int:
    return run_command("build", args, DEFAULTS, _body)


def main(argv: Optional[list[str]] = None) -> int:
    return run(configure(argparse.ArgumentParser(prog="thgsp build")).parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
