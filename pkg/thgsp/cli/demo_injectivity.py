# thgsp/cli/demo_injectivity.py
"""
Injectivity witness: the 3-node hyperedge {0,1,2} and the triangle
{0,1},{1,2},{0,2} have the same clique expansion, but their adjacency tensors
(at order 3) differ. Exit 0 when the witness holds, 1 otherwise.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Dict, Optional

from thgsp.cli.common import EXIT_FAILED, EXIT_OK, RunContext, add_common_flags, print_json, run_command
from thgsp.guards import assess_injectivity
from thgsp.hypergraph.model import Hypergraph, clique_expansion
from thgsp.reports.registry import render_report

FIRST = [[0, 1, 2]]
SECOND = [[0, 1], [1, 2], [0, 2]]

DEFAULTS: Dict[str, Any] = {"order": None}


def configure(p: argparse.ArgumentParser) -> argparse.ArgumentParser:
    p.add_argument("--order", type=int, default=None, help="Tensor order used for both graphs (default 3)")
    add_common_flags(p)
    p.set_defaults(handler=run)
    return p


def _body(ctx: RunContext, cfg: Dict[str, Any], args: argparse.Namespace) -> int:
    g1 = Hypergraph.from_edges(FIRST)
    g2 = Hypergraph.from_edges(SECOND)
    verdict = assess_injectivity(g1, g2, order=cfg.get("order"))
    out = verdict.to_dict()
    ctx.output("verdict.json").write_text(json.dumps(out, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    if args.json:
        print_json(out)
    else:
        print(
            render_report(
                "injectivity",
                {
                    **out,
                    "clique_first": clique_expansion(g1).tolist(),
                    "clique_second": clique_expansion(g2).tolist(),
                },
            )
        )
    return EXIT_OK if verdict.ok else EXIT_FAILED


def run(args: argparse.Namespace) -> int:
    return run_command("demo-injectivity", args, DEFAULTS, _body)


def main(argv: Optional[list[str]] = None) -> int:
    return run(configure(argparse.ArgumentParser(prog="thgsp-demo-injectivity")).parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
