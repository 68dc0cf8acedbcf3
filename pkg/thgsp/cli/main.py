# thgsp/cli/main.py
from __future__ import annotations

import argparse
import sys
from typing import Optional

from thgsp import __version__
from thgsp.cli import audit, bench, build, demo_injectivity, denoise, grid, stats, synth, train
from thgsp.cli import eval as eval_cmd

COMMANDS = {
    "build": (build, "Build the symmetrized adjacency tensor of a hypergraph"),
    "denoise": (denoise, "Iterative HyperGSD denoising of hypergraph signals"),
    "train": (train, "Train T-HGCN / T-HGIN (or a baseline) on a dataset"),
    "eval": (eval_cmd, "Evaluate a checkpoint on every split"),
    "grid": (grid, "Grid search over K and alpha"),
    "demo-injectivity": (demo_injectivity, "Same clique expansion, different adjacency tensors"),
    "bench": (bench, "Time the direct and FFT t-products"),
    "stats": (stats, "Dataset statistics"),
    "synth": (synth, "Write a synthetic planted-community dataset"),
    "audit": (audit, "Show recent audit events or every event of one run"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="thgsp", description="Tensor-based hypergraph signal processing")
    p.add_argument("--version", action="version", version=f"thgsp {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, (module, help_text) in COMMANDS.items():
        module.configure(sub.add_parser(name, help=help_text, description=help_text))
    return p


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
