# thgsp/cli/bench.py
from __future__ import annotations

import argparse
import csv
import statistics
import sys
import time
from typing import Any, Callable, Dict, List, Optional

from thgsp.cli.common import EXIT_FAILED, EXIT_OK, RunContext, add_common_flags, echo, print_json, run_command
from thgsp.cli.options import parse_ints
from thgsp.guards import assess_agreement
from thgsp.rng import substream
from thgsp.talg.product import t_product, t_product_fft
from thgsp.talg.tensor import SymTensor3

DEFAULTS: Dict[str, Any] = {"sizes": "16,32,64,128", "repeat": 3, "cols": 4, "tol": 1e-10, "min_speedup": None}
BENCH_FIELDS = ("N", "n_slices", "path", "min_s", "median_s", "speedup")


def configure(p: argparse.ArgumentParser) -> argparse.ArgumentParser:
    p.add_argument("--sizes", default=None, help="Comma-separated N values; N_s = 2N + 1")
    p.add_argument("--repeat", type=int, default=None, help="Timed repetitions per path")
    p.add_argument("--cols", type=int, default=None, help="Columns of the right operand")
    p.add_argument("--tol", type=float, default=None, help="Max-abs agreement required between paths")
    p.add_argument(
        "--min-speedup",
        type=float,
        default=None,
        help="Fail unless direct/fft time at the largest N reaches this ratio",
    )
    add_common_flags(p)
    p.set_defaults(handler=run)
    return p


def _time(fn: Callable[[], SymTensor3], repeat: int) -> tuple[SymTensor3, List[float]]:
    times = []
    out = fn()
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return out, times


def _speedup(t_direct: List[float], t_fft: List[float]) -> float:
    return min(t_direct) / max(min(t_fft), 1e-12)


def _body(ctx: RunContext, cfg: Dict[str, Any], args: argparse.Namespace) -> int:
    sizes = parse_ints(cfg["sizes"])
    repeat = max(int(cfg["repeat"]), 1)
    cols = int(cfg["cols"])
    tol = float(cfg["tol"])
    rng = substream(ctx.seed, "bench")
    rows: List[Dict[str, Any]] = []
    speedups: Dict[int, float] = {}
    failures: List[str] = []
    for n in sizes:
        n_s = 2 * n + 1
        a = SymTensor3(rng.standard_normal((n_s, n, n)))
        b = SymTensor3(rng.standard_normal((n_s, n, cols)))
        with ctx.timed(f"N{n}"):
            direct, t_direct = _time(lambda: t_product(a, b), repeat)
            fft, t_fft = _time(lambda: t_product_fft(a, b), repeat)
        rep = assess_agreement(direct, fft, what=f"N={n}", tol=tol * max(direct.max_abs(), 1.0))
        if not rep.ok:
            failures.append(f"{rep.what}: paths disagree by {rep.max_abs:.3e} (tol {rep.tol:.1e})")
        speedups[n] = _speedup(t_direct, t_fft)
        for path, ts in (("direct", t_direct), ("fft", t_fft)):
            rows.append(
                {
                    "N": n,
                    "n_slices": n_s,
                    "path": path,
                    "min_s": min(ts),
                    "median_s": statistics.median(ts),
                    "speedup": speedups[n] if path == "fft" else 1.0,
                }
            )
        if not args.json:
            echo(
                "bench",
                f"N={n} N_s={n_s}: direct {min(t_direct):.4f}s fft {min(t_fft):.4f}s "
                f"speedup {speedups[n]:.1f}x max diff {rep.max_abs:.2e}",
            )

    floor = cfg.get("min_speedup")
    if floor is not None and sizes:
        largest = max(sizes)
        if speedups[largest] < float(floor):
            failures.append(f"N={largest}: fft speedup {speedups[largest]:.2f}x below {float(floor):g}x")

    with open(ctx.output("bench.csv"), "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(BENCH_FIELDS)
        for r in rows:
            w.writerow(
                [r["N"], r["n_slices"], r["path"], f"{r['min_s']:.6f}", f"{r['median_s']:.6f}", f"{r['speedup']:.3f}"]
            )
    if args.json:
        print_json({"rows": rows, "speedups": speedups, "failures": failures})
    for msg in failures:
        echo("bench", msg)
    return EXIT_FAILED if failures else EXIT_OK


def run(args: argparse.Namespace) -> int:
    return run_command("bench", args, DEFAULTS, _body)


def main(argv: Optional[list[str]] = None) -> int:
    return run(configure(argparse.ArgumentParser(prog="thgsp-bench")).parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
