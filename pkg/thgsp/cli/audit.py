# thgsp/cli/audit.py
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from thgsp.cli.common import EXIT_OK, EXIT_USAGE, echo, print_json, warn
from thgsp.observability import list_events, list_run


def configure(p: argparse.ArgumentParser) -> argparse.ArgumentParser:
    p.add_argument("--run-id", default=None, help="Show every event of one run")
    p.add_argument("--run-dir", default=None, help="Output directory of a run; its manifest names the run id")
    p.add_argument("--limit", type=int, default=20, help="Most recent events to show")
    p.add_argument("--json", action="store_true", help="Print machine-readable output")
    p.set_defaults(handler=run)
    return p


def _run_id_from_dir(path: str) -> str:
    manifest = Path(path) / "manifest.json"
    try:
        return str(json.loads(manifest.read_text(encoding="utf-8"))["run_id"])
    except (OSError, ValueError, KeyError) as e:
        raise ValueError(f"{manifest}: no readable run manifest ({e})") from e


def _line(e: Dict[str, Any]) -> str:
    text = f"{e.get('ts', '?')} {e.get('run_id', '?')} {e.get('action', '?')} {e.get('status', '?')}"
    if e.get("message"):
        text += f" {e['message']}"
    return text


def run(args: argparse.Namespace) -> int:
    """Read the audit trail back; this command records nothing itself."""
    run_id = args.run_id
    if args.run_dir:
        try:
            run_id = _run_id_from_dir(args.run_dir)
        except ValueError as e:
            warn("audit", str(e))
            return EXIT_USAGE
    if args.limit < 1:
        warn("audit", f"--limit must be positive, got {args.limit}")
        return EXIT_USAGE
    events: List[Dict[str, Any]] = list_run(run_id) if run_id else list_events(args.limit)
    if args.json:
        print_json(events)
    else:
        for e in events:
            echo("audit", _line(e))
    return EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    return run(configure(argparse.ArgumentParser(prog="thgsp audit")).parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
