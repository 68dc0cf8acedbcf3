# thgsp/observability.py
from __future__ import annotations
import json
import os
import sys
import threading
import uuid
from datetime import datetime, timezone
from typing import Any, Dict, List

_DEFAULT_AUDIT_LOG = "runtime/audit.log.jsonl"

_lock = threading.Lock()


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


def audit_path() -> str:
    return os.getenv("THGSP_AUDIT_LOG") or _DEFAULT_AUDIT_LOG


def new_run_id(command: str) -> str:
    return f"{command}-{uuid.uuid4().hex[:12]}"


def echo(tag: str, message: str) -> None:
    print(f"[{tag}] {message}")


def warn(tag: str, message: str) -> None:
    print(f"! [{tag}] {message}", file=sys.stderr)


def audit_log(
    *,
    run_id: str,
    action: str,
    status: str,
    params: Dict[str, Any] | None = None,
    message: str | None = None,
    extra: Dict[str, Any] | None = None,
) -> None:
    """
    Append one JSON line to the audit file.
    status: "start" | "ok" | "error" | "skip"
    """
    rec = {
        "ts": _now_iso(),
        "run_id": run_id,
        "action": action,
        "status": status,
        "params": params or {},
        "message": message or "",
        **(extra or {}),
    }
    line = json.dumps(rec, ensure_ascii=False, default=str)
    path = audit_path()
    with _lock:
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(path, "a", encoding="utf-8") as f:
            f.write(line + "\n")


def _read_lines(path: str) -> List[str]:
    if not os.path.exists(path):
        return []
    with open(path, "r", encoding="utf-8") as f:
        return f.read().splitlines()


def list_events(limit: int = 200) -> List[Dict[str, Any]]:
    lines = _read_lines(audit_path())
    events: List[Dict[str, Any]] = []
    for ln in lines[-limit:]:
        try:
            events.append(json.loads(ln))
        except Exception:
            continue
    return events


def list_run(run_id: str) -> List[Dict[str, Any]]:
    out: List[Dict[str, Any]] = []
    for ln in _read_lines(audit_path()):
        try:
            rec = json.loads(ln)
        except Exception:
            continue
        if rec.get("run_id") == run_id:
            out.append(rec)
    return out
