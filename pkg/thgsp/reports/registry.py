# thgsp/reports/registry.py
from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from thgsp.utils.templating import render_template

_PACKAGE_DIR = Path(__file__).resolve().parent


@dataclass
class ReportTemplate:
    id: str
    version: str
    purpose: str
    template: str


class ReportRegistry:
    """Jinja2 report templates kept in ``templates.yaml``."""

    def __init__(self, base_dir: str | None = None):
        self.base_dir = Path(base_dir or os.getenv("THGSP_REPORTS_DIR") or _PACKAGE_DIR)
        self._templates: Optional[Dict[str, ReportTemplate]] = None

    def _load(self) -> Dict[str, ReportTemplate]:
        if self._templates is None:
            with open(self.base_dir / "templates.yaml", "r", encoding="utf-8") as f:
                raw = yaml.safe_load(f) or {}
            self._templates = {
                rid: ReportTemplate(id=rid, version=str(obj.get("version", "1")), purpose=obj.get("purpose", ""), template=obj["template"])
                for rid, obj in raw.items()
            }
        return self._templates

    def ids(self) -> list[str]:
        return sorted(self._load())

    def get(self, report_id: str) -> ReportTemplate:
        templates = self._load()
        if report_id not in templates:
            raise KeyError(f"Report template not found: {report_id}")
        return templates[report_id]

    def render(self, report_id: str, data: Dict[str, Any]) -> str:
        return render_template(self.get(report_id).template, data)


_default: Optional[ReportRegistry] = None


def render_report(report_id: str, data: Dict[str, Any]) -> str:
    global _default
    if _default is None:
        _default = ReportRegistry()
    return _default.render(report_id, data)
