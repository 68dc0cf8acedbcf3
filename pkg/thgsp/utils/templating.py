# thgsp/utils/templating.py
from __future__ import annotations

from jinja2 import BaseLoader, Environment, StrictUndefined

_env = Environment(loader=BaseLoader(), undefined=StrictUndefined, trim_blocks=True, lstrip_blocks=True)
_env.filters["pct"] = lambda v: f"{100.0 * float(v):.2f}"
_env.filters["sci"] = lambda v: f"{float(v):.3e}"


def render_template(template: str, data: dict) -> str:
    return _env.from_string(template).render(**data)
