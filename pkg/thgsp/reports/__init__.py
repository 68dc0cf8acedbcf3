from .registry import ReportRegistry, ReportTemplate, render_report

__all__ = ["ReportRegistry", "ReportTemplate", "render_report"]
