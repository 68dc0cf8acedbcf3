from .objective import gradient_leading, objective
from .solver import TraceStep, fixed_point, iterate, iterate_limit, measured_rate, one_step
from .pipeline import DenoiseResult, denoise_features

__all__ = [
    "gradient_leading",
    "objective",
    "TraceStep",
    "fixed_point",
    "iterate",
    "iterate_limit",
    "measured_rate",
    "one_step",
    "DenoiseResult",
    "denoise_features",
]
