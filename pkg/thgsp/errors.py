# thgsp/errors.py
from __future__ import annotations

from typing import Any, Dict, Optional


class THGSPError(Exception):
    """Base class for every error raised by the toolkit."""


class HypergraphError(THGSPError, ValueError):
    """An invalid hypergraph, whether built in memory or read from a file."""


class HypergraphParseError(HypergraphError):
    def __init__(self, message: str, *, line_no: Optional[int] = None, path: Optional[str] = None):
        self.line_no = line_no
        self.path = path
        where = ""
        if path:
            where += f"{path}:"
        if line_no is not None:
            where += f"line {line_no}: "
        elif where:
            where += " "
        super().__init__(f"{where}{message}")


class DatasetError(THGSPError, ValueError):
    pass


class ShapeError(THGSPError, ValueError):
    pass


class ConfigError(THGSPError, ValueError):
    pass


class CheckpointError(THGSPError, ValueError):
    pass


class SingularSliceError(THGSPError, ArithmeticError):
    def __init__(self, frequency: int, condition: float):
        self.frequency = frequency
        self.condition = condition
        super().__init__(
            f"frequency slice {frequency} is singular (condition estimate {condition:.3e})"
        )


class ConsistencyError(THGSPError, RuntimeError):
    """An internal numerical invariant was violated."""


class DivergenceError(THGSPError, ArithmeticError):
    def __init__(self, message: str, *, bound: float, step: int):
        self.bound = bound
        self.step = step
        super().__init__(f"{message} (step {step}, contraction bound {bound:.4g})")


class TrainingDivergedError(THGSPError, ArithmeticError):
    def __init__(self, epoch: int, diagnostics: Dict[str, Any]):
        self.epoch = epoch
        self.diagnostics = diagnostics
        super().__init__(f"non-finite loss at epoch {epoch}: {diagnostics}")
