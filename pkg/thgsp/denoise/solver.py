# thgsp/denoise/solver.py
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from thgsp.builder.shaping import laplacian
from thgsp.config import DenoiseConfig
from thgsp.denoise.objective import objective
from thgsp.errors import ConsistencyError, DivergenceError, ShapeError, SingularSliceError
from thgsp.guards import enforce_finite
from thgsp.observability import warn
from thgsp.talg.product import spectral_radius_bound, t_solve, tprod
from thgsp.talg.tensor import SymTensor3, identity_tensor

DIVERGENCE_FACTOR = 1e6


@dataclass
class TraceStep:
    step: int
    monitor: float
    delta: float


def _check_shift(x: SymTensor3, a_s: SymTensor3) -> None:
    if a_s.n_rows != a_s.n_cols or a_s.n_cols != x.n_rows or a_s.n_slices != x.n_slices:
        raise ShapeError(f"adjacency {a_s.shape} does not act on signals {x.shape}")


def one_step(x: SymTensor3, a_s: SymTensor3, b: float, c: float) -> SymTensor3:
    """One gradient step from Y = X: (1 - 2bc) X + 2bc A_s * X.

    With c = 1/(2b) this is exactly the shifting A_s * X.
    """
    _check_shift(x, a_s)
    w = 2.0 * b * c
    return (1.0 - w) * x + w * tprod(a_s, x)


def iterate(x: SymTensor3, a_s: SymTensor3, cfg: DenoiseConfig) -> Tuple[SymTensor3, List[TraceStep]]:
    """K steps of Y <- (1 - 2b - 2bc) Y + 2b X + 2bc A_s * Y from Y = X.

    The trace holds the objective monitor at the recurrence's stationary weight
    for the start point and every step, plus the max-abs update size.
    Stops early once an update is smaller than ``cfg.tol``.
    """
    _check_shift(x, a_s)
    lap = laplacian(a_s)
    weight = cfg.stationary_weight
    keep, anchor, shift = cfg.keep, cfg.anchor, cfg.shift
    limit = DIVERGENCE_FACTOR * max(x.max_abs(), np.finfo(float).tiny)
    anchored = anchor * x

    y = x
    trace = [TraceStep(0, objective(y, x, lap, weight).monitor, 0.0)]
    for k in range(1, cfg.K + 1):
        nxt = keep * y + anchored + shift * tprod(a_s, y)
        delta = float(np.max(np.abs(nxt.data - y.data), initial=0.0))
        y = nxt
        if not np.isfinite(delta) or y.max_abs() > limit:
            raise DivergenceError(
                "iterate exceeded 1e6 x |x|", bound=cfg.contraction_bound, step=k
            )
        trace.append(TraceStep(k, objective(y, x, lap, weight).monitor, delta))
        if delta < cfg.tol:
            break
    return y, trace


def fixed_point(x: SymTensor3, a_s: SymTensor3, b: float) -> SymTensor3:
    """Stationary point of the objective with weight b: (I + b L) * Y = X."""
    _check_shift(x, a_s)
    rho = spectral_radius_bound(a_s)
    if rho > 1.0 + 1e-9:
        warn("denoise", f"spectral bound {rho:.6f} > 1; invertibility of I + bL is not guaranteed")
    system = identity_tensor(a_s.n_rows, a_s.n_slices) + b * laplacian(a_s)
    try:
        y = t_solve(system, x)
    except SingularSliceError as e:
        raise ConsistencyError(f"I + bL is singular at frequency {e.frequency} (b={b})") from e
    enforce_finite(y.data, what=f"stationary point (b={b})")
    return y


def iterate_limit(x: SymTensor3, a_s: SymTensor3, cfg: DenoiseConfig) -> SymTensor3:
    """Limit of ``iterate`` as K grows, valid inside the contraction region."""
    return fixed_point(x, a_s, cfg.stationary_weight)


def measured_rate(trace: List[TraceStep]) -> float:
    """Geometric-mean contraction of successive update sizes."""
    deltas = np.array([s.delta for s in trace[1:]])
    if deltas.size:
        # ignore updates already at rounding level
        deltas = deltas[deltas > 1e-12 * deltas.max()]
    if deltas.size < 2:
        return 0.0
    ratios = deltas[1:] / deltas[:-1]
    return float(np.exp(np.mean(np.log(ratios))))
