# thgsp/denoise/objective.py
from __future__ import annotations

import numpy as np

from thgsp.errors import ShapeError
from thgsp.talg.product import tprod
from thgsp.talg.tensor import SymTensor3, Tube, t_transpose


def _check(y: SymTensor3, x: SymTensor3, lap: SymTensor3) -> None:
    if y.shape != x.shape:
        raise ShapeError(f"y and x differ in shape: {y.shape} vs {x.shape}")
    if lap.n_rows != lap.n_cols or lap.n_rows != y.n_rows or lap.n_slices != y.n_slices:
        raise ShapeError(f"laplacian {lap.shape} does not act on signals {y.shape}")


def _column_tube(g: SymTensor3) -> np.ndarray:
    """Sum of the per-column tubes: the slice-wise trace of a D x D x N_s tensor."""
    return np.trace(g.data, axis1=1, axis2=2)


def objective(y: SymTensor3, x: SymTensor3, lap: SymTensor3, b: float) -> Tube:
    """J = (Y - X)^T * (Y - X) + b Y^T * L * Y as a 1 x 1 x N_s tube.

    With D > 1 columns the per-column tubes are summed.
    """
    _check(y, x, lap)
    u = y - x
    fidelity = _column_tube(tprod(t_transpose(u), u))
    smooth = _column_tube(tprod(t_transpose(y), tprod(lap, y)))
    return Tube(fidelity + b * smooth)


def gradient_leading(y: SymTensor3, x: SymTensor3, lap: SymTensor3, b: float) -> SymTensor3:
    """First block column of dJ/dY: 2 (Y - X) + 2b (L * Y)."""
    _check(y, x, lap)
    return 2.0 * (y - x) + (2.0 * b) * tprod(lap, y)
