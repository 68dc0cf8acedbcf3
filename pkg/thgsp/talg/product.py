# thgsp/talg/product.py
from __future__ import annotations

import numpy as np

from thgsp.config import fft_min_slices
from thgsp.errors import ConsistencyError, ShapeError, SingularSliceError
from thgsp.talg.tensor import SymTensor3

# Largest acceptable condition estimate of a transform-domain slice.
SINGULAR_COND = 1e12
# Relative imaginary residue tolerated after an inverse transform.
IMAG_TOL = 1e-9
# Relative residual required from t_solve.
SOLVE_RTOL = 1e-8


def _check_operands(a: SymTensor3, b: SymTensor3) -> None:
    if a.n_cols != b.n_rows:
        raise ShapeError(f"inner dimensions differ: {a.shape} * {b.shape}")
    if a.n_slices != b.n_slices:
        raise ShapeError(f"slice counts differ: {a.n_slices} vs {b.n_slices}")


def t_product(a: SymTensor3, b: SymTensor3) -> SymTensor3:
    """fold(bcirc(a) . unfold(b)) in slice-convolution form.

    Result slice k is sum_j a_j . b_{(k-j) mod N_s}.
    """
    _check_operands(a, b)
    out = np.zeros((a.n_slices, a.n_rows, b.n_cols))
    for j in range(a.n_slices):
        out += a.data[j] @ np.roll(b.data, j, axis=0)
    return SymTensor3(out)


def t_product_fft(a: SymTensor3, b: SymTensor3) -> SymTensor3:
    """t-product through the DFT along the slice index.

    bcirc matrices are block-diagonalised by the DFT, so the product becomes one
    matrix product per frequency. Real inputs use the half spectrum.
    """
    _check_operands(a, b)
    n_s = a.n_slices
    fa = np.fft.rfft(a.data, axis=0)
    fb = np.fft.rfft(b.data, axis=0)
    out = np.fft.irfft(fa @ fb, n=n_s, axis=0)
    return SymTensor3(out)


def tprod(a: SymTensor3, b: SymTensor3) -> SymTensor3:
    """t-product using the FFT path from THGSP_FFT_MIN_SLICES slices upward."""
    if a.n_slices >= fft_min_slices():
        return t_product_fft(a, b)
    return t_product(a, b)


def to_frequency(t: SymTensor3) -> np.ndarray:
    return np.fft.fft(t.data, axis=0)


def from_frequency(f: np.ndarray, *, scale: float) -> np.ndarray:
    """Inverse transform; the imaginary residue must vanish for real tensors."""
    back = np.fft.ifft(f, axis=0)
    residue = float(np.max(np.abs(back.imag), initial=0.0))
    if residue > IMAG_TOL * max(scale, 1.0):
        raise ConsistencyError(f"imaginary residue {residue:.3e} after inverse transform")
    return back.real


def spectral_radius_bound(a: SymTensor3) -> float:
    """Max over frequencies of the infinity norm of the transform-domain slice."""
    fa = to_frequency(a)
    return float(np.max(np.sum(np.abs(fa), axis=2)))


def t_solve(a: SymTensor3, x: SymTensor3) -> SymTensor3:
    """Solve t_product(a, y) = x frequency by frequency."""
    if a.n_rows != a.n_cols:
        raise ShapeError(f"t_solve needs square slices, got {a.shape}")
    _check_operands(a, x)
    fa = to_frequency(a)
    fx = to_frequency(x)
    conds = np.linalg.cond(fa)
    for f, cond in enumerate(conds):
        if not np.isfinite(cond) or cond > SINGULAR_COND:
            raise SingularSliceError(f, float(cond))
    fy = np.linalg.solve(fa, fx)
    y = SymTensor3(from_frequency(fy, scale=max(x.max_abs(), 1.0)))

    residual = t_product_fft(a, y) - x
    scale = max(x.max_abs(), 1e-300)
    if residual.max_abs() > SOLVE_RTOL * scale and residual.max_abs() > 1e-300:
        raise ConsistencyError(
            f"t_solve residual {residual.max_abs():.3e} exceeds {SOLVE_RTOL:g} * {scale:.3e}"
        )
    return y
