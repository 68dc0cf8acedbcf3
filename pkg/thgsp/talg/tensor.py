# thgsp/talg/tensor.py
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from thgsp.errors import ShapeError


@dataclass(frozen=True, eq=False)
class SymTensor3:
    """Third-order tensor stored slice-major: ``data[k]`` is frontal slice k+1.

    ``data`` has shape (n_slices, n_rows, n_cols) and n_slices is odd.
    ``symmetrized`` marks the layout produced by ``builder.symmetrize``:
    slice 1 is zero and slice k+1 equals slice N_s-k+1.
    """

    data: np.ndarray
    symmetrized: bool = False

    def __post_init__(self) -> None:
        arr = np.array(self.data, dtype=float)
        if arr.ndim != 3:
            raise ShapeError(f"expected a (n_slices, n_rows, n_cols) array, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[0] % 2 == 0:
            raise ShapeError(f"n_slices must be odd and >= 1, got {arr.shape[0]}")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)
        scale = float(np.max(np.abs(arr), initial=1.0))
        if self.symmetrized and not has_reflection(arr, zero_first=True, atol=1e-12 * scale):
            raise ShapeError("tensor flagged symmetrized violates the reflection layout")

    @property
    def n_rows(self) -> int:
        return self.data.shape[1]

    @property
    def n_cols(self) -> int:
        return self.data.shape[2]

    @property
    def n_slices(self) -> int:
        return self.data.shape[0]

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.n_rows, self.n_cols, self.n_slices)

    def slice(self, k: int) -> np.ndarray:
        """Frontal slice ``k`` (1-based, as in the t-algebra literature)."""
        return self.data[k - 1]

    def __add__(self, other: "SymTensor3") -> "SymTensor3":
        _same_shape(self, other)
        return SymTensor3(self.data + other.data, self.symmetrized and other.symmetrized)

    def __sub__(self, other: "SymTensor3") -> "SymTensor3":
        _same_shape(self, other)
        return SymTensor3(self.data - other.data, self.symmetrized and other.symmetrized)

    def __mul__(self, scalar: float) -> "SymTensor3":
        return SymTensor3(self.data * float(scalar), self.symmetrized)

    __rmul__ = __mul__

    def __neg__(self) -> "SymTensor3":
        return self * -1.0

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.data))) if self.data.size else 0.0

    def allclose(self, other: "SymTensor3", atol: float = 1e-10) -> bool:
        return self.shape == other.shape and bool(np.max(np.abs(self.data - other.data), initial=0.0) <= atol)


@dataclass(frozen=True, eq=False)
class Tube:
    """A 1 x 1 x N_s tensor, the scalar-like object of the t-algebra."""

    values: np.ndarray = field(default_factory=lambda: np.zeros(1))

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=float).reshape(-1)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.shape[0]

    def __add__(self, other: "Tube") -> "Tube":
        return Tube(self.values + other.values)

    @property
    def leading(self) -> float:
        return float(self.values[0])

    @property
    def monitor(self) -> float:
        """Entry 1 plus the remaining entries: the total of the leading block column.

        Logging aid only; the tube itself is the objective value.
        """
        return float(self.values[0] + np.sum(self.values[1:]))

    @classmethod
    def from_tensor(cls, t: SymTensor3) -> "Tube":
        if t.n_rows != 1 or t.n_cols != 1:
            raise ShapeError(f"a tube is 1 x 1 x N_s, got {t.shape}")
        return cls(t.data[:, 0, 0])

    def to_tensor(self) -> SymTensor3:
        return SymTensor3(self.values.reshape(-1, 1, 1))


def has_reflection(arr: np.ndarray, *, zero_first: bool = False, atol: float = 0.0) -> bool:
    """True when slice k equals slice N_s-k for k = 1..N_s-1 (0-based)."""
    n_s = arr.shape[0]
    if zero_first and np.max(np.abs(arr[0]), initial=0.0) > atol:
        return False
    if n_s == 1:
        return True
    mirrored = arr[:0:-1]
    return bool(np.max(np.abs(arr[1:] - mirrored), initial=0.0) <= atol)


def _same_shape(a: SymTensor3, b: SymTensor3) -> None:
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")


def zeros(n_rows: int, n_cols: int, n_slices: int) -> SymTensor3:
    return SymTensor3(np.zeros((n_slices, n_rows, n_cols)))


def identity_tensor(n: int, n_slices: int) -> SymTensor3:
    data = np.zeros((n_slices, n, n))
    data[0] = np.eye(n)
    return SymTensor3(data)


def unfold(t: SymTensor3) -> np.ndarray:
    """Stack the frontal slices vertically into an (N_s*N) x C matrix."""
    return t.data.reshape(t.n_slices * t.n_rows, t.n_cols).copy()


def fold(m: np.ndarray, n_rows: int, n_slices: int) -> SymTensor3:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2:
        raise ShapeError(f"fold expects a matrix, got shape {m.shape}")
    if n_slices < 1 or m.shape[0] % n_slices != 0:
        raise ShapeError(f"{m.shape[0]} rows are not divisible by n_slices={n_slices}")
    if m.shape[0] != n_rows * n_slices:
        raise ShapeError(f"{m.shape[0]} rows do not match n_rows*n_slices={n_rows * n_slices}")
    return SymTensor3(m.reshape(n_slices, n_rows, m.shape[1]).copy())


def bcirc(t: SymTensor3) -> np.ndarray:
    """Block-circulant matrix; block (i, j) is slice (i - j) mod N_s.

    Materialises (N_s*N) x (N_s*C) entries; intended for tests and small oracles.
    """
    n_s, n, c = t.data.shape
    out = np.empty((n_s * n, n_s * c))
    for i in range(n_s):
        for j in range(n_s):
            out[i * n:(i + 1) * n, j * c:(j + 1) * c] = t.data[(i - j) % n_s]
    return out


def t_transpose(t: SymTensor3) -> SymTensor3:
    """Transpose every slice, keep slice 1, reverse slices 2..N_s."""
    order = (-np.arange(t.n_slices)) % t.n_slices
    return SymTensor3(np.transpose(t.data[order], (0, 2, 1)), t.symmetrized)
