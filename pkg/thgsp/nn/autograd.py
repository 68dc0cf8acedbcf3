# thgsp/nn/autograd.py
from __future__ import annotations

from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from thgsp.config import fft_min_slices
from thgsp.errors import ShapeError
from thgsp.nn.loss import cross_entropy as _cross_entropy
from thgsp.nn.loss import cross_entropy_grad as _cross_entropy_grad
from thgsp.nn.loss import l2_penalty as _l2_penalty
from thgsp.nn.layers import ACTIVATIONS
from thgsp.talg.product import t_product
from thgsp.talg.tensor import SymTensor3, t_transpose

Grads = Sequence[Optional[np.ndarray]]


class Node:
    """One value on the tape plus the rule that sends its gradient to its parents."""

    __slots__ = ("value", "grad", "parents", "backward_fn", "requires_grad")

    def __init__(
        self,
        value: np.ndarray,
        parents: Tuple["Node", ...] = (),
        backward_fn: Optional[Callable[[np.ndarray], Grads]] = None,
        requires_grad: Optional[bool] = None,
    ):
        self.value = value
        self.grad: Optional[np.ndarray] = None
        self.parents = parents
        self.backward_fn = backward_fn
        if requires_grad is None:
            requires_grad = any(p.requires_grad for p in parents)
        self.requires_grad = requires_grad

    @property
    def shape(self) -> Tuple[int, ...]:
        return np.shape(self.value)


def param(value: np.ndarray) -> Node:
    return Node(np.asarray(value, dtype=float), requires_grad=True)


def constant(value: np.ndarray) -> Node:
    return Node(np.asarray(value, dtype=float), requires_grad=False)


def _toposort(root: Node) -> List[Node]:
    order: List[Node] = []
    seen = set()
    stack: List[Tuple[Node, bool]] = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for p in node.parents:
            if p.requires_grad and id(p) not in seen:
                stack.append((p, False))
    return order


def backward(root: Node, grad: Optional[np.ndarray] = None) -> None:
    """Accumulate d(root)/d(node) into ``node.grad`` for every node that needs it."""
    root.grad = np.ones_like(root.value) if grad is None else np.asarray(grad, dtype=float)
    for node in reversed(_toposort(root)):
        if node.grad is None or node.backward_fn is None:
            continue
        for p, g in zip(node.parents, node.backward_fn(node.grad)):
            if g is None or not p.requires_grad:
                continue
            p.grad = g if p.grad is None else p.grad + g


# ---------------- shifting operator ----------------

class ShiftOperator:
    """Y -> A * Y for a fixed A, with the adjoint G -> A^T * G.

    ``matrix`` is either an N x N matrix (one-slice operator) or a slice-major
    (N_s, N, N) tensor. The transform of A is computed once and reused.
    """

    def __init__(self, matrix: np.ndarray):
        a = np.asarray(matrix, dtype=float)
        if a.ndim not in (2, 3) or a.shape[-1] != a.shape[-2]:
            raise ShapeError(f"shift operator needs square slices, got shape {a.shape}")
        self.matrix = a
        self._fa: Optional[np.ndarray] = None
        if a.ndim == 3 and a.shape[0] >= fft_min_slices():
            self._fa = np.fft.rfft(a, axis=0)

    @property
    def n_nodes(self) -> int:
        return self.matrix.shape[-1]

    @property
    def n_slices(self) -> int:
        return 1 if self.matrix.ndim == 2 else self.matrix.shape[0]

    def _check(self, y: np.ndarray) -> None:
        if y.ndim != self.matrix.ndim or y.shape[-2] != self.n_nodes:
            raise ShapeError(f"operator {self.matrix.shape} does not act on {y.shape}")
        if y.ndim == 3 and y.shape[0] != self.matrix.shape[0]:
            raise ShapeError(f"slice counts differ: {self.matrix.shape[0]} vs {y.shape[0]}")

    def apply(self, y: np.ndarray) -> np.ndarray:
        self._check(y)
        if self.matrix.ndim == 2:
            return self.matrix @ y
        if self._fa is not None:
            return np.fft.irfft(self._fa @ np.fft.rfft(y, axis=0), n=self.n_slices, axis=0)
        return t_product(SymTensor3(self.matrix), SymTensor3(y)).data

    def adjoint(self, g: np.ndarray) -> np.ndarray:
        self._check(g)
        if self.matrix.ndim == 2:
            return self.matrix.T @ g
        if self._fa is not None:
            fa_t = np.conj(self._fa).transpose(0, 2, 1)
            return np.fft.irfft(fa_t @ np.fft.rfft(g, axis=0), n=self.n_slices, axis=0)
        return t_product(t_transpose(SymTensor3(self.matrix)), SymTensor3(g)).data


class RowPooling:
    """H -> per-node sums of weighted distinct rows, and its adjoint.

    ``members`` (R x W) lists the nodes each row contributes to, one column per
    position; ``weights`` (R,) scales a row's contribution at every position.
    """

    def __init__(self, members: np.ndarray, weights: np.ndarray, n_nodes: int):
        self.members = np.asarray(members, dtype=np.intp)
        self.weights = np.asarray(weights, dtype=float)
        if self.members.ndim != 2 or self.weights.shape != (self.members.shape[0],):
            raise ShapeError(
                f"pooling needs R x W members and R weights, got {self.members.shape}, {self.weights.shape}"
            )
        self.n_nodes = int(n_nodes)

    @property
    def n_rows(self) -> int:
        return self.members.shape[0]

    def apply(self, h: np.ndarray) -> np.ndarray:
        if h.ndim != 2 or h.shape[0] != self.n_rows:
            raise ShapeError(f"pooling over {self.n_rows} rows does not act on {h.shape}")
        weighted = self.weights[:, None] * h
        out = np.zeros((self.n_nodes, h.shape[1]))
        for t in range(self.members.shape[1]):
            np.add.at(out, self.members[:, t], weighted)
        return out

    def adjoint(self, g: np.ndarray) -> np.ndarray:
        gathered = g[self.members[:, 0]].copy()
        for t in range(1, self.members.shape[1]):
            gathered += g[self.members[:, t]]
        return self.weights[:, None] * gathered


# ---------------- ops ----------------

def matmul(h: Node, w: Node) -> Node:
    """Slice-shared linear map: every trailing N x D block times W."""
    if h.shape[-1] != w.shape[0]:
        raise ShapeError(f"input dim {h.shape[-1]} does not match weight {w.shape}")
    hv, wv = h.value, w.value

    def _back(g: np.ndarray) -> Grads:
        gh = g @ wv.T if h.requires_grad else None
        gw = hv.reshape(-1, hv.shape[-1]).T @ g.reshape(-1, g.shape[-1])
        return gh, gw

    return Node(hv @ wv, (h, w), _back)


def activate(h: Node, name: str) -> Node:
    z = h.value
    y = ACTIVATIONS[name](z)

    def _back(g: np.ndarray) -> Grads:
        if name == "relu":
            return (g * (z > 0),)
        if name == "tanh":
            return (g * (1.0 - y * y),)
        return (g,)

    return Node(y, (h,), _back)


def shift(op: ShiftOperator, h: Node) -> Node:
    return Node(op.apply(h.value), (h,), lambda g: (op.adjoint(g),))


def scale(h: Node, c: float) -> Node:
    return Node(c * h.value, (h,), lambda g: (c * g,))


def add(a: Node, b: Node) -> Node:
    return Node(a.value + b.value, (a, b), lambda g: (g, g))


def slice_sum(h: Node) -> Node:
    shape = h.shape
    return Node(h.value.sum(axis=0), (h,), lambda g: (np.broadcast_to(g, shape),))


def take_slice(h: Node, k: int) -> Node:
    shape = h.shape

    def _back(g: np.ndarray) -> Grads:
        out = np.zeros(shape)
        out[k] = g
        return (out,)

    return Node(h.value[k], (h,), _back)


def cross_entropy(logits: Node, labels: np.ndarray, mask: np.ndarray) -> Node:
    value = _cross_entropy(logits.value, labels, mask)
    return Node(
        np.asarray(value),
        (logits,),
        lambda g: (g * _cross_entropy_grad(logits.value, labels, mask),),
    )


def l2_penalty(params: Sequence[Node], weight_decay: float) -> Node:
    value = _l2_penalty([p.value for p in params], weight_decay)
    return Node(
        np.asarray(value),
        tuple(params),
        lambda g: tuple(weight_decay * g * p.value for p in params),
    )


def pool(op: RowPooling, h: Node) -> Node:
    return Node(op.apply(h.value), (h,), lambda g: (op.adjoint(g),))
