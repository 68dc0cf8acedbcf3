# thgsp/nn/model.py
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from thgsp.builder.adjacency import build_adjacency
from thgsp.builder.shaping import shift_operands, slice_sum_adjacency
from thgsp.builder.signal import pooled_signal
from thgsp.config import ModelConfig
from thgsp.errors import ShapeError
from thgsp.hypergraph.model import Dataset, clique_operator
from thgsp.nn import autograd as ag
from thgsp.rng import substream

# How the operands are laid out:
#   dense      N x D features, one-slice operator (mlp, clique)
#   tensor     full (N_s, N, D) symmetrized signal, (N_s, N, N) operator
#   slice_sum  halved distinct data-slice rows (R, D) pooled onto N nodes,
#              summed adjacency N x N
MODES = ("dense", "tensor", "slice_sum")


@dataclass
class Operands:
    """Model inputs derived once per dataset and shared across runs."""

    variant: str
    mode: str
    x: np.ndarray
    op: Optional[ag.ShiftOperator]
    order: int
    pooling: Optional[ag.RowPooling] = None

    @property
    def n_nodes(self) -> int:
        if self.pooling is not None:
            return self.pooling.n_nodes
        return self.x.shape[-2]

    @property
    def n_features(self) -> int:
        return self.x.shape[-1]


def uses_slice_sum(cfg: ModelConfig) -> bool:
    """True when the exact slice-sum path can stand in for the tensor path."""
    return (
        cfg.variant in ("thgcn", "thgin")
        and cfg.readout == "slice_sum"
        and not cfg.stacked
        and not cfg.tensor_path
    )


def prepare_operands(dataset: Dataset, cfg: ModelConfig, order: Optional[int] = None) -> Operands:
    g, x = dataset.graph, dataset.features
    m = max(g.order, 2) if order is None else int(order)
    if cfg.variant == "mlp":
        return Operands(cfg.variant, "dense", x, None, m)
    if cfg.variant == "clique":
        return Operands(cfg.variant, "dense", x, ag.ShiftOperator(clique_operator(g)), m)
    if uses_slice_sum(cfg):
        # slice_sum(A_s * Y) = slice_sum(A_s) . slice_sum(Y), and the reflected
        # half of a symmetrized signal repeats the first half. Data slices share
        # rows across permuted tails, so each distinct row is transformed once.
        abar = slice_sum_adjacency(build_adjacency(g, m))
        pooled = pooled_signal(x, m)
        pooling = ag.RowPooling(pooled.members, pooled.weights, pooled.num_nodes)
        return Operands(cfg.variant, "slice_sum", 0.5 * pooled.rows, ag.ShiftOperator(abar), m, pooling)
    a_s, x_s = shift_operands(g, x, m)
    return Operands(cfg.variant, "tensor", x_s.data, ag.ShiftOperator(a_s.data), m)


def init_weights(cfg: ModelConfig) -> List[np.ndarray]:
    """Uniform(-s, s), s = sqrt(6 / (D_in + D_out)), from the run seed."""
    rng = substream(cfg.seed, "init")
    out = []
    for d_in, d_out in zip(cfg.layer_dims[:-1], cfg.layer_dims[1:]):
        s = np.sqrt(6.0 / (d_in + d_out))
        out.append(rng.uniform(-s, s, size=(d_in, d_out)))
    return out


class Model:
    def __init__(self, cfg: ModelConfig, weights: Optional[Sequence[np.ndarray]] = None):
        self.cfg = cfg
        if weights is None:
            self.weights = init_weights(cfg)
        else:
            self.weights = [np.array(w, dtype=float) for w in weights]
            expected = list(zip(cfg.layer_dims[:-1], cfg.layer_dims[1:]))
            got = [w.shape for w in self.weights]
            if got != expected:
                raise ShapeError(f"weight shapes {got} do not match layer_dims {cfg.layer_dims}")

    def _check(self, ops: Operands) -> None:
        if ops.variant != self.cfg.variant:
            raise ShapeError(f"operands prepared for {ops.variant}, model is {self.cfg.variant}")
        if ops.n_features != self.cfg.layer_dims[0]:
            raise ShapeError(f"{ops.n_features} input features, model expects {self.cfg.layer_dims[0]}")

    def _propagate(self, op: ag.ShiftOperator, h: ag.Node) -> ag.Node:
        alpha, K = self.cfg.alpha, self.cfg.K
        anchored = ag.scale(h, alpha)
        y = h
        for _ in range(K):
            mixed = ag.scale(ag.shift(op, y), 1.0 - alpha)
            y = mixed if alpha == 0.0 else ag.add(anchored, mixed)
        return y

    def _readout(self, y: ag.Node) -> ag.Node:
        if self.cfg.readout == "leading_slice" and y.shape[0] > 1:
            return ag.scale(ag.take_slice(y, 1), 2.0)
        return ag.slice_sum(y)

    def forward(self, ops: Operands) -> Tuple[ag.Node, List[ag.Node]]:
        """Record the forward pass; returns the logits node and the weight leaves."""
        self._check(ops)
        params = [ag.param(w) for w in self.weights]
        act = self.cfg.activation
        h = ag.constant(ops.x)

        if self.cfg.stacked:
            for i, p in enumerate(params):
                h = ag.shift(ops.op, ag.matmul(h, p))
                if i < len(params) - 1:
                    h = ag.activate(h, act)
            return self._readout(h), params

        for i, p in enumerate(params):
            h = ag.matmul(h, p)
            if i < len(params) - 1:
                h = ag.activate(h, act)
        if ops.mode == "slice_sum":
            h = ag.scale(ag.pool(ops.pooling, h), 2.0)
        if ops.op is not None:
            h = self._propagate(ops.op, h)
        if ops.mode == "tensor":
            h = self._readout(h)
        return h, params

    def logits(self, ops: Operands) -> np.ndarray:
        out, _ = self.forward(ops)
        return out.value

    def predict(self, ops: Operands) -> np.ndarray:
        return np.argmax(self.logits(ops), axis=1)

    def loss_and_grads(
        self,
        ops: Operands,
        labels: np.ndarray,
        mask: np.ndarray,
        weight_decay: float = 0.0,
    ) -> Tuple[float, List[np.ndarray], np.ndarray]:
        """Loss, one gradient per weight matrix, and the logits of this pass."""
        logits, params = self.forward(ops)
        total = ag.cross_entropy(logits, labels, mask)
        if weight_decay:
            total = ag.add(total, ag.l2_penalty(params, weight_decay))
        ag.backward(total)
        grads = [p.grad if p.grad is not None else np.zeros_like(p.value) for p in params]
        return float(total.value), grads, logits.value
