# thgsp/nn/optim.py
from __future__ import annotations

from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from thgsp.errors import CheckpointError


class Adam:
    """Adam with bias-corrected moments, updating a list of weight arrays in place."""

    def __init__(self, lr: float = 0.01, betas: Tuple[float, float] = (0.9, 0.999), eps: float = 1e-8):
        self.lr = float(lr)
        self.beta1, self.beta2 = (float(b) for b in betas)
        self.eps = float(eps)
        self.t = 0
        self.m: List[np.ndarray] = []
        self.v: List[np.ndarray] = []

    def step(self, params: Sequence[np.ndarray], grads: Sequence[np.ndarray]) -> None:
        if len(params) != len(grads):
            raise ValueError(f"{len(params)} params but {len(grads)} gradients")
        if not self.m:
            self.m = [np.zeros_like(p) for p in params]
            self.v = [np.zeros_like(p) for p in params]
        self.t += 1
        bc1 = 1.0 - self.beta1 ** self.t
        bc2 = 1.0 - self.beta2 ** self.t
        for p, g, m, v in zip(params, grads, self.m, self.v):
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * (g * g)
            p -= self.lr * (m / bc1) / (np.sqrt(v / bc2) + self.eps)

    def state_dict(self) -> Dict[str, Any]:
        return {
            "lr": self.lr,
            "betas": [self.beta1, self.beta2],
            "eps": self.eps,
            "t": self.t,
            "m": [a.copy() for a in self.m],
            "v": [a.copy() for a in self.v],
        }

    @classmethod
    def from_state_dict(cls, state: Dict[str, Any], lr: Optional[float] = None) -> "Adam":
        try:
            opt = cls(lr=state["lr"] if lr is None else lr, betas=tuple(state["betas"]), eps=state["eps"])
            opt.t = int(state["t"])
            opt.m = [np.array(a, dtype=float) for a in state["m"]]
            opt.v = [np.array(a, dtype=float) for a in state["v"]]
        except (KeyError, TypeError, ValueError) as e:
            raise CheckpointError(f"malformed optimizer state: {e}") from e
        if len(opt.m) != len(opt.v):
            raise CheckpointError("optimizer moments disagree in length")
        return opt
