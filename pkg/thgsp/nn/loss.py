# thgsp/nn/loss.py
from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np

from thgsp.errors import DatasetError, ShapeError


def log_softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=1, keepdims=True)
    return z - np.log(np.exp(z).sum(axis=1, keepdims=True))


def _selected(logits: np.ndarray, labels: np.ndarray, mask: np.ndarray) -> np.ndarray:
    if logits.ndim != 2 or logits.shape[0] != labels.shape[0]:
        raise ShapeError(f"logits {logits.shape} do not match {labels.shape[0]} labels")
    idx = np.flatnonzero(mask)
    if idx.size == 0:
        raise DatasetError("loss mask selects no nodes")
    if np.any(labels[idx] < 0) or np.any(labels[idx] >= logits.shape[1]):
        raise DatasetError("masked nodes need labels in [0, num_classes)")
    return idx


def cross_entropy(logits: np.ndarray, labels: np.ndarray, mask: np.ndarray) -> float:
    """Mean softmax cross-entropy over the masked nodes."""
    idx = _selected(logits, labels, mask)
    lp = log_softmax(logits[idx])
    return float(-lp[np.arange(idx.size), labels[idx]].mean())


def cross_entropy_grad(logits: np.ndarray, labels: np.ndarray, mask: np.ndarray) -> np.ndarray:
    idx = _selected(logits, labels, mask)
    grad = np.zeros_like(logits, dtype=float)
    p = np.exp(log_softmax(logits[idx]))
    p[np.arange(idx.size), labels[idx]] -= 1.0
    grad[idx] = p / idx.size
    return grad


def l2_penalty(weights: Iterable[np.ndarray], weight_decay: float) -> float:
    return 0.5 * weight_decay * float(sum(np.sum(w * w) for w in weights))


def loss(
    logits: np.ndarray,
    labels: np.ndarray,
    mask: np.ndarray,
    weights: Optional[Sequence[np.ndarray]] = None,
    weight_decay: float = 0.0,
) -> float:
    """Cross-entropy over ``mask`` plus weight_decay * 1/2 sum ||W||^2."""
    value = cross_entropy(logits, labels, mask)
    if weights is not None and weight_decay:
        value += l2_penalty(weights, weight_decay)
    return value


def accuracy(logits: np.ndarray, labels: np.ndarray, mask: np.ndarray) -> float:
    """Share of masked nodes whose argmax matches the label; nan for an empty mask."""
    idx = np.flatnonzero(mask)
    if idx.size == 0:
        return float("nan")
    return float(np.mean(np.argmax(logits[idx], axis=1) == labels[idx]))
