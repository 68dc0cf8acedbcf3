# thgsp/denoise/pipeline.py
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from thgsp.builder.shaping import shift_operands, signal_tensor
from thgsp.config import DenoiseConfig
from thgsp.denoise.solver import TraceStep, iterate, iterate_limit, measured_rate
from thgsp.hypergraph.model import Hypergraph
from thgsp.rng import substream
from thgsp.talg.tensor import SymTensor3


@dataclass
class DenoiseResult:
    clean: SymTensor3
    observed: SymTensor3
    denoised: SymTensor3
    trace: List[TraceStep]
    limit_gap: float
    rate: float
    error_observed: Optional[float] = None
    error_denoised: Optional[float] = None
    extra: dict = field(default_factory=dict)

    def summary(self) -> dict:
        return {
            "steps": self.trace[-1].step,
            "final_monitor": self.trace[-1].monitor,
            "final_delta": self.trace[-1].delta,
            "limit_gap": self.limit_gap,
            "measured_rate": self.rate,
            "error_observed": self.error_observed,
            "error_denoised": self.error_denoised,
            **self.extra,
        }


def _rms(a: SymTensor3, b: SymTensor3) -> float:
    return float(np.sqrt(np.mean((a.data - b.data) ** 2)))


def denoise_features(
    g: Hypergraph,
    features: np.ndarray,
    cfg: DenoiseConfig,
    *,
    noise_sigma: float = 0.0,
    seed: int = 0,
    order: Optional[int] = None,
) -> DenoiseResult:
    """Build A_s and X_s, optionally corrupt the features, run the iterative solver.

    Feature columns are independent under the t-product, so all D columns are
    denoised in one pass.
    """
    a_s, clean = shift_operands(g, features, order)
    m = max(g.order, 2) if order is None else order
    observed = clean
    if noise_sigma > 0:
        rng = substream(seed, "denoise-noise")
        noisy = np.asarray(features, dtype=float) + noise_sigma * rng.standard_normal(np.shape(features))
        observed = signal_tensor(noisy, m)
    denoised, trace = iterate(observed, a_s, cfg)
    limit = iterate_limit(observed, a_s, cfg)
    gap = float(np.max(np.abs(denoised.data - limit.data), initial=0.0))
    res = DenoiseResult(
        clean=clean,
        observed=observed,
        denoised=denoised,
        trace=trace,
        limit_gap=gap,
        rate=measured_rate(trace),
        extra={"order": m, "contraction_bound": cfg.contraction_bound},
    )
    if noise_sigma > 0:
        res.error_observed = _rms(observed, clean)
        res.error_denoised = _rms(denoised, clean)
    return res
