# thgsp/nn/trainer.py
from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from thgsp.config import ModelConfig, TrainConfig, build_config
from thgsp.errors import TrainingDivergedError
from thgsp.hypergraph.model import SPLITS, Dataset
from thgsp.nn.checkpoint import Checkpoint, restore_rng, rng_state
from thgsp.nn.loss import accuracy
from thgsp.nn.model import Model, Operands, prepare_operands
from thgsp.nn.optim import Adam
from thgsp.observability import audit_log, echo, new_run_id
from thgsp.rng import substream

METRIC_FIELDS = ("epoch", "train_loss", "train_acc", "val_acc")


@dataclass
class EpochMetrics:
    epoch: int
    train_loss: float
    train_acc: float
    val_acc: float


@dataclass
class TrainResult:
    best: Checkpoint
    history: List[EpochMetrics]
    best_epoch: int
    best_val_acc: float
    stopped_early: bool = False


@dataclass
class ProtocolResult:
    seeds: List[int]
    test_accs: List[float]
    runs: List[Dict[str, float]] = field(default_factory=list)

    @property
    def mean(self) -> float:
        return float(np.mean(self.test_accs))

    @property
    def std(self) -> float:
        return float(np.std(self.test_accs))


class Trainer:
    """Full-graph training: one Adam step per epoch on the train mask.

    Metrics of an epoch are measured on the logits computed before that
    epoch's update. The best checkpoint is the one with the highest
    validation accuracy (train accuracy when there is no validation split).
    """

    def __init__(
        self,
        dataset: Dataset,
        model_cfg: ModelConfig,
        train_cfg: TrainConfig,
        *,
        operands: Optional[Operands] = None,
        model: Optional[Model] = None,
        optimizer: Optional[Adam] = None,
        order: Optional[int] = None,
    ):
        self.dataset = dataset
        self.model_cfg = model_cfg
        self.train_cfg = train_cfg
        self.operands = operands or prepare_operands(dataset, model_cfg, order)
        self.model = model or Model(model_cfg)
        self.optimizer = optimizer or Adam(train_cfg.lr, train_cfg.betas, train_cfg.eps)
        self.rng = substream(model_cfg.seed, "train")
        self.epoch = 0
        self.history: List[EpochMetrics] = []
        self.best_val = -np.inf
        self.best_epoch = 0
        self.best_weights = [w.copy() for w in self.model.weights]
        self.stale = 0
        self._select_mask = dataset.val_mask if dataset.val_mask.any() else dataset.train_mask

    def run_epoch(self) -> EpochMetrics:
        ds = self.dataset
        loss, grads, logits = self.model.loss_and_grads(
            self.operands, ds.labels, ds.train_mask, self.train_cfg.weight_decay
        )
        self.epoch += 1
        if not np.isfinite(loss) or not all(np.all(np.isfinite(g)) for g in grads):
            raise TrainingDivergedError(
                self.epoch,
                {
                    "loss": loss,
                    "max_abs_logit": float(np.max(np.abs(logits))),
                    "max_abs_weight": max(float(np.max(np.abs(w))) for w in self.model.weights),
                    "lr": self.train_cfg.lr,
                },
            )
        val_acc = accuracy(logits, ds.labels, ds.val_mask)
        m = EpochMetrics(self.epoch, loss, accuracy(logits, ds.labels, ds.train_mask), val_acc)
        select = accuracy(logits, ds.labels, self._select_mask)
        if select > self.best_val:
            self.best_val = select
            self.best_epoch = self.epoch
            self.best_weights = [w.copy() for w in self.model.weights]
            self.stale = 0
        else:
            self.stale += 1
        self.optimizer.step(self.model.weights, grads)
        self.history.append(m)
        return m

    def should_stop(self) -> bool:
        p = self.train_cfg.patience
        return p is not None and self.stale >= p

    def fit(self, *, verbose: bool = False, log_every: int = 50) -> TrainResult:
        stopped = False
        while self.epoch < self.train_cfg.epochs:
            m = self.run_epoch()
            if verbose and (m.epoch % log_every == 0 or m.epoch == 1):
                echo("train", f"epoch {m.epoch}: loss={m.train_loss:.4f} train_acc={m.train_acc:.3f} val_acc={m.val_acc:.3f}")
            if self.should_stop():
                stopped = True
                break
        return TrainResult(
            best=self.checkpoint(weights=self.best_weights),
            history=list(self.history),
            best_epoch=self.best_epoch,
            best_val_acc=float(self.best_val),
            stopped_early=stopped,
        )

    def checkpoint(self, weights: Optional[Sequence[np.ndarray]] = None) -> Checkpoint:
        """Snapshot for resuming; ``weights`` replaces the current weights (best model)."""
        return Checkpoint(
            model_config=self.model_cfg.model_dump(mode="json"),
            train_config=self.train_cfg.model_dump(mode="json"),
            weights=[w.copy() for w in (weights if weights is not None else self.model.weights)],
            optimizer=self.optimizer.state_dict(),
            epoch=self.epoch,
            rng_state=rng_state(self.rng),
            extra={
                "best_epoch": self.best_epoch,
                "best_val_acc": float(self.best_val) if np.isfinite(self.best_val) else None,
                "stale": self.stale,
            },
        )

    @classmethod
    def from_checkpoint(
        cls,
        ckpt: Checkpoint,
        dataset: Dataset,
        train_cfg: Optional[TrainConfig] = None,
        *,
        operands: Optional[Operands] = None,
        order: Optional[int] = None,
    ) -> "Trainer":
        model_cfg = build_config(ModelConfig, ckpt.model_config)
        if train_cfg is None:
            train_cfg = build_config(TrainConfig, ckpt.train_config)
        t = cls(
            dataset,
            model_cfg,
            train_cfg,
            operands=operands,
            model=Model(model_cfg, ckpt.weights),
            optimizer=Adam.from_state_dict(ckpt.optimizer, lr=train_cfg.lr) if ckpt.optimizer.get("t") else None,
            order=order,
        )
        t.epoch = ckpt.epoch
        t.rng = restore_rng(ckpt.rng_state)
        best = ckpt.extra.get("best_val_acc")
        t.best_val = -np.inf if best is None else float(best)
        t.best_epoch = int(ckpt.extra.get("best_epoch", 0))
        t.stale = int(ckpt.extra.get("stale", 0))
        return t


def train(
    dataset: Dataset,
    model_cfg: ModelConfig,
    train_cfg: TrainConfig,
    *,
    operands: Optional[Operands] = None,
    order: Optional[int] = None,
    verbose: bool = False,
) -> TrainResult:
    return Trainer(dataset, model_cfg, train_cfg, operands=operands, order=order).fit(verbose=verbose)


def evaluate(model: Model, operands: Operands, dataset: Dataset) -> Dict[str, float]:
    """Accuracy on every split (nan for an empty split)."""
    logits = model.logits(operands)
    return {s: accuracy(logits, dataset.labels, dataset.mask(s)) for s in SPLITS}


def _protocol_run(
    dataset: Dataset, model_cfg: ModelConfig, train_cfg: TrainConfig, ops: Operands, seed: int
) -> Dict[str, float]:
    cfg = model_cfg.model_copy(update={"seed": seed})
    res = train(dataset, cfg, train_cfg, operands=ops)
    scores = evaluate(Model(cfg, res.best.weights), ops, dataset)
    peak = max((m.train_acc for m in res.history), default=float("nan"))
    audit_log(
        run_id=new_run_id("protocol"),
        action="train",
        status="ok",
        params={"variant": cfg.variant, "seed": seed, "alpha": cfg.alpha, "K": cfg.K},
        extra={"best_epoch": res.best_epoch, "accuracy": scores},
    )
    return {"seed": seed, **scores, "peak_train": peak}


def run_protocol(
    dataset: Dataset,
    model_cfg: ModelConfig,
    train_cfg: TrainConfig,
    *,
    runs: int,
    base_seed: int = 0,
    operands: Optional[Operands] = None,
    order: Optional[int] = None,
    workers: int = 1,
) -> ProtocolResult:
    """Repeat training with seeds base_seed .. base_seed + runs - 1; report test accuracy.

    Each run is seeded on its own, so ``workers`` threads give the same result
    as a serial loop. ``peak_train`` in a run record is the highest training
    accuracy seen in any epoch.
    """
    ops = operands or prepare_operands(dataset, model_cfg, order)
    seeds = list(range(base_seed, base_seed + runs))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_run = list(pool.map(lambda s: _protocol_run(dataset, model_cfg, train_cfg, ops, s), seeds))
    else:
        per_run = [_protocol_run(dataset, model_cfg, train_cfg, ops, s) for s in seeds]
    return ProtocolResult(seeds=seeds, test_accs=[r["test"] for r in per_run], runs=per_run)


def write_metrics_csv(history: Sequence[EpochMetrics], path: str | Path) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(METRIC_FIELDS)
        for m in history:
            row = asdict(m)
            w.writerow([row["epoch"]] + [f"{row[k]:.6f}" for k in METRIC_FIELDS[1:]])
    return p
