# thgsp/nn/grid.py
from __future__ import annotations

import csv
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from thgsp.config import GridConfig, ModelConfig, TrainConfig, build_config
from thgsp.errors import ConfigError
from thgsp.hypergraph.model import Dataset
from thgsp.nn.model import Model, Operands, prepare_operands
from thgsp.nn.trainer import evaluate, train
from thgsp.rng import derive_seed

GRID_FIELDS = ("K", "alpha", "lr", "weight_decay", "hidden", "mean_acc", "std_acc", "n_runs")


@dataclass(frozen=True)
class GridCell:
    K: int
    alpha: float
    lr: float
    weight_decay: float
    hidden: Optional[int]


@dataclass
class GridRow:
    K: int
    alpha: float
    lr: float
    weight_decay: float
    hidden: Optional[int]
    mean_acc: float
    std_acc: float
    n_runs: int
    mean_val_acc: float
    test_accs: List[float]


@dataclass
class GridResult:
    rows: List[GridRow]
    best: GridRow
    best_config: ModelConfig
    best_train_config: TrainConfig


def grid_cells(grid: GridConfig, train_cfg: Optional[TrainConfig] = None) -> List[GridCell]:
    """Cells in sweep order: K outermost, then alpha, lr, weight decay, hidden width."""
    base = train_cfg or TrainConfig()
    axes = itertools.product(
        grid.Ks,
        grid.alphas,
        grid.lrs or [base.lr],
        grid.weight_decays or [base.weight_decay],
        grid.hiddens or [None],
    )
    return [GridCell(*values) for values in axes]


def with_hidden(layer_dims: Sequence[int], hidden: Optional[int]) -> List[int]:
    """Set every hidden layer to ``hidden`` units; a model without one gains one."""
    dims = list(layer_dims)
    if hidden is None:
        return dims
    return [dims[0], *([hidden] * max(1, len(dims) - 2)), dims[-1]]


def _cell_configs(base: ModelConfig, train_cfg: TrainConfig, cell: GridCell) -> Tuple[ModelConfig, TrainConfig]:
    model_cfg = build_config(
        ModelConfig,
        {
            **base.model_dump(),
            "K": cell.K,
            "alpha": cell.alpha,
            "layer_dims": with_hidden(base.layer_dims, cell.hidden),
        },
    )
    tcfg = build_config(TrainConfig, {**train_cfg.model_dump(), "lr": cell.lr, "weight_decay": cell.weight_decay})
    return model_cfg, tcfg


def _run_cell(
    dataset: Dataset,
    base: ModelConfig,
    train_cfg: TrainConfig,
    ops: Operands,
    grid: GridConfig,
    cell_idx: int,
    cell: GridCell,
) -> GridRow:
    model_cfg, tcfg = _cell_configs(base, train_cfg, cell)
    tests: List[float] = []
    vals: List[float] = []
    for r in range(grid.repeats):
        cfg = model_cfg.model_copy(update={"seed": derive_seed(grid.seed, cell_idx, r)})
        res = train(dataset, cfg, tcfg, operands=ops)
        scores = evaluate(Model(cfg, res.best.weights), ops, dataset)
        tests.append(scores["test"])
        vals.append(scores["val"])
    return GridRow(
        K=cell.K,
        alpha=cell.alpha,
        lr=cell.lr,
        weight_decay=cell.weight_decay,
        hidden=cell.hidden,
        mean_acc=float(np.mean(tests)),
        std_acc=float(np.std(tests)),
        n_runs=grid.repeats,
        mean_val_acc=float(np.mean(vals)),
        test_accs=tests,
    )


def grid_search(
    dataset: Dataset,
    grid: GridConfig,
    model_cfg: ModelConfig,
    train_cfg: TrainConfig,
    *,
    operands: Optional[Operands] = None,
    order: Optional[int] = None,
) -> GridResult:
    """Exhaustive sweep over the grid axes with ``grid.repeats`` seeded runs per cell.

    Each run's seed is derived from (grid seed, cell index, repeat), so cells
    can run on any number of workers without changing the table. The best cell
    has the highest mean validation accuracy; ties keep the first cell.
    """
    if model_cfg.variant not in ("thgin", "clique"):
        raise ConfigError(f"grid search over K and alpha needs variant thgin or clique, got {model_cfg.variant}")
    # operands do not depend on K, alpha, the optimiser or layer widths
    ops = operands or prepare_operands(dataset, model_cfg, order)
    cells = grid_cells(grid, train_cfg)
    args = [(dataset, model_cfg, train_cfg, ops, grid, i, cell) for i, cell in enumerate(cells)]
    if grid.workers > 1:
        with ThreadPoolExecutor(max_workers=grid.workers) as pool:
            rows = list(pool.map(lambda a: _run_cell(*a), args))
    else:
        rows = [_run_cell(*a) for a in args]

    def _score(row: GridRow) -> float:
        return -np.inf if np.isnan(row.mean_val_acc) else row.mean_val_acc

    best = max(rows, key=_score)
    best_cfg, best_train = _cell_configs(
        model_cfg, train_cfg, GridCell(best.K, best.alpha, best.lr, best.weight_decay, best.hidden)
    )
    return GridResult(rows=rows, best=best, best_config=best_cfg, best_train_config=best_train)


def write_grid_csv(rows: Sequence[GridRow], path: str | Path) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(GRID_FIELDS)
        for r in rows:
            w.writerow(
                [
                    r.K,
                    f"{r.alpha:g}",
                    f"{r.lr:g}",
                    f"{r.weight_decay:g}",
                    "" if r.hidden is None else r.hidden,
                    f"{r.mean_acc:.6f}",
                    f"{r.std_acc:.6f}",
                    r.n_runs,
                ]
            )
    return p
