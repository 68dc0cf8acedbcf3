from .layers import ACTIVATIONS, lift, propagate, readout, thgcn_forward, thgin_forward, transform
from .loss import accuracy, cross_entropy
from .autograd import ShiftOperator, backward
from .model import Model, Operands, init_weights, prepare_operands, uses_slice_sum
from .optim import Adam
from .checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from .trainer import (
    EpochMetrics,
    ProtocolResult,
    Trainer,
    TrainResult,
    evaluate,
    run_protocol,
    train,
    write_metrics_csv,
)
from .grid import GridResult, GridRow, grid_search, write_grid_csv

__all__ = [
    "ACTIVATIONS",
    "lift",
    "propagate",
    "readout",
    "thgcn_forward",
    "thgin_forward",
    "transform",
    "accuracy",
    "cross_entropy",
    "ShiftOperator",
    "backward",
    "Model",
    "Operands",
    "init_weights",
    "prepare_operands",
    "uses_slice_sum",
    "Adam",
    "Checkpoint",
    "load_checkpoint",
    "save_checkpoint",
    "EpochMetrics",
    "ProtocolResult",
    "Trainer",
    "TrainResult",
    "evaluate",
    "run_protocol",
    "train",
    "write_metrics_csv",
    "GridResult",
    "GridRow",
    "grid_search",
    "write_grid_csv",
]
