from .adjacency import AdjacencySpec, build_adjacency, multinomial_alpha, surjective_indices
from .signal import PooledSignal, SignalSpec, build_signal, pooled_signal, tail_multiplicities
from .shaping import (
    adjacency_tensor,
    flatten_to_slices,
    laplacian,
    shift_operands,
    signal_tensor,
    slice_index,
    slice_sum_adjacency,
    symmetrize,
)

__all__ = [
    "AdjacencySpec",
    "build_adjacency",
    "multinomial_alpha",
    "surjective_indices",
    "SignalSpec",
    "build_signal",
    "PooledSignal",
    "pooled_signal",
    "tail_multiplicities",
    "adjacency_tensor",
    "flatten_to_slices",
    "laplacian",
    "shift_operands",
    "signal_tensor",
    "slice_index",
    "slice_sum_adjacency",
    "symmetrize",
]
