from .tensor import (
    SymTensor3,
    Tube,
    bcirc,
    fold,
    has_reflection,
    identity_tensor,
    t_transpose,
    unfold,
    zeros,
)
from .product import spectral_radius_bound, t_product, t_product_fft, t_solve, tprod
from .io import dump_tensor, load_tensor, tensor_from_dict, tensor_to_dict

__all__ = [
    "SymTensor3",
    "Tube",
    "bcirc",
    "fold",
    "has_reflection",
    "identity_tensor",
    "t_transpose",
    "unfold",
    "zeros",
    "spectral_radius_bound",
    "t_product",
    "t_product_fft",
    "t_solve",
    "tprod",
    "dump_tensor",
    "load_tensor",
    "tensor_from_dict",
    "tensor_to_dict",
]
