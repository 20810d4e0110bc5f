"""Minimal dense network engine: forward, exact backward, Adam, grad checks."""

from .gradcheck import grad_check, relative_error, squared_error_loss
from .net import (
    IDENTITY,
    RELU,
    TANH,
    ForwardCache,
    Mlp,
    ParamGrads,
    grads_zeros_like,
    mlp_backward,
    mlp_copy,
    mlp_forward,
    mlp_init,
)
from .optim import AdamState, adam_init, adam_step
from .snapshot import (
    SnapshotError,
    dump_mlp_bytes,
    load_mlp,
    load_mlp_bytes,
    save_mlp,
)

__all__ = [
    "IDENTITY",
    "RELU",
    "TANH",
    "AdamState",
    "ForwardCache",
    "Mlp",
    "ParamGrads",
    "SnapshotError",
    "adam_init",
    "adam_step",
    "dump_mlp_bytes",
    "grad_check",
    "grads_zeros_like",
    "load_mlp",
    "load_mlp_bytes",
    "mlp_backward",
    "mlp_copy",
    "mlp_forward",
    "mlp_init",
    "relative_error",
    "save_mlp",
    "squared_error_loss",
]
