"""Adam optimizer over Mlp parameters, updating in place."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .net import Mlp, ParamGrads


@dataclass
class AdamState:
    """First/second moment buffers shaped like the tracked network."""

    m_weights: list[np.ndarray]
    m_biases: list[np.ndarray]
    v_weights: list[np.ndarray]
    v_biases: list[np.ndarray]
    step_count: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    # scratch buffers, reused every step to avoid reallocating
    _tmp_weights: list[np.ndarray] = field(default_factory=list, repr=False)
    _tmp_biases: list[np.ndarray] = field(default_factory=list, repr=False)


def adam_init(net: Mlp, beta1: float = 0.9, beta2: float = 0.999,
              epsilon: float = 1e-8) -> AdamState:
    return AdamState(
        m_weights=[np.zeros_like(w) for w in net.weights],
        m_biases=[np.zeros_like(b) for b in net.biases],
        v_weights=[np.zeros_like(w) for w in net.weights],
        v_biases=[np.zeros_like(b) for b in net.biases],
        beta1=beta1,
        beta2=beta2,
        epsilon=epsilon,
        _tmp_weights=[np.empty_like(w) for w in net.weights],
        _tmp_biases=[np.empty_like(b) for b in net.biases],
    )


def _check_finite(arrays) -> None:
    for a in arrays:
        # A non-finite entry poisons the sum, so one reduction per array
        # suffices instead of a full isfinite scan.
        if not np.isfinite(a.sum()):
            raise ValueError("non-finite gradient")


def adam_step(net: Mlp, grads: ParamGrads, state: AdamState, learning_rate: float) -> None:
    """One bias-corrected Adam update on every weight and bias of ``net``.

    Mutates ``net`` and ``state``.  Rejects non-finite gradients before
    touching any buffer, so a failed call leaves both unchanged.
    """
    if len(grads.weights) != len(net.weights):
        raise ValueError("gradient/network layer count mismatch")
    for g, w in zip(grads.weights, net.weights):
        if g.shape != w.shape:
            raise ValueError(f"weight gradient shape {g.shape} != {w.shape}")
    for g, b in zip(grads.biases, net.biases):
        if g.shape != b.shape:
            raise ValueError(f"bias gradient shape {g.shape} != {b.shape}")
    _check_finite(grads.weights)
    _check_finite(grads.biases)

    state.step_count += 1
    t = state.step_count
    b1, b2 = state.beta1, state.beta2
    # Folding both bias corrections into the step size gives the canonical
    # update  p -= lr * mhat / (sqrt(vhat) + eps)  with fewer passes:
    #   p -= alpha_t * m / (sqrt(v) + eps * sqrt(1 - b2^t))
    corr2 = np.sqrt(1.0 - b2**t)
    alpha = learning_rate * corr2 / (1.0 - b1**t)
    eps_t = state.epsilon * corr2

    params = list(zip(net.weights, grads.weights, state.m_weights,
                      state.v_weights, state._tmp_weights))
    params += list(zip(net.biases, grads.biases, state.m_biases,
                       state.v_biases, state._tmp_biases))
    for p, g, m, v, tmp in params:
        # m += (1-b1) * (g - m);  v += (1-b2) * (g^2 - v); allocation free
        np.subtract(g, m, out=tmp)
        tmp *= 1.0 - b1
        m += tmp
        np.square(g, out=tmp)
        tmp -= v
        tmp *= 1.0 - b2
        v += tmp
        np.sqrt(v, out=tmp)
        tmp += eps_t
        np.divide(m, tmp, out=tmp)
        tmp *= alpha
        p -= tmp
