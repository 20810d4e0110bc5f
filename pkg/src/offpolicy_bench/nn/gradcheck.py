"""Central finite-difference verification of the analytic gradients.

Intended for inputs whose pre-activations sit away from ReLU kinks; at a kink
the subgradient is ambiguous and the comparison is meaningless, so callers
should keep pre-activations at least ~1e-3 from zero.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .net import Mlp, mlp_backward, mlp_forward


def relative_error(analytic: float, numeric: float) -> float:
    return abs(analytic - numeric) / max(1e-12, abs(analytic) + abs(numeric))


def grad_check(
    net: Mlp,
    x: np.ndarray,
    loss_value: Callable[[np.ndarray], float],
    loss_grad: Callable[[np.ndarray], np.ndarray],
    h: float = 1e-5,
) -> float:
    """Compare analytic and central-difference gradients of a scalar loss.

    ``loss_value`` maps the network output to a scalar; ``loss_grad`` returns
    d(loss)/d(output) at the same point.  Returns the maximum over all
    parameters of |analytic - numeric| / max(1e-12, |analytic| + |numeric|).
    A non-finite value anywhere is reported as infinity.
    """
    out, cache = mlp_forward(net, x)
    grads, _ = mlp_backward(net, cache, loss_grad(out))

    worst = 0.0
    tensors = list(zip(net.weights, grads.weights)) + list(zip(net.biases, grads.biases))
    for param, grad in tensors:
        flat_p = param.ravel()
        flat_g = grad.ravel()
        for k in range(flat_p.size):
            orig = flat_p[k]
            flat_p[k] = orig + h
            up = loss_value(mlp_forward(net, x)[0])
            flat_p[k] = orig - h
            down = loss_value(mlp_forward(net, x)[0])
            flat_p[k] = orig
            numeric = (up - down) / (2.0 * h)
            if not (np.isfinite(numeric) and np.isfinite(flat_g[k])):
                return float("inf")
            worst = max(worst, relative_error(flat_g[k], numeric))
    return worst


def squared_error_loss(target: np.ndarray):
    """(value, grad) pair for loss = sum((output - target)^2)."""
    target = np.asarray(target, dtype=np.float64)

    def value(out: np.ndarray) -> float:
        return float(np.sum((out - target) ** 2))

    def grad(out: np.ndarray) -> np.ndarray:
        return 2.0 * (out - target)

    return value, grad
