"""Dense feed-forward networks with hand-written reverse-mode gradients.

Networks are plain fully connected stacks: ReLU hidden layers and either an
identity or tanh output head.  Weights are float64 numpy arrays; ``weights[i]``
has shape ``(layer_sizes[i], layer_sizes[i+1])`` so a forward step is
``a @ W + b`` on row vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

IDENTITY = "identity"
TANH = "tanh"
RELU = "relu"

_OUTPUT_ACTIVATIONS = (IDENTITY, TANH)

# Largest double strictly below 1.  Saturated tanh outputs are nudged onto
# +/- this value so a tanh head always stays inside the open interval (-1, 1).
_TANH_LIMIT = np.nextafter(1.0, 0.0)


@dataclass
class Mlp:
    """A fully connected network: sizes, parameters and head activation."""

    layer_sizes: tuple[int, ...]
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    output_activation: str = IDENTITY
    hidden_activation: str = RELU

    @property
    def input_dim(self) -> int:
        return self.layer_sizes[0]

    @property
    def output_dim(self) -> int:
        return self.layer_sizes[-1]

    def parameter_count(self) -> int:
        return sum(w.size for w in self.weights) + sum(b.size for b in self.biases)


@dataclass
class ParamGrads:
    """Gradients shaped exactly like the weights/biases of the source Mlp."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]


@dataclass
class ForwardCache:
    """Per-layer values kept by the forward pass for the backward pass."""

    inputs: np.ndarray                      # network input, shape (n, d_in)
    pre_activations: list[np.ndarray]       # z_l = a_{l-1} @ W_l + b_l
    activations: list[np.ndarray]           # a_l = act(z_l); last entry is the output
    single: bool = field(default=False)     # True when the caller passed a 1-D vector


def mlp_init(layer_sizes, output_activation: str = IDENTITY, seed: int = 0) -> Mlp:
    """Create a network with uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)) weights.

    Biases start at zero.  Two calls with the same arguments produce
    bit-identical parameters.

    Args:
        layer_sizes: (input, hidden..., output) sizes; at least two entries.
        output_activation: "identity" or "tanh".
        seed: seed for the weight generator.
    """
    sizes = tuple(int(s) for s in layer_sizes)
    if len(sizes) < 2:
        raise ValueError(f"need at least input and output layers, got {sizes}")
    if any(s <= 0 for s in sizes):
        raise ValueError(f"layer sizes must be positive, got {sizes}")
    if output_activation not in _OUTPUT_ACTIVATIONS:
        raise ValueError(f"unknown output activation {output_activation!r}")

    rng = np.random.default_rng(seed)
    weights = []
    biases = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        bound = 1.0 / np.sqrt(fan_in)
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return Mlp(sizes, weights, biases, output_activation)


def mlp_copy(net: Mlp) -> Mlp:
    """Deep copy; used to spawn target networks."""
    return Mlp(
        net.layer_sizes,
        [w.copy() for w in net.weights],
        [b.copy() for b in net.biases],
        net.output_activation,
        net.hidden_activation,
    )


def mlp_forward(net: Mlp, x: np.ndarray) -> tuple[np.ndarray, ForwardCache]:
    """Evaluate the network and keep what the backward pass needs.

    Accepts a single input vector of length ``layer_sizes[0]`` or a batch of
    shape ``(n, layer_sizes[0])``; the output matches (vector in, vector out).
    """
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    if single:
        x = x[np.newaxis, :]
    if x.ndim != 2 or x.shape[1] != net.input_dim:
        raise ValueError(
            f"input has shape {x.shape}, network expects (*, {net.input_dim})"
        )

    n_layers = len(net.weights)
    pre = []
    acts = []
    a = x
    for i in range(n_layers):
        z = a @ net.weights[i]
        z += net.biases[i]
        pre.append(z)
        if i < n_layers - 1:
            a = np.maximum(z, 0.0)
        elif net.output_activation == TANH:
            a = np.tanh(z)
            np.clip(a, -_TANH_LIMIT, _TANH_LIMIT, out=a)
        else:
            a = z
        acts.append(a)

    out = acts[-1][0] if single else acts[-1]
    return out, ForwardCache(x, pre, acts, single)


def mlp_backward(
    net: Mlp, cache: ForwardCache, grad_output: np.ndarray
) -> tuple[ParamGrads, np.ndarray]:
    """Exact gradients of sum(output * grad_output) w.r.t. parameters and input.

    ``grad_output`` must match the shape of the forward output produced with
    this cache (per-row for a batch cache).  For a batch, weight and bias
    gradients accumulate over the rows.
    """
    g = np.asarray(grad_output, dtype=np.float64)
    if cache.single:
        g = g[np.newaxis, :]
    n_layers = len(net.weights)
    if len(cache.pre_activations) != n_layers or g.shape != cache.activations[-1].shape:
        raise ValueError("cache does not match this network/grad_output")

    if net.output_activation == TANH:
        a_out = cache.activations[-1]
        g = g * (1.0 - a_out * a_out)

    w_grads: list[np.ndarray] = [None] * n_layers  # type: ignore[list-item]
    b_grads: list[np.ndarray] = [None] * n_layers  # type: ignore[list-item]
    for i in range(n_layers - 1, -1, -1):
        a_prev = cache.activations[i - 1] if i > 0 else cache.inputs
        w_grads[i] = a_prev.T @ g
        b_grads[i] = g.sum(axis=0)
        g = g @ net.weights[i].T
        if i > 0:
            # ReLU subgradient: pass where the pre-activation was positive.
            g *= cache.pre_activations[i - 1] > 0.0

    grad_input = g[0] if cache.single else g
    return ParamGrads(w_grads, b_grads), grad_input


def mlp_input_grad(net: Mlp, cache: ForwardCache, grad_output: np.ndarray) -> np.ndarray:
    """Gradient w.r.t. the input only, skipping all parameter gradients.

    Same chain as :func:`mlp_backward` minus the weight/bias accumulation;
    about half the backward cost.  Used where a network is differentiated
    through (e.g. a frozen critic inside the actor objective).
    """
    g = np.asarray(grad_output, dtype=np.float64)
    if cache.single:
        g = g[np.newaxis, :]
    n_layers = len(net.weights)
    if len(cache.pre_activations) != n_layers or g.shape != cache.activations[-1].shape:
        raise ValueError("cache does not match this network/grad_output")
    if net.output_activation == TANH:
        a_out = cache.activations[-1]
        g = g * (1.0 - a_out * a_out)
    for i in range(n_layers - 1, -1, -1):
        g = g @ net.weights[i].T
        if i > 0:
            g *= cache.pre_activations[i - 1] > 0.0
    return g[0] if cache.single else g


def grads_zeros_like(net: Mlp) -> ParamGrads:
    return ParamGrads(
        [np.zeros_like(w) for w in net.weights],
        [np.zeros_like(b) for b in net.biases],
    )
