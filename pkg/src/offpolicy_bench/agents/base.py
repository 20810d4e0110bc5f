"""Shared agent configuration and actor-critic plumbing."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..nn import (
    IDENTITY,
    AdamState,
    Mlp,
    adam_init,
    adam_step,
    mlp_backward,
    mlp_copy,
    mlp_forward,
    mlp_init,
)
from ..replay import ReplayBuffer, TransitionBatch

DDPG = "ddpg"
TD3 = "td3"
SAC = "sac"
ALGORITHMS = (DDPG, TD3, SAC)


@dataclass
class AgentConfig:
    """Hyperparameters shared by the three learners.

    Defaults follow the benchmark setup: discount 0.98, learning rate 1e-4
    for actor and critic, polyak mixing 0.05, Gaussian exploration noise,
    TD3 smoothing noise 0.2 clipped at 0.5 with a 2:1 critic:actor cadence,
    and a fixed SAC entropy coefficient.
    """

    gamma: float = 0.98
    actor_lr: float = 1e-4
    critic_lr: float = 1e-4
    polyak_rho: float = 0.05
    exploration_noise_std: float = 0.1
    td3_target_noise_std: float = 0.2
    td3_target_noise_clip: float = 0.5
    td3_policy_delay: int = 2
    sac_entropy_alpha: float = 0.2
    batch_size: int = 128
    updates_per_episode: int = 50
    actor_layers: tuple[int, ...] = (256, 256, 256)
    critic_layers: tuple[int, ...] = (256, 256, 256)

    def __post_init__(self):
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError("gamma must lie in (0, 1]")
        if not 0.0 < self.polyak_rho < 1.0:
            raise ValueError("polyak_rho must lie in (0, 1)")
        for name in ("exploration_noise_std", "td3_target_noise_std",
                     "td3_target_noise_clip", "sac_entropy_alpha"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be non-negative")
        if self.td3_policy_delay < 1:
            raise ValueError("td3_policy_delay must be at least 1")
        if self.batch_size < 1 or self.updates_per_episode < 0:
            raise ValueError("batch_size/updates_per_episode out of range")
        self.actor_layers = tuple(int(v) for v in self.actor_layers)
        self.critic_layers = tuple(int(v) for v in self.critic_layers)


def default_agent_config(algorithm: str, **overrides) -> AgentConfig:
    """Per-algorithm defaults: 3x256 networks for DDPG/TD3, 2x256 for SAC."""
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}, expected one of {ALGORITHMS}")
    kwargs = {}
    if algorithm == SAC:
        kwargs["actor_layers"] = (256, 256)
        kwargs["critic_layers"] = (256, 256)
    kwargs.update(overrides)
    return AgentConfig(**kwargs)


def polyak_update(target: Mlp, online: Mlp, rho: float) -> None:
    """In-place blend: target <- (1 - rho) * target + rho * online."""
    if target.layer_sizes != online.layer_sizes:
        raise ValueError("target/online network shapes differ")
    if not 0.0 < rho < 1.0:
        raise ValueError("rho must lie in (0, 1)")
    keep = 1.0 - rho
    for t, o in zip(target.weights, online.weights):
        t *= keep
        t += rho * o
    for t, o in zip(target.biases, online.biases):
        t *= keep
        t += rho * o


def critic_input(states: np.ndarray, actions: np.ndarray) -> np.ndarray:
    """Critics read the state with the action appended at the input layer."""
    return np.concatenate([states, actions], axis=-1)


def critic_values(critic: Mlp, states: np.ndarray, actions: np.ndarray) -> np.ndarray:
    out, _ = mlp_forward(critic, critic_input(states, actions))
    return out[:, 0]


class ActorCriticAgent:
    """Machinery common to DDPG, TD3 and SAC.

    A single instance is not safe for concurrent training; snapshot the
    parameters first if something else needs to read them.
    """

    algorithm = "base"

    def __init__(self, state_dim: int, action_dim: int, config: AgentConfig, seed: int):
        self.state_dim = int(state_dim)
        self.action_dim = int(action_dim)
        self.config = config
        self.seed = int(seed)
        # well-separated child seeds for the individual networks
        self._net_seeds = [int(s) for s in
                           np.random.SeedSequence(self.seed).generate_state(4)]

    # -- construction helpers -------------------------------------------------

    def _make_critic(self, seed: int) -> Mlp:
        sizes = [self.state_dim + self.action_dim, *self.config.critic_layers, 1]
        return mlp_init(sizes, IDENTITY, seed)

    def _fresh_adam(self, net: Mlp) -> AdamState:
        return adam_init(net)

    # -- pieces shared by the concrete agents ---------------------------------

    def _bellman_targets(self, batch: TransitionBatch, bootstrap: np.ndarray) -> np.ndarray:
        y = batch.rewards + self.config.gamma * (1.0 - batch.terminals) * bootstrap
        if not np.all(np.isfinite(y)):
            raise FloatingPointError("non-finite critic target")
        return y

    def _critic_mse_step(self, critic: Mlp, adam: AdamState,
                         x: np.ndarray, y: np.ndarray) -> None:
        q, cache = mlp_forward(critic, x)
        grad_out = (2.0 / len(y)) * (q[:, 0] - y)
        grads, _ = mlp_backward(critic, cache, grad_out[:, np.newaxis])
        adam_step(critic, grads, adam, self.config.critic_lr)

    def _critic_loss(self, critic: Mlp, x: np.ndarray, y: np.ndarray) -> float:
        q, _ = mlp_forward(critic, x)
        loss = float(np.mean((q[:, 0] - y) ** 2))
        if not np.isfinite(loss):
            raise FloatingPointError("non-finite critic loss")
        return loss

    def _sample(self, buffer: ReplayBuffer, rng: np.random.Generator) -> TransitionBatch:
        if buffer.size < self.config.batch_size:
            raise ValueError(
                f"buffer holds {buffer.size} transitions, "
                f"batch size is {self.config.batch_size}")
        return buffer.sample(self.config.batch_size, rng)

    # -- interface the rest of the package relies on --------------------------

    def select_action(self, state: np.ndarray, explore: bool,
                      rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def train_step(self, buffer: ReplayBuffer, rng: np.random.Generator
                   ) -> tuple[float, float | None]:
        raise NotImplementedError

    def networks(self) -> dict[str, Mlp]:
        """Named parameter tensors, for checkpoints and diagnostics."""
        raise NotImplementedError
