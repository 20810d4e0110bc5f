"""Deterministic policy gradient with target networks and Gaussian exploration."""

from __future__ import annotations

import numpy as np

from ..nn import TANH, adam_step, mlp_backward, mlp_copy, mlp_forward, mlp_init
from ..nn.net import mlp_input_grad
from ..replay import ReplayBuffer, TransitionBatch
from .base import ActorCriticAgent, AgentConfig, critic_input, polyak_update


class DdpgAgent(ActorCriticAgent):
    algorithm = "ddpg"

    def __init__(self, state_dim: int, action_dim: int, config: AgentConfig, seed: int):
        super().__init__(state_dim, action_dim, config, seed)
        self.actor = mlp_init(
            [state_dim, *config.actor_layers, action_dim], TANH, self._net_seeds[0])
        self.critic = self._make_critic(self._net_seeds[1])
        self.target_actor = mlp_copy(self.actor)
        self.target_critic = mlp_copy(self.critic)
        self.actor_adam = self._fresh_adam(self.actor)
        self.critic_adam = self._fresh_adam(self.critic)

    def networks(self):
        return {
            "actor": self.actor,
            "critic": self.critic,
            "target_actor": self.target_actor,
            "target_critic": self.target_critic,
        }

    def select_action(self, state, explore, rng):
        action, _ = mlp_forward(self.actor, state)
        if explore and self.config.exploration_noise_std > 0.0:
            action = action + rng.normal(0.0, self.config.exploration_noise_std,
                                         size=action.shape)
        return np.clip(action, -1.0, 1.0)

    def compute_critic_targets(self, batch: TransitionBatch,
                               rng: np.random.Generator) -> np.ndarray:
        next_actions, _ = mlp_forward(self.target_actor, batch.next_states)
        tq, _ = mlp_forward(self.target_critic,
                            critic_input(batch.next_states, next_actions))
        return self._bellman_targets(batch, tq[:, 0])

    def update_critic(self, batch: TransitionBatch, targets: np.ndarray) -> float:
        x = critic_input(batch.states, batch.actions)
        self._critic_mse_step(self.critic, self.critic_adam, x, targets)
        return self._critic_loss(self.critic, x, targets)

    def _critic_action_grad(self, states: np.ndarray, actions: np.ndarray
                            ) -> tuple[np.ndarray, np.ndarray]:
        """Per-row Q values and dQ/da through the online critic."""
        x = critic_input(states, actions)
        q, cache = mlp_forward(self.critic, x)
        ones = np.ones((len(states), 1))
        grad_in = mlp_input_grad(self.critic, cache, ones)
        return q[:, 0], grad_in[:, self.state_dim:]

    def _actor_gradients(self, states: np.ndarray):
        """Gradients of -mean Q(s, pi(s)) w.r.t. the actor parameters."""
        actions, cache = mlp_forward(self.actor, states)
        q, dq_da = self._critic_action_grad(states, actions)
        grad_out = -dq_da / len(states)
        grads, _ = mlp_backward(self.actor, cache, grad_out)
        return grads, float(-np.mean(q))

    def update_actor(self, batch: TransitionBatch) -> float:
        grads, loss = self._actor_gradients(batch.states)
        if not np.isfinite(loss):
            raise FloatingPointError("non-finite actor loss")
        adam_step(self.actor, grads, self.actor_adam, self.config.actor_lr)
        return loss

    def train_step(self, buffer: ReplayBuffer, rng: np.random.Generator):
        batch = self._sample(buffer, rng)
        targets = self.compute_critic_targets(batch, rng)
        critic_loss = self.update_critic(batch, targets)
        actor_loss = self.update_actor(batch)
        polyak_update(self.target_actor, self.actor, self.config.polyak_rho)
        polyak_update(self.target_critic, self.critic, self.config.polyak_rho)
        return critic_loss, actor_loss
