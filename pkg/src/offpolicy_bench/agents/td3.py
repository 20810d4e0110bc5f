"""Twin critics with a min bootstrap, smoothed target actions, delayed policy."""

from __future__ import annotations

import numpy as np

from ..nn import Mlp, TANH, adam_step, mlp_backward, mlp_copy, mlp_forward, mlp_init
from ..nn.net import mlp_input_grad
from ..replay import ReplayBuffer, TransitionBatch
from .base import ActorCriticAgent, AgentConfig, critic_input, polyak_update


def td3_target_action(target_actor: Mlp, next_states: np.ndarray,
                      noise_std: float, noise_clip: float,
                      rng: np.random.Generator) -> np.ndarray:
    """Smoothed target action: clamp(pi(s') + clamp(eps, +/-clip), -1, 1)."""
    if noise_clip < 0.0:
        raise ValueError("noise_clip must be non-negative")
    actions, _ = mlp_forward(target_actor, next_states)
    if noise_std > 0.0:
        noise = rng.normal(0.0, noise_std, size=actions.shape)
        np.clip(noise, -noise_clip, noise_clip, out=noise)
        actions = actions + noise
    return np.clip(actions, -1.0, 1.0)


class Td3Agent(ActorCriticAgent):
    algorithm = "td3"

    def __init__(self, state_dim: int, action_dim: int, config: AgentConfig, seed: int):
        super().__init__(state_dim, action_dim, config, seed)
        self.actor = mlp_init(
            [state_dim, *config.actor_layers, action_dim], TANH, self._net_seeds[0])
        self.critic_1 = self._make_critic(self._net_seeds[1])
        self.critic_2 = self._make_critic(self._net_seeds[2])
        self.target_actor = mlp_copy(self.actor)
        self.target_critic_1 = mlp_copy(self.critic_1)
        self.target_critic_2 = mlp_copy(self.critic_2)
        self.actor_adam = self._fresh_adam(self.actor)
        self.critic_1_adam = self._fresh_adam(self.critic_1)
        self.critic_2_adam = self._fresh_adam(self.critic_2)
        self.update_counter = 0
        self.actor_update_count = 0

    def networks(self):
        return {
            "actor": self.actor,
            "critic_1": self.critic_1,
            "critic_2": self.critic_2,
            "target_actor": self.target_actor,
            "target_critic_1": self.target_critic_1,
            "target_critic_2": self.target_critic_2,
        }

    def select_action(self, state, explore, rng):
        action, _ = mlp_forward(self.actor, state)
        if explore and self.config.exploration_noise_std > 0.0:
            action = action + rng.normal(0.0, self.config.exploration_noise_std,
                                         size=action.shape)
        return np.clip(action, -1.0, 1.0)

    def compute_critic_targets(self, batch: TransitionBatch,
                               rng: np.random.Generator) -> np.ndarray:
        smoothed = td3_target_action(
            self.target_actor, batch.next_states,
            self.config.td3_target_noise_std, self.config.td3_target_noise_clip, rng)
        x = critic_input(batch.next_states, smoothed)
        tq1, _ = mlp_forward(self.target_critic_1, x)
        tq2, _ = mlp_forward(self.target_critic_2, x)
        return self._bellman_targets(batch, np.minimum(tq1[:, 0], tq2[:, 0]))

    def update_critic(self, batch: TransitionBatch, targets: np.ndarray) -> float:
        x = critic_input(batch.states, batch.actions)
        self._critic_mse_step(self.critic_1, self.critic_1_adam, x, targets)
        self._critic_mse_step(self.critic_2, self.critic_2_adam, x, targets)
        return self._critic_loss(self.critic_1, x, targets)

    def _critic_action_grad(self, states: np.ndarray, actions: np.ndarray
                            ) -> tuple[np.ndarray, np.ndarray]:
        """Q and dQ/da through critic_1 (the policy objective uses Q_1 only)."""
        x = critic_input(states, actions)
        q, cache = mlp_forward(self.critic_1, x)
        ones = np.ones((len(states), 1))
        grad_in = mlp_input_grad(self.critic_1, cache, ones)
        return q[:, 0], grad_in[:, self.state_dim:]

    def _actor_gradients(self, states: np.ndarray):
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
        self.actor_update_count += 1
        return loss

    def train_step(self, buffer: ReplayBuffer, rng: np.random.Generator):
        batch = self._sample(buffer, rng)
        targets = self.compute_critic_targets(batch, rng)
        critic_loss = self.update_critic(batch, targets)
        self.update_counter += 1
        actor_loss = None
        # one policy (and target) update per td3_policy_delay critic updates
        if self.update_counter % self.config.td3_policy_delay == 0:
            actor_loss = self.update_actor(batch)
            rho = self.config.polyak_rho
            polyak_update(self.target_actor, self.actor, rho)
            polyak_update(self.target_critic_1, self.critic_1, rho)
            polyak_update(self.target_critic_2, self.critic_2, rho)
        return critic_loss, actor_loss
