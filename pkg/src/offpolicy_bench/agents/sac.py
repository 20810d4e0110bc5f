"""Entropy-regularized stochastic policy with twin clipped critics.

The actor network emits 2*action_dim outputs read as (mean, log_std); actions
are Gaussian samples squashed through tanh.  Training maximizes expected
return plus a fixed-coefficient entropy bonus, with critic bootstraps taken
as the minimum of two target critics minus the entropy term.
"""

from __future__ import annotations

import numpy as np

from ..nn import IDENTITY, adam_step, mlp_backward, mlp_copy, mlp_forward, mlp_init
from ..nn.net import mlp_input_grad
from ..replay import ReplayBuffer, TransitionBatch
from .base import ActorCriticAgent, AgentConfig, critic_input, polyak_update

LOG_STD_MIN = -20.0
LOG_STD_MAX = 2.0

_HALF_LOG_TWO_PI = 0.5 * np.log(2.0 * np.pi)
_LOG_TWO = np.log(2.0)
# keep squashed actions strictly inside (-1, 1) even when tanh saturates
_ACTION_LIMIT = np.nextafter(1.0, 0.0)


def squash(u: np.ndarray) -> np.ndarray:
    a = np.tanh(u)
    return np.clip(a, -_ACTION_LIMIT, _ACTION_LIMIT)


def sac_log_prob(mean: np.ndarray, log_std: np.ndarray, u: np.ndarray) -> np.ndarray:
    """log-density of the squashed action tanh(u) for a N(mean, e^log_std) draw u.

    Gaussian log-density of u minus the tanh change-of-variables term
    sum_i log(1 - tanh(u_i)^2), the latter evaluated in the stable form
    sum_i 2*(log 2 - u_i - softplus(-2 u_i)) so large |u| cannot underflow.
    Inputs are (n, da) rows; the result sums over action dimensions.
    """
    std = np.exp(log_std)
    z = (u - mean) / std
    gauss = -0.5 * z * z - log_std - _HALF_LOG_TWO_PI
    correction = 2.0 * (_LOG_TWO - u - np.logaddexp(0.0, -2.0 * u))
    return np.sum(gauss - correction, axis=-1)


class SacAgent(ActorCriticAgent):
    algorithm = "sac"

    def __init__(self, state_dim: int, action_dim: int, config: AgentConfig, seed: int):
        super().__init__(state_dim, action_dim, config, seed)
        self.stochastic_actor = mlp_init(
            [state_dim, *config.actor_layers, 2 * action_dim],
            IDENTITY, self._net_seeds[0])
        self.critic_1 = self._make_critic(self._net_seeds[1])
        self.critic_2 = self._make_critic(self._net_seeds[2])
        self.target_critic_1 = mlp_copy(self.critic_1)
        self.target_critic_2 = mlp_copy(self.critic_2)
        self.actor_adam = self._fresh_adam(self.stochastic_actor)
        self.critic_1_adam = self._fresh_adam(self.critic_1)
        self.critic_2_adam = self._fresh_adam(self.critic_2)

    def networks(self):
        return {
            "stochastic_actor": self.stochastic_actor,
            "critic_1": self.critic_1,
            "critic_2": self.critic_2,
            "target_critic_1": self.target_critic_1,
            "target_critic_2": self.target_critic_2,
        }

    # -- policy head -----------------------------------------------------------

    def _policy_params(self, states: np.ndarray):
        """(mean, clamped log_std, raw head output, forward cache)."""
        out, cache = mlp_forward(self.stochastic_actor, states)
        batched = out.ndim == 2
        head = out if batched else out[np.newaxis, :]
        mean = head[:, :self.action_dim]
        raw_log_std = head[:, self.action_dim:]
        log_std = np.clip(raw_log_std, LOG_STD_MIN, LOG_STD_MAX)
        return mean, log_std, raw_log_std, cache

    def select_action(self, state, explore, rng):
        mean, log_std, _, _ = self._policy_params(state)
        if explore:
            u = mean + np.exp(log_std) * rng.standard_normal(mean.shape)
        else:
            u = mean
        action = squash(u)
        return action[0] if np.asarray(state).ndim == 1 else action

    # -- critic side -----------------------------------------------------------

    def compute_critic_targets(self, batch: TransitionBatch,
                               rng: np.random.Generator) -> np.ndarray:
        mean, log_std, _, _ = self._policy_params(batch.next_states)
        u = mean + np.exp(log_std) * rng.standard_normal(mean.shape)
        next_actions = squash(u)
        log_prob = sac_log_prob(mean, log_std, u)
        x = critic_input(batch.next_states, next_actions)
        tq1, _ = mlp_forward(self.target_critic_1, x)
        tq2, _ = mlp_forward(self.target_critic_2, x)
        soft_value = np.minimum(tq1[:, 0], tq2[:, 0]) \
            - self.config.sac_entropy_alpha * log_prob
        return self._bellman_targets(batch, soft_value)

    def update_critic(self, batch: TransitionBatch, targets: np.ndarray) -> float:
        x = critic_input(batch.states, batch.actions)
        self._critic_mse_step(self.critic_1, self.critic_1_adam, x, targets)
        self._critic_mse_step(self.critic_2, self.critic_2_adam, x, targets)
        return self._critic_loss(self.critic_1, x, targets)

    def _min_critic_value_grad(self, states: np.ndarray, actions: np.ndarray
                               ) -> tuple[np.ndarray, np.ndarray]:
        """min(Q1, Q2) per row and its gradient w.r.t. the actions.

        The min routes each row's gradient through whichever critic is
        smaller there (ties go to critic_1).
        """
        x = critic_input(states, actions)
        q1, cache1 = mlp_forward(self.critic_1, x)
        q2, cache2 = mlp_forward(self.critic_2, x)
        q1 = q1[:, 0]
        q2 = q2[:, 0]
        pick1 = (q1 <= q2)[:, np.newaxis].astype(np.float64)
        gin1 = mlp_input_grad(self.critic_1, cache1, pick1)
        gin2 = mlp_input_grad(self.critic_2, cache2, 1.0 - pick1)
        dq_da = gin1[:, self.state_dim:] + gin2[:, self.state_dim:]
        return np.minimum(q1, q2), dq_da

    # -- actor side ------------------------------------------------------------

    def _actor_gradients(self, states: np.ndarray, xi: np.ndarray):
        """Gradients of mean[alpha*log pi(a|s) - min Q(s, a)], a = tanh(mean + std*xi).

        The chain through the reparameterized sample:
            dL/da   from the critic min (scaled by -1/n),
            dL/du   = dL/da * (1 - a^2) + (alpha/n) * 2*tanh(u),
            dL/dmean    = dL/du,
            dL/dlog_std = dL/du * (u - mean) - alpha/n,
        with the clamp on log_std gating its gradient to zero where active.
        """
        n = len(states)
        alpha = self.config.sac_entropy_alpha
        mean, log_std, raw_log_std, cache = self._policy_params(states)
        std = np.exp(log_std)
        u = mean + std * xi
        actions = squash(u)
        tanh_u = np.tanh(u)

        q_min, dq_da = self._min_critic_value_grad(states, actions)
        log_prob = sac_log_prob(mean, log_std, u)
        loss = float(np.mean(alpha * log_prob - q_min))

        dl_da = -dq_da / n
        dl_du = dl_da * (1.0 - actions * actions) + (alpha / n) * 2.0 * tanh_u
        dl_dmean = dl_du
        dl_dlog_std = dl_du * (u - mean) - alpha / n
        # no gradient through an active clamp
        dl_dlog_std = dl_dlog_std * ((raw_log_std > LOG_STD_MIN)
                                     & (raw_log_std < LOG_STD_MAX))
        grad_head = np.concatenate([dl_dmean, dl_dlog_std], axis=1)
        grads, _ = mlp_backward(self.stochastic_actor, cache, grad_head)
        return grads, loss

    def update_actor(self, batch: TransitionBatch, rng: np.random.Generator) -> float:
        xi = rng.standard_normal((len(batch.states), self.action_dim))
        grads, loss = self._actor_gradients(batch.states, xi)
        if not np.isfinite(loss):
            raise FloatingPointError("non-finite actor loss")
        adam_step(self.stochastic_actor, grads, self.actor_adam, self.config.actor_lr)
        return loss

    def train_step(self, buffer: ReplayBuffer, rng: np.random.Generator):
        batch = self._sample(buffer, rng)
        targets = self.compute_critic_targets(batch, rng)
        critic_loss = self.update_critic(batch, targets)
        actor_loss = self.update_actor(batch, rng)
        polyak_update(self.target_critic_1, self.critic_1, self.config.polyak_rho)
        polyak_update(self.target_critic_2, self.critic_2, self.config.polyak_rho)
        return critic_loss, actor_loss
