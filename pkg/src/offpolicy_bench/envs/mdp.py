"""Small tabular MDPs solved exactly, used as learning oracles."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class DiscreteMdp:
    """Finite MDP with transition table P(s'|s,a) and reward table r(s,a)."""

    n_states: int
    n_actions: int
    transition: np.ndarray   # shape (S, A, S)
    reward: np.ndarray       # shape (S, A)
    gamma: float

    def __post_init__(self):
        if self.transition.shape != (self.n_states, self.n_actions, self.n_states):
            raise ValueError("transition table shape mismatch")
        if self.reward.shape != (self.n_states, self.n_actions):
            raise ValueError("reward table shape mismatch")
        # gamma 0 is admitted as the myopic edge case, where Q* equals r
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")
        row_sums = self.transition.sum(axis=2)
        if not np.allclose(row_sums, 1.0, atol=1e-9):
            raise ValueError("every transition row must sum to 1")


def bellman_backup(mdp: DiscreteMdp, q: np.ndarray) -> np.ndarray:
    """One optimality backup: r(s,a) + gamma * sum_s' P(s'|s,a) max_a' Q(s',a')."""
    v = q.max(axis=1)
    return mdp.reward + mdp.gamma * (mdp.transition @ v)


def value_iteration(mdp: DiscreteMdp, tolerance: float,
                    max_iterations: int = 1_000_000) -> np.ndarray:
    """Iterate the optimality backup until the residual drops below tolerance.

    The returned table satisfies max |Q - BellmanBackup(Q)| <= tolerance.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    q = np.zeros((mdp.n_states, mdp.n_actions))
    for _ in range(max_iterations):
        q_next = bellman_backup(mdp, q)
        if np.max(np.abs(q_next - q)) <= tolerance:
            # One more contraction shrinks the residual of q_next itself
            # below gamma * tolerance <= tolerance.
            return q_next
        q = q_next
    raise RuntimeError("value iteration failed to converge")
