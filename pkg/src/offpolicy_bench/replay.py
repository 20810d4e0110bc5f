"""Experience memory: bounded ring storage, uniform sampling, goal relabeling.

Stored state vectors are the concatenation observation + achieved goal +
desired goal, in that order, so the desired goal always occupies the trailing
slice.  Relabeling rewrites that slice in place of a copy.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .envs.tasks import sparse_reward


@dataclass
class Transition:
    """One experience record as consumed by the learners."""

    state: np.ndarray
    action: np.ndarray
    reward: float
    next_state: np.ndarray
    terminal: float
    achieved_goal: np.ndarray
    next_achieved_goal: np.ndarray
    desired_goal: np.ndarray

    def validate(self) -> None:
        if self.reward not in (-1.0, 0.0):
            raise ValueError(f"reward must be -1 or 0, got {self.reward}")
        if self.terminal not in (0.0, 1.0):
            raise ValueError(f"terminal flag must be 0 or 1, got {self.terminal}")
        if np.max(np.abs(self.action)) > 1.0:
            raise ValueError("action components must lie in [-1, 1]")
        if self.state.shape != self.next_state.shape:
            raise ValueError("state and next_state dimensions differ")


@dataclass
class TransitionBatch:
    """Column-stacked minibatch."""

    states: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_states: np.ndarray
    terminals: np.ndarray

    def __len__(self) -> int:
        return self.states.shape[0]


class ReplayBuffer:
    """Bounded FIFO transition store with uniform with-replacement sampling."""

    def __init__(self, capacity: int = 1_000_000):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self._storage: list[Transition] = []
        self._cursor = 0

    def __len__(self) -> int:
        return len(self._storage)

    @property
    def size(self) -> int:
        return len(self._storage)

    def push(self, transition: Transition) -> None:
        """Append, evicting the oldest transition once at capacity."""
        transition.validate()
        if len(self._storage) < self.capacity:
            self._storage.append(transition)
        else:
            self._storage[self._cursor] = transition
            self._cursor = (self._cursor + 1) % self.capacity

    def transitions(self) -> list[Transition]:
        """Stored transitions, oldest first."""
        return self._storage[self._cursor:] + self._storage[:self._cursor]

    def sample_indices(self, batch_size: int, rng: np.random.Generator) -> np.ndarray:
        if not self._storage:
            raise ValueError("cannot sample from an empty buffer")
        return rng.integers(0, len(self._storage), size=batch_size)

    def sample(self, batch_size: int, rng: np.random.Generator) -> TransitionBatch:
        idx = self.sample_indices(batch_size, rng)
        rows = [self._storage[i] for i in idx]
        return TransitionBatch(
            states=np.stack([t.state for t in rows]),
            actions=np.stack([t.action for t in rows]),
            rewards=np.array([t.reward for t in rows]),
            next_states=np.stack([t.next_state for t in rows]),
            terminals=np.array([t.terminal for t in rows]),
        )


def _with_goal(state: np.ndarray, goal: np.ndarray) -> np.ndarray:
    out = state.copy()
    out[-goal.shape[0]:] = goal
    return out


def relabel_final(episode: list[Transition], goal_tolerance: float) -> list[Transition]:
    """Copy an episode with the desired goal replaced by its final achieved goal.

    Rewards are recomputed under the sparse rule at ``goal_tolerance`` and the
    desired-goal slice of every state vector is rewritten to match.  The input
    episode is left untouched.
    """
    if not episode:
        raise ValueError("cannot relabel an empty episode")
    new_goal = episode[-1].next_achieved_goal.copy()
    relabeled = []
    for t in episode:
        relabeled.append(
            replace(
                t,
                state=_with_goal(t.state, new_goal),
                next_state=_with_goal(t.next_state, new_goal),
                desired_goal=new_goal.copy(),
                reward=sparse_reward(t.next_achieved_goal, new_goal, goal_tolerance),
            )
        )
    return relabeled
