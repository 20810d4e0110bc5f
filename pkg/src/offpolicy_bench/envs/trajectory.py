"""Line-delimited trajectory recording.

One step per line, comma-separated, in this column order:

    step_index, state..., action..., reward, done

where ``state`` is the flattened network input (observation + achieved goal +
desired goal) at the step's start and ``done`` is 0 or 1.  Reals use repr-level
precision so files parse back to the exact float64 values.
"""

from __future__ import annotations

import numpy as np


def format_step(step_index: int, state: np.ndarray, action: np.ndarray,
                reward: float, done: bool) -> str:
    fields = [str(step_index)]
    fields += [repr(float(v)) for v in state]
    fields += [repr(float(v)) for v in action]
    fields.append(repr(float(reward)))
    fields.append("1" if done else "0")
    return ",".join(fields)


def write_trajectory(path, steps) -> None:
    """Write records of (step_index, state, action, reward, done)."""
    with open(path, "w", encoding="ascii") as fh:
        for record in steps:
            fh.write(format_step(*record) + "\n")


def read_trajectory(path, state_dim: int, action_dim: int):
    """Parse a recorded trajectory back into step records."""
    steps = []
    with open(path, "r", encoding="ascii") as fh:
        for line_no, line in enumerate(fh, 1):
            parts = line.strip().split(",")
            expected = 1 + state_dim + action_dim + 2
            if len(parts) != expected:
                raise ValueError(
                    f"{path}:{line_no}: expected {expected} fields, got {len(parts)}")
            idx = int(parts[0])
            state = np.array([float(v) for v in parts[1:1 + state_dim]])
            action = np.array(
                [float(v) for v in parts[1 + state_dim:1 + state_dim + action_dim]])
            reward = float(parts[-2])
            done = parts[-1] == "1"
            steps.append((idx, state, action, reward, done))
    return steps
