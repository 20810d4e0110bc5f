"""Off-policy actor-critic toolkit: networks, replay, desk-scale goal tasks,
DDPG/TD3/SAC agents, and a reproducible benchmark harness."""

__version__ = "0.1.0"
