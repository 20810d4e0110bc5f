"""DDPG, TD3 and SAC learners over the shared network substrate."""

from .base import (
    ALGORITHMS,
    DDPG,
    SAC,
    TD3,
    ActorCriticAgent,
    AgentConfig,
    critic_input,
    critic_values,
    default_agent_config,
    polyak_update,
)
from .checkpoint import (
    create_agent,
    dump_checkpoint_bytes,
    load_checkpoint,
    load_checkpoint_bytes,
    save_checkpoint,
)
from .ddpg import DdpgAgent
from .sac import LOG_STD_MAX, LOG_STD_MIN, SacAgent, sac_log_prob, squash
from .td3 import Td3Agent, td3_target_action

__all__ = [
    "ALGORITHMS",
    "DDPG",
    "LOG_STD_MAX",
    "LOG_STD_MIN",
    "SAC",
    "TD3",
    "ActorCriticAgent",
    "AgentConfig",
    "DdpgAgent",
    "SacAgent",
    "Td3Agent",
    "create_agent",
    "critic_input",
    "critic_values",
    "default_agent_config",
    "dump_checkpoint_bytes",
    "load_checkpoint",
    "load_checkpoint_bytes",
    "polyak_update",
    "sac_log_prob",
    "save_checkpoint",
    "squash",
    "td3_target_action",
]
