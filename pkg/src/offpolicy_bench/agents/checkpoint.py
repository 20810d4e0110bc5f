"""Versioned agent checkpoints: config plus named network snapshots.

Layout (little-endian):
    8-byte magic  b"OPBCKPT\\0"
    uint32 version (currently 1)
    uint32 metadata length, then that many bytes of UTF-8 JSON holding
        algorithm, state_dim, action_dim, task, and the agent config
    uint32 network count, then per network:
        uint16 name length, name bytes, uint64 blob length, snapshot blob
"""

from __future__ import annotations

import dataclasses
import json
import struct

from ..nn.snapshot import SnapshotError, dump_mlp_bytes, load_mlp_bytes
from .base import ALGORITHMS, ActorCriticAgent, AgentConfig
from .ddpg import DdpgAgent
from .sac import SacAgent
from .td3 import Td3Agent

MAGIC = b"OPBCKPT\0"
VERSION = 1

_AGENT_CLASSES = {cls.algorithm: cls for cls in (DdpgAgent, Td3Agent, SacAgent)}


def create_agent(algorithm: str, state_dim: int, action_dim: int,
                 config: AgentConfig, seed: int) -> ActorCriticAgent:
    if algorithm not in _AGENT_CLASSES:
        raise ValueError(f"unknown algorithm {algorithm!r}, expected one of {ALGORITHMS}")
    return _AGENT_CLASSES[algorithm](state_dim, action_dim, config, seed)


def dump_checkpoint_bytes(agent: ActorCriticAgent, task: str | None = None) -> bytes:
    meta = {
        "algorithm": agent.algorithm,
        "state_dim": agent.state_dim,
        "action_dim": agent.action_dim,
        "task": task,
        "config": dataclasses.asdict(agent.config),
    }
    meta_bytes = json.dumps(meta, sort_keys=True).encode("utf-8")
    parts = [MAGIC, struct.pack("<II", VERSION, len(meta_bytes)), meta_bytes]
    nets = agent.networks()
    parts.append(struct.pack("<I", len(nets)))
    for name in sorted(nets):
        blob = dump_mlp_bytes(nets[name])
        encoded = name.encode("utf-8")
        parts.append(struct.pack("<H", len(encoded)))
        parts.append(encoded)
        parts.append(struct.pack("<Q", len(blob)))
        parts.append(blob)
    return b"".join(parts)


def load_checkpoint_bytes(data: bytes) -> tuple[ActorCriticAgent, str | None]:
    """Rebuild an agent (optimizer state fresh) and return it with its task tag."""
    view = memoryview(data)
    if bytes(view[:8]) != MAGIC:
        raise SnapshotError("bad checkpoint magic header")
    version, meta_len = struct.unpack("<II", view[8:16])
    if version != VERSION:
        raise SnapshotError(f"unsupported checkpoint version {version}")
    offset = 16
    meta = json.loads(bytes(view[offset:offset + meta_len]).decode("utf-8"))
    offset += meta_len
    (count,) = struct.unpack("<I", view[offset:offset + 4])
    offset += 4

    config = AgentConfig(**meta["config"])
    agent = create_agent(meta["algorithm"], meta["state_dim"], meta["action_dim"],
                         config, seed=0)
    nets = agent.networks()
    for _ in range(count):
        (name_len,) = struct.unpack("<H", view[offset:offset + 2])
        offset += 2
        name = bytes(view[offset:offset + name_len]).decode("utf-8")
        offset += name_len
        (blob_len,) = struct.unpack("<Q", view[offset:offset + 8])
        offset += 8
        net = load_mlp_bytes(bytes(view[offset:offset + blob_len]))
        offset += blob_len
        if name not in nets:
            raise SnapshotError(f"checkpoint names unknown network {name!r}")
        target = nets[name]
        if net.layer_sizes != target.layer_sizes:
            raise SnapshotError(f"network {name!r} has mismatched shape")
        target.weights = net.weights
        target.biases = net.biases
    if offset != len(data):
        raise SnapshotError("trailing bytes after checkpoint payload")
    return agent, meta.get("task")


def save_checkpoint(agent: ActorCriticAgent, path, task: str | None = None) -> None:
    with open(path, "wb") as fh:
        fh.write(dump_checkpoint_bytes(agent, task))


def load_checkpoint(path) -> tuple[ActorCriticAgent, str | None]:
    with open(path, "rb") as fh:
        return load_checkpoint_bytes(fh.read())
