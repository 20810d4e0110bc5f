"""Seeded training runs: epochs of episodes, per-epoch evaluation, timing."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..agents import (
    ALGORITHMS,
    ActorCriticAgent,
    AgentConfig,
    create_agent,
    default_agent_config,
    dump_checkpoint_bytes,
)
from ..envs import TaskSpec, default_task_spec, is_success, reset, step
from ..replay import ReplayBuffer, Transition, relabel_final


@dataclass
class RunConfig:
    algorithm: str
    task: str
    epochs: int = 50
    episodes_per_epoch: int = 10
    eval_episodes: int = 20
    seed: int = 1
    agent_config: AgentConfig | None = None
    task_spec: TaskSpec | None = None
    relabeling_enabled: bool = False
    output_dir: str = "."

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.epochs < 1 or self.episodes_per_epoch < 1 or self.eval_episodes < 1:
            raise ValueError("epochs, episodes_per_epoch and eval_episodes "
                             "must all be at least 1")
        if self.agent_config is None:
            self.agent_config = default_agent_config(self.algorithm)
        if self.task_spec is None:
            self.task_spec = default_task_spec(self.task)
        if self.task_spec.task != self.task:
            raise ValueError("task_spec does not match the configured task")

    def basename(self) -> str:
        return f"{self.algorithm}_{self.task}_seed{self.seed}"


def desk_run_config(algorithm: str, task: str, seed: int = 1, **overrides) -> RunConfig:
    """Desk profile: 50 epochs x 10 episodes on the default 50-step horizon."""
    kwargs = dict(algorithm=algorithm, task=task, seed=seed,
                  epochs=50, episodes_per_epoch=10)
    kwargs.update(overrides)
    return RunConfig(**kwargs)


def paper_run_config(algorithm: str, task: str, seed: int = 1, **overrides) -> RunConfig:
    """Full-scale profile: 400 epochs x 50 episodes."""
    kwargs = dict(algorithm=algorithm, task=task, seed=seed,
                  epochs=400, episodes_per_epoch=50)
    kwargs.update(overrides)
    return RunConfig(**kwargs)


@dataclass
class EpochReport:
    epoch_index: int
    success_rate: float
    mean_return: float
    wall_clock_seconds: float
    cumulative_env_steps: int


@dataclass
class RunResult:
    config: RunConfig
    reports: list[EpochReport] = field(default_factory=list)
    total_seconds: float = 0.0
    final_checkpoint: bytes = b""


def evaluate(agent: ActorCriticAgent, task_spec: TaskSpec, eval_episodes: int,
             seed: int) -> tuple[float, float]:
    """Deterministic-policy evaluation on freshly seeded episodes.

    Success is judged at the final step of each episode; the returned rate is
    the exact fraction successes / eval_episodes.
    """
    if eval_episodes < 1:
        raise ValueError("eval_episodes must be at least 1")
    rng = np.random.default_rng(seed)
    successes = 0
    returns = []
    for _ in range(eval_episodes):
        state, obs = reset(task_spec, rng)
        total = 0.0
        for _ in range(task_spec.horizon):
            action = agent.select_action(obs.flat(), explore=False, rng=rng)
            state, obs, reward, _ = step(state, action, task_spec)
            total += reward
        if is_success(obs.achieved_goal, obs.desired_goal, task_spec.goal_tolerance):
            successes += 1
        returns.append(total)
    return successes / eval_episodes, float(np.mean(returns))


def _run_episode(agent, spec, buffer, env_rng, explore_rng, relabel: bool) -> None:
    state, obs = reset(spec, env_rng)
    episode: list[Transition] = []
    for _ in range(spec.horizon):
        action = agent.select_action(obs.flat(), explore=True, rng=explore_rng)
        new_state, new_obs, reward, done = step(state, action, spec)
        episode.append(Transition(
            state=obs.flat(),
            action=action,
            reward=reward,
            next_state=new_obs.flat(),
            terminal=1.0 if done else 0.0,
            achieved_goal=obs.achieved_goal,
            next_achieved_goal=new_obs.achieved_goal,
            desired_goal=obs.desired_goal,
        ))
        state, obs = new_state, new_obs
    for transition in episode:
        buffer.push(transition)
    if relabel:
        for transition in relabel_final(episode, spec.goal_tolerance):
            buffer.push(transition)


def run_training(config: RunConfig, progress=None) -> RunResult:
    """Train one (algorithm, task, seed) triple and report per-epoch metrics.

    Fully deterministic given the config seed, apart from the wall-clock
    fields.  On an unexpected failure the partial per-epoch table is flushed
    to ``output_dir`` before the exception propagates.
    """
    spec = config.task_spec
    agent_config = config.agent_config
    root = np.random.SeedSequence(config.seed)
    net_seed, env_seed, explore_seed, sample_seed, eval_root = [
        int(s) for s in root.generate_state(5)]

    agent = create_agent(config.algorithm, spec.state_dim, spec.action_dim,
                         agent_config, net_seed)
    buffer = ReplayBuffer()
    env_rng = np.random.default_rng(env_seed)
    explore_rng = np.random.default_rng(explore_seed)
    sample_rng = np.random.default_rng(sample_seed)
    eval_seeds = [int(s) for s in
                  np.random.SeedSequence(eval_root).generate_state(config.epochs)]

    result = RunResult(config=config)
    start = time.perf_counter()
    try:
        for epoch in range(config.epochs):
            epoch_start = time.perf_counter()
            for _ in range(config.episodes_per_epoch):
                _run_episode(agent, spec, buffer, env_rng, explore_rng,
                             config.relabeling_enabled)
                if buffer.size >= agent_config.batch_size:
                    for _ in range(agent_config.updates_per_episode):
                        agent.train_step(buffer, sample_rng)
            success_rate, mean_return = evaluate(
                agent, spec, config.eval_episodes, eval_seeds[epoch])
            result.reports.append(EpochReport(
                epoch_index=epoch,
                success_rate=success_rate,
                mean_return=mean_return,
                wall_clock_seconds=time.perf_counter() - epoch_start,
                cumulative_env_steps=(epoch + 1) * config.episodes_per_epoch
                * spec.horizon,
            ))
            if progress is not None:
                progress(result.reports[-1])
    except Exception:
        _flush_partial(result)
        raise
    result.total_seconds = time.perf_counter() - start
    result.final_checkpoint = dump_checkpoint_bytes(agent, task=config.task)
    return result


def _flush_partial(result: RunResult) -> None:
    from .report import write_csv  # local import to avoid a cycle

    out = Path(result.config.output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        write_csv(result, out / (result.config.basename() + ".partial.csv"))
    except OSError:
        pass  # flushing is best effort; the original error matters more
