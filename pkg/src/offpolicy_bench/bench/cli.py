"""Command-line front end: run training, evaluate checkpoints, compare, chart.

A flat key=value config file can pre-set any agent or task field (documented
in the README); explicit command-line flags win over the file.  When no seed
is given anywhere, the OFFPOLICY_BENCH_SEED environment variable is used as a
fallback before the built-in default of 1.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from pathlib import Path

import numpy as np

from ..agents import ALGORITHMS, default_agent_config, load_checkpoint
from ..envs import TASKS, default_task_spec, is_success, reset, step, write_trajectory
from .report import compare_runs, load_run_result, render_png, write_run_artifacts, write_svg_chart
from .runner import RunConfig, evaluate, run_training

_AGENT_FIELDS = {
    "gamma": float, "actor_lr": float, "critic_lr": float, "polyak_rho": float,
    "exploration_noise_std": float, "td3_target_noise_std": float,
    "td3_target_noise_clip": float, "td3_policy_delay": int,
    "sac_entropy_alpha": float, "batch_size": int, "updates_per_episode": int,
    "actor_layers": "layers", "critic_layers": "layers",
}
_TASK_FIELDS = {
    "horizon": int, "goal_tolerance": float, "dt": float, "friction": float,
}


def parse_config_file(path) -> dict:
    """Flat `key = value` lines; '#' starts a comment; blank lines ignored."""
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValueError(f"cannot read config file {path}: {exc}") from exc
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{line_no}: expected 'key = value'")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key in _AGENT_FIELDS:
            kind = _AGENT_FIELDS[key]
        elif key in _TASK_FIELDS:
            kind = _TASK_FIELDS[key]
        else:
            raise ValueError(f"{path}:{line_no}: unknown config key {key!r}")
        try:
            if kind == "layers":
                values[key] = tuple(int(v) for v in value.split(",") if v.strip())
            else:
                values[key] = kind(value)
        except ValueError as exc:
            raise ValueError(f"{path}:{line_no}: bad value for {key}: {exc}") from exc
    return values


def _default_seed() -> int:
    env = os.environ.get("OFFPOLICY_BENCH_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ValueError(f"OFFPOLICY_BENCH_SEED is not an integer: {env!r}") from exc
    return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="offpolicy-bench",
        description="Off-policy actor-critic benchmark harness")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="train one (algorithm, task, seed) run")
    run.add_argument("--algo", required=True, choices=ALGORITHMS)
    run.add_argument("--task", required=True, choices=TASKS)
    run.add_argument("--epochs", type=int, default=None)
    run.add_argument("--episodes", type=int, default=None,
                     help="training episodes per epoch")
    run.add_argument("--eval-episodes", type=int, default=20)
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--config", default=None, help="key=value config file")
    run.add_argument("--out", default=".", help="output directory")
    run.add_argument("--relabel", action="store_true",
                     help="augment episodes with final-goal relabeling")
    run.add_argument("--profile", choices=("desk", "paper"), default="desk",
                     help="epoch/episode scale preset (default: desk)")
    run.add_argument("--quiet", action="store_true")

    ev = sub.add_parser("eval", help="evaluate a saved checkpoint")
    ev.add_argument("checkpoint")
    ev.add_argument("--task", choices=TASKS, default=None,
                    help="defaults to the task recorded in the checkpoint")
    ev.add_argument("--eval-episodes", type=int, default=20)
    ev.add_argument("--seed", type=int, default=None)
    ev.add_argument("--record", default=None,
                    help="write the first episode's trajectory to this file")

    cmp_ = sub.add_parser("compare", help="summarize finished runs")
    cmp_.add_argument("csvs", nargs="+")

    chart = sub.add_parser("chart", help="render an SVG success-rate chart")
    chart.add_argument("csvs", nargs="+")
    chart.add_argument("--out", required=True, help="output SVG path")
    chart.add_argument("--png", default=None,
                       help="also render a PNG figure to this path")
    return parser


def _cmd_run(args) -> int:
    overrides = parse_config_file(args.config) if args.config else {}
    agent_kwargs = {k: v for k, v in overrides.items() if k in _AGENT_FIELDS}
    task_kwargs = {k: v for k, v in overrides.items() if k in _TASK_FIELDS}

    profile = dict(epochs=50, episodes=10) if args.profile == "desk" \
        else dict(epochs=400, episodes=50)
    epochs = args.epochs if args.epochs is not None else profile["epochs"]
    episodes = args.episodes if args.episodes is not None else profile["episodes"]
    seed = args.seed if args.seed is not None else _default_seed()

    config = RunConfig(
        algorithm=args.algo,
        task=args.task,
        epochs=epochs,
        episodes_per_epoch=episodes,
        eval_episodes=args.eval_episodes,
        seed=seed,
        agent_config=default_agent_config(args.algo, **agent_kwargs),
        task_spec=default_task_spec(args.task, **task_kwargs),
        relabeling_enabled=args.relabel,
        output_dir=args.out,
    )

    progress = None
    if not args.quiet:
        def progress(report):
            print(f"epoch {report.epoch_index:4d}  "
                  f"success {report.success_rate:5.2f}  "
                  f"return {report.mean_return:8.2f}  "
                  f"{report.wall_clock_seconds:6.2f}s", flush=True)

    result = run_training(config, progress=progress)
    paths = write_run_artifacts(result, args.out)
    print(f"wrote {paths['csv']} ({result.total_seconds:.1f}s total)")
    return 0


def _cmd_eval(args) -> int:
    agent, ckpt_task = load_checkpoint(args.checkpoint)
    task = args.task or ckpt_task
    if task is None:
        raise ValueError("checkpoint has no task tag; pass --task")
    spec = default_task_spec(task)
    seed = args.seed if args.seed is not None else _default_seed()
    success_rate, mean_return = evaluate(agent, spec, args.eval_episodes, seed)
    print(f"success_rate {success_rate:.4f}  mean_return {mean_return:.3f}")

    if args.record:
        rng = np.random.default_rng(seed)
        state, obs = reset(spec, rng)
        records = []
        for t in range(spec.horizon):
            action = agent.select_action(obs.flat(), explore=False, rng=rng)
            new_state, new_obs, reward, done = step(state, action, spec)
            records.append((t, obs.flat(), action, reward, done))
            state, obs = new_state, new_obs
        write_trajectory(args.record, records)
        print(f"recorded trajectory to {args.record}")
    return 0


def _cmd_compare(args) -> int:
    print(compare_runs(args.csvs))
    return 0


def _cmd_chart(args) -> int:
    results = [load_run_result(p) for p in args.csvs]
    write_svg_chart(results, args.out)
    print(f"wrote {args.out}")
    if args.png:
        render_png(results, args.png)
        print(f"wrote {args.png}")
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "eval": _cmd_eval,
    "compare": _cmd_compare,
    "chart": _cmd_chart,
}


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))
