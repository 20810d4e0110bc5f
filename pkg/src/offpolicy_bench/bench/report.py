"""Run reporting: CSV tables, SVG comparison charts, PNG figures, summaries.

CSV schema (one row per epoch, reals printed with 6 significant digits):

    epoch,success_rate,mean_return,wall_clock_s,env_steps
"""

from __future__ import annotations

import re
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .runner import EpochReport, RunConfig, RunResult

CSV_HEADER = "epoch,success_rate,mean_return,wall_clock_s,env_steps"

_ALGO_COLORS = {"ddpg": "#1f77b4", "td3": "#2ca02c", "sac": "#d62728"}
_FILENAME_RE = re.compile(r"^(?P<algo>[a-z0-9]+)_(?P<task>[a-z0-9]+)_seed(?P<seed>\d+)")


def format_real(x: float) -> str:
    """Six significant digits, trailing zeros kept (0.75 -> '0.750000')."""
    return format(float(x), "#.6g")


def write_csv(result: RunResult, path) -> None:
    """One header line, one row per epoch, trailing newline; byte-identical
    for identical results."""
    try:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(CSV_HEADER + "\n")
            for r in result.reports:
                fh.write(",".join([
                    str(r.epoch_index),
                    format_real(r.success_rate),
                    format_real(r.mean_return),
                    format_real(r.wall_clock_seconds),
                    str(r.cumulative_env_steps),
                ]) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def read_csv(path) -> list[EpochReport]:
    try:
        text = Path(path).read_text(encoding="ascii")
    except OSError as exc:
        raise OSError(f"cannot read CSV from {path}: {exc}") from exc
    lines = text.splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"{path}: missing or malformed header")
    reports = []
    for line_no, line in enumerate(lines[1:], 2):
        parts = line.split(",")
        if len(parts) != 5:
            raise ValueError(f"{path}:{line_no}: expected 5 fields")
        reports.append(EpochReport(
            epoch_index=int(parts[0]),
            success_rate=float(parts[1]),
            mean_return=float(parts[2]),
            wall_clock_seconds=float(parts[3]),
            cumulative_env_steps=int(parts[4]),
        ))
    return reports


def parse_run_filename(path) -> tuple[str, str, int]:
    """Recover (algorithm, task, seed) from the <algo>_<task>_seed<k> naming."""
    m = _FILENAME_RE.match(Path(path).stem)
    if not m:
        raise ValueError(
            f"{path}: filename does not follow <algo>_<task>_seed<k>.csv")
    return m.group("algo"), m.group("task"), int(m.group("seed"))


def load_run_result(path) -> RunResult:
    """Rebuild a lightweight RunResult (reports plus identity) from a CSV."""
    algo, task, seed = parse_run_filename(path)
    reports = read_csv(path)
    config = RunConfig(algorithm=algo, task=task, seed=seed,
                       epochs=max(1, len(reports)),
                       episodes_per_epoch=1, eval_episodes=1)
    total = sum(r.wall_clock_seconds for r in reports)
    return RunResult(config=config, reports=reports, total_seconds=total)


# -- static SVG chart ---------------------------------------------------------

_SVG_W, _SVG_H = 640, 420
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 60, 20, 30, 45


def _svg_escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def write_svg_chart(results: list[RunResult], path) -> None:
    """Static SVG 1.1 line chart of success rate per epoch, one polyline per
    run, with a legend and fixed 0..epochs / 0..1 axes."""
    if not results:
        raise ValueError("need at least one result to chart")
    tasks = {r.config.task for r in results}
    epoch_counts = {len(r.reports) for r in results}
    if len(tasks) != 1 or len(epoch_counts) != 1:
        raise ValueError("all charted results must share task and epoch count")
    task = tasks.pop()
    n_epochs = epoch_counts.pop()

    plot_w = _SVG_W - _MARGIN_L - _MARGIN_R
    plot_h = _SVG_H - _MARGIN_T - _MARGIN_B

    def sx(epoch: float) -> float:
        return _MARGIN_L + plot_w * (epoch / max(1, n_epochs - 1) if n_epochs > 1 else 0.5)

    def sy(rate: float) -> float:
        return _MARGIN_T + plot_h * (1.0 - rate)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_SVG_W}" height="{_SVG_H}" viewBox="0 0 {_SVG_W} {_SVG_H}">',
        f'<rect x="0" y="0" width="{_SVG_W}" height="{_SVG_H}" fill="white"/>',
        f'<text x="{_SVG_W / 2:.1f}" y="18" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{_svg_escape(task)} comparison</text>',
    ]
    axis = 'stroke="black" stroke-width="1"'
    parts.append(f'<line x1="{_MARGIN_L}" y1="{sy(0)}" x2="{_SVG_W - _MARGIN_R}" '
                 f'y2="{sy(0)}" {axis}/>')
    parts.append(f'<line x1="{_MARGIN_L}" y1="{sy(0)}" x2="{_MARGIN_L}" '
                 f'y2="{sy(1)}" {axis}/>')
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        y = sy(frac)
        parts.append(f'<line x1="{_MARGIN_L - 4}" y1="{y:.1f}" x2="{_MARGIN_L}" '
                     f'y2="{y:.1f}" {axis}/>')
        parts.append(f'<text x="{_MARGIN_L - 8}" y="{y + 4:.1f}" text-anchor="end" '
                     f'font-family="sans-serif" font-size="11">{frac:g}</text>')
    n_xticks = min(5, n_epochs)
    for i in range(n_xticks):
        epoch = round(i * (n_epochs - 1) / max(1, n_xticks - 1)) if n_xticks > 1 else 0
        x = sx(epoch)
        parts.append(f'<line x1="{x:.1f}" y1="{sy(0)}" x2="{x:.1f}" '
                     f'y2="{sy(0) + 4}" {axis}/>')
        parts.append(f'<text x="{x:.1f}" y="{sy(0) + 18}" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="11">{epoch}</text>')
    parts.append(f'<text x="{_MARGIN_L + plot_w / 2:.1f}" y="{_SVG_H - 8}" '
                 f'text-anchor="middle" font-family="sans-serif" font-size="12">'
                 f'epoch</text>')
    parts.append(f'<text x="16" y="{_MARGIN_T + plot_h / 2:.1f}" text-anchor="middle" '
                 f'font-family="sans-serif" font-size="12" '
                 f'transform="rotate(-90 16 {_MARGIN_T + plot_h / 2:.1f})">'
                 f'success rate</text>')

    for idx, result in enumerate(results):
        label = result.config.basename()
        color = _ALGO_COLORS.get(result.config.algorithm, "#555555")
        points = " ".join(
            f"{sx(r.epoch_index):.2f},{sy(r.success_rate):.2f}"
            for r in result.reports)
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                     f'points="{points}"/>')
        ly = _MARGIN_T + 14 + 16 * idx
        lx = _SVG_W - _MARGIN_R - 150
        parts.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 18}" y2="{ly - 4}" '
                     f'stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{lx + 24}" y="{ly}" font-family="sans-serif" '
                     f'font-size="11">{_svg_escape(label)}</text>')

    parts.append("</svg>")
    try:
        Path(path).write_text("\n".join(parts) + "\n", encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write SVG to {path}: {exc}") from exc


# -- matplotlib figures -------------------------------------------------------

def render_png(results: list[RunResult], path, title: str | None = None) -> None:
    """Matplotlib rendering of the same curves, saved next to the CSV output."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for result in results:
        epochs = [r.epoch_index for r in result.reports]
        rates = [r.success_rate for r in result.reports]
        ax.plot(epochs, rates,
                label=result.config.basename(),
                color=_ALGO_COLORS.get(result.config.algorithm),
                linewidth=1.4)
    ax.set_xlabel("epoch")
    ax.set_ylabel("success rate")
    ax.set_ylim(-0.05, 1.05)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    if title is None and results:
        title = f"{results[0].config.task} comparison"
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_run_artifacts(result: RunResult, out_dir) -> dict[str, Path]:
    """Persist one finished run: CSV table, PNG figure, agent checkpoint."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    base = result.config.basename()
    paths = {
        "csv": out / f"{base}.csv",
        "png": out / f"{base}.png",
        "checkpoint": out / f"{base}.ckpt",
    }
    write_csv(result, paths["csv"])
    render_png([result], paths["png"])
    if result.final_checkpoint:
        paths["checkpoint"].write_bytes(result.final_checkpoint)
    else:
        del paths["checkpoint"]
    return paths


# -- run comparison -----------------------------------------------------------

def compare_runs(result_paths) -> str:
    """Tabulate total wall-clock, final and last-10-epoch success per run,
    sorted fastest first.  All inputs must describe the same task."""
    paths = list(result_paths)
    if len(paths) < 2:
        raise ValueError("need at least two result files to compare")
    loaded = [load_run_result(p) for p in paths]
    tasks = {r.config.task for r in loaded}
    if len(tasks) != 1:
        raise ValueError(f"results mix different tasks: {sorted(tasks)}")

    rows = []
    for result in loaded:
        reports = result.reports
        last10 = reports[-10:] if len(reports) >= 10 else reports
        rows.append((
            result.config.basename(),
            result.total_seconds,
            reports[-1].success_rate if reports else float("nan"),
            sum(r.success_rate for r in last10) / max(1, len(last10)),
        ))
    rows.sort(key=lambda row: row[1])

    name_width = max(len("run"), max(len(r[0]) for r in rows))
    header = (f"{'run':<{name_width}}  {'total_wall_s':>12}  "
              f"{'final_success':>13}  {'last10_mean':>11}")
    lines = [header, "-" * len(header)]
    for name, total, final, last10 in rows:
        lines.append(f"{name:<{name_width}}  {format_real(total):>12}  "
                     f"{format_real(final):>13}  {format_real(last10):>11}")
    return "\n".join(lines)
