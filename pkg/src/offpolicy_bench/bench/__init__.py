"""Benchmark harness: seeded runs, per-epoch reports, CSV/SVG/PNG output."""

from .cli import cli_main, parse_config_file
from .report import (
    CSV_HEADER,
    compare_runs,
    format_real,
    load_run_result,
    parse_run_filename,
    read_csv,
    render_png,
    write_csv,
    write_run_artifacts,
    write_svg_chart,
)
from .runner import (
    EpochReport,
    RunConfig,
    RunResult,
    desk_run_config,
    evaluate,
    paper_run_config,
    run_training,
)

__all__ = [
    "CSV_HEADER",
    "EpochReport",
    "RunConfig",
    "RunResult",
    "cli_main",
    "compare_runs",
    "desk_run_config",
    "evaluate",
    "format_real",
    "load_run_result",
    "paper_run_config",
    "parse_config_file",
    "parse_run_filename",
    "read_csv",
    "render_png",
    "run_training",
    "write_csv",
    "write_run_artifacts",
    "write_svg_chart",
]
