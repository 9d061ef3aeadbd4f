"""Command line front end: generate / verify / stats.

Exit codes are uniform across subcommands: 0 everything succeeded,
1 the run finished but produced failures (rejected records, verification
problems), 2 the command could not run at all.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import __version__
from .dataset import DatasetError, compute_stats, format_stats_text, render_stats_figure, verify_dataset
from .model import ChartType, EngineId
from .pipeline import RunConfig, RunSummary, parse_harness_cmd, run_generate
from .render import DEFAULT_MAX_ATTEMPTS, DEFAULT_TIMEOUT_S, HarnessUnavailable
from .sampler import EmptyDomain


def _parse_multi(values: tuple[str, ...], enum_cls, what: str):
    """Accept repeated flags and comma-separated lists; None means all."""
    if not values:
        return None
    names = [part.strip() for v in values for part in v.split(",") if part.strip()]
    out = set()
    valid = {member.value: member for member in enum_cls}
    for name in names:
        if name not in valid:
            raise click.BadParameter(
                f"unknown {what} {name!r}; choose from {', '.join(sorted(valid))}"
            )
        out.add(valid[name])
    return frozenset(out)


@click.group()
@click.version_option(version=__version__)
def main() -> None:
    """Synthetic chart dataset generator."""


@main.command()
@click.option("--count", type=int, required=True, help="Records to generate.")
@click.option("--seed", type=int, default=0, show_default=True, help="Base seed.")
@click.option(
    "--out",
    "out_dir",
    type=click.Path(file_okay=False, path_type=Path),
    required=True,
    help="Output dataset directory.",
)
@click.option(
    "--backend",
    type=click.Choice(["template", "llm"]),
    default="template",
    show_default=True,
)
@click.option("--llm-endpoint", default=None, help="Completion endpoint for --backend llm.")
@click.option(
    "--engines",
    multiple=True,
    help="Restrict plotting engines (repeat or comma-separate).",
)
@click.option(
    "--chart-types",
    multiple=True,
    help="Restrict chart types (repeat or comma-separate).",
)
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--shard-size", type=int, default=100, show_default=True)
@click.option("--timeout-s", type=float, default=DEFAULT_TIMEOUT_S, show_default=True)
@click.option(
    "--max-repairs",
    type=int,
    default=DEFAULT_MAX_ATTEMPTS - 1,
    show_default=True,
    help="Repair attempts after the first render.",
)
@click.option(
    "--harness-cmd",
    default=None,
    help="Render worker command line (defaults to the bundled mock).",
)
@click.option("--resume", is_flag=True, help="Reuse complete shards from a prior run.")
def generate(
    count: int,
    seed: int,
    out_dir: Path,
    backend: str,
    llm_endpoint: str,
    engines: tuple[str, ...],
    chart_types: tuple[str, ...],
    workers: int,
    shard_size: int,
    timeout_s: float,
    max_repairs: int,
    harness_cmd: str,
    resume: bool,
) -> None:
    """Generate a dataset of chart records."""
    try:
        config = RunConfig(
            count=count,
            out_dir=out_dir,
            seed=seed,
            backend=backend,
            llm_endpoint=llm_endpoint,
            chart_types=_parse_multi(chart_types, ChartType, "chart type"),
            engines=_parse_multi(engines, EngineId, "engine"),
            workers=workers,
            shard_size=shard_size,
            timeout_s=timeout_s,
            max_repairs=max_repairs,
            harness_cmd=parse_harness_cmd(harness_cmd),
            resume=resume,
        )
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc

    try:
        summary = run_generate(config)
    except EmptyDomain as exc:
        raise click.UsageError(str(exc)) from exc
    except HarnessUnavailable as exc:
        click.echo(f"fatal: render harness unavailable: {exc}", err=True)
        sys.exit(2)
    except DatasetError as exc:
        click.echo(f"fatal: {exc}", err=True)
        sys.exit(2)

    _print_summary(summary)
    sys.exit(0 if summary.rejected == 0 else 1)


def _print_summary(summary: RunSummary) -> None:
    click.echo(
        f"produced {summary.produced}/{summary.requested} records "
        f"({summary.reused} reused, {summary.rejected} rejected)"
    )
    for engine, counts in sorted(summary.per_engine.items()):
        click.echo(
            f"  {engine}: {counts['ok']}/{counts['attempts']} attempts succeeded"
        )
    if summary.repair_histogram:
        hist = ", ".join(
            f"{attempts} repairs x{n}"
            for attempts, n in sorted(summary.repair_histogram.items())
        )
        click.echo(f"  repair histogram: {hist}")
    click.echo(
        f"wall time {summary.wall_s:.1f}s ({summary.records_per_s} records/s)"
    )
    click.echo(f"manifest digest {summary.manifest.get('digest', '')[:16]}")


@main.command()
@click.argument("dataset", type=click.Path(file_okay=False, path_type=Path))
@click.option(
    "--shallow",
    is_flag=True,
    help="Check shard digests only; skip per-record invariants.",
)
def verify(dataset: Path, shallow: bool) -> None:
    """Re-check manifest digests and record invariants for DATASET."""
    if not Path(dataset).is_dir():
        click.echo(f"fatal: no such dataset directory: {dataset}", err=True)
        sys.exit(2)
    try:
        report = verify_dataset(dataset, deep=not shallow)
    except DatasetError as exc:
        click.echo(f"fatal: {exc}", err=True)
        sys.exit(2)
    for problem in report.problems:
        click.echo(f"problem: {problem}")
    click.echo(
        f"checked {report.checked} records: "
        + ("ok" if report.ok else f"{len(report.problems)} problems")
    )
    sys.exit(0 if report.ok else 1)


@main.command()
@click.argument("dataset", type=click.Path(file_okay=False, path_type=Path))
@click.option(
    "--fig",
    "fig_path",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Where to save the summary figure (default: DATASET/stats/summary.png).",
)
@click.option("--json", "as_json", is_flag=True, help="Print JSON instead of TSV.")
def stats(dataset: Path, fig_path: Path, as_json: bool) -> None:
    """Summarize DATASET and render the summary figure."""
    try:
        result = compute_stats(dataset)
    except DatasetError as exc:
        click.echo(f"fatal: {exc}", err=True)
        sys.exit(2)
    fig_path = fig_path or Path(dataset) / "stats" / "summary.png"
    render_stats_figure(result, fig_path)
    if as_json:
        click.echo(json.dumps(result, indent=2, sort_keys=True))
    else:
        click.echo(format_stats_text(result), nl=False)
    click.echo(f"figure written to {fig_path}", err=True)
    sys.exit(0)


if __name__ == "__main__":
    main()
