"""Shared fixtures: the golden anime-genre table and cached generation runs."""

from __future__ import annotations

import shutil
from pathlib import Path

import pytest

from chartforge.model import ChartSpec, ChartType, DataTable, EngineId, Theme
from chartforge.pipeline import RunConfig, RunSummary, run_generate
from chartforge.sampler import assign_trends


GOLDEN_ROWS: dict[str, tuple[float, ...]] = {
    "Action": (80, 85, 90, 95, 100, 105, 110, 115, 120),
    "Adventure": (70, 73, 76, 78, 80, 81, 83, 85, 86),
    "Fantasy": (60, 62, 65, 69, 74, 80, 87, 95, 104),
    "Romance": (50, 48, 47, 45, 43, 40, 38, 35, 33),
    "Horror": (30, 32, 35, 39, 44, 50, 57, 65, 74),
    "Mecha": (40, 38, 35, 33, 30, 28, 25, 23, 20),
}

GOLDEN_YEARS = tuple(str(y) for y in range(2014, 2023))


@pytest.fixture(scope="session")
def golden_table() -> DataTable:
    return DataTable(
        index_label="Genre",
        index=tuple(GOLDEN_ROWS),
        series_labels=GOLDEN_YEARS,
        cells=tuple(tuple(float(v) for v in row) for row in GOLDEN_ROWS.values()),
    )


@pytest.fixture(scope="session")
def golden_spec(golden_table: DataTable) -> ChartSpec:
    # A line chart over the year columns; one trend tag per value column.
    trends = assign_trends(ChartType.LINE, golden_table.n_value_cols, golden_table.n_rows, seed=7)
    return ChartSpec(
        record_id="rec-golden",
        seed=7,
        chart_type=ChartType.LINE,
        engine=EngineId.MATPLOTLIB,
        theme=Theme(topic="entertainment", phrase="anime genre popularity by year"),
        trends=trends,
        n_rows=golden_table.n_rows,
        n_cols=golden_table.n_value_cols + 1,
        style_seed=11,
    )


@pytest.fixture(scope="session")
def dataset_factory(tmp_path_factory: pytest.TempPathFactory):
    """Build (and cache) full generation runs keyed by their config.

    Tests that mutate files must pass ``fresh=True`` (or copy the tree) so
    cached runs stay pristine for everyone else.
    """

    cache: dict[tuple, tuple[Path, RunSummary]] = {}

    def make(
        count: int,
        seed: int = 2024,
        *,
        shard_size: int = 100,
        workers: int = 2,
        fresh: bool = False,
        **kwargs,
    ) -> tuple[Path, RunSummary]:
        key = (count, seed, shard_size, workers, tuple(sorted(kwargs.items())))
        if not fresh and key in cache:
            return cache[key]
        out = tmp_path_factory.mktemp(f"ds{count}s{seed}")
        config = RunConfig(
            count=count,
            out_dir=out,
            seed=seed,
            shard_size=shard_size,
            workers=workers,
            **kwargs,
        )
        summary = run_generate(config)
        if not fresh:
            cache[key] = (out, summary)
        return out, summary

    return make


@pytest.fixture()
def copy_dataset(tmp_path: Path):
    """Copy a cached dataset tree so a test can corrupt it safely."""

    def copy(src: Path) -> Path:
        dst = tmp_path / "mutant"
        shutil.copytree(src, dst)
        return dst

    return copy
