"""Table synthesis: trend realization, classification, outliers, descriptions."""

from __future__ import annotations

import re

import pytest

from chartforge.catalog import load_trend_catalog
from chartforge.model import ChartType, TrendFamily, fmt_number
from chartforge.rng import CounterRng
from chartforge.sampler import GenConfig, sample_chart_spec, series_count
from chartforge.tables import (
    TrendParams,
    classify_trend,
    gen_data_description,
    gen_trend_series,
    spell_count,
    synth_table,
    synthesize,
)

_NUM_RE = re.compile(r"-?\d+(?:\.\d+)?")


# --- classification ----------------------------------------------------------


def test_classify_golden_series(golden_table) -> None:
    assert classify_trend(golden_table.row_values("Action")) is TrendFamily.MONOTONE_INCREASING
    assert classify_trend(golden_table.row_values("Mecha")) is TrendFamily.MONOTONE_DECREASING


@pytest.mark.parametrize(
    ("series", "family"),
    [
        ([5, 5, 5, 5], TrendFamily.CONSTANT),
        ([10, 11, 9, 45, 10, 11], TrendFamily.SPIKE),
        ([40, 41, 39, 8, 41, 40], TrendFamily.DIP),
        ([10, 20, 30, 40, 50, 60], TrendFamily.MONOTONE_INCREASING),
        # doubling has growing increments, so acceleration outranks monotone
        ([1, 2, 4, 8, 16, 32], TrendFamily.ACCELERATING),
    ],
)
def test_classify_examples(series: list[float], family: TrendFamily) -> None:
    assert classify_trend(series) is family


def test_constant_with_zero_noise_is_flat() -> None:
    catalog = load_trend_catalog()
    tag = next(t for t in catalog.tags if t.family is TrendFamily.CONSTANT)
    params = TrendParams(
        base_value=50.0, amplitude=1.0, noise_level=0.0, outlier_count=0, outlier_magnitude=2.0
    )
    values = gen_trend_series(tag, 6, CounterRng(1, "x"), params)
    assert values == [50.0] * 6


def test_gen_trend_series_rejects_short_runs() -> None:
    catalog = load_trend_catalog()
    tag = max(catalog.tags, key=lambda t: t.min_len)
    params = TrendParams(50.0, 1.0, 0.5, 0, 2.0)
    with pytest.raises(ValueError):
        gen_trend_series(tag, tag.min_len - 1, CounterRng(0), params)


def test_every_catalog_trend_realizes_its_family() -> None:
    catalog = load_trend_catalog()
    for tag in catalog.tags:
        for n in (tag.min_len, tag.min_len + 3, 12):
            for seed in (1, 7, 23):
                rng = CounterRng(seed, f"{tag.id}-{n}")
                params = TrendParams(
                    base_value=100.0,
                    amplitude=1.0,
                    noise_level=0.6,
                    outlier_count=0,
                    outlier_magnitude=2.0,
                )
                values = gen_trend_series(tag, n, rng, params)
                assert len(values) == n
                assert classify_trend(values) is tag.family, (tag.id, n, seed)


def test_trend_params_validation() -> None:
    with pytest.raises(ValueError):
        TrendParams(1.0, 1.0, 1.5, 0, 2.0)
    with pytest.raises(ValueError):
        TrendParams(1.0, 1.0, 0.5, 1, 1.0)


# --- table synthesis ---------------------------------------------------------


def test_synth_dims_match_spec_across_types() -> None:
    for seed in range(200):
        spec = sample_chart_spec(seed)
        table = synth_table(spec)
        assert table.n_rows == spec.n_rows
        assert table.n_value_cols == spec.n_cols - 1
        assert table.violations() == []


def test_synthesis_deterministic() -> None:
    spec = sample_chart_spec(321)
    a = synthesize(spec)
    b = synthesize(spec)
    assert a.table == b.table
    assert a.outliers == b.outliers
    assert a.description == b.description


def test_small_table_series_realize_their_tags() -> None:
    # Below the 12-cell floor no outliers are injected, so every series
    # must still classify as its assigned family.
    config = GenConfig.restricted(types=frozenset({ChartType.PIE}))
    checked = 0
    for seed in range(60):
        spec = sample_chart_spec(seed, config)
        if spec.n_rows * spec.n_cols >= 12:
            continue
        result = synthesize(spec)
        values = result.table.col_values(result.table.series_labels[0])
        assert result.outliers == ()
        assert classify_trend(values) is spec.trends[0].family
        checked += 1
    assert checked >= 10


def test_outlier_guarantee_and_mention() -> None:
    found = 0
    for seed in range(80):
        spec = sample_chart_spec(seed)
        if spec.n_rows * spec.n_cols < 12:
            continue
        result = synthesize(spec)
        assert len(result.outliers) >= 1, spec
        assert "outlier" in result.description
        for flag in result.outliers:
            cell = result.table.cells[flag.row][flag.col]
            assert fmt_number(cell) in result.description
            assert flag.factor >= 2.0
        found += 1
    assert found >= 40


def test_two_outliers_on_large_tables() -> None:
    for seed in range(300):
        spec = sample_chart_spec(seed)
        if spec.n_rows * (spec.n_cols - 1) >= 40:
            assert len(synthesize(spec).outliers) == 2
            return
    pytest.fail("no large table sampled")


# --- descriptions ------------------------------------------------------------


def test_description_length_and_anchors() -> None:
    for seed in (5, 55, 555):
        spec = sample_chart_spec(seed)
        result = synthesize(spec)
        words = result.description.split()
        assert 100 <= len(words) <= 600
        assert spec.theme.phrase in result.description
        assert spell_count(result.table.n_rows) in result.description


def test_description_numbers_exist_in_table() -> None:
    for seed in range(150):
        spec = sample_chart_spec(seed)
        result = synthesize(spec)
        table = result.table
        allowed = {fmt_number(v) for row in table.cells for v in row}
        for label in (*table.index, *table.series_labels, table.index_label):
            allowed.update(_NUM_RE.findall(label))
        for num in _NUM_RE.findall(result.description):
            canon = num.rstrip("0").rstrip(".") if "." in num else num
            assert num in allowed or canon in allowed, (seed, num)


def test_description_covers_every_series_of_narrow_tables() -> None:
    spec = sample_chart_spec(77)
    result = synthesize(spec)
    n_series = series_count(spec.chart_type, spec.n_rows, spec.n_cols)
    if n_series <= 12:
        names = (
            result.table.index
            if spec.chart_type.value in ("stacked_bar", "radar")
            else result.table.series_labels
        )
        for name in names:
            assert name in result.description


def test_spell_count_basics() -> None:
    assert spell_count(1) == "one"
    assert spell_count(9) == "nine"
    assert spell_count(30) == "thirty"


def test_description_standalone_entry_point(golden_table, golden_spec) -> None:
    text = gen_data_description(golden_spec, golden_table)
    assert golden_spec.theme.phrase in text
    assert 100 <= len(text.split()) <= 600
