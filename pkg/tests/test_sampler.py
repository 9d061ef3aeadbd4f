"""Spec sampling: dimension constraints, compatibility, trend assignment."""

from __future__ import annotations

import pytest

from chartforge.catalog import load_theme_catalog, load_trend_catalog
from chartforge.model import ChartType, EngineId, TrendFamily, compatible
from chartforge.sampler import (
    DIM_CONSTRAINTS,
    EmptyDomain,
    GenConfig,
    assign_trends,
    constraint_for,
    sample_chart_spec,
    sample_theme,
    series_count,
    series_length,
)

ORDERED_AXIS_FAMILIES = {
    TrendFamily.CYCLIC,
    TrendFamily.PLATEAU_THEN_CHANGE,
    TrendFamily.ACCELERATING,
    TrendFamily.DECELERATING,
}


def _only(chart_type: ChartType) -> GenConfig:
    return GenConfig.restricted(types=frozenset({chart_type}))


def test_pie_dims_always_two_cols_small_rows() -> None:
    config = _only(ChartType.PIE)
    for seed in range(1000):
        spec = sample_chart_spec(seed, config)
        assert spec.chart_type is ChartType.PIE
        assert spec.n_cols == 2
        assert 2 <= spec.n_rows <= 8


def test_every_constraint_table_value_reachable() -> None:
    for chart_type, constraint in DIM_CONSTRAINTS.items():
        config = _only(chart_type)
        cols_seen, rows_seen = set(), set()
        for seed in range(3000):
            spec = sample_chart_spec(seed, config)
            cols_seen.add(spec.n_cols)
            rows_seen.add(spec.n_rows)
        assert cols_seen == {v for v, _ in constraint.col_choices}
        assert rows_seen == {v for v, _ in constraint.row_choices}


def test_radar_on_seaborn_is_empty_domain() -> None:
    with pytest.raises(EmptyDomain):
        GenConfig.restricted(
            types=frozenset({ChartType.RADAR}), engines=frozenset({EngineId.SEABORN})
        )


def test_genconfig_rejects_bad_weights() -> None:
    with pytest.raises(ValueError):
        GenConfig(chart_type_weights={t: -1.0 for t in ChartType})
    with pytest.raises(ValueError):
        GenConfig(engine_weights={e: 0.0 for e in EngineId})


def test_same_seed_identical_spec() -> None:
    a = sample_chart_spec(987654, record_id="rec-x")
    b = sample_chart_spec(987654, record_id="rec-x")
    assert a == b
    assert sample_chart_spec(987655, record_id="rec-x") != a


def test_default_record_id_derives_from_seed() -> None:
    spec = sample_chart_spec(0xDEADBEEF)
    assert spec.record_id == f"rec-{0xDEADBEEF:016x}"
    assert spec.seed == 0xDEADBEEF


def test_scatter_two_col_fraction() -> None:
    config = _only(ChartType.SCATTER)
    n = 10_000
    two = sum(1 for s in range(n) if sample_chart_spec(s, config).n_cols == 2)
    assert abs(two / n - 10 / 13) < 0.03


def test_sampled_specs_satisfy_all_constraints() -> None:
    for seed in range(2000):
        spec = sample_chart_spec(seed)
        assert compatible(spec.engine, spec.chart_type), spec
        assert constraint_for(spec.chart_type).allows(spec.n_rows, spec.n_cols), spec
        n_series = series_count(spec.chart_type, spec.n_rows, spec.n_cols)
        s_len = series_length(spec.chart_type, spec.n_rows, spec.n_cols)
        assert len(spec.trends) == n_series
        for tag in spec.trends:
            assert spec.chart_type in tag.applicable
            assert tag.min_len <= s_len
        assert spec.theme.violations() == []


def test_restriction_to_type_and_engine_honored() -> None:
    config = GenConfig.restricted(
        types=frozenset({ChartType.BAR, ChartType.LINE}),
        engines=frozenset({EngineId.SEABORN}),
    )
    for seed in range(200):
        spec = sample_chart_spec(seed, config)
        assert spec.chart_type in (ChartType.BAR, ChartType.LINE)
        assert spec.engine is EngineId.SEABORN


def test_single_series_gets_single_trend() -> None:
    tags = assign_trends(ChartType.PIE, 1, 5, seed=3)
    assert len(tags) == 1
    assert ChartType.PIE in tags[0].applicable


def test_multi_series_guarantees_family_diversity() -> None:
    for seed in range(1000):
        tags = assign_trends(ChartType.STACKED_BAR, 6, 8, seed=seed)
        assert len(tags) == 6
        assert len({t.family for t in tags}) >= 2, seed


def test_pie_trends_never_ordered_axis() -> None:
    config = _only(ChartType.PIE)
    for seed in range(500):
        spec = sample_chart_spec(seed, config)
        for tag in spec.trends:
            assert tag.family not in ORDERED_AXIS_FAMILIES


def test_trends_respect_min_len() -> None:
    catalog = load_trend_catalog()
    short = assign_trends(ChartType.LINE, 3, 2, seed=9, catalog=catalog)
    for tag in short:
        assert tag.min_len <= 2


def test_assign_trends_short_series_never_empty() -> None:
    for chart_type in ChartType:
        tags = assign_trends(chart_type, 2, 2, seed=1)
        assert len(tags) == 2


def test_sample_theme_comes_from_catalog() -> None:
    catalog = load_theme_catalog()
    theme = sample_theme(42, GenConfig(), catalog)
    assert theme in catalog.themes
    assert sample_theme(42, GenConfig(), catalog) == theme


def test_type_marginals_close_to_uniform() -> None:
    # 9 types, uniform weights: each should land near 1/9 over 9k draws.
    n = 9000
    counts: dict[ChartType, int] = {t: 0 for t in ChartType}
    for seed in range(n):
        counts[sample_chart_spec(seed).chart_type] += 1
    for chart_type, c in counts.items():
        assert abs(c / n - 1 / 9) < 0.03, chart_type
