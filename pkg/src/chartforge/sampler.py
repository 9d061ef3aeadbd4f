"""Deterministic sampling of chart specs: type, engine, theme, trends, dims.

Dimension distributions are the literal discrete choice sets of the
published per-chart-type constraint table; ``n_cols`` counts ALL CSV
columns including the leading label column.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .catalog import ThemeCatalog, TrendCatalog, load_theme_catalog, load_trend_catalog
from .model import (
    ENGINE_COVERAGE,
    ChartSpec,
    ChartType,
    DimConstraint,
    EngineId,
    Theme,
    TrendTag,
    compatible,
)
from .rng import CounterRng


class EmptyDomain(ValueError):
    pass


_R13 = tuple((v, 1) for v in (2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 20, 25, 30))
_R11 = tuple((v, 1) for v in (2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 20))
_R10 = tuple((v, 1) for v in (5, 6, 7, 8, 9, 10, 15, 20, 25, 30))


def _uniform(lo: int, hi: int) -> tuple[tuple[int, int], ...]:
    return tuple((v, 1) for v in range(lo, hi + 1))


# col_choices are TOTAL column counts (label column + value columns).
DIM_CONSTRAINTS: Mapping[ChartType, DimConstraint] = {
    ChartType.BAR: DimConstraint(
        ChartType.BAR, _uniform(2, 4), _R13, "1-3 value series beside the category axis"
    ),
    ChartType.LINE: DimConstraint(
        ChartType.LINE, _uniform(2, 6), _R13, "x-axis labels plus 1-5 y series"
    ),
    ChartType.RADAR: DimConstraint(
        ChartType.RADAR, _uniform(4, 11), _uniform(1, 10), "3-10 axes; each row is a polygon"
    ),
    ChartType.STACKED_BAR: DimConstraint(
        ChartType.STACKED_BAR, _uniform(3, 11), _R13, "2-10 group columns; rows stack"
    ),
    ChartType.DOUGHNUT: DimConstraint(
        ChartType.DOUGHNUT, ((2, 1),), _R11, "label column plus one value column"
    ),
    ChartType.PIE: DimConstraint(
        ChartType.PIE, ((2, 1),), _uniform(2, 8), "label column plus one value column"
    ),
    ChartType.SCATTER: DimConstraint(
        ChartType.SCATTER, ((2, 10), (3, 1), (4, 1), (5, 1)), _R13, "x column plus y series"
    ),
    ChartType.BOXPLOT: DimConstraint(
        ChartType.BOXPLOT, _uniform(2, 11), _R13, "1-10 group columns; rows are observations"
    ),
    ChartType.STACKED_AREA: DimConstraint(
        ChartType.STACKED_AREA, _uniform(3, 6), _R10, "2-5 stacked series over the x-axis"
    ),
}

# Chart types whose data series run along the rows of the CSV (each row is
# one series over the value columns). All other types treat each value
# column as a series over the rows.
ROW_SERIES_TYPES = frozenset({ChartType.STACKED_BAR, ChartType.RADAR})


def constraint_for(chart_type: ChartType) -> DimConstraint:
    return DIM_CONSTRAINTS[chart_type]


def series_count(chart_type: ChartType, n_rows: int, n_cols: int) -> int:
    if chart_type in ROW_SERIES_TYPES:
        return n_rows
    return n_cols - 1


def series_length(chart_type: ChartType, n_rows: int, n_cols: int) -> int:
    if chart_type in ROW_SERIES_TYPES:
        return n_cols - 1
    return n_rows


@dataclass(frozen=True)
class GenConfig:
    chart_type_weights: Mapping[ChartType, float] = field(
        default_factory=lambda: {t: 1.0 for t in ChartType}
    )
    engine_weights: Mapping[EngineId, float] = field(
        default_factory=lambda: {e: 1.0 for e in EngineId}
    )
    allow_types: frozenset[ChartType] = frozenset(ChartType)
    allow_engines: frozenset[EngineId] = frozenset(EngineId)

    def __post_init__(self) -> None:
        for name, weights in (
            ("chart_type_weights", self.chart_type_weights),
            ("engine_weights", self.engine_weights),
        ):
            if any(w < 0 for w in weights.values()):
                raise ValueError(f"{name} contains a negative weight")
            if not any(w > 0 for w in weights.values()):
                raise ValueError(f"{name} has no positive weight")
        if not self.valid_pairs():
            raise EmptyDomain("restrictions leave no compatible (type, engine) pair")

    def valid_pairs(self) -> list[tuple[ChartType, EngineId]]:
        return [
            (t, e)
            for t in ChartType
            for e in EngineId
            if t in self.allow_types
            and e in self.allow_engines
            and compatible(e, t)
            and self.chart_type_weights.get(t, 0) > 0
            and self.engine_weights.get(e, 0) > 0
        ]

    @classmethod
    def restricted(
        cls,
        types: frozenset[ChartType] | None = None,
        engines: frozenset[EngineId] | None = None,
    ) -> "GenConfig":
        return cls(
            allow_types=types if types is not None else frozenset(ChartType),
            allow_engines=engines if engines is not None else frozenset(EngineId),
        )


def sample_theme(
    seed: int, config: GenConfig, catalog: ThemeCatalog | None = None
) -> Theme:
    catalog = catalog or load_theme_catalog()
    if not catalog.themes:
        raise EmptyDomain("theme catalog is empty")
    rng = CounterRng(seed, "theme")
    return rng.choice(catalog.themes)


def assign_trends(
    chart_type: ChartType,
    n_series: int,
    series_len: int,
    seed: int,
    catalog: TrendCatalog | None = None,
) -> tuple[TrendTag, ...]:
    """One trend tag per series, each applicable and fitting the series length.

    When there are 3+ series, at least two distinct families are present so
    multi-series charts never degenerate into one repeated pattern.
    """
    catalog = catalog or load_trend_catalog()
    eligible = catalog.applicable_to(chart_type, series_len)
    if not eligible:
        raise EmptyDomain(
            f"no trend applicable to {chart_type.value} at series length {series_len}"
        )
    rng = CounterRng(seed, "trends")
    tags = [rng.choice(eligible) for _ in range(n_series)]
    if n_series >= 3 and len({t.family for t in tags}) == 1:
        other = tuple(t for t in eligible if t.family is not tags[0].family)
        if other:
            tags[1] = rng.choice(other)
    return tuple(tags)


def sample_chart_spec(
    seed: int,
    config: GenConfig | None = None,
    record_id: str | None = None,
    theme_catalog: ThemeCatalog | None = None,
    trend_catalog: TrendCatalog | None = None,
) -> ChartSpec:
    config = config or GenConfig()
    rng = CounterRng(seed, "spec")

    types = sorted(
        {t for t, _ in config.valid_pairs()}, key=lambda t: t.value
    )
    type_weights = [config.chart_type_weights.get(t, 0) for t in types]
    chart_type = rng.weighted_choice(types, type_weights)

    engines = sorted(
        (
            e
            for e in EngineId
            if e in config.allow_engines
            and chart_type in ENGINE_COVERAGE[e]
            and config.engine_weights.get(e, 0) > 0
        ),
        key=lambda e: e.value,
    )
    engine_weights = [config.engine_weights.get(e, 0) for e in engines]
    engine = rng.weighted_choice(engines, engine_weights)

    constraint = DIM_CONSTRAINTS[chart_type]
    n_cols = rng.weighted_choice(
        [v for v, _ in constraint.col_choices], [w for _, w in constraint.col_choices]
    )
    n_rows = rng.weighted_choice(
        [v for v, _ in constraint.row_choices], [w for _, w in constraint.row_choices]
    )

    theme = sample_theme(rng.child("theme-seed").next_u64(), config, theme_catalog)
    trends = assign_trends(
        chart_type,
        series_count(chart_type, n_rows, n_cols),
        series_length(chart_type, n_rows, n_cols),
        rng.child("trend-seed").next_u64(),
        trend_catalog,
    )
    return ChartSpec(
        record_id=record_id or f"rec-{seed:016x}",
        seed=seed,
        chart_type=chart_type,
        engine=engine,
        theme=theme,
        trends=trends,
        n_rows=n_rows,
        n_cols=n_cols,
        style_seed=rng.child("style-seed").next_u64(),
    )
