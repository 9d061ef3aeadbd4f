"""Table synthesis: realize a chart spec as labeled numeric data.

Every trend family has a generator and the module-level
:func:`classify_trend` recovers the family from the generated values.
The two are kept exact complements by construction: each generator's
jitter bounds are chosen so no rounding or noise level can push a series
across a classification boundary (the margins are documented inline).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from statistics import median
from typing import Callable, Sequence

from .backends import BackendFailure, TextGenBackend
from .catalog import ThemeCatalog, load_theme_catalog
from .model import (
    ChartSpec,
    ChartType,
    DataTable,
    OutlierFlag,
    TableError,
    TrendFamily,
    TrendTag,
    fmt_number,
    round6,
)
from .rng import CounterRng
from .sampler import ROW_SERIES_TYPES, series_count, series_length

# Classification thresholds. Constant tolerance (relative full range) must
# stay below twice the constant family's max jitter and below the smallest
# monotone per-step rate; see the generator bounds next to each family.
CONST_TOL = 0.015
SPIKE_RATIO = 2.5
DIP_RATIO = 0.4
TIGHT_REST = 1.5
CURVE_RATIO = 1.8
PLATEAU_MIN = 3
PLATEAU_CHANGE = 0.1


class GenerationInvariant(AssertionError):
    """A generated series failed to classify as its own family."""


@dataclass(frozen=True)
class TrendParams:
    base_value: float
    amplitude: float
    noise_level: float  # in [0,1]; 0 = exact realization of the family
    outlier_count: int
    outlier_magnitude: float

    def __post_init__(self) -> None:
        if not 0 <= self.noise_level <= 1:
            raise ValueError("noise_level outside [0,1]")
        if self.outlier_count and self.outlier_magnitude < 2:
            raise ValueError("outlier magnitude below 2")


def classify_trend(series: Sequence[float]) -> TrendFamily:
    """Best-matching family for a value sequence; total for length >= 2."""
    v = [float(x) for x in series]
    if len(v) < 2:
        raise ValueError("series shorter than 2")
    n = len(v)
    scale = max(abs(x) for x in v) or 1.0

    if max(v) - min(v) <= CONST_TOL * scale:
        return TrendFamily.CONSTANT

    diffs = [b - a for a, b in zip(v, v[1:])]
    if all(d > 0 for d in diffs):
        if n >= 4:
            second = [b - a for a, b in zip(diffs, diffs[1:])]
            if all(s > 0 for s in second) and diffs[-1] >= CURVE_RATIO * diffs[0]:
                return TrendFamily.ACCELERATING
            if all(s < 0 for s in second) and diffs[0] >= CURVE_RATIO * diffs[-1]:
                return TrendFamily.DECELERATING
        return TrendFamily.MONOTONE_INCREASING
    if all(d < 0 for d in diffs):
        return TrendFamily.MONOTONE_DECREASING

    peak = max(range(n), key=lambda i: v[i])
    rest = [x for i, x in enumerate(v) if i != peak]
    if min(rest) > 0 and max(rest) / min(rest) <= TIGHT_REST:
        if v[peak] >= SPIKE_RATIO * median(rest):
            return TrendFamily.SPIKE
    trough = min(range(n), key=lambda i: v[i])
    rest = [x for i, x in enumerate(v) if i != trough]
    if min(rest) > 0 and max(rest) / min(rest) <= TIGHT_REST:
        if v[trough] <= DIP_RATIO * median(rest):
            return TrendFamily.DIP

    m = 1
    while m < n and max(v[: m + 1]) - min(v[: m + 1]) <= CONST_TOL * scale:
        m += 1
    if PLATEAU_MIN <= m <= n - 2:
        tail = v[m - 1 :]
        tdiffs = [b - a for a, b in zip(tail, tail[1:])]
        monotone = all(d > 0 for d in tdiffs) or all(d < 0 for d in tdiffs)
        if monotone and abs(tail[-1] - tail[0]) >= PLATEAU_CHANGE * scale:
            return TrendFamily.PLATEAU_THEN_CHANGE

    for period in range(2, n // 2 + 1):
        if all(v[i] == v[i + period] for i in range(n - period)):
            return TrendFamily.CYCLIC

    return TrendFamily.VOLATILE


def _alt_jitter(rng: CounterRng, i: int, spread: float, noise: float) -> float:
    # Sign alternates by position so consecutive step sizes always differ
    # in opposite directions: second differences can never share a sign.
    u = rng.uniform(0.25, 1.0) * spread * noise
    return u if i % 2 == 0 else -u


def _gen_monotone(tag: TrendTag, n: int, rng: CounterRng, p: TrendParams) -> list[float]:
    # Per-step rise is rate*base within +-20%: step ratio <= 1.5 < CURVE_RATIO,
    # so a monotone series is never mistaken for accelerating/decelerating.
    rate = float(tag.params["rate"])
    steps = [
        rate * p.base_value * (1 + _alt_jitter(rng, i, 0.2, p.noise_level))
        for i in range(n - 1)
    ]
    values = [p.base_value]
    for s in steps:
        values.append(values[-1] + s)
    if tag.family is TrendFamily.MONOTONE_DECREASING:
        values.reverse()
    return values


def _gen_constant(tag: TrendTag, n: int, rng: CounterRng, p: TrendParams) -> list[float]:
    # Max jitter 0.006 gives a full range of 1.2% < CONST_TOL.
    jitter = float(tag.params["jitter"])
    return [
        p.base_value * (1 + _alt_jitter(rng, i, jitter, p.noise_level))
        for i in range(n)
    ]


def _shock_index(pos: str, n: int, rng: CounterRng) -> int:
    third = max(1, n // 3)
    if pos == "early":
        return rng.randrange(third)
    if pos == "middle":
        return third + rng.randrange(max(1, n - 2 * third))
    if pos == "late":
        return n - 1 - rng.randrange(third)
    return rng.randrange(n)


def _gen_shock(tag: TrendTag, n: int, rng: CounterRng, p: TrendParams) -> list[float]:
    # Rest jitter 4% keeps max(rest)/min(rest) <= 1.083 (tight); magnitude
    # >= 3 against a median within 4% of base clears SPIKE_RATIO/DIP_RATIO.
    magnitude = float(tag.params["magnitude"])
    at = _shock_index(str(tag.params["pos"]), n, rng)
    values = [p.base_value * (1 + _alt_jitter(rng, i, 0.04, p.noise_level)) for i in range(n)]
    if tag.family is TrendFamily.SPIKE:
        values[at] = p.base_value * magnitude
    else:
        values[at] = p.base_value / magnitude
    return values


def _gen_plateau(tag: TrendTag, n: int, rng: CounterRng, p: TrendParams) -> list[float]:
    frac = float(tag.params["break_frac"])
    rate = float(tag.params["change_rate"])
    up = tag.params["direction"] == "up"
    m = min(n - 2, max(PLATEAU_MIN, round(frac * n)))
    k = n - m
    # Cap total change at 4x up / 0.25x down so long tails stay plausible.
    if up:
        rate = min(rate, 4 ** (1 / k) - 1)
        factor = 1 + rate
    else:
        rate = min(rate, 1 - 0.25 ** (1 / k))
        factor = 1 - rate
    values = [p.base_value] * m
    for _ in range(k):
        values.append(values[-1] * factor)
    return values


def _gen_cyclic(tag: TrendTag, n: int, rng: CounterRng, p: TrendParams) -> list[float]:
    period = int(tag.params["period"])
    amp = float(tag.params["amplitude"])
    z = [rng.uniform(-0.6, 0.6) for _ in range(period)]
    hi, lo = rng.sample(range(period), 2)
    z[hi], z[lo] = 1.0, -1.0
    pattern = [round6(p.base_value * (1 + amp * x)) for x in z]
    # Tiling pre-rounded values keeps lag-p equality exact after the final
    # per-cell rounding pass.
    return [pattern[i % period] for i in range(n)]


def _gen_volatile(tag: TrendTag, n: int, rng: CounterRng, p: TrendParams) -> list[float]:
    swing = float(tag.params["swing"])
    z = [rng.uniform(-0.9, 0.9) for _ in range(n)]
    forced = rng.sample(range(n), 4)
    for idx, zv in zip(forced, (1.0, -1.0, 0.5, -0.5)):
        z[idx] = zv
    return [p.base_value * (1 + swing * x) for x in z]


def _gen_curved(tag: TrendTag, n: int, rng: CounterRng, p: TrendParams) -> list[float]:
    power = float(tag.params["power"])
    gain = float(tag.params["gain"])
    return [
        p.base_value * (1 + gain * (t / (n - 1)) ** power) for t in range(n)
    ]


_GENERATORS: dict[TrendFamily, Callable[[TrendTag, int, CounterRng, TrendParams], list[float]]] = {
    TrendFamily.MONOTONE_INCREASING: _gen_monotone,
    TrendFamily.MONOTONE_DECREASING: _gen_monotone,
    TrendFamily.CONSTANT: _gen_constant,
    TrendFamily.SPIKE: _gen_shock,
    TrendFamily.DIP: _gen_shock,
    TrendFamily.PLATEAU_THEN_CHANGE: _gen_plateau,
    TrendFamily.CYCLIC: _gen_cyclic,
    TrendFamily.VOLATILE: _gen_volatile,
    TrendFamily.ACCELERATING: _gen_curved,
    TrendFamily.DECELERATING: _gen_curved,
}

# Families whose generators rely on random placement need a verify-and-retry
# pass; the rest have hard margins and a single attempt always classifies.
_RETRY_FAMILIES = frozenset({TrendFamily.VOLATILE, TrendFamily.CYCLIC})
_MAX_GEN_ATTEMPTS = 8


def gen_trend_series(
    tag: TrendTag, n: int, rng: CounterRng, params: TrendParams
) -> list[float]:
    """Values realizing ``tag`` with classify_trend(result) == tag.family."""
    if n < tag.min_len:
        raise ValueError(f"trend {tag.id} needs >= {tag.min_len} points, got {n}")
    gen = _GENERATORS[tag.family]
    attempts = _MAX_GEN_ATTEMPTS if tag.family in _RETRY_FAMILIES else 1
    for attempt in range(attempts):
        values = [round6(v) for v in gen(tag, n, rng.child(f"try-{attempt}"), params)]
        if classify_trend(values) is tag.family:
            return values
    raise GenerationInvariant(
        f"{tag.id} failed to realize {tag.family.value} after {attempts} attempts"
    )


# Label material. Lexicon nouns cover small tables; adjective-noun pairs
# extend the pool for tables with up to 30 category rows.
_ADJECTIVES = (
    "new", "classic", "premium", "budget", "regional", "urban",
    "vintage", "digital", "compact", "deluxe", "seasonal", "local",
)
_RADAR_AXES = (
    "Speed", "Quality", "Reliability", "Comfort", "Value",
    "Design", "Efficiency", "Support", "Safety", "Range",
)
_METRICS = ("Count", "Total", "Share", "Value", "Amount", "Volume", "Score", "Revenue")
_MONTHS = ("Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec")

_WORDS = (
    "zero one two three four five six seven eight nine ten eleven twelve "
    "thirteen fourteen fifteen sixteen seventeen eighteen nineteen twenty"
).split()


def spell_count(n: int) -> str:
    """Small counts in words so structural numbers never look like cells."""
    if n < len(_WORDS):
        return _WORDS[n]
    if n < 30:
        return "twenty-" + _WORDS[n - 20]
    if n == 30:
        return "thirty"
    return str(n)


def category_labels(rng: CounterRng, nouns: Sequence[str], k: int) -> list[str]:
    pool = [n.title() for n in nouns]
    if k > len(pool):
        extra = [
            f"{adj.title()} {noun.title()}" for adj in _ADJECTIVES for noun in nouns
        ]
        rng.shuffle(extra)
        pool = pool + extra
    if k > len(pool):
        raise TableError(f"label pool exhausted: need {k}")
    return rng.sample(pool, k)


def sequence_labels(rng: CounterRng, k: int) -> tuple[str, list[str]]:
    """An ordered axis: (axis name, k labels)."""
    kind = rng.choice(("years", "months", "quarters", "weeks", "days"))
    if kind == "years":
        start = rng.randint(1990, 2020)
        return "Year", [str(start + i) for i in range(k)]
    if kind == "months":
        if k <= 12:
            start = rng.randrange(12 - k + 1)
            return "Month", [_MONTHS[start + i] for i in range(k)]
        year = rng.randint(2015, 2022)
        return "Month", [
            f"{_MONTHS[i % 12]} {year + i // 12}" for i in range(k)
        ]
    if kind == "quarters":
        year = rng.randint(2015, 2022)
        start = rng.randrange(4)
        return "Quarter", [
            f"Q{(start + i) % 4 + 1} {year + (start + i) // 4}" for i in range(k)
        ]
    if kind == "weeks":
        return "Week", [f"Week {i + 1}" for i in range(k)]
    return "Day", [f"Day {i + 1}" for i in range(k)]


def scatter_x_labels(rng: CounterRng, k: int) -> list[str]:
    x0 = round6(rng.uniform(0, 50))
    dx = round6(rng.uniform(1, 10))
    return [fmt_number(round6(x0 + i * dx)) for i in range(k)]


@dataclass(frozen=True)
class TableSynthesis:
    table: DataTable
    outliers: tuple[OutlierFlag, ...]
    description: str


def _build_labels(
    spec: ChartSpec, rng: CounterRng, catalog: ThemeCatalog
) -> tuple[str, list[str], list[str]]:
    """(index_label, index, series_labels) for the spec's layout."""
    nouns = catalog.nouns_for(spec.theme.topic)
    n_value_cols = spec.n_cols - 1
    ct = spec.chart_type
    if ct in (ChartType.PIE, ChartType.DOUGHNUT):
        index = category_labels(rng.child("rows"), nouns, spec.n_rows)
        return "Category", index, [rng.child("metric").choice(_METRICS)]
    if ct is ChartType.RADAR:
        index = category_labels(rng.child("rows"), nouns, spec.n_rows)
        axes = rng.child("cols").sample(list(_RADAR_AXES), n_value_cols)
        return "Item", index, axes
    if ct is ChartType.STACKED_BAR:
        index = category_labels(rng.child("rows"), nouns, spec.n_rows)
        label, cols = sequence_labels(rng.child("cols"), n_value_cols)
        return "Category", index, cols
    if ct is ChartType.SCATTER:
        index = scatter_x_labels(rng.child("rows"), spec.n_rows)
        cols = category_labels(rng.child("cols"), nouns, n_value_cols)
        return "X", index, cols
    if ct is ChartType.BOXPLOT:
        index = [f"Sample {i + 1}" for i in range(spec.n_rows)]
        cols = category_labels(rng.child("cols"), nouns, n_value_cols)
        return "Sample", index, cols
    # bar, line, stacked_area: ordered axis down the rows, one series per column
    label, index = sequence_labels(rng.child("rows"), spec.n_rows)
    cols = category_labels(rng.child("cols"), nouns, n_value_cols)
    return label, index, cols


def synthesize(
    spec: ChartSpec,
    backend: TextGenBackend | None = None,
    catalog: ThemeCatalog | None = None,
) -> TableSynthesis:
    """Materialize the spec's table, outlier flags, and data description.

    With no backend (or a template backend) this is a pure function of the
    spec. An LLM backend supplies the table and description text instead;
    its output is validated against the same spec before acceptance.
    """
    if backend is not None and not backend.is_template:
        return _synthesize_via_backend(spec, backend)

    catalog = catalog or load_theme_catalog()
    rng = CounterRng(spec.seed, "table")
    index_label, index, series_labels = _build_labels(spec, rng, catalog)

    n_series = series_count(spec.chart_type, spec.n_rows, spec.n_cols)
    length = series_length(spec.chart_type, spec.n_rows, spec.n_cols)
    table_base = round6(rng.child("base").log_uniform(1, 1e4))

    series_values: list[list[float]] = []
    for i, tag in enumerate(spec.trends):
        srng = rng.child(f"series-{i}")
        params = TrendParams(
            base_value=round6(table_base * srng.uniform(0.5, 1.5)),
            amplitude=1.0,
            noise_level=1.0,
            outlier_count=0,
            outlier_magnitude=2.0,
        )
        series_values.append(gen_trend_series(tag, length, srng, params))

    n_value_cols = spec.n_cols - 1
    if spec.chart_type in ROW_SERIES_TYPES:
        cells = [tuple(series_values[r]) for r in range(spec.n_rows)]
    else:
        cells = [
            tuple(series_values[c][r] for c in range(n_value_cols))
            for r in range(spec.n_rows)
        ]

    outliers: list[OutlierFlag] = []
    if spec.n_rows * spec.n_cols >= 12:
        want = 2 if spec.n_rows * n_value_cols >= 40 else 1
        orng = rng.child("outliers")
        slots = orng.sample(
            [(r, c) for r in range(spec.n_rows) for c in range(n_value_cols)], want
        )
        grid = [list(row) for row in cells]
        for r, c in slots:
            factor = round(orng.uniform(2.0, 3.5), 2)
            grid[r][c] = round6(grid[r][c] * factor)
            outliers.append(OutlierFlag(row=r, col=c, factor=factor))
        cells = [tuple(row) for row in grid]

    table = DataTable(
        index_label=index_label,
        index=tuple(index),
        series_labels=tuple(series_labels),
        cells=tuple(cells),
    )
    description = gen_data_description(spec, table, outliers=tuple(outliers))
    return TableSynthesis(table=table, outliers=tuple(outliers), description=description)


def synth_table(spec: ChartSpec, backend: TextGenBackend | None = None) -> DataTable:
    return synthesize(spec, backend).table


def _synthesize_via_backend(spec: ChartSpec, backend: TextGenBackend) -> TableSynthesis:
    from . import prompts

    reply = backend.complete(prompts.data_prompt(spec))
    data_m = re.search(r"<data start>(.*?)<data end>", reply, re.S)
    desc_m = re.search(r"<description start>(.*?)<description end>", reply, re.S)
    if not data_m or not desc_m:
        raise BackendFailure("response missing data/description wrappers")
    try:
        table = DataTable.from_csv(data_m.group(1).strip() + "\n")
    except TableError as exc:
        raise BackendFailure(f"unparseable table: {exc}") from exc
    if (table.n_rows, table.n_value_cols + 1) != (spec.n_rows, spec.n_cols):
        raise BackendFailure(
            f"table dims {table.n_rows}x{table.n_value_cols + 1} "
            f"do not match spec {spec.n_rows}x{spec.n_cols}"
        )
    if table.violations():
        raise BackendFailure(f"invalid table: {table.violations()}")
    # Canonicalize cell precision, then re-round-trip through CSV.
    table = DataTable(
        index_label=table.index_label,
        index=table.index,
        series_labels=table.series_labels,
        cells=tuple(tuple(round6(v) for v in row) for row in table.cells),
    )
    description = desc_m.group(1).strip()
    words = len(description.split())
    if not 100 <= words <= 600:
        raise BackendFailure(f"description length {words} words outside 100-600")
    return TableSynthesis(table=table, outliers=(), description=description)


# Data description assembly. Every number written here is either a cell
# value (canonical form) or part of a row/column label; structural counts
# are spelled out so a faithfulness check can match digits against cells.

_TREND_PHRASES: dict[TrendFamily, tuple[str, ...]] = {
    TrendFamily.MONOTONE_INCREASING: (
        "{name} climbs steadily from {v0} at {x0} to {v1} at {x1}",
        "{name} rises throughout, moving from {v0} at {x0} up to {v1} by {x1}",
    ),
    TrendFamily.MONOTONE_DECREASING: (
        "{name} declines from {v0} at {x0} down to {v1} at {x1}",
        "{name} falls steadily, starting at {v0} for {x0} and ending at {v1} by {x1}",
    ),
    TrendFamily.CONSTANT: (
        "{name} holds essentially flat near {v0} across the whole span",
        "{name} barely moves, staying around {v0} from {x0} through {x1}",
    ),
    TrendFamily.SPIKE: (
        "{name} stays low except for a pronounced spike reaching {vmax} at {xmax}",
        "{name} is stable apart from one sharp peak of {vmax} at {xmax}",
    ),
    TrendFamily.DIP: (
        "{name} is steady apart from a deep dip down to {vmin} at {xmin}",
        "{name} holds its level except for a brief drop to {vmin} at {xmin}",
    ),
    TrendFamily.PLATEAU_THEN_CHANGE: (
        "{name} sits on a plateau near {v0} before shifting to {v1} by {x1}",
        "{name} is flat early on, then breaks away to finish at {v1} at {x1}",
    ),
    TrendFamily.CYCLIC: (
        "{name} repeats a regular cycle, oscillating between {vmin} and {vmax}",
        "{name} follows a periodic pattern that swings from {vmin} up to {vmax}",
    ),
    TrendFamily.VOLATILE: (
        "{name} swings widely between {vmin} and {vmax} with no settled direction",
        "{name} moves erratically, ranging from {vmin} to {vmax}",
    ),
    TrendFamily.ACCELERATING: (
        "{name} grows at an increasing pace, from {v0} at {x0} to {v1} at {x1}",
        "{name} starts slowly at {v0} and accelerates to reach {v1} by {x1}",
    ),
    TrendFamily.DECELERATING: (
        "{name} keeps rising but flattens out, going from {v0} at {x0} to {v1} at {x1}",
        "{name} gains quickly at first from {v0}, then levels off near {v1} by {x1}",
    ),
}


def _series_views(spec: ChartSpec, table: DataTable) -> list[tuple[str, list[str], list[float]]]:
    """(series name, axis labels, values) per series under the spec layout."""
    if spec.chart_type in ROW_SERIES_TYPES:
        return [
            (name, list(table.series_labels), list(table.cells[r]))
            for r, name in enumerate(table.index)
        ]
    if spec.chart_type in (ChartType.PIE, ChartType.DOUGHNUT):
        name = table.series_labels[0]
        return [(name, list(table.index), [row[0] for row in table.cells])]
    return [
        (name, list(table.index), [row[c] for row in table.cells])
        for c, name in enumerate(table.series_labels)
    ]


def _trend_sentence(rng: CounterRng, name: str, xs: list[str], vs: list[float]) -> str:
    family = classify_trend(vs)
    tpl = rng.choice(_TREND_PHRASES[family])
    imax = max(range(len(vs)), key=lambda i: vs[i])
    imin = min(range(len(vs)), key=lambda i: vs[i])
    return tpl.format(
        name=name,
        v0=fmt_number(vs[0]),
        v1=fmt_number(vs[-1]),
        x0=xs[0],
        x1=xs[-1],
        vmax=fmt_number(vs[imax]),
        xmax=xs[imax],
        vmin=fmt_number(vs[imin]),
        xmin=xs[imin],
    )


def gen_data_description(
    spec: ChartSpec,
    table: DataTable,
    backend: TextGenBackend | None = None,
    outliers: tuple[OutlierFlag, ...] = (),
) -> str:
    """Faithful prose summary of the table: 100-600 words.

    Mentions the theme, one trend statement per series (grouped by family
    when the table is wide), at least one cross-series comparison, and
    every injected outlier.
    """
    if backend is not None and not backend.is_template:
        raise BackendFailure(
            "LLM backends produce the description together with the table"
        )
    rng = CounterRng(spec.seed, "desc")
    views = _series_views(spec, table)
    parts: list[str] = []

    parts.append(
        f"This dataset looks at {spec.theme.phrase} within the field of "
        f"{spec.theme.topic}."
    )
    parts.append(
        f"The table holds {spell_count(table.n_rows)} rows and "
        f"{spell_count(table.n_value_cols)} value "
        f"{'column' if table.n_value_cols == 1 else 'columns'}, organized for a "
        f"{spec.chart_type.value.replace('_', ' ')} view with "
        f"{spell_count(len(views))} data "
        f"{'series' if len(views) != 1 else 'series'}."
    )

    if len(views) <= 12:
        for name, xs, vs in views:
            parts.append(_trend_sentence(rng, name, xs, vs) + ".")
    else:
        by_family: dict[TrendFamily, list[str]] = {}
        for name, _, vs in views:
            by_family.setdefault(classify_trend(vs), []).append(name)
        for family, names in sorted(by_family.items(), key=lambda kv: kv[0].value):
            listing = ", ".join(names)
            parts.append(
                f"The series {listing} all follow a "
                f"{family.value.replace('_', ' ')} pattern."
            )

    if len(views) >= 2:
        (name_a, _, vs_a), (name_b, _, vs_b) = views[0], views[1]
        if sum(vs_a) == sum(vs_b):
            cmp = f"{name_a} and {name_b} accumulate identical overall totals"
        else:
            hi, lo = (name_a, name_b) if sum(vs_a) > sum(vs_b) else (name_b, name_a)
            cmp = f"{hi} accumulates a larger overall total than {lo}"
        parts.append(f"Comparing the series, {cmp} across the table.")
    else:
        name, xs, vs = views[0]
        hi = max(range(len(vs)), key=lambda i: vs[i])
        lo = min(range(len(vs)), key=lambda i: vs[i])
        parts.append(
            f"Within {name}, the strongest entry is {xs[hi]} at "
            f"{fmt_number(vs[hi])} while {xs[lo]} sits lowest at {fmt_number(vs[lo])}."
        )

    for flag in outliers:
        row_label = table.index[flag.row]
        col_label = table.series_labels[flag.col]
        parts.append(
            f"One value is a clear outlier: the cell for {row_label} under "
            f"{col_label} records {fmt_number(table.cells[flag.row][flag.col])}, far "
            f"out of line with its neighbours."
        )
    if not outliers:
        parts.append("No single cell was injected as an outlier in this table.")

    flat = [v for row in table.cells for v in row]
    parts.append(
        f"Across every cell, values span from {fmt_number(min(flat))} at the low "
        f"end to {fmt_number(max(flat))} at the high end."
    )

    padding = [
        "Reading the rows against the header makes each figure directly comparable.",
        "The spread of patterns across the series keeps the chart visually varied.",
        "Taken together, the table gives a compact picture of how the topic behaves.",
        "Each series was shaped to follow its own distinct pattern over the axis.",
        "Label names come straight from the subject area, keeping the table grounded.",
        "The value scale was chosen so differences remain easy to read off the chart.",
        "Consistent formatting of the numbers keeps every cell directly citable.",
        "A reader can verify any statement here against the underlying cells.",
    ]
    i = 0
    text = " ".join(parts)
    while len(text.split()) < 100 and i < len(padding):
        parts.append(padding[i])
        i += 1
        text = " ".join(parts)
    return text
