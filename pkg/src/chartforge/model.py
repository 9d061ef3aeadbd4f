"""Core domain types shared by every pipeline stage.

Everything here is immutable after construction and safe to pass between
worker threads. Numeric cells are decimals with at most six significant
digits; :func:`fmt_number` is the single canonical rendering used by CSV
serialization, descriptions, and QA answers, so string equality on answers
is meaningful.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from decimal import Decimal
from enum import Enum
from typing import Any, Iterable, Mapping


class ChartType(Enum):
    BAR = "bar"
    LINE = "line"
    RADAR = "radar"
    STACKED_BAR = "stacked_bar"
    DOUGHNUT = "doughnut"
    PIE = "pie"
    SCATTER = "scatter"
    BOXPLOT = "boxplot"
    STACKED_AREA = "stacked_area"


class EngineId(Enum):
    MATPLOTLIB = "matplotlib"
    SEABORN = "seaborn"
    PLOTLY = "plotly"
    BOKEH = "bokeh"


class TrendFamily(Enum):
    MONOTONE_INCREASING = "monotone_increasing"
    MONOTONE_DECREASING = "monotone_decreasing"
    CONSTANT = "constant"
    SPIKE = "spike"
    DIP = "dip"
    PLATEAU_THEN_CHANGE = "plateau_then_change"
    CYCLIC = "cyclic"
    VOLATILE = "volatile"
    ACCELERATING = "accelerating"
    DECELERATING = "decelerating"


# Which chart types each engine can draw. Matplotlib and plotly cover all
# nine; seaborn and bokeh cover subsets.
ENGINE_COVERAGE: Mapping[EngineId, frozenset[ChartType]] = {
    EngineId.MATPLOTLIB: frozenset(ChartType),
    EngineId.PLOTLY: frozenset(ChartType),
    EngineId.SEABORN: frozenset(
        {ChartType.BAR, ChartType.LINE, ChartType.SCATTER, ChartType.BOXPLOT}
    ),
    EngineId.BOKEH: frozenset(
        {
            ChartType.BAR,
            ChartType.LINE,
            ChartType.STACKED_BAR,
            ChartType.SCATTER,
            ChartType.BOXPLOT,
            ChartType.STACKED_AREA,
        }
    ),
}

VALID_PAIRS: frozenset[tuple[EngineId, ChartType]] = frozenset(
    (engine, chart)
    for engine, charts in ENGINE_COVERAGE.items()
    for chart in charts
)


def compatible(engine: EngineId, chart_type: ChartType) -> bool:
    return chart_type in ENGINE_COVERAGE[engine]


MAX_SIGNIFICANT_DIGITS = 6


def fmt_number(x: float | int | Decimal) -> str:
    """Canonical decimal rendering: ≤6 significant digits, plain notation.

    Integers print without a decimal point ("80", not "80.0"); trailing
    zeros are stripped ("2.5", not "2.50"). This is the exact form cells
    take in csv_text and QA answers.
    """
    if isinstance(x, Decimal):
        x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite value: {x!r}")
    s = f"{x:.{MAX_SIGNIFICANT_DIGITS}g}"
    if "e" in s or "E" in s:
        s = format(Decimal(s), "f")
        if "." in s:
            s = s.rstrip("0").rstrip(".")
    if s in ("-0", "-0.0"):
        s = "0"
    return s


def round6(x: float) -> float:
    """Round to the canonical 6-significant-digit grid."""
    return float(fmt_number(x))


@dataclass(frozen=True)
class Theme:
    """A topical anchor for one table: a topic plus a short chart-worthy phrase."""

    topic: str
    phrase: str

    def violations(self) -> list[str]:
        out = []
        if not self.topic.strip():
            out.append("empty topic")
        if not self.phrase.strip():
            out.append("empty theme phrase")
        if len(self.phrase) > 120:
            out.append("theme phrase longer than 120 characters")
        return out


@dataclass(frozen=True)
class TrendTag:
    """One catalog entry: a shaped data pattern a series can realize.

    ``min_len`` is the shortest series on which the shape is
    distinguishable; the sampler never assigns a tag to a shorter series.
    """

    id: str
    family: TrendFamily
    applicable: frozenset[ChartType]
    min_len: int = 2
    params: Mapping[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class DimConstraint:
    """Sampling rule for one chart type's (rows, cols) dimensions.

    ``col_choices``/``row_choices`` are the literal discrete distributions
    the dimensions are drawn from, as (value, weight) pairs.
    """

    chart_type: ChartType
    col_choices: tuple[tuple[int, int], ...]
    row_choices: tuple[tuple[int, int], ...]
    notes: str = ""

    def allows(self, n_rows: int, n_cols: int) -> bool:
        return any(v == n_cols for v, _ in self.col_choices) and any(
            v == n_rows for v, _ in self.row_choices
        )


@dataclass(frozen=True)
class ChartSpec:
    """The full generation plan for one record, fixed before any synthesis."""

    record_id: str
    seed: int
    chart_type: ChartType
    engine: EngineId
    theme: Theme
    trends: tuple[TrendTag, ...]
    n_rows: int
    n_cols: int
    style_seed: int


class TableError(ValueError):
    pass


@dataclass(frozen=True)
class DataTable:
    """Rectangular labeled numeric table; the ground truth for all labels.

    Layout mirrors the CSV exactly: ``index`` holds the first-column labels,
    ``series_labels`` the remaining header cells, ``cells[r][c]`` the value
    at row r, value-column c.
    """

    index_label: str
    index: tuple[str, ...]
    series_labels: tuple[str, ...]
    cells: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        if len(self.cells) != len(self.index):
            raise TableError("cell rows do not match index length")
        for row in self.cells:
            if len(row) != len(self.series_labels):
                raise TableError("table is not rectangular")

    @property
    def n_rows(self) -> int:
        return len(self.index)

    @property
    def n_value_cols(self) -> int:
        return len(self.series_labels)

    @property
    def csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([self.index_label, *self.series_labels])
        for label, row in zip(self.index, self.cells):
            writer.writerow([label, *[fmt_number(v) for v in row]])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "DataTable":
        rows = list(csv.reader(io.StringIO(text)))
        rows = [r for r in rows if r]
        if len(rows) < 2:
            raise TableError("CSV needs a header and at least one data row")
        header = rows[0]
        index, cells = [], []
        for r in rows[1:]:
            if len(r) != len(header):
                raise TableError("ragged CSV row")
            index.append(r[0])
            try:
                cells.append(tuple(float(v) for v in r[1:]))
            except ValueError as exc:
                raise TableError(f"non-numeric cell: {exc}") from exc
        return cls(
            index_label=header[0],
            index=tuple(index),
            series_labels=tuple(header[1:]),
            cells=tuple(cells),
        )

    def cell(self, row_label: str, col_label: str) -> float:
        return self.cells[self.row_pos(row_label)][self.col_pos(col_label)]

    def cell_str(self, row_label: str, col_label: str) -> str:
        return fmt_number(self.cell(row_label, col_label))

    def row_pos(self, label: str) -> int:
        try:
            return self.index.index(label)
        except ValueError:
            raise KeyError(f"no row labeled {label!r}") from None

    def col_pos(self, label: str) -> int:
        try:
            return self.series_labels.index(label)
        except ValueError:
            raise KeyError(f"no column labeled {label!r}") from None

    def row_values(self, label: str) -> tuple[float, ...]:
        return self.cells[self.row_pos(label)]

    def col_values(self, label: str) -> tuple[float, ...]:
        c = self.col_pos(label)
        return tuple(row[c] for row in self.cells)

    def violations(self) -> list[str]:
        out = []
        labels_ok = True
        for axis, labels in (("row", self.index), ("column", self.series_labels)):
            if any(not lab.strip() for lab in labels):
                out.append(f"empty {axis} label")
                labels_ok = False
            if len(set(labels)) != len(labels):
                out.append(f"duplicate {axis} labels")
                labels_ok = False
        if not self.index_label.strip():
            out.append("empty index label")
        for row in self.cells:
            if any(not math.isfinite(v) for v in row):
                out.append("non-finite cell")
                break
        if labels_ok and not out:
            try:
                if DataTable.from_csv(self.csv_text) != self:
                    out.append("csv round-trip mismatch")
            except TableError as exc:
                out.append(f"csv round-trip failed: {exc}")
        return out


@dataclass(frozen=True)
class StyleChoice:
    """The enumerable style knobs a plot script is rendered with."""

    title: str
    legend: bool
    legend_pos: str  # one of LEGEND_POSITIONS when legend is on
    x_label: str
    y_label: str
    annotations: bool
    palette: str  # one of PALETTES
    fig_size: tuple[int, int]  # (width, height) in inches at 100 dpi


PALETTES = ("tab10", "tab20", "Set1", "Set2", "Set3", "Dark2", "Paired", "Accent")
LEGEND_POSITIONS = ("best", "upper right", "upper left", "lower right")
FIG_SIZES = ((8, 5), (10, 6), (12, 8))


@dataclass(frozen=True)
class PlotScript:
    """Generated plotting source plus its output-image contract."""

    engine: EngineId
    source: str
    output_filename: str
    style: StyleChoice


@dataclass(frozen=True)
class QAItem:
    kind: str  # "simple" | "complex"
    question: str
    answer: str
    oracle: Mapping[str, Any]  # serialized oracle program
    reasoning: tuple[str, ...] = ()

    def answer_tokens(self) -> int:
        return len(self.answer.split())


@dataclass(frozen=True)
class ImageRef:
    path: str  # relative to the dataset root
    width: int
    height: int
    size_bytes: int
    variance: float


@dataclass(frozen=True)
class OutlierFlag:
    row: int
    col: int
    factor: float


@dataclass(frozen=True)
class Provenance:
    backend: str
    repair_attempts: int
    applied_rules: tuple[str, ...]
    wall_ms: int
    outliers: tuple[OutlierFlag, ...] = ()


@dataclass(frozen=True)
class DatasetRecord:
    spec: ChartSpec
    table: DataTable
    code: PlotScript
    image_ref: ImageRef
    data_description: str
    chart_description: str
    simple_qa: tuple[QAItem, ...]
    complex_qa: tuple[QAItem, ...]
    provenance: Provenance


@dataclass(frozen=True)
class Violation:
    code: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> set[str]:
        return {v.code for v in self.violations}


SIMPLE_QA_BOUNDS = (3, 20)
COMPLEX_QA_BOUNDS = (2, 10)
MAX_SIMPLE_ANSWER_TOKENS = 5


def validate_record(record: DatasetRecord) -> ValidationReport:
    """Check every record invariant; violations are data, not errors.

    Pure: the same record always yields the same report, and the record is
    never mutated.
    """
    from . import qa as qa_mod  # late import; qa depends on this module
    from .sampler import constraint_for, series_count

    out: list[Violation] = []

    def bad(code: str, message: str) -> None:
        out.append(Violation(code, message))

    spec = record.spec
    if not compatible(spec.engine, spec.chart_type):
        bad(
            "ENGINE_INCOMPATIBLE",
            f"{spec.engine.value} cannot draw {spec.chart_type.value}",
        )
    constraint = constraint_for(spec.chart_type)
    if not constraint.allows(spec.n_rows, spec.n_cols):
        bad(
            "DIM_CONSTRAINT",
            f"({spec.n_rows} rows, {spec.n_cols} cols) outside the "
            f"{spec.chart_type.value} constraint",
        )
    expected_series = series_count(spec.chart_type, spec.n_rows, spec.n_cols)
    if len(spec.trends) != expected_series:
        bad(
            "TREND_COUNT",
            f"{len(spec.trends)} trend tags for {expected_series} series",
        )
    for tag in spec.trends:
        if spec.chart_type not in tag.applicable:
            bad(
                "TREND_INAPPLICABLE",
                f"trend {tag.id} not applicable to {spec.chart_type.value}",
            )
    for problem in spec.theme.violations():
        bad("THEME_INVALID", problem)

    for problem in record.table.violations():
        bad("TABLE_INVALID", problem)

    if record.table.csv_text not in record.code.source:
        bad("CODE_CSV_MISSING", "script does not embed the table CSV verbatim")
    if record.code.output_filename not in record.code.source:
        bad("CODE_SAVE_MISSING", "script does not reference its output filename")
    if ".show(" in record.code.source:
        bad("CODE_SHOW_CALL", "script opens an interactive window")

    if not record.data_description.strip() or not record.chart_description.strip():
        bad("DESCRIPTION_MISSING", "record must carry exactly 2 non-empty descriptions")

    lo, hi = SIMPLE_QA_BOUNDS
    if len(record.simple_qa) < lo:
        bad("QA_COUNT_LOW", f"{len(record.simple_qa)} simple QA items, minimum {lo}")
    if len(record.simple_qa) > hi:
        bad("QA_COUNT_HIGH", f"{len(record.simple_qa)} simple QA items, maximum {hi}")
    lo, hi = COMPLEX_QA_BOUNDS
    if len(record.complex_qa) < lo:
        bad("QA_COUNT_LOW", f"{len(record.complex_qa)} complex QA items, minimum {lo}")
    if len(record.complex_qa) > hi:
        bad("QA_COUNT_HIGH", f"{len(record.complex_qa)} complex QA items, maximum {hi}")

    for item in record.simple_qa:
        if item.answer_tokens() > MAX_SIMPLE_ANSWER_TOKENS:
            bad("QA_ANSWER_TOO_LONG", f"simple answer {item.answer!r} over 5 tokens")
    for item in record.complex_qa:
        if len(item.reasoning) < 2:
            bad("QA_TRACE_MISSING", "complex item needs a reasoning trace of >= 2 steps")

    for item in (*record.simple_qa, *record.complex_qa):
        try:
            if not qa_mod.verify_answer(item, record.table):
                bad("QA_VERIFY_FAILED", f"answer {item.answer!r} to {item.question!r}")
        except qa_mod.UnresolvableReference as exc:
            bad("QA_VERIFY_FAILED", f"unresolvable oracle reference: {exc}")

    if record.image_ref.width < 64 or record.image_ref.height < 64:
        bad("IMAGE_DEGENERATE", "image smaller than 64px on a side")

    return ValidationReport(tuple(out))


def records_equal_ignoring_walltime(a: DatasetRecord, b: DatasetRecord) -> bool:
    """Equality modulo the volatile wall-time provenance field."""
    import dataclasses

    za = dataclasses.replace(a, provenance=dataclasses.replace(a.provenance, wall_ms=0))
    zb = dataclasses.replace(b, provenance=dataclasses.replace(b.provenance, wall_ms=0))
    return za == zb
