"""Core model: canonical numbers, table invariants, record validation."""

from __future__ import annotations

import dataclasses
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chartforge.dataset import read_records
from chartforge.model import (
    ENGINE_COVERAGE,
    VALID_PAIRS,
    ChartType,
    DataTable,
    EngineId,
    QAItem,
    TableError,
    Theme,
    compatible,
    fmt_number,
    records_equal_ignoring_walltime,
    round6,
    validate_record,
)


# --- canonical number formatting -------------------------------------------


@pytest.mark.parametrize(
    ("value", "expected"),
    [
        (80, "80"),
        (80.0, "80"),
        (0.5, "0.5"),
        (2.50, "2.5"),
        (-0.0, "0"),
        (1234567.0, "1234570"),
        (0.000123456789, "0.000123457"),
        (123.456789, "123.457"),
        (1e7, "10000000"),
        (-42.1, "-42.1"),
    ],
)
def test_fmt_number_examples(value: float, expected: str) -> None:
    assert fmt_number(value) == expected


def test_fmt_number_rejects_non_finite() -> None:
    for bad in (float("nan"), float("inf"), float("-inf")):
        with pytest.raises(ValueError):
            fmt_number(bad)


@settings(max_examples=300, deadline=None)
@given(st.floats(min_value=-1e9, max_value=1e9, allow_nan=False))
def test_round6_idempotent_and_fmt_stable(x: float) -> None:
    r = round6(x)
    assert round6(r) == r
    assert fmt_number(r) == fmt_number(x)
    # canonical string never uses scientific notation
    assert "e" not in fmt_number(x).lower()


@settings(max_examples=300, deadline=None)
@given(st.floats(min_value=-1e9, max_value=1e9, allow_nan=False))
def test_fmt_number_parses_back_to_round6(x: float) -> None:
    assert float(fmt_number(x)) == round6(x)


# --- engine coverage ---------------------------------------------------------


def test_engine_coverage_matrix() -> None:
    assert ENGINE_COVERAGE[EngineId.MATPLOTLIB] == frozenset(ChartType)
    assert ENGINE_COVERAGE[EngineId.PLOTLY] == frozenset(ChartType)
    assert ENGINE_COVERAGE[EngineId.SEABORN] == frozenset(
        {ChartType.BAR, ChartType.LINE, ChartType.SCATTER, ChartType.BOXPLOT}
    )
    assert ENGINE_COVERAGE[EngineId.BOKEH] == frozenset(
        {
            ChartType.BAR,
            ChartType.LINE,
            ChartType.STACKED_BAR,
            ChartType.SCATTER,
            ChartType.BOXPLOT,
            ChartType.STACKED_AREA,
        }
    )
    assert len(VALID_PAIRS) == 28
    assert set(VALID_PAIRS) == {
        (e, t) for t in ChartType for e in EngineId if compatible(e, t)
    }


def test_compatible_examples() -> None:
    assert compatible(EngineId.MATPLOTLIB, ChartType.RADAR)
    assert not compatible(EngineId.SEABORN, ChartType.RADAR)
    assert not compatible(EngineId.BOKEH, ChartType.PIE)


# --- DataTable ---------------------------------------------------------------


def test_table_rejects_ragged_cells() -> None:
    with pytest.raises(TableError):
        DataTable("k", ("a", "b"), ("x",), ((1.0,), (2.0, 3.0)))
    with pytest.raises(TableError):
        DataTable("k", ("a",), ("x",), ((1.0,), (2.0,)))


def test_table_accessors(golden_table: DataTable) -> None:
    assert golden_table.n_rows == 6
    assert golden_table.n_value_cols == 9
    assert golden_table.cell("Action", "2022") == 120
    assert golden_table.cell_str("Fantasy", "2014") == "60"
    assert golden_table.col_values("2014") == (80, 70, 60, 50, 30, 40)
    assert golden_table.row_values("Mecha") == (40, 38, 35, 33, 30, 28, 25, 23, 20)
    with pytest.raises(KeyError):
        golden_table.cell("Action", "1999")


def test_csv_round_trip_golden(golden_table: DataTable) -> None:
    assert DataTable.from_csv(golden_table.csv_text) == golden_table
    header = golden_table.csv_text.splitlines()[0]
    assert header == "Genre," + ",".join(str(y) for y in range(2014, 2023))


def test_csv_round_trip_quoted_labels() -> None:
    table = DataTable(
        index_label="Region, wide",
        index=('North "A"', "South, coastal"),
        series_labels=("Q1", "Q2"),
        cells=((1.5, 2.0), (3.25, 4.0)),
    )
    assert DataTable.from_csv(table.csv_text) == table
    assert table.violations() == []


_LABEL = st.text(
    alphabet=st.characters(whitelist_categories=("Lu", "Ll", "Nd"), whitelist_characters=" -_"),
    min_size=1,
    max_size=12,
).filter(lambda s: s.strip())


@settings(max_examples=100, deadline=None)
@given(data=st.data())
def test_csv_round_trip_property(data: st.DataObject) -> None:
    n_rows = data.draw(st.integers(1, 6))
    n_cols = data.draw(st.integers(1, 5))
    index = data.draw(
        st.lists(_LABEL, min_size=n_rows, max_size=n_rows, unique=True)
    )
    series = data.draw(
        st.lists(_LABEL, min_size=n_cols, max_size=n_cols, unique=True)
    )
    cells = tuple(
        tuple(
            round6(data.draw(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)))
            for _ in range(n_cols)
        )
        for _ in range(n_rows)
    )
    table = DataTable("Label", tuple(index), tuple(series), cells)
    assert DataTable.from_csv(table.csv_text) == table


def test_table_violations_flag_duplicates_and_blanks() -> None:
    dup = DataTable("k", ("a", "a"), ("x",), ((1.0,), (2.0,)))
    assert any("duplicate row" in v for v in dup.violations())
    blank = DataTable("k", ("a",), (" ",), ((1.0,),))
    assert any("empty column label" in v for v in blank.violations())
    inf = DataTable("k", ("a",), ("x",), ((math.inf,),))
    assert any("non-finite" in v for v in inf.violations())


# --- Theme / QAItem ----------------------------------------------------------


def test_theme_violations() -> None:
    assert Theme("health", "hospital bed occupancy").violations() == []
    assert "empty topic" in Theme("  ", "x").violations()
    long = Theme("health", "x" * 121)
    assert any("120" in v for v in long.violations())


def test_qa_answer_tokens() -> None:
    assert QAItem("simple", "q", "42", {"op": "cell_lookup"}).answer_tokens() == 1
    assert QAItem("simple", "q", "New South Wales", {}).answer_tokens() == 3


# --- record validation -------------------------------------------------------


@pytest.fixture(scope="module")
def one_record(dataset_factory):
    out, _ = dataset_factory(3, seed=41)
    return next(read_records(out))


def test_generated_record_is_valid(one_record) -> None:
    assert validate_record(one_record).ok


def test_validate_is_pure(one_record) -> None:
    first = validate_record(one_record)
    second = validate_record(one_record)
    assert first == second


def test_low_simple_qa_count_flagged(one_record) -> None:
    mutant = dataclasses.replace(one_record, simple_qa=one_record.simple_qa[:2])
    assert "QA_COUNT_LOW" in validate_record(mutant).codes()


def test_incompatible_engine_flagged(one_record) -> None:
    spec = dataclasses.replace(
        one_record.spec, chart_type=ChartType.RADAR, engine=EngineId.SEABORN
    )
    mutant = dataclasses.replace(one_record, spec=spec)
    assert "ENGINE_INCOMPATIBLE" in validate_record(mutant).codes()


def test_missing_csv_embed_flagged(one_record) -> None:
    code = dataclasses.replace(
        one_record.code, source=one_record.code.source.replace(",", ";")
    )
    mutant = dataclasses.replace(one_record, code=code)
    assert "CODE_CSV_MISSING" in validate_record(mutant).codes()


def test_tampered_answer_flagged(one_record) -> None:
    item = one_record.simple_qa[0]
    bad = dataclasses.replace(item, answer=item.answer + "1")
    mutant = dataclasses.replace(
        one_record, simple_qa=(bad, *one_record.simple_qa[1:])
    )
    assert "QA_VERIFY_FAILED" in validate_record(mutant).codes()


def test_degenerate_image_flagged(one_record) -> None:
    ref = dataclasses.replace(one_record.image_ref, width=32)
    mutant = dataclasses.replace(one_record, image_ref=ref)
    assert "IMAGE_DEGENERATE" in validate_record(mutant).codes()


def test_records_equal_ignoring_walltime(one_record) -> None:
    shifted = dataclasses.replace(
        one_record,
        provenance=dataclasses.replace(one_record.provenance, wall_ms=999_999),
    )
    assert records_equal_ignoring_walltime(one_record, shifted)
    other = dataclasses.replace(one_record, data_description="changed")
    assert not records_equal_ignoring_walltime(one_record, other)
