"""Oracle-first QA synthesis.

Answers are produced by evaluating a serialized oracle program against the
table with exact decimal arithmetic; the question text is rendered around
the already-known answer, never the other way around. Every item carries
its oracle so third parties can re-verify, and :func:`verify_answer` is the
dataset-level guarantee.

Number handling: cell operands are read in their canonical 6-significant-
digit form, and all arithmetic is exact from there. Derived values
(sums, differences) render with full precision; mean and percent_change
quantize to 2 decimal places with banker's rounding, then trailing zeros
are stripped. The quantize rule is part of the oracle definition.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Any, Iterator, Mapping

from .model import ChartSpec, DataTable, QAItem, fmt_number
from .rng import CounterRng

SIMPLE_OPS = (
    "cell_lookup",
    "col_max",
    "col_min",
    "row_max",
    "row_min",
    "argmax_label",
    "argmin_label",
    "count_above",
    "largest_decline_label",
)
COMPLEX_OPS = ("difference", "sum", "mean", "percent_change")


class InsufficientTable(ValueError):
    pass


class UnresolvableReference(KeyError):
    pass


@dataclass(frozen=True)
class OracleProgram:
    op: str
    operands: Mapping[str, Any]
    expected_type: str  # "number" | "label"

    def serialize(self) -> dict[str, Any]:
        return {"op": self.op, "operands": dict(self.operands), "expected_type": self.expected_type}

    @classmethod
    def from_serialized(cls, data: Mapping[str, Any]) -> "OracleProgram":
        return cls(
            op=str(data["op"]),
            operands=dict(data["operands"]),
            expected_type=str(data["expected_type"]),
        )

    def key(self) -> str:
        return repr((self.op, sorted(self.operands.items(), key=repr)))


def fmt_decimal(d: Decimal) -> str:
    """Exact plain rendering: no exponent, trailing zeros stripped."""
    s = format(d, "f")
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    if s in ("-0", ""):
        s = "0"
    return s


def _quantize2(d: Decimal) -> Decimal:
    return d.quantize(Decimal("0.01"), rounding=ROUND_HALF_EVEN)


def _dcell(table: DataTable, row: str, col: str) -> Decimal:
    try:
        value = table.cell(row, col)
    except KeyError as exc:
        raise UnresolvableReference(str(exc)) from exc
    return Decimal(fmt_number(value))


def _dcol(table: DataTable, col: str) -> list[Decimal]:
    try:
        values = table.col_values(col)
    except KeyError as exc:
        raise UnresolvableReference(str(exc)) from exc
    return [Decimal(fmt_number(v)) for v in values]


def _drow(table: DataTable, row: str) -> list[Decimal]:
    try:
        values = table.row_values(row)
    except KeyError as exc:
        raise UnresolvableReference(str(exc)) from exc
    return [Decimal(fmt_number(v)) for v in values]


def _series(table: DataTable, operands: Mapping[str, Any]) -> tuple[list[str], list[Decimal]]:
    """(axis labels, values) for a {"row": ...} or {"col": ...} reference."""
    if "row" in operands:
        return list(table.series_labels), _drow(table, str(operands["row"]))
    if "col" in operands:
        return list(table.index), _dcol(table, str(operands["col"]))
    raise UnresolvableReference("series reference needs 'row' or 'col'")


def _cellref(table: DataTable, ref: Mapping[str, Any]) -> Decimal:
    return _dcell(table, str(ref["row"]), str(ref["col"]))


def evaluate_oracle(program: OracleProgram, table: DataTable) -> str:
    """Exact answer string for the program against the table."""
    op = program.op
    o = program.operands
    if op == "cell_lookup":
        return fmt_decimal(_dcell(table, str(o["row"]), str(o["col"])))
    if op in ("col_max", "col_min"):
        vals = _dcol(table, str(o["col"]))
        return fmt_decimal(max(vals) if op == "col_max" else min(vals))
    if op in ("row_max", "row_min"):
        vals = _drow(table, str(o["row"]))
        return fmt_decimal(max(vals) if op == "row_max" else min(vals))
    if op in ("argmax_label", "argmin_label"):
        labels, vals = _series(table, o)
        pick = max if op == "argmax_label" else min
        target = pick(vals)
        return labels[vals.index(target)]
    if op == "count_above":
        vals = _dcol(table, str(o["col"]))
        threshold = Decimal(str(o["threshold"]))
        return str(sum(1 for v in vals if v > threshold))
    if op == "largest_decline_label":
        a = _dcol(table, str(o["from_col"]))
        b = _dcol(table, str(o["to_col"]))
        declines = [x - y for x, y in zip(a, b)]
        best = max(declines)
        return table.index[declines.index(best)]
    if op == "difference":
        return fmt_decimal(_cellref(table, o["a"]) - _cellref(table, o["b"]))
    if op == "sum":
        _, vals = _series(table, o)
        return fmt_decimal(sum(vals, Decimal(0)))
    if op == "mean":
        _, vals = _series(table, o)
        mean = _quantize2(sum(vals, Decimal(0)) / Decimal(len(vals)))
        return fmt_decimal(mean)
    if op == "percent_change":
        a = _cellref(table, o["a"])  # from
        b = _cellref(table, o["b"])  # to
        if a == 0:
            raise UnresolvableReference("percent change from zero")
        return fmt_decimal(_quantize2((b - a) / a * Decimal(100)))
    raise UnresolvableReference(f"unknown oracle op {op!r}")


def oracle_intermediates(program: OracleProgram, table: DataTable) -> set[str]:
    """Every number a faithful reasoning trace may mention, recomputed."""
    op = program.op
    o = program.operands
    out = {evaluate_oracle(program, table)}
    if op == "count_above":
        out.add(fmt_decimal(Decimal(str(o["threshold"]))))
    if op == "largest_decline_label":
        a = _dcol(table, str(o["from_col"]))
        b = _dcol(table, str(o["to_col"]))
        out.update(fmt_decimal(x - y) for x, y in zip(a, b))
    if op == "difference":
        out.add(fmt_decimal(_cellref(table, o["a"])))
        out.add(fmt_decimal(_cellref(table, o["b"])))
    if op in ("sum", "mean"):
        _, vals = _series(table, o)
        out.add(fmt_decimal(sum(vals, Decimal(0))))
        out.add(str(len(vals)))
    if op == "percent_change":
        a, b = _cellref(table, o["a"]), _cellref(table, o["b"])
        out.update({fmt_decimal(a), fmt_decimal(b), fmt_decimal(b - a), "100"})
    return out


_NUM_RE = re.compile(r"-?\d+(?:\.\d+)?")


def _allowed_numbers(table: DataTable) -> set[str]:
    allowed = {fmt_number(v) for row in table.cells for v in row}
    for label in (*table.index, *table.series_labels, table.index_label):
        allowed.update(_NUM_RE.findall(label))
    return allowed


def verify_answer(item: QAItem, table: DataTable) -> bool:
    """True iff the oracle reproduces the answer and the trace is faithful."""
    program = OracleProgram.from_serialized(item.oracle)
    if evaluate_oracle(program, table) != item.answer:
        return False
    allowed = _allowed_numbers(table)
    allowed |= oracle_intermediates(program, table)
    allowed.add(item.answer)
    for step in item.reasoning:
        for num in _NUM_RE.findall(step):
            canon = num.rstrip("0").rstrip(".") if "." in num else num
            if num not in allowed and canon not in allowed:
                return False
    return True


# Question surface templates: >= 4 per op, phrased against the figure.
_Q: dict[str, tuple[str, ...]] = {
    "cell_lookup": (
        "What value does {col} show for {row} in the chart?",
        "Looking at the figure, what is the {col} reading at {row}?",
        "What is the plotted value of {col} when looking at {row}?",
        "According to the chart, how much is {col} at {row}?",
    ),
    "col_max": (
        "What is the highest value plotted for {col}?",
        "What peak value does {col} reach on the chart?",
        "How high does {col} get in the figure?",
        "What is the maximum {col} value shown?",
    ),
    "col_min": (
        "What is the lowest value plotted for {col}?",
        "What is the smallest {col} reading on the chart?",
        "How low does {col} go in the figure?",
        "What is the minimum {col} value shown?",
    ),
    "row_max": (
        "What is the largest value shown for {row} across the chart?",
        "At its highest, what value does {row} reach in the figure?",
        "What is the peak reading plotted for {row}?",
        "How high does the {row} entry climb on the chart?",
    ),
    "row_min": (
        "What is the smallest value shown for {row} across the chart?",
        "At its lowest, what value does {row} fall to in the figure?",
        "What is the weakest reading plotted for {row}?",
        "How low does the {row} entry drop on the chart?",
    ),
    "argmax_label": (
        "Which entry shows the highest value for {col} in the chart?",
        "For {col}, which entry stands tallest in the figure?",
        "Which entry tops the chart for {col}?",
        "Where does {col} reach its maximum, according to the chart?",
    ),
    "argmin_label": (
        "Which entry shows the lowest value for {col} in the chart?",
        "For {col}, which entry sits lowest in the figure?",
        "Which entry bottoms out the chart for {col}?",
        "Where does {col} reach its minimum, according to the chart?",
    ),
    "count_above": (
        "How many entries exceed {threshold} for {col} in the chart?",
        "Counting from the figure, how many {col} readings are above {threshold}?",
        "How many plotted {col} values sit strictly above {threshold}?",
        "In the chart, how many entries for {col} are greater than {threshold}?",
    ),
    "largest_decline_label": (
        "Which entry declines the most from {from_col} to {to_col} in the chart?",
        "Between {from_col} and {to_col}, which entry shows the steepest drop?",
        "Which entry loses the most ground from {from_col} to {to_col}?",
        "Judging by the figure, which entry falls furthest between {from_col} and {to_col}?",
    ),
    "difference": (
        "How much higher is {a_desc} than {b_desc} in the chart?",
        "What is the difference between {a_desc} and {b_desc} shown in the figure?",
        "By how much does {a_desc} exceed {b_desc} on the chart?",
        "What gap separates {a_desc} from {b_desc} in the figure?",
    ),
    "sum": (
        "What is the combined total of the {name} values shown in the chart?",
        "Adding every plotted {name} value, what total does the figure give?",
        "What do the {name} readings sum to across the chart?",
        "What is the overall total for {name} in the figure?",
    ),
    "mean": (
        "What is the average of the {name} values shown in the chart?",
        "Averaging every plotted {name} value, what does the figure give?",
        "What is the mean {name} reading across the chart?",
        "On average, what value does {name} take in the figure?",
    ),
    "percent_change": (
        "By what percentage does {name} change from {from_label} to {to_label} in the chart?",
        "What is the percent change in {name} between {from_label} and {to_label}?",
        "From {from_label} to {to_label}, what percentage shift does {name} show?",
        "In percentage terms, how much does {name} move from {from_label} to {to_label}?",
    ),
}

_ARGMAX_ROW_Q = (
    "Across the chart, where does {row} reach its highest value?",
    "At which point does {row} peak in the figure?",
    "Which position shows the maximum for {row}?",
    "Where is {row} strongest, according to the chart?",
)
_ARGMIN_ROW_Q = (
    "Across the chart, where does {row} reach its lowest value?",
    "At which point does {row} bottom out in the figure?",
    "Which position shows the minimum for {row}?",
    "Where is {row} weakest, according to the chart?",
)


def _unique_extreme(vals: list[Decimal], pick) -> bool:
    target = pick(vals)
    return vals.count(target) == 1


def _simple_candidates(table: DataTable) -> Iterator[OracleProgram]:
    rows, cols = table.index, table.series_labels
    for r in rows:
        for c in cols:
            yield OracleProgram("cell_lookup", {"row": r, "col": c}, "number")
    for c in cols:
        yield OracleProgram("col_max", {"col": c}, "number")
        yield OracleProgram("col_min", {"col": c}, "number")
    for r in rows:
        yield OracleProgram("row_max", {"row": r}, "number")
        yield OracleProgram("row_min", {"row": r}, "number")
    for c in cols:
        vals = _dcol(table, c)
        if len(vals) >= 2 and _unique_extreme(vals, max):
            yield OracleProgram("argmax_label", {"col": c}, "label")
        if len(vals) >= 2 and _unique_extreme(vals, min):
            yield OracleProgram("argmin_label", {"col": c}, "label")
    for r in rows:
        vals = _drow(table, r)
        if len(vals) >= 2 and _unique_extreme(vals, max):
            yield OracleProgram("argmax_label", {"row": r}, "label")
        if len(vals) >= 2 and _unique_extreme(vals, min):
            yield OracleProgram("argmin_label", {"row": r}, "label")
    for c in cols:
        vals = _dcol(table, c)
        for threshold in sorted(set(vals))[:-1]:
            yield OracleProgram(
                "count_above", {"col": c, "threshold": fmt_decimal(threshold)}, "number"
            )
    if len(table.index) >= 2:
        for i, from_col in enumerate(cols):
            for to_col in cols[i + 1 :]:
                a, b = _dcol(table, from_col), _dcol(table, to_col)
                declines = [x - y for x, y in zip(a, b)]
                best = max(declines)
                if best > 0 and declines.count(best) == 1:
                    yield OracleProgram(
                        "largest_decline_label",
                        {"from_col": from_col, "to_col": to_col},
                        "label",
                    )


def _complex_candidates(table: DataTable) -> Iterator[OracleProgram]:
    rows, cols = table.index, table.series_labels
    # Pairs along one row (two axis points of the same series).
    for r in rows:
        vals = _drow(table, r)
        for i in range(len(cols)):
            for j in range(len(cols)):
                if i == j:
                    continue
                if vals[i] > vals[j] or (vals[i] == vals[j] and i < j):
                    yield OracleProgram(
                        "difference",
                        {
                            "a": {"row": r, "col": cols[i]},
                            "b": {"row": r, "col": cols[j]},
                        },
                        "number",
                    )
        # Percent change reads forward along the axis only.
        for i in range(len(cols)):
            for j in range(i + 1, len(cols)):
                yield OracleProgram(
                    "percent_change",
                    {
                        "a": {"row": r, "col": cols[i]},
                        "b": {"row": r, "col": cols[j]},
                    },
                    "number",
                )
    # Pairs down one column (two series at the same axis point).
    for c in cols:
        vals = _dcol(table, c)
        for i in range(len(rows)):
            for j in range(len(rows)):
                if i == j:
                    continue
                if vals[i] > vals[j] or (vals[i] == vals[j] and i < j):
                    yield OracleProgram(
                        "difference",
                        {
                            "a": {"row": rows[i], "col": c},
                            "b": {"row": rows[j], "col": c},
                        },
                        "number",
                    )
    for r in rows:
        if len(cols) >= 2:
            yield OracleProgram("sum", {"row": r}, "number")
            yield OracleProgram("mean", {"row": r}, "number")
    for c in cols:
        if len(rows) >= 2:
            yield OracleProgram("sum", {"col": c}, "number")
            yield OracleProgram("mean", {"col": c}, "number")


def _cell_desc(ref: Mapping[str, Any]) -> str:
    return f"{ref['row']} at {ref['col']}"


def _render_question(rng: CounterRng, program: OracleProgram) -> str:
    op, o = program.op, program.operands
    if op in ("argmax_label", "argmin_label") and "row" in o:
        bank = _ARGMAX_ROW_Q if op == "argmax_label" else _ARGMIN_ROW_Q
        return rng.choice(bank).format(row=o["row"])
    tpl = rng.choice(_Q[op])
    fields: dict[str, Any] = dict(o)
    if op == "difference":
        fields = {"a_desc": _cell_desc(o["a"]), "b_desc": _cell_desc(o["b"])}
    elif op in ("sum", "mean"):
        fields = {"name": o.get("row", o.get("col"))}
    elif op == "percent_change":
        fields = {
            "name": o["a"]["row"] if o["a"]["row"] == o["b"]["row"] else _cell_desc(o["a"]),
            "from_label": o["a"]["col"],
            "to_label": o["b"]["col"],
        }
    return tpl.format(**fields)


def _complex_trace(program: OracleProgram, table: DataTable, answer: str) -> tuple[str, str, str]:
    op, o = program.op, program.operands
    if op == "difference":
        a, b = _cellref(table, o["a"]), _cellref(table, o["b"])
        describe = (
            f"The chart shows {_cell_desc(o['a'])} at {fmt_decimal(a)} and "
            f"{_cell_desc(o['b'])} at {fmt_decimal(b)}."
        )
        compute = (
            f"{fmt_decimal(a)} ({o['a']['col']}) - {fmt_decimal(b)} ({o['b']['col']}) "
            f"= {answer}"
        )
        if o["a"]["col"] == o["b"]["col"]:
            compute = (
                f"{fmt_decimal(a)} ({o['a']['row']}) - {fmt_decimal(b)} "
                f"({o['b']['row']}) = {answer}"
            )
    elif op in ("sum", "mean"):
        labels, vals = _series(table, o)
        name = o.get("row", o.get("col"))
        listed = " + ".join(fmt_decimal(v) for v in vals)
        total = fmt_decimal(sum(vals, Decimal(0)))
        describe = (
            f"The figure plots {name} across {len(vals)} points with values "
            f"{', '.join(fmt_decimal(v) for v in vals)}."
        )
        if op == "sum":
            compute = f"{listed} = {answer}"
        else:
            compute = f"{listed} = {total}; {total} / {len(vals)} = {answer}"
    else:  # percent_change
        a, b = _cellref(table, o["a"]), _cellref(table, o["b"])
        name = o["a"]["row"]
        describe = (
            f"In the figure, {name} reads {fmt_decimal(a)} at {o['a']['col']} and "
            f"{fmt_decimal(b)} at {o['b']['col']}."
        )
        compute = (
            f"{fmt_decimal(b)} - {fmt_decimal(a)} = {fmt_decimal(b - a)}; "
            f"{fmt_decimal(b - a)} / {fmt_decimal(a)} * 100 = {answer}"
        )
    conclude = f"So the final answer is {answer}."
    return describe, compute, conclude


def _pick_items(
    rng: CounterRng,
    candidates: list[OracleProgram],
    n: int,
    lower: int,
) -> list[OracleProgram]:
    unique: dict[str, OracleProgram] = {}
    for cand in candidates:
        unique.setdefault(cand.key(), cand)
    pool = list(unique.values())
    if len(pool) < lower:
        raise InsufficientTable(f"only {len(pool)} distinct items possible, need {lower}")
    return rng.sample(pool, min(n, len(pool)))


def gen_simple_qa(table: DataTable, spec: ChartSpec, seed: int, n: int) -> list[QAItem]:
    if not 3 <= n <= 20:
        raise ValueError("simple QA count must lie in [3,20]")
    rng = CounterRng(seed, "simple-qa")
    chosen = _pick_items(rng, list(_simple_candidates(table)), n, 3)
    items = []
    for program in chosen:
        answer = evaluate_oracle(program, table)
        items.append(
            QAItem(
                kind="simple",
                question=_render_question(rng.child(program.key()), program),
                answer=answer,
                oracle=program.serialize(),
            )
        )
    return items


def gen_complex_qa(table: DataTable, spec: ChartSpec, seed: int, n: int) -> list[QAItem]:
    if not 2 <= n <= 10:
        raise ValueError("complex QA count must lie in [2,10]")
    if table.n_rows < 2 and table.n_value_cols < 2:
        raise InsufficientTable("need at least 2 rows or 2 columns")
    rng = CounterRng(seed, "complex-qa")
    chosen = _pick_items(rng, list(_complex_candidates(table)), n, 2)
    items = []
    for program in chosen:
        answer = evaluate_oracle(program, table)
        items.append(
            QAItem(
                kind="complex",
                question=_render_question(rng.child(program.key()), program),
                answer=answer,
                oracle=program.serialize(),
                reasoning=_complex_trace(program, table, answer),
            )
        )
    return items
