"""Plot-script generation from per-(engine, chart type) templates.

Templates are text assets under templates/<engine>/<chart_type>.tpl using
``$name`` placeholders plus line-level ``#if flag`` / ``#endif`` filtering.
The rendered script embeds the table CSV verbatim, saves exactly one JPEG,
and never opens a window; :func:`lint_script` enforces that statically.
"""

from __future__ import annotations

import re
from importlib import resources
from string import Template

import matplotlib

from .backends import BackendFailure, TextGenBackend
from .model import (
    FIG_SIZES,
    LEGEND_POSITIONS,
    PALETTES,
    ChartSpec,
    ChartType,
    DataTable,
    EngineId,
    PlotScript,
    StyleChoice,
    compatible,
    fmt_number,
)
from .rng import CounterRng
from .sampler import ROW_SERIES_TYPES, series_count
from .tables import classify_trend, spell_count


class NoTemplate(LookupError):
    """No template asset exists for the (engine, chart type) pair."""


class TemplateMalformed(ValueError):
    pass


_BOKEH_LOC = {
    "best": "top_right",
    "upper right": "top_right",
    "upper left": "top_left",
    "lower right": "bottom_right",
}
_PLOTLY_LEGEND = {
    "best": 'dict(x=0.99, y=0.99, xanchor="right", yanchor="top")',
    "upper right": 'dict(x=0.99, y=0.99, xanchor="right", yanchor="top")',
    "upper left": 'dict(x=0.01, y=0.99, xanchor="left", yanchor="top")',
    "lower right": 'dict(x=0.99, y=0.01, xanchor="right", yanchor="bottom")',
}


_MONTH_PREFIXES = ("Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec")


def _infer_axis_label(labels: tuple[str, ...]) -> str:
    """Axis title for an ordered label run (used where the CSV header cell
    names the other axis, e.g. the transposed stacked-bar view)."""
    if all(re.fullmatch(r"\d{4}", lab) for lab in labels):
        return "Year"
    if all(lab.startswith("Q") for lab in labels):
        return "Quarter"
    if all(lab.startswith("Week") for lab in labels):
        return "Week"
    if all(lab.startswith("Day") for lab in labels):
        return "Day"
    if all(lab.split()[0] in _MONTH_PREFIXES for lab in labels):
        return "Month"
    return "Group"


def sample_style(spec: ChartSpec, table: DataTable) -> StyleChoice:
    """Style knobs drawn from spec.style_seed; pure and enumerable."""
    rng = CounterRng(spec.style_seed, "style")
    phrase = spec.theme.phrase
    title = rng.choice(
        (
            phrase.capitalize(),
            f"{phrase.title()} ({spec.theme.topic.title()})",
        )
    )
    legend = rng.random() < 0.8
    legend_pos = rng.choice(LEGEND_POSITIONS) if legend else "none"
    if spec.chart_type in ROW_SERIES_TYPES:
        x_label = _infer_axis_label(table.series_labels)
    elif spec.chart_type is ChartType.BOXPLOT:
        x_label = "Group"  # boxes sit on the column groups, not the sample index
    else:
        x_label = table.index_label
    if table.n_value_cols == 1:
        y_label = table.series_labels[0]
    else:
        y_label = rng.choice(("Value", "Amount", "Level"))
    return StyleChoice(
        title=title,
        legend=legend,
        legend_pos=legend_pos,
        x_label=x_label,
        y_label=y_label,
        annotations=rng.random() < 0.5,
        palette=rng.choice(PALETTES),
        fig_size=rng.choice(FIG_SIZES),
    )


def palette_colors(palette: str, k: int) -> list[str]:
    cmap = matplotlib.colormaps[palette]
    base = [matplotlib.colors.to_hex(c) for c in cmap.colors]
    return [base[i % len(base)] for i in range(max(k, 1))]


def _filter_lines(text: str, flags: dict[str, bool]) -> str:
    out: list[str] = []
    keeping = True
    depth = 0
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("#if "):
            if depth:
                raise TemplateMalformed("nested #if")
            depth = 1
            expr = stripped[4:].strip()
            negate = expr.startswith("not ")
            name = expr[4:].strip() if negate else expr
            if name not in flags:
                raise TemplateMalformed(f"unknown flag {name!r}")
            keeping = flags[name] != negate
            continue
        if stripped == "#endif":
            if not depth:
                raise TemplateMalformed("#endif without #if")
            depth = 0
            keeping = True
            continue
        if keeping:
            out.append(line)
    if depth:
        raise TemplateMalformed("unterminated #if")
    return "\n".join(out) + "\n"


def _load_template(engine: EngineId, chart_type: ChartType) -> str:
    path = resources.files("chartforge").joinpath(
        "templates", engine.value, f"{chart_type.value}.tpl"
    )
    try:
        return path.read_text("utf-8")
    except FileNotFoundError:
        raise NoTemplate(f"{engine.value}/{chart_type.value}") from None


def output_filename(spec: ChartSpec) -> str:
    return f"{spec.record_id}.jpg"


def render_script(spec: ChartSpec, table: DataTable, style: StyleChoice) -> PlotScript:
    if not compatible(spec.engine, spec.chart_type):
        raise NoTemplate(f"{spec.engine.value} cannot draw {spec.chart_type.value}")
    raw = _load_template(spec.engine, spec.chart_type)
    n_series = series_count(spec.chart_type, spec.n_rows, spec.n_cols)
    colors = palette_colors(style.palette, n_series)
    figw, figh = style.fig_size
    context = {
        "csv": table.csv_text,
        "outfile": output_filename(spec),
        "title": style.title.replace('"', "'"),
        "xlabel": style.x_label.replace('"', "'"),
        "ylabel": style.y_label.replace('"', "'"),
        "palette": style.palette,
        "colors": repr(colors),
        "legend_loc": style.legend_pos if style.legend else "best",
        "legend_loc_bokeh": _BOKEH_LOC.get(style.legend_pos, "top_right"),
        "legend_layout_plotly": _PLOTLY_LEGEND.get(
            style.legend_pos, _PLOTLY_LEGEND["best"]
        ),
        "figw": str(figw),
        "figh": str(figh),
        "pixw": str(figw * 100),
        "pixh": str(figh * 100),
    }
    flags = {"legend": style.legend, "annotations": style.annotations}
    body = _filter_lines(raw, flags)
    try:
        source = Template(body).substitute(context)
    except KeyError as exc:
        raise TemplateMalformed(f"unbound placeholder {exc}") from exc
    return PlotScript(
        engine=spec.engine,
        source=source,
        output_filename=context["outfile"],
        style=style,
    )


_FORBIDDEN_IMPORTS = re.compile(
    r"^\s*(?:import|from)\s+(?:requests|urllib|socket|subprocess|http\b|httpx)",
    re.M,
)
_SAVE_CALLS = ("savefig(", "write_image(", "export_png(")


def lint_script(script: PlotScript, table: DataTable) -> list[str]:
    """Static checks every emitted script must pass; returns violations."""
    out = []
    src = script.source
    if table.csv_text not in src:
        out.append("table CSV not embedded verbatim")
    n_refs = src.count(script.output_filename)
    if n_refs == 0:
        out.append("output filename never referenced")
    elif n_refs > 1:
        out.append("output filename referenced more than once")
    else:
        line = next(l for l in src.splitlines() if script.output_filename in l)
        if not any(call in line for call in ("savefig(", "write_image(", ".save(")):
            out.append("output filename not used in a save call")
    if ".show(" in src or re.search(r"\bshow\(\)", src):
        out.append("interactive show call present")
    if _FORBIDDEN_IMPORTS.search(src):
        out.append("forbidden network/subprocess import")
    if "input(" in src:
        out.append("interactive input call present")
    return out


_CODE_RE = re.compile(r"<code start>(.*?)<code end>", re.S)
_DESC_RE = re.compile(r"<description start>(.*?)<description end>", re.S)


def gen_code(
    spec: ChartSpec, table: DataTable, backend: TextGenBackend | None = None
) -> PlotScript:
    script, _ = gen_code_and_description(spec, table, backend)
    return script


def gen_code_and_description(
    spec: ChartSpec, table: DataTable, backend: TextGenBackend | None = None
) -> tuple[PlotScript, str]:
    """(script, chart description); one backend call serves both in LLM mode."""
    style = sample_style(spec, table)
    if backend is None or backend.is_template:
        script = render_script(spec, table, style)
        problems = lint_script(script, table)
        if problems:
            raise TemplateMalformed(
                f"{spec.engine.value}/{spec.chart_type.value}: {problems}"
            )
        return script, gen_chart_description(spec, table, style)

    from . import prompts

    reply = backend.complete(prompts.code_prompt(spec, table, output_filename(spec)))
    code_m = _CODE_RE.search(reply)
    desc_m = _DESC_RE.search(reply)
    if not code_m or not desc_m:
        raise BackendFailure("response missing code/description wrappers")
    script = PlotScript(
        engine=spec.engine,
        source=code_m.group(1).strip() + "\n",
        output_filename=output_filename(spec),
        style=style,
    )
    problems = lint_script(script, table)
    if problems:
        raise BackendFailure(f"generated code failed lint: {problems}")
    description = desc_m.group(1).strip()
    words = len(description.split())
    if not 80 <= words <= 400:
        raise BackendFailure(f"chart description length {words} outside 80-400")
    return script, description


_CHART_NOUN = {
    ChartType.BAR: "bar chart",
    ChartType.LINE: "line chart",
    ChartType.RADAR: "radar chart",
    ChartType.STACKED_BAR: "stacked bar chart",
    ChartType.DOUGHNUT: "doughnut chart",
    ChartType.PIE: "pie chart",
    ChartType.SCATTER: "scatter plot",
    ChartType.BOXPLOT: "boxplot",
    ChartType.STACKED_AREA: "stacked area chart",
}


# prose-safe palette names: descriptions must stay free of digit tokens
_PALETTE_PHRASE = {
    "tab10": "the standard ten-color palette",
    "tab20": "the extended twenty-color palette",
    "Set1": "a bold qualitative palette",
    "Set2": "a muted qualitative palette",
    "Set3": "a pastel qualitative palette",
    "Dark2": "a dark qualitative palette",
    "Paired": "a paired qualitative palette",
    "Accent": "an accented qualitative palette",
}


def gen_chart_description(
    spec: ChartSpec,
    table: DataTable,
    style: StyleChoice,
    backend: TextGenBackend | None = None,
) -> str:
    """Figure-level description (80-400 words): layout, styling, highlights."""
    if backend is not None and not backend.is_template:
        raise BackendFailure("LLM backends produce the description with the code")
    rng = CounterRng(spec.style_seed, "chart-desc")
    noun = _CHART_NOUN[spec.chart_type]
    parts = [
        f'The figure is a {noun} titled "{style.title}", drawn with '
        f"{spec.engine.value} at {spell_count(style.fig_size[0])} by "
        f"{spell_count(style.fig_size[1])} inches using "
        f"{_PALETTE_PHRASE[style.palette]}."
    ]
    if spec.chart_type in (ChartType.PIE, ChartType.DOUGHNUT):
        parts.append(
            f"Each slice represents one of the {spell_count(table.n_rows)} "
            f"categories listed in the first column, sized by its share of "
            f"{table.series_labels[0]}."
        )
    elif spec.chart_type is ChartType.RADAR:
        parts.append(
            f"Each of the {spell_count(table.n_rows)} items traces a polygon over "
            f"{spell_count(table.n_value_cols)} axes, one per rated dimension."
        )
    else:
        stacked = "stacked" in spec.chart_type.value
        parts.append(
            f"The horizontal axis carries {style.x_label} and the vertical axis "
            f"shows {style.y_label}"
            + (", with the series stacked on top of one another." if stacked else ".")
        )
    if style.legend:
        parts.append(
            f"A legend in the {style.legend_pos if style.legend_pos != 'best' else 'automatically chosen'} "
            f"position identifies each series by name."
        )
    else:
        parts.append("No legend is drawn; series are distinguished by color alone.")
    if style.annotations:
        parts.append("Value annotations are printed next to the plotted data points.")

    # Two faithful data observations: the global maximum and one series sketch.
    flat = [(v, r, c) for r, row in enumerate(table.cells) for c, v in enumerate(row)]
    vmax, rmax, cmax = max(flat)
    parts.append(
        f"The highest value on the chart is {fmt_number(vmax)}, found at "
        f"{table.index[rmax]} under {table.series_labels[cmax]}."
    )
    if spec.chart_type in ROW_SERIES_TYPES:
        name = table.index[0]
        vs = list(table.cells[0])
    else:
        name = table.series_labels[0]
        vs = [row[0] for row in table.cells]
    family = classify_trend(vs) if len(vs) >= 2 else None
    if family is not None:
        parts.append(
            f"Visually, the series {name} reads as a "
            f"{family.value.replace('_', ' ')} pattern, moving from "
            f"{fmt_number(vs[0])} to {fmt_number(vs[-1])} across the axis."
        )
    else:
        parts.append(f"The single plotted value for {name} is {fmt_number(vs[0])}.")

    padding = [
        "Colors are applied in palette order so adjacent series remain distinct.",
        "Axis ticks inherit the engine defaults, keeping the layout uncluttered.",
        "The background uses the engine's standard styling for readability.",
        "Margins leave room for the title and tick labels at every figure size.",
        "Overall the composition keeps every series legible at a glance.",
        "The rendering saves directly to an image file without opening a window.",
    ]
    i = 0
    text = " ".join(parts)
    while len(text.split()) < 80 and i < len(padding):
        parts.append(padding[i])
        i += 1
        text = " ".join(parts)
    if rng.random() < 0.5:
        text += " The styling was varied deliberately so no two charts look alike."
    return text
