"""Dataset layout, serialization, verification, and stats.

On-disk layout under one output root:

    manifest.json        shard index with content digests; no timestamps
    shards/00000.jsonl   one JSON record per line, shard_size per shard
    images/<id>.jpg      rendered charts, one per record
    rejects.jsonl        one line per rejected candidate (present only
                         when something was rejected)

Digests are computed over a canonical encoding: keys sorted, compact
separators, and the volatile ``wall_ms`` field zeroed. Two runs that
produce the same records therefore produce byte-identical manifests,
which is what makes kill-and-resume verifiable.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterator, Optional

from .model import (
    ChartSpec,
    ChartType,
    DataTable,
    DatasetRecord,
    EngineId,
    ImageRef,
    OutlierFlag,
    PlotScript,
    Provenance,
    QAItem,
    StyleChoice,
    Theme,
    TrendFamily,
    TrendTag,
    fmt_number,
    validate_record,
)

MANIFEST_VERSION = 1
DEFAULT_SHARD_SIZE = 100


class DatasetError(ValueError):
    pass


# --- record (de)serialization ------------------------------------------------

def record_to_json(record: DatasetRecord) -> dict[str, Any]:
    spec = record.spec
    return {
        "record_id": spec.record_id,
        "seed": spec.seed,
        "chart_type": spec.chart_type.value,
        "engine": spec.engine.value,
        "theme": {"topic": spec.theme.topic, "phrase": spec.theme.phrase},
        "trends": [
            {
                "id": t.id,
                "family": t.family.value,
                "applicable": sorted(ct.value for ct in t.applicable),
                "min_len": t.min_len,
                "params": dict(t.params),
            }
            for t in spec.trends
        ],
        "n_rows": spec.n_rows,
        "n_cols": spec.n_cols,
        "style_seed": spec.style_seed,
        "table": {
            "index_label": record.table.index_label,
            "index": list(record.table.index),
            "series_labels": list(record.table.series_labels),
            "cells": [[fmt_number(v) for v in row] for row in record.table.cells],
        },
        "code": {
            "engine": record.code.engine.value,
            "source": record.code.source,
            "output_filename": record.code.output_filename,
            "style": {
                "title": record.code.style.title,
                "legend": record.code.style.legend,
                "legend_pos": record.code.style.legend_pos,
                "x_label": record.code.style.x_label,
                "y_label": record.code.style.y_label,
                "annotations": record.code.style.annotations,
                "palette": record.code.style.palette,
                "fig_size": list(record.code.style.fig_size),
            },
        },
        "image": {
            "path": record.image_ref.path,
            "width": record.image_ref.width,
            "height": record.image_ref.height,
            "size_bytes": record.image_ref.size_bytes,
            "variance": record.image_ref.variance,
        },
        "data_description": record.data_description,
        "chart_description": record.chart_description,
        "simple_qa": [_qa_to_json(item) for item in record.simple_qa],
        "complex_qa": [_qa_to_json(item) for item in record.complex_qa],
        "provenance": {
            "backend": record.provenance.backend,
            "repair_attempts": record.provenance.repair_attempts,
            "applied_rules": list(record.provenance.applied_rules),
            "wall_ms": record.provenance.wall_ms,
            "outliers": [
                {"row": o.row, "col": o.col, "factor": o.factor}
                for o in record.provenance.outliers
            ],
        },
    }


def _qa_to_json(item: QAItem) -> dict[str, Any]:
    return {
        "kind": item.kind,
        "question": item.question,
        "answer": item.answer,
        "oracle": dict(item.oracle),
        "reasoning": list(item.reasoning),
    }


def _qa_from_json(data: dict[str, Any]) -> QAItem:
    return QAItem(
        kind=data["kind"],
        question=data["question"],
        answer=data["answer"],
        oracle=data["oracle"],
        reasoning=tuple(data.get("reasoning", ())),
    )


def record_from_json(data: dict[str, Any]) -> DatasetRecord:
    try:
        spec = ChartSpec(
            record_id=data["record_id"],
            seed=int(data["seed"]),
            chart_type=ChartType(data["chart_type"]),
            engine=EngineId(data["engine"]),
            theme=Theme(topic=data["theme"]["topic"], phrase=data["theme"]["phrase"]),
            trends=tuple(
                TrendTag(
                    id=t["id"],
                    family=TrendFamily(t["family"]),
                    applicable=frozenset(ChartType(ct) for ct in t["applicable"]),
                    min_len=int(t.get("min_len", 2)),
                    params=t.get("params", {}),
                )
                for t in data["trends"]
            ),
            n_rows=int(data["n_rows"]),
            n_cols=int(data["n_cols"]),
            style_seed=int(data["style_seed"]),
        )
        t = data["table"]
        table = DataTable(
            index_label=t["index_label"],
            index=tuple(t["index"]),
            series_labels=tuple(t["series_labels"]),
            cells=tuple(tuple(float(v) for v in row) for row in t["cells"]),
        )
        c = data["code"]
        style = StyleChoice(
            title=c["style"]["title"],
            legend=bool(c["style"]["legend"]),
            legend_pos=c["style"]["legend_pos"],
            x_label=c["style"]["x_label"],
            y_label=c["style"]["y_label"],
            annotations=bool(c["style"]["annotations"]),
            palette=c["style"]["palette"],
            fig_size=tuple(c["style"]["fig_size"]),
        )
        code = PlotScript(
            engine=EngineId(c["engine"]),
            source=c["source"],
            output_filename=c["output_filename"],
            style=style,
        )
        img = data["image"]
        image_ref = ImageRef(
            path=img["path"],
            width=int(img["width"]),
            height=int(img["height"]),
            size_bytes=int(img["size_bytes"]),
            variance=float(img["variance"]),
        )
        p = data["provenance"]
        provenance = Provenance(
            backend=p["backend"],
            repair_attempts=int(p["repair_attempts"]),
            applied_rules=tuple(p["applied_rules"]),
            wall_ms=int(p["wall_ms"]),
            outliers=tuple(
                OutlierFlag(row=int(o["row"]), col=int(o["col"]), factor=float(o["factor"]))
                for o in p.get("outliers", ())
            ),
        )
        return DatasetRecord(
            spec=spec,
            table=table,
            code=code,
            image_ref=image_ref,
            data_description=data["data_description"],
            chart_description=data["chart_description"],
            simple_qa=tuple(_qa_from_json(q) for q in data["simple_qa"]),
            complex_qa=tuple(_qa_from_json(q) for q in data["complex_qa"]),
            provenance=provenance,
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise DatasetError(f"malformed record: {exc}") from exc


def canonical_record_bytes(data: dict[str, Any]) -> bytes:
    """Canonical encoding for digests: sorted keys, wall_ms zeroed."""
    clean = json.loads(json.dumps(data))
    if "provenance" in clean:
        clean["provenance"]["wall_ms"] = 0
    return json.dumps(clean, sort_keys=True, separators=(",", ":")).encode("utf-8")


def record_digest(data: dict[str, Any]) -> str:
    return hashlib.sha256(canonical_record_bytes(data)).hexdigest()


# --- shard layout -------------------------------------------------------------

def shard_name(index: int) -> str:
    return f"{index:05d}.jsonl"


_SHARD_RE = re.compile(r"^(\d{5})\.jsonl$")


def _shard_digest(lines: list[dict[str, Any]]) -> str:
    h = hashlib.sha256()
    for data in lines:
        h.update(record_digest(data).encode("ascii"))
        h.update(b"\n")
    return h.hexdigest()


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.parent / f".tmp-{path.name}"
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


@dataclass
class ShardWriter:
    """Buffers records and writes complete shards atomically.

    ``skip_shard`` marks a shard already on disk from a previous run;
    the writer leaves its file alone but still includes it when the
    manifest is assembled.
    """

    out_dir: Path
    shard_size: int = DEFAULT_SHARD_SIZE

    def __post_init__(self) -> None:
        if self.shard_size < 1:
            raise ValueError("shard_size must be >= 1")
        self.out_dir = Path(self.out_dir)
        (self.out_dir / "shards").mkdir(parents=True, exist_ok=True)
        (self.out_dir / "images").mkdir(parents=True, exist_ok=True)
        self._buffer: list[dict[str, Any]] = []
        self._next_shard = 0
        self._count = 0

    def skip_shard(self, index: int, count: int) -> None:
        if index != self._next_shard:
            raise DatasetError(f"cannot skip shard {index}, expected {self._next_shard}")
        if self._buffer:
            raise DatasetError("cannot skip a shard mid-buffer")
        self._next_shard += 1
        self._count += count

    def add(self, data: dict[str, Any]) -> None:
        self._buffer.append(data)
        self._count += 1
        if len(self._buffer) == self.shard_size:
            self._flush()

    def _flush(self) -> None:
        if not self._buffer:
            return
        path = self.out_dir / "shards" / shard_name(self._next_shard)
        text = "".join(
            json.dumps(d, ensure_ascii=True, sort_keys=True) + "\n" for d in self._buffer
        )
        _atomic_write(path, text)
        self._buffer.clear()
        self._next_shard += 1

    def finalize(self, config: Optional[dict[str, Any]] = None) -> dict[str, Any]:
        self._flush()
        manifest = build_manifest(self.out_dir, self.shard_size, config)
        if manifest["count"] != self._count:
            raise DatasetError(
                f"manifest count {manifest['count']} != written count {self._count}"
            )
        return manifest


def aggregate_stats(record_dicts: list[dict[str, Any]]) -> dict[str, Any]:
    """Annotation totals in dataset-card shape; recomputable from shards."""
    by_type: dict[str, int] = {}
    by_engine: dict[str, int] = {}
    simple = 0
    complex_ = 0
    for data in record_dicts:
        by_type[data["chart_type"]] = by_type.get(data["chart_type"], 0) + 1
        by_engine[data["engine"]] = by_engine.get(data["engine"], 0) + 1
        simple += len(data["simple_qa"])
        complex_ += len(data["complex_qa"])
    n = len(record_dicts)
    return {
        "tables": n,
        "code_scripts": n,
        "images": n,
        "descriptions": 2 * n,
        "simple_qa": simple,
        "complex_qa": complex_,
        "by_chart_type": dict(sorted(by_type.items())),
        "by_engine": dict(sorted(by_engine.items())),
    }


def config_digest(config: dict[str, Any]) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()


def build_manifest(
    out_dir: Path,
    shard_size: int,
    config: Optional[dict[str, Any]] = None,
) -> dict[str, Any]:
    """Scan shard files and write manifest.json; returns the manifest.

    Shard byte sizes are counted over the canonical encoding (wall_ms
    zeroed), so the manifest is identical across reruns and resumes.
    """
    from . import __version__

    out_dir = Path(out_dir)
    shard_dir = out_dir / "shards"
    shards = []
    all_records: list[dict[str, Any]] = []
    names = sorted(p.name for p in shard_dir.glob("*.jsonl") if _SHARD_RE.match(p.name))
    for expected, name in enumerate(names):
        if name != shard_name(expected):
            raise DatasetError(f"shard gap: found {name}, expected {shard_name(expected)}")
        lines = _read_shard(shard_dir / name)
        shards.append(
            {
                "name": name,
                "count": len(lines),
                "bytes": sum(len(canonical_record_bytes(d)) + 1 for d in lines),
                "digest": _shard_digest(lines),
            }
        )
        all_records.extend(lines)
    overall = hashlib.sha256()
    for s in shards:
        overall.update(s["digest"].encode("ascii"))
    manifest = {
        "version": MANIFEST_VERSION,
        "generator_version": __version__,
        "count": sum(s["count"] for s in shards),
        "shard_size": shard_size,
        "shards": shards,
        "stats": aggregate_stats(all_records),
        "digest": overall.hexdigest(),
    }
    if config:
        manifest["config"] = config
        manifest["config_digest"] = config_digest(config)
        if "seed" in config and "count" in config:
            manifest["seed_range"] = {
                "base_seed": config["seed"],
                "count": config["count"],
                "derivation": "blake2b64(base_seed, 'record', index)",
            }
    _atomic_write(
        out_dir / "manifest.json",
        json.dumps(manifest, indent=2, sort_keys=True) + "\n",
    )
    return manifest


def _read_shard(path: Path) -> list[dict[str, Any]]:
    out = []
    with path.open(encoding="utf-8") as fh:
        for i, line in enumerate(fh):
            line = line.strip()
            if not line:
                continue
            try:
                out.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise DatasetError(f"{path.name}:{i + 1}: bad JSON: {exc}") from exc
    return out


def existing_complete_shards(
    out_dir: Path, shard_size: int, total: int
) -> dict[int, int]:
    """Shards from an interrupted run that can be trusted as-is.

    Returns {shard_index: record_count}. A shard counts as complete when
    it holds exactly the records its position implies; a short final
    shard is complete only if it ends the run. Trust stops at the first
    gap or short shard, because later shards would repeat other indices.
    """
    out_dir = Path(out_dir)
    found: dict[int, int] = {}
    n_shards = (total + shard_size - 1) // shard_size
    for index in range(n_shards):
        path = out_dir / "shards" / shard_name(index)
        if not path.exists():
            break
        expected = min(shard_size, total - index * shard_size)
        try:
            lines = _read_shard(path)
        except DatasetError:
            break
        if len(lines) != expected:
            break
        found[index] = len(lines)
    return found


def load_manifest(out_dir: Path) -> dict[str, Any]:
    path = Path(out_dir) / "manifest.json"
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise DatasetError(f"no manifest at {path}") from exc
    except json.JSONDecodeError as exc:
        raise DatasetError(f"manifest is not valid JSON: {exc}") from exc


def read_records(out_dir: Path) -> Iterator[DatasetRecord]:
    out_dir = Path(out_dir)
    manifest = load_manifest(out_dir)
    for shard in manifest["shards"]:
        for data in _read_shard(out_dir / "shards" / shard["name"]):
            yield record_from_json(data)


class RejectLog:
    """Append-only log of rejected candidates; file appears on first write."""

    def __init__(self, out_dir: Path):
        self.path = Path(out_dir) / "rejects.jsonl"
        self.count = 0

    def append(self, entry: dict[str, Any]) -> None:
        with self.path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(entry, ensure_ascii=True, sort_keys=True) + "\n")
        self.count += 1


# --- verification -------------------------------------------------------------

@dataclass(frozen=True)
class VerifyReport:
    checked: int
    problems: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.problems


def verify_dataset(out_dir: Path, deep: bool = True) -> VerifyReport:
    """Re-derive everything the manifest claims and check record invariants."""
    out_dir = Path(out_dir)
    problems: list[str] = []
    checked = 0
    try:
        manifest = load_manifest(out_dir)
    except DatasetError as exc:
        return VerifyReport(0, (str(exc),))

    if manifest.get("version") != MANIFEST_VERSION:
        problems.append(f"unsupported manifest version {manifest.get('version')!r}")
        return VerifyReport(0, tuple(problems))

    from .render import validate_image

    seen_ids: set[str] = set()
    total = 0
    overall = hashlib.sha256()
    all_records: list[dict[str, Any]] = []
    for shard in manifest.get("shards", []):
        path = out_dir / "shards" / shard["name"]
        if not path.exists():
            problems.append(f"missing shard {shard['name']}")
            continue
        try:
            lines = _read_shard(path)
        except DatasetError as exc:
            problems.append(str(exc))
            continue
        if len(lines) != shard["count"]:
            problems.append(
                f"{shard['name']}: {len(lines)} records, manifest says {shard['count']}"
            )
        digest = _shard_digest(lines)
        overall.update(digest.encode("ascii"))
        if digest != shard["digest"]:
            problems.append(f"{shard['name']}: content digest mismatch")
        total += len(lines)
        all_records.extend(lines)
        for data in lines:
            checked += 1
            rid = data.get("record_id", "<missing>")
            if rid in seen_ids:
                problems.append(f"duplicate record_id {rid}")
            seen_ids.add(rid)
            try:
                record = record_from_json(data)
            except DatasetError as exc:
                problems.append(f"{rid}: {exc}")
                continue
            if not deep:
                continue
            report = validate_record(record)
            for v in report.violations:
                problems.append(f"{rid}: {v.code}: {v.message}")
            image_path = out_dir / record.image_ref.path
            if not image_path.exists():
                problems.append(f"{rid}: image file missing: {record.image_ref.path}")
                continue
            try:
                meta = validate_image(image_path)
            except (OSError, ValueError) as exc:
                problems.append(f"{rid}: empty_image: {exc}")
                continue
            if (meta.width, meta.height) != (record.image_ref.width, record.image_ref.height):
                problems.append(f"{rid}: image dimensions drifted on disk")
            if meta.size_bytes != record.image_ref.size_bytes:
                problems.append(f"{rid}: image size drifted on disk")

    if total != manifest.get("count"):
        problems.append(f"record count {total} != manifest count {manifest.get('count')}")
    if manifest.get("shards") and overall.hexdigest() != manifest.get("digest"):
        problems.append("overall digest mismatch")
    if "stats" in manifest and manifest["stats"] != aggregate_stats(all_records):
        problems.append("manifest stats do not match recomputation from shards")
    return VerifyReport(checked, tuple(problems))


# --- stats --------------------------------------------------------------------

def compute_stats(out_dir: Path) -> dict[str, Any]:
    out_dir = Path(out_dir)
    by_type: dict[str, int] = {}
    by_engine: dict[str, int] = {}
    simple_counts: list[int] = []
    complex_counts: list[int] = []
    data_words: list[int] = []
    chart_words: list[int] = []
    repair_hist: dict[int, int] = {}
    n_images = 0
    n_descriptions = 0
    count = 0
    invalid: list[str] = []
    for record in read_records(out_dir):
        count += 1
        by_type[record.spec.chart_type.value] = by_type.get(record.spec.chart_type.value, 0) + 1
        by_engine[record.spec.engine.value] = by_engine.get(record.spec.engine.value, 0) + 1
        simple_counts.append(len(record.simple_qa))
        complex_counts.append(len(record.complex_qa))
        data_words.append(len(record.data_description.split()))
        chart_words.append(len(record.chart_description.split()))
        attempts = record.provenance.repair_attempts
        repair_hist[attempts] = repair_hist.get(attempts, 0) + 1
        n_images += 1
        n_descriptions += 2
        if not validate_record(record).ok:
            invalid.append(record.spec.record_id)

    def mean(xs: list[int]) -> float:
        return round(sum(xs) / len(xs), 2) if xs else 0.0

    return {
        "records": count,
        "by_chart_type": dict(sorted(by_type.items())),
        "by_engine": dict(sorted(by_engine.items())),
        "qa": {
            "simple_total": sum(simple_counts),
            "complex_total": sum(complex_counts),
            "simple_mean": mean(simple_counts),
            "complex_mean": mean(complex_counts),
        },
        "descriptions_per_image": (
            round(n_descriptions / n_images, 2) if n_images else 0.0
        ),
        "description_words": {
            "data_mean": mean(data_words),
            "chart_mean": mean(chart_words),
        },
        "repair_attempts": {str(k): v for k, v in sorted(repair_hist.items())},
        "invalid_records": invalid,
    }


def format_stats_text(stats: dict[str, Any]) -> str:
    """Tab-delimited summary, one metric per line."""
    lines = [f"records\t{stats['records']}"]
    for name, value in stats["by_chart_type"].items():
        lines.append(f"chart_type\t{name}\t{value}")
    for name, value in stats["by_engine"].items():
        lines.append(f"engine\t{name}\t{value}")
    qa = stats["qa"]
    lines.append(f"qa_simple\ttotal\t{qa['simple_total']}")
    lines.append(f"qa_simple\tmean\t{qa['simple_mean']}")
    lines.append(f"qa_complex\ttotal\t{qa['complex_total']}")
    lines.append(f"qa_complex\tmean\t{qa['complex_mean']}")
    lines.append(f"descriptions_per_image\t{stats['descriptions_per_image']}")
    words = stats["description_words"]
    lines.append(f"description_words\tdata_mean\t{words['data_mean']}")
    lines.append(f"description_words\tchart_mean\t{words['chart_mean']}")
    for attempts, value in stats["repair_attempts"].items():
        lines.append(f"repair_attempts\t{attempts}\t{value}")
    lines.append(f"invalid_records\t{len(stats['invalid_records'])}")
    return "\n".join(lines) + "\n"


def render_stats_figure(stats: dict[str, Any], fig_path: Path) -> None:
    """Chart-type / engine / QA-count panels saved as one figure."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 3, figsize=(15, 4.5))
    for ax, (title, counts) in zip(
        axes,
        (
            ("Records by chart type", stats["by_chart_type"]),
            ("Records by engine", stats["by_engine"]),
            ("Repair attempts", stats["repair_attempts"]),
        ),
    ):
        names = list(counts)
        values = [counts[n] for n in names]
        ax.bar(range(len(names)), values, color="#4878cf")
        ax.set_xticks(range(len(names)))
        ax.set_xticklabels(names, rotation=45, ha="right", fontsize=8)
        ax.set_title(title)
        ax.set_ylabel("records")
    fig.suptitle(f"{stats['records']} records", fontsize=11)
    fig.tight_layout()
    fig_path = Path(fig_path)
    fig_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(fig_path, format=fig_path.suffix.lstrip(".") or "png")
    plt.close(fig)
