"""End-to-end generation runs: spec -> table -> code -> image -> QA -> shards.

Every record is a pure function of ``hash64(base_seed, "record", index)``,
so a run is reproducible record-by-record and a killed run can resume:
complete shards from the previous attempt are trusted by content, their
record ids are skipped, and everything else is regenerated. With a
deterministic backend and harness, resumed and single-shot runs produce
byte-identical manifests.

Failures are data: a candidate that cannot be rendered, answered, or
validated becomes a line in rejects.jsonl, never a weaker record.
"""

from __future__ import annotations

import concurrent.futures
import dataclasses
import shlex
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from .backends import BackendFailure, HttpTextBackend, TextGenBackend
from .catalog import load_theme_catalog, load_trend_catalog
from .codegen import TemplateMalformed, gen_code_and_description
from .dataset import (
    RejectLog,
    ShardWriter,
    existing_complete_shards,
    record_to_json,
    shard_name,
    _read_shard,
)
from .model import (
    ChartType,
    DatasetRecord,
    EngineId,
    ImageRef,
    Provenance,
    TableError,
    validate_record,
)
from .qa import InsufficientTable, gen_complex_qa, gen_simple_qa
from .render import (
    DEFAULT_HARNESS_CMD,
    DEFAULT_MAX_ATTEMPTS,
    DEFAULT_TIMEOUT_S,
    HarnessPool,
    RenderOutcome,
    repair_loop,
)
from .rng import CounterRng, hash64
from .sampler import GenConfig, sample_chart_spec
from .tables import GenerationInvariant, synthesize

# QA counts per record are drawn uniformly from these closed ranges.
SIMPLE_QA_RANGE = (16, 20)
COMPLEX_QA_RANGE = (5, 9)


@dataclass(frozen=True)
class RunConfig:
    count: int
    out_dir: Path
    seed: int = 0
    backend: str = "template"  # "template" | "llm"
    llm_endpoint: Optional[str] = None
    chart_types: Optional[frozenset[ChartType]] = None
    engines: Optional[frozenset[EngineId]] = None
    workers: int = 1
    shard_size: int = 100
    timeout_s: float = DEFAULT_TIMEOUT_S
    max_repairs: int = DEFAULT_MAX_ATTEMPTS - 1
    harness_cmd: tuple[str, ...] = DEFAULT_HARNESS_CMD
    resume: bool = False

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.max_repairs < 0:
            raise ValueError("max_repairs must be >= 0")
        if self.backend not in ("template", "llm"):
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.backend == "llm" and not self.llm_endpoint:
            raise ValueError("llm backend requires --llm-endpoint")

    def record_seed(self, index: int) -> int:
        return hash64(self.seed, "record", index)

    def record_id(self, index: int) -> str:
        return f"rec-{self.record_seed(index):016x}"

    def manifest_config(self) -> dict[str, Any]:
        # Only content-determining knobs; workers/timeouts change nothing
        # about what gets written, so they stay out of the manifest.
        return {
            "count": self.count,
            "seed": self.seed,
            "backend": self.backend,
            "shard_size": self.shard_size,
            "chart_types": sorted(t.value for t in self.chart_types)
            if self.chart_types
            else None,
            "engines": sorted(e.value for e in self.engines)
            if self.engines
            else None,
        }


@dataclass
class RunSummary:
    requested: int
    produced: int = 0
    rejected: int = 0
    reused: int = 0
    per_engine: dict[str, dict[str, int]] = field(default_factory=dict)
    repair_histogram: dict[int, int] = field(default_factory=dict)
    manifest: dict[str, Any] = field(default_factory=dict)
    wall_s: float = 0.0

    @property
    def records_per_s(self) -> float:
        return round(self.produced / self.wall_s, 2) if self.wall_s > 0 else 0.0

    def note_attempt(self, engine: str) -> None:
        slot = self.per_engine.setdefault(engine, {"attempts": 0, "ok": 0})
        slot["attempts"] += 1

    def note_ok(self, engine: str, repair_attempts: int) -> None:
        self.per_engine[engine]["ok"] += 1
        self.repair_histogram[repair_attempts] = (
            self.repair_histogram.get(repair_attempts, 0) + 1
        )

    def to_json(self) -> dict[str, Any]:
        return {
            "requested": self.requested,
            "produced": self.produced,
            "rejected": self.rejected,
            "reused": self.reused,
            "per_engine": self.per_engine,
            "repair_histogram": {str(k): v for k, v in sorted(self.repair_histogram.items())},
            "manifest_digest": self.manifest.get("digest", ""),
            "manifest_count": self.manifest.get("count", 0),
            "wall_s": round(self.wall_s, 3),
            "records_per_s": self.records_per_s,
        }


@dataclass(frozen=True)
class Reject:
    index: int
    record_id: str
    stage: str  # sample | table | code | render | qa | validate
    reason: str
    engine: str = ""
    chart_type: str = ""

    def to_json(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "record_id": self.record_id,
            "stage": self.stage,
            "reason": self.reason,
            "engine": self.engine,
            "chart_type": self.chart_type,
        }


@dataclass(frozen=True)
class _Attempt:
    """Outcome of one record attempt; exactly one of record/reject is set."""

    index: int
    record: Optional[dict[str, Any]] = None
    reject: Optional[Reject] = None
    engine: str = ""
    repair_attempts: int = 0


def _make_backend(config: RunConfig) -> Optional[TextGenBackend]:
    if config.backend == "llm":
        return HttpTextBackend(endpoint=config.llm_endpoint)
    return None


def _with_final_code(script, final_code: str):
    """The stored code is what actually rendered, repairs included."""
    if final_code and final_code != script.source:
        return dataclasses.replace(script, source=final_code)
    return script


def build_record(
    config: RunConfig,
    gen_config: GenConfig,
    backend: Optional[TextGenBackend],
    pool: HarnessPool,
    index: int,
) -> _Attempt:
    seed = config.record_seed(index)
    out_dir = Path(config.out_dir)

    spec = sample_chart_spec(seed, gen_config)
    engine = spec.engine.value
    chart = spec.chart_type.value

    def rejected(stage: str, reason: str) -> _Attempt:
        return _Attempt(
            index=index,
            reject=Reject(index, spec.record_id, stage, reason, engine, chart),
            engine=engine,
        )

    try:
        synthesis = synthesize(spec, backend)
    except (GenerationInvariant, TableError, BackendFailure) as exc:
        return rejected("table", str(exc))

    try:
        script, chart_description = gen_code_and_description(
            spec, synthesis.table, backend
        )
    except (TemplateMalformed, BackendFailure) as exc:
        return rejected("code", str(exc))

    image_path = out_dir / "images" / script.output_filename
    outcome: RenderOutcome = repair_loop(
        pool,
        spec.record_id,
        script,
        image_path,
        timeout_s=config.timeout_s,
        max_attempts=config.max_repairs + 1,
    )
    if not outcome.ok:
        image_path.unlink(missing_ok=True)
        return rejected(
            "render", f"{outcome.error_class}: {outcome.stderr_tail[-300:]}"
        )
    assert outcome.image is not None
    image_ref = ImageRef(
        path=f"images/{script.output_filename}",
        width=outcome.image.width,
        height=outcome.image.height,
        size_bytes=outcome.image.size_bytes,
        variance=outcome.image.variance,
    )

    qa_rng = CounterRng(seed, "qa-plan")
    n_simple = qa_rng.randint(*SIMPLE_QA_RANGE)
    n_complex = qa_rng.randint(*COMPLEX_QA_RANGE)
    try:
        simple = gen_simple_qa(synthesis.table, spec, seed, n_simple)
        complex_ = gen_complex_qa(synthesis.table, spec, seed, n_complex)
    except InsufficientTable as exc:
        image_path.unlink(missing_ok=True)
        return rejected("qa", str(exc))

    record = DatasetRecord(
        spec=spec,
        table=synthesis.table,
        code=_with_final_code(script, outcome.final_code),
        image_ref=image_ref,
        data_description=synthesis.description,
        chart_description=chart_description,
        simple_qa=tuple(simple),
        complex_qa=tuple(complex_),
        provenance=Provenance(
            backend=config.backend,
            repair_attempts=outcome.attempts - 1,
            applied_rules=outcome.applied_rules,
            wall_ms=outcome.wall_ms,
            outliers=synthesis.outliers,
        ),
    )
    report = validate_record(record)
    if not report.ok:
        image_path.unlink(missing_ok=True)
        reasons = "; ".join(f"{v.code}: {v.message}" for v in report.violations)
        return rejected("validate", reasons)
    return _Attempt(
        index=index,
        record=record_to_json(record),
        engine=engine,
        repair_attempts=outcome.attempts - 1,
    )


def _trusted_record_ids(out_dir: Path, trusted: dict[int, int]) -> set[str]:
    ids: set[str] = set()
    for index in trusted:
        for data in _read_shard(Path(out_dir) / "shards" / shard_name(index)):
            ids.add(str(data.get("record_id", "")))
    return ids


def run_generate(config: RunConfig) -> RunSummary:
    started = time.monotonic()
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    backend = _make_backend(config)
    gen_config = GenConfig.restricted(config.chart_types, config.engines)
    load_theme_catalog()
    load_trend_catalog()

    summary = RunSummary(requested=config.count)
    writer = ShardWriter(out_dir, config.shard_size)
    rejects = RejectLog(out_dir)

    skip_ids: set[str] = set()
    if config.resume:
        trusted = existing_complete_shards(out_dir, config.shard_size, config.count)
        skip_ids = _trusted_record_ids(out_dir, trusted)
        for index in sorted(trusted):
            writer.skip_shard(index, trusted[index])
        summary.reused = len(skip_ids)
        summary.produced += len(skip_ids)

    pending = [
        i for i in range(config.count) if config.record_id(i) not in skip_ids
    ]

    with HarnessPool(cmd=config.harness_cmd, workers=config.workers) as pool:
        with concurrent.futures.ThreadPoolExecutor(config.workers) as executor:
            window = max(1, config.workers) * 2
            futures: dict[int, concurrent.futures.Future] = {}
            cursor = 0

            def submit_up_to(limit: int) -> None:
                nonlocal cursor
                while cursor < len(pending) and len(futures) < limit:
                    idx = pending[cursor]
                    futures[idx] = executor.submit(
                        build_record, config, gen_config, backend, pool, idx
                    )
                    cursor += 1

            submit_up_to(window)
            # Consume strictly in index order so shards are deterministic
            # regardless of worker count.
            for idx in pending:
                attempt = futures.pop(idx).result()
                submit_up_to(window)
                summary.note_attempt(attempt.engine)
                if attempt.record is not None:
                    writer.add(attempt.record)
                    summary.produced += 1
                    summary.note_ok(attempt.engine, attempt.repair_attempts)
                else:
                    assert attempt.reject is not None
                    rejects.append(attempt.reject.to_json())
                    summary.rejected += 1

    summary.manifest = writer.finalize(config.manifest_config())
    summary.wall_s = time.monotonic() - started
    return summary


def parse_harness_cmd(raw: Optional[str]) -> tuple[str, ...]:
    if not raw:
        return DEFAULT_HARNESS_CMD
    parts = tuple(shlex.split(raw))
    if not parts:
        return DEFAULT_HARNESS_CMD
    return parts
