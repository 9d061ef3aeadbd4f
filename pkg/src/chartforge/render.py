"""Render orchestration over a line-delimited JSON worker protocol.

The orchestrator never executes plotting code in-process. It talks to a
harness subprocess over stdin/stdout, one JSON object per line:

request   {"id", "engine", "code", "timeout_s", "out_path"}
response  {"id", "status", "error_class", "stderr_tail", "image_path",
           "wall_ms"}

``status`` is "ok" or "error"; ``error_class`` is one of ERROR_CLASSES.
A harness that cannot be spawned, or that breaks the protocol, raises
:class:`HarnessUnavailable`; that is an operator problem, not a property
of the script, and is never recorded as a script failure.

Failed scripts go through :func:`repair_loop`: an ordered catalog of
static rewrite rules where at most one rule fires per attempt, bounded
by ``max_attempts``.
"""

from __future__ import annotations

import json
import queue
import re
import subprocess
import sys
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

from PIL import Image, ImageStat

from .model import ImageRef, PlotScript

ERROR_CLASSES = (
    "none",
    "syntax",
    "missing_symbol",
    "data_shape",
    "timeout",
    "sandbox_violation",
    "empty_image",
    "other",
)

DEFAULT_TIMEOUT_S = 30.0
DEFAULT_MAX_ATTEMPTS = 3
MIN_IMAGE_SIDE = 64
# Grayscale pixel variance below this means a blank canvas, not a chart.
MIN_IMAGE_VARIANCE = 5.0

# Stdin/stdout harness invocation used when the caller does not supply one.
DEFAULT_HARNESS_CMD = (sys.executable, "-m", "chartforge.mock_harness")


class HarnessUnavailable(RuntimeError):
    """The worker process cannot be reached; distinct from script errors."""


@dataclass(frozen=True)
class RenderRequest:
    id: str
    engine: str
    code: str
    timeout_s: float
    out_path: str

    def to_json(self) -> str:
        return json.dumps(
            {
                "id": self.id,
                "engine": self.engine,
                "code": self.code,
                "timeout_s": self.timeout_s,
                "out_path": self.out_path,
            },
            ensure_ascii=True,
        )


@dataclass(frozen=True)
class RenderResponse:
    id: str
    status: str
    error_class: str
    stderr_tail: str
    image_path: Optional[str]
    wall_ms: int

    @classmethod
    def from_json(cls, line: str) -> "RenderResponse":
        data = json.loads(line)
        resp = cls(
            id=str(data["id"]),
            status=str(data["status"]),
            error_class=str(data.get("error_class", "other")),
            # Protocol cap: keep only the tail of oversized stderr.
            stderr_tail=str(data.get("stderr_tail", ""))[-2048:],
            image_path=data.get("image_path"),
            wall_ms=int(data.get("wall_ms", 0)),
        )
        if resp.status not in ("ok", "error") or resp.error_class not in ERROR_CLASSES:
            raise ValueError(f"malformed harness response: {line!r}")
        return resp


@dataclass(frozen=True)
class RenderOutcome:
    ok: bool
    error_class: str
    stderr_tail: str
    image: Optional[ImageRef]
    wall_ms: int
    attempts: int
    applied_rules: tuple[str, ...] = ()
    final_code: str = ""


def validate_image(path: Path) -> ImageRef:
    """Decode and reject degenerate output; raises ValueError when unusable."""
    with Image.open(path) as img:
        if img.format != "JPEG":
            raise ValueError(f"expected JPEG, got {img.format}")
        img.load()
        width, height = img.size
        if min(width, height) < MIN_IMAGE_SIDE:
            raise ValueError(f"image too small: {width}x{height}")
        variance = ImageStat.Stat(img.convert("L")).var[0]
    if variance < MIN_IMAGE_VARIANCE:
        raise ValueError(f"image is near-uniform (variance {variance:.2f})")
    return ImageRef(
        path=str(path),
        width=width,
        height=height,
        size_bytes=path.stat().st_size,
        variance=round(variance, 2),
    )


# --- repair rules -----------------------------------------------------------

@dataclass(frozen=True)
class RepairRule:
    name: str
    applies: Callable[[str, str, str], bool]  # (code, error_class, stderr_tail)
    apply: Callable[[str], str]


def _has(pattern: str) -> Callable[[str], bool]:
    compiled = re.compile(pattern)
    return lambda text: bool(compiled.search(text))


_GUI_ERR = _has(r"(no display|DISPLAY|TclError|Qt platform|_tkinter|cannot connect to X)")
_NAME_ERR = re.compile(r"NameError: name '(\w+)' is not defined")
_KNOWN_IMPORTS = {
    "np": "import numpy as np",
    "pd": "import pandas as pd",
    "plt": "import matplotlib.pyplot as plt",
    "sns": "import seaborn as sns",
    "go": "import plotly.graph_objects as go",
    "io": "import io",
    "math": "import math",
}


def _strip_show(code: str) -> str:
    kept = [
        line
        for line in code.splitlines()
        if not re.search(r"(^|\.)\s*show\s*\(", line.strip())
    ]
    return "\n".join(kept) + "\n"


def _prepend_agg(code: str) -> str:
    return 'import matplotlib\nmatplotlib.use("Agg")\n' + code


def _import_rule_apply(stderr_tail: str) -> Callable[[str], str]:
    def apply(code: str) -> str:
        match = _NAME_ERR.search(stderr_tail)
        if not match:
            return code
        stmt = _KNOWN_IMPORTS.get(match.group(1))
        if not stmt or stmt in code:
            return code
        return stmt + "\n" + code

    return apply


def _coerce_numeric(code: str) -> str:
    lines = code.splitlines()
    for i, line in enumerate(lines):
        if "pd.read_csv" in line and "=" in line:
            target = line.split("=", 1)[0].strip()
            lines.insert(
                i + 1, f'{target} = {target}.apply(pd.to_numeric, errors="coerce")'
            )
            break
    return "\n".join(lines) + "\n"


_READ_CSV_HAS_INDEX = re.compile(r"read_csv\(.*index_col")


def _add_index_col(code: str) -> str:
    if _READ_CSV_HAS_INDEX.search(code):
        return code
    return re.sub(
        r"pd\.read_csv\(io\.StringIO\((\w+)\)\)",
        r"pd.read_csv(io.StringIO(\1), index_col=0)",
        code,
        count=1,
    )


def _drop_tight_layout(code: str) -> str:
    kept = [ln for ln in code.splitlines() if "tight_layout" not in ln]
    return "\n".join(kept) + "\n"


def _force_jpg_format(code: str) -> str:
    if 'format="jpg"' in code:
        return code

    def patch(match: re.Match[str]) -> str:
        return match.group(0)[:-1] + ', format="jpg")'

    return re.sub(r"savefig\(([^)]*?)\)", patch, code, count=1)


def _strip_dpi(code: str) -> str:
    return re.sub(r",?\s*dpi\s*=\s*\d+", "", code)


def repair_rules(stderr_tail: str) -> tuple[RepairRule, ...]:
    """Ordered catalog, specialized to one failure's stderr."""
    return (
        RepairRule(
            "strip_show",
            lambda code, ec, err: bool(re.search(r"(^|\.)\s*show\s*\(", code, re.M)),
            _strip_show,
        ),
        RepairRule(
            "use_agg_backend",
            lambda code, ec, err: _GUI_ERR(err) and 'matplotlib.use("Agg")' not in code,
            _prepend_agg,
        ),
        RepairRule(
            "import_missing_symbol",
            lambda code, ec, err: ec == "missing_symbol"
            and bool(_NAME_ERR.search(err))
            and _NAME_ERR.search(err).group(1) in _KNOWN_IMPORTS,
            _import_rule_apply(stderr_tail),
        ),
        RepairRule(
            "add_index_col",
            lambda code, ec, err: ec == "data_shape"
            and "could not convert string to float" in err
            and "pd.read_csv" in code
            and not _READ_CSV_HAS_INDEX.search(code),
            _add_index_col,
        ),
        RepairRule(
            "coerce_numeric",
            lambda code, ec, err: ec == "data_shape"
            and "pd.read_csv" in code
            and "pd.to_numeric" not in code,
            _coerce_numeric,
        ),
        RepairRule(
            "drop_tight_layout",
            lambda code, ec, err: "tight_layout" in err and "tight_layout" in code,
            _drop_tight_layout,
        ),
        RepairRule(
            "force_jpg_format",
            lambda code, ec, err: ec in ("empty_image", "other")
            and "savefig" in code
            and "unknown file extension" in err.lower(),
            _force_jpg_format,
        ),
        RepairRule(
            "strip_dpi",
            lambda code, ec, err: "too large" in err and "dpi" in code,
            _strip_dpi,
        ),
    )


# --- harness client ---------------------------------------------------------

class _HarnessProc:
    """One worker subprocess; requests are strictly sequential."""

    def __init__(self, cmd: Sequence[str]):
        self.cmd = list(cmd)
        try:
            self.proc = subprocess.Popen(
                self.cmd,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.DEVNULL,
                text=True,
                bufsize=1,
            )
        except OSError as exc:
            raise HarnessUnavailable(f"cannot spawn harness {self.cmd!r}: {exc}") from exc

    def alive(self) -> bool:
        return self.proc.poll() is None

    def close(self) -> None:
        if self.alive():
            self.proc.terminate()
            try:
                self.proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                self.proc.kill()
                self.proc.wait()

    def request(self, req: RenderRequest) -> RenderResponse:
        if not self.alive():
            raise HarnessUnavailable("harness exited")
        assert self.proc.stdin and self.proc.stdout
        try:
            self.proc.stdin.write(req.to_json() + "\n")
            self.proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise HarnessUnavailable(f"harness pipe broken: {exc}") from exc
        # The harness enforces timeout_s itself; the grace window only
        # guards against a hung worker.
        deadline = req.timeout_s * 1.5 + 15.0
        line = _read_line_with_deadline(self.proc, deadline)
        if line is None:
            self.close()
            raise HarnessUnavailable("harness did not answer within grace window")
        try:
            resp = RenderResponse.from_json(line)
        except (ValueError, KeyError) as exc:
            self.close()
            raise HarnessUnavailable(f"protocol violation: {exc}") from exc
        if resp.id != req.id:
            self.close()
            raise HarnessUnavailable(f"response id {resp.id!r} for request {req.id!r}")
        return resp


def _read_line_with_deadline(proc: subprocess.Popen, deadline_s: float) -> Optional[str]:
    result: queue.Queue[Optional[str]] = queue.Queue()

    def reader() -> None:
        assert proc.stdout
        result.put(proc.stdout.readline() or None)

    t = threading.Thread(target=reader, daemon=True)
    t.start()
    try:
        return result.get(timeout=deadline_s)
    except queue.Empty:
        return None


class HarnessPool:
    """Thread-safe pool of worker subprocesses.

    ``render`` checks a worker out, runs one request, and checks it back
    in, so it can be driven from as many threads as there are workers. A
    worker that breaks mid-request is respawned once before the request
    is declared undeliverable.
    """

    def __init__(self, cmd: Sequence[str] = DEFAULT_HARNESS_CMD, workers: int = 1):
        if workers < 1:
            raise ValueError("workers must be >= 1")
        self.cmd = tuple(cmd)
        self._idle: queue.Queue[_HarnessProc] = queue.Queue()
        self._all: list[_HarnessProc] = []
        self._lock = threading.Lock()
        for _ in range(workers):
            self._checkin(_HarnessProc(self.cmd))

    def _checkin(self, proc: _HarnessProc) -> None:
        with self._lock:
            self._all.append(proc)
        self._idle.put(proc)

    def _checkout(self) -> _HarnessProc:
        proc = self._idle.get()
        with self._lock:
            self._all.remove(proc)
        return proc

    def render_raw(self, req: RenderRequest) -> RenderResponse:
        proc = self._checkout()
        try:
            try:
                return proc.request(req)
            except HarnessUnavailable:
                proc.close()
                proc = _HarnessProc(self.cmd)
                return proc.request(req)
        finally:
            self._checkin(proc)

    def close(self) -> None:
        with self._lock:
            procs = list(self._all)
            self._all.clear()
        for proc in procs:
            proc.close()
        while True:
            try:
                self._idle.get_nowait().close()
            except queue.Empty:
                break

    def __enter__(self) -> "HarnessPool":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def render_once(
    pool: HarnessPool,
    request_id: str,
    script: PlotScript,
    out_path: Path,
    timeout_s: float = DEFAULT_TIMEOUT_S,
    code: Optional[str] = None,
) -> RenderOutcome:
    code = script.source if code is None else code
    req = RenderRequest(
        id=request_id,
        engine=script.engine.value,
        code=code,
        timeout_s=timeout_s,
        out_path=str(out_path),
    )
    resp = pool.render_raw(req)
    if resp.status != "ok":
        return RenderOutcome(
            ok=False,
            error_class=resp.error_class if resp.error_class != "none" else "other",
            stderr_tail=resp.stderr_tail,
            image=None,
            wall_ms=resp.wall_ms,
            attempts=1,
            final_code=code,
        )
    image_path = Path(resp.image_path or out_path)
    try:
        image = validate_image(image_path)
    except (OSError, ValueError) as exc:
        return RenderOutcome(
            ok=False,
            error_class="empty_image",
            stderr_tail=str(exc),
            image=None,
            wall_ms=resp.wall_ms,
            attempts=1,
            final_code=code,
        )
    return RenderOutcome(
        ok=True,
        error_class="none",
        stderr_tail="",
        image=image,
        wall_ms=resp.wall_ms,
        attempts=1,
        final_code=code,
    )


def repair_loop(
    pool: HarnessPool,
    request_id: str,
    script: PlotScript,
    out_path: Path,
    timeout_s: float = DEFAULT_TIMEOUT_S,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> RenderOutcome:
    """Render with bounded static repair; at most one rule fires per attempt."""
    code = script.source
    applied: list[str] = []
    total_wall = 0
    outcome = render_once(pool, f"{request_id}:1", script, out_path, timeout_s, code)
    total_wall += outcome.wall_ms
    attempt = 1
    while not outcome.ok and attempt < max_attempts:
        fired = None
        for rule in repair_rules(outcome.stderr_tail):
            if rule.applies(code, outcome.error_class, outcome.stderr_tail):
                fired = rule
                break
        if fired is None and outcome.error_class != "timeout":
            break
        if fired is not None:
            new_code = fired.apply(code)
            if new_code == code and outcome.error_class != "timeout":
                break
            code = new_code
            applied.append(fired.name)
        attempt += 1
        outcome = render_once(
            pool, f"{request_id}:{attempt}", script, out_path, timeout_s, code
        )
        total_wall += outcome.wall_ms
    return RenderOutcome(
        ok=outcome.ok,
        error_class=outcome.error_class,
        stderr_tail=outcome.stderr_tail,
        image=outcome.image,
        wall_ms=total_wall,
        attempts=attempt,
        applied_rules=tuple(applied),
        final_code=code,
    )
