"""Stdio serve loop: execute one plotting script per request line.

Request:  {"id", "engine", "code", "timeout_s", "out_path"}
Response: {"id", "status", "error_class", "stderr_tail", "image_path", "wall_ms"}

Unknown request fields are ignored. Every request gets exactly one response,
in order, even when the script crashes the interpreter it runs in; requests
that cannot be parsed at all are answered with status=error, class=other and
a null id. The worker itself never executes untrusted code: scripts run in a
fresh subprocess (see exec_shim) with its own working directory, a wall-clock
kill, CPU/file-size limits, and no network.
"""

from __future__ import annotations

import argparse
import json
import os
import shutil
import signal
import subprocess
import sys
import tempfile
import time
import traceback
from pathlib import Path
from typing import Any, Optional, TextIO

from . import __version__
from .classify import classify_failure

DEFAULT_TIMEOUT_S = 30.0
MAX_TIMEOUT_S = 600.0
STDERR_TAIL_CHARS = 2048


def _response(
    request_id: Any,
    status: str,
    error_class: str,
    stderr_tail: str = "",
    image_path: Optional[str] = None,
    wall_ms: int = 0,
) -> dict[str, Any]:
    return {
        "id": request_id,
        "status": status,
        "error_class": error_class,
        "stderr_tail": stderr_tail[-STDERR_TAIL_CHARS:],
        "image_path": image_path,
        "wall_ms": wall_ms,
    }


def _child_env(workdir: Path, mpl_config: Path) -> dict[str, str]:
    env = {
        "PATH": os.environ.get("PATH", "/usr/bin:/bin"),
        "HOME": str(workdir),
        "TMPDIR": str(workdir),
        "MPLBACKEND": "Agg",  # headless regardless of what the script assumes
        "MPLCONFIGDIR": str(mpl_config),
        "PYTHONUNBUFFERED": "1",
    }
    for keep in ("LANG", "LC_ALL", "LD_LIBRARY_PATH"):
        if keep in os.environ:
            env[keep] = os.environ[keep]
    return env


def _find_image(workdir: Path, out_path: Path, started_at: float) -> Optional[Path]:
    """The produced JPEG: wherever the script saved it under its workdir."""
    candidates = [
        p
        for pattern in ("*.jpg", "*.jpeg")
        for p in workdir.rglob(pattern)
        if p.is_file() and p.stat().st_size > 0
    ]
    if out_path.is_file() and out_path.stat().st_size > 0:
        if out_path.stat().st_mtime >= started_at:
            candidates.append(out_path)
    if not candidates:
        return None
    return max(candidates, key=lambda p: p.stat().st_mtime)


class Worker:
    def __init__(self, scratch: Path) -> None:
        self.scratch = scratch
        # shared across requests so matplotlib builds its font cache once
        self.mpl_config = scratch / "mplconfig"
        self.mpl_config.mkdir(parents=True, exist_ok=True)

    def handle_line(self, line: str) -> Optional[dict[str, Any]]:
        line = line.strip()
        if not line:
            return None
        try:
            request = json.loads(line)
        except json.JSONDecodeError as exc:
            return _response(None, "error", "other", f"unparsable request: {exc}")
        if not isinstance(request, dict):
            return _response(None, "error", "other", "request is not a JSON object")
        request_id = request.get("id")
        try:
            return self.handle_request(request)
        except Exception:
            return _response(
                request_id,
                "error",
                "other",
                f"harness internal error:\n{traceback.format_exc()}",
            )

    def handle_request(self, request: dict[str, Any]) -> dict[str, Any]:
        request_id = request.get("id")
        code = request.get("code")
        out_path = request.get("out_path")
        if not isinstance(code, str) or not code:
            return _response(request_id, "error", "other", "request has no code")
        if not isinstance(out_path, str) or not out_path:
            return _response(request_id, "error", "other", "request has no out_path")
        try:
            timeout_s = float(request.get("timeout_s", DEFAULT_TIMEOUT_S))
        except (TypeError, ValueError):
            timeout_s = DEFAULT_TIMEOUT_S
        timeout_s = min(max(timeout_s, 0.05), MAX_TIMEOUT_S)

        try:
            compile(code, "<script>", "exec")
        except SyntaxError:
            tail = "".join(traceback.format_exception_only(sys.exc_info()[1]))
            return _response(request_id, "error", "syntax", tail)

        workdir = Path(tempfile.mkdtemp(prefix="render-", dir=self.scratch))
        try:
            return self._execute(request_id, code, Path(out_path), timeout_s, workdir)
        finally:
            shutil.rmtree(workdir, ignore_errors=True)

    def _execute(
        self,
        request_id: Any,
        code: str,
        out_path: Path,
        timeout_s: float,
        workdir: Path,
    ) -> dict[str, Any]:
        script_path = workdir / "script.py"
        script_path.write_text(code, encoding="utf-8")
        cpu_budget = int(timeout_s) + 3
        cmd = [
            sys.executable,
            "-I",
            "-m",
            "render_harness.exec_shim",
            str(script_path),
            str(cpu_budget),
        ]
        started_at = time.time()
        t0 = time.perf_counter()
        proc = subprocess.Popen(
            cmd,
            cwd=workdir,
            env=_child_env(workdir, self.mpl_config),
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            text=True,
            start_new_session=True,
        )
        try:
            _, stderr = proc.communicate(timeout=timeout_s)
        except subprocess.TimeoutExpired:
            try:
                os.killpg(proc.pid, signal.SIGKILL)
            except ProcessLookupError:
                pass
            _, stderr = proc.communicate()
            wall_ms = int((time.perf_counter() - t0) * 1000)
            tail = f"wall-clock timeout after {timeout_s}s\n{stderr or ''}"
            return _response(request_id, "error", "timeout", tail, wall_ms=wall_ms)
        wall_ms = int((time.perf_counter() - t0) * 1000)

        if proc.returncode != 0:
            stderr = stderr or ""
            if not stderr.strip() and proc.returncode < 0:
                stderr = f"terminated by signal {-proc.returncode}"
            return _response(
                request_id, "error", classify_failure(stderr), stderr, wall_ms=wall_ms
            )

        image = _find_image(workdir, out_path, started_at)
        if image is None:
            return _response(
                request_id,
                "error",
                "empty_image",
                "script exited cleanly but produced no image",
                wall_ms=wall_ms,
            )
        if image != out_path:
            out_path.parent.mkdir(parents=True, exist_ok=True)
            shutil.move(str(image), str(out_path))
        return _response(
            request_id, "ok", "none", image_path=str(out_path), wall_ms=wall_ms
        )


def serve(stdin: TextIO, stdout: TextIO, scratch: Path) -> None:
    worker = Worker(scratch)
    for line in stdin:
        response = worker.handle_line(line)
        if response is None:
            continue
        stdout.write(json.dumps(response, ensure_ascii=True) + "\n")
        stdout.flush()


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="render-harness",
        description="Execute plotting scripts from stdio render requests.",
    )
    parser.add_argument(
        "--scratch",
        type=Path,
        default=None,
        help="Root for per-request working directories (default: a fresh temp dir).",
    )
    parser.add_argument("--version", action="version", version=__version__)
    args = parser.parse_args(argv)

    owned = args.scratch is None
    scratch = args.scratch or Path(tempfile.mkdtemp(prefix="render-harness-"))
    scratch.mkdir(parents=True, exist_ok=True)
    try:
        serve(sys.stdin, sys.stdout, scratch)
    finally:
        if owned:
            shutil.rmtree(scratch, ignore_errors=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
