"""Drive a live worker subprocess over its stdio protocol."""

from __future__ import annotations

import json
import select
import subprocess
import sys
import time
from pathlib import Path
from typing import Any, Optional

import pytest

READ_DEADLINE_S = 120.0


class WorkerClient:
    def __init__(self, proc: subprocess.Popen) -> None:
        self.proc = proc

    def send_raw(self, raw: str) -> None:
        assert self.proc.stdin is not None
        self.proc.stdin.write(raw)
        self.proc.stdin.flush()

    def read_response(self, deadline_s: float = READ_DEADLINE_S) -> dict[str, Any]:
        assert self.proc.stdout is not None
        end = time.monotonic() + deadline_s
        while True:
            remaining = end - time.monotonic()
            if remaining <= 0:
                raise TimeoutError("worker produced no response line in time")
            ready, _, _ = select.select([self.proc.stdout], [], [], remaining)
            if not ready:
                continue
            line = self.proc.stdout.readline()
            if not line:
                raise EOFError("worker closed stdout")
            return json.loads(line)

    def request(
        self,
        code: Optional[str],
        *,
        request_id: Any = "req-1",
        out_path: Optional[str] = "/tmp/render-harness-test-unused.jpg",
        timeout_s: float = 60.0,
        **extra: Any,
    ) -> dict[str, Any]:
        payload: dict[str, Any] = {"id": request_id, "engine": "matplotlib", **extra}
        if code is not None:
            payload["code"] = code
        if out_path is not None:
            payload["out_path"] = out_path
        payload.setdefault("timeout_s", timeout_s)
        self.send_raw(json.dumps(payload) + "\n")
        return self.read_response()


def spawn_worker(scratch: Optional[Path] = None) -> subprocess.Popen:
    cmd = [sys.executable, "-m", "render_harness.worker"]
    if scratch is not None:
        cmd += ["--scratch", str(scratch)]
    return subprocess.Popen(
        cmd,
        stdin=subprocess.PIPE,
        stdout=subprocess.PIPE,
        stderr=subprocess.DEVNULL,
        text=True,
        bufsize=1,
    )


@pytest.fixture(scope="module")
def worker() -> WorkerClient:
    proc = spawn_worker()
    client = WorkerClient(proc)
    yield client
    if proc.stdin is not None:
        proc.stdin.close()
    proc.wait(timeout=30)


@pytest.fixture()
def out_file(tmp_path: Path) -> Path:
    return tmp_path / "out" / "figure.jpg"


@pytest.fixture()
def scoped_worker(tmp_path: Path):
    """Worker pinned to a scratch dir we can inspect after each request."""
    scratch = tmp_path / "scratch"
    scratch.mkdir()
    proc = spawn_worker(scratch=scratch)
    client = WorkerClient(proc)
    yield client, scratch
    if proc.stdin is not None:
        proc.stdin.close()
    proc.wait(timeout=30)
