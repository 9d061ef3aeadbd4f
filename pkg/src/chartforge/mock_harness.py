"""Protocol-level stand-in for a render worker.

Run with ``python -m chartforge.mock_harness``. Speaks the same
line-delimited JSON protocol as a real worker but never executes plotting
code: it compiles the script for a syntax verdict, simulates the common
failure modes a real engine would hit, then writes a deterministic noise
JPEG. The simulated failures are static properties of the source, so a
script that a repair rule fixes genuinely stops failing, which lets the
whole repair loop be exercised without executing anything:

    empty source                          -> syntax
    blocking show() call                  -> other (interactive display)
    pyplot without an Agg backend switch  -> other (no $DISPLAY)
    known alias used but never imported   -> missing_symbol (NameError)
    read_csv without index_col/to_numeric -> data_shape (labels as floats)
    astype(str) without a later coercion  -> data_shape (strings plotted)
    tight_layout on a unit-size figure    -> other (axes too small)
    .jpg savefig without explicit format  -> other (unknown extension)
    four-digit dpi                        -> other (image too large)

Directives embedded in the script override the simulation so tests can
exercise protocol-level paths directly:

    # mock:error=<class>   respond with that error class
    # mock:sleep=<secs>    stall; exceeds timeout_s -> timeout response
    # mock:blank           emit a uniform white image (fails validation)
    # mock:tiny            emit an undersized image
    # mock:size=WxH        emit a specific size
    # mock:crash           exit mid-request
    # mock:garbage         emit a non-JSON line
    # mock:wrong-id        respond with a mismatched id
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import sys
import time
from pathlib import Path

from PIL import Image

_DIRECTIVE = re.compile(r"#\s*mock:([a-z-]+)(?:=([^\s]+))?")


def _directives(code: str) -> dict[str, str]:
    return {m.group(1): m.group(2) or "" for m in _DIRECTIVE.finditer(code)}


_ALIASES = ("np", "pd", "plt", "sns", "go")
_ALIAS_IMPORT = {
    "np": "import numpy as np",
    "pd": "import pandas as pd",
    "plt": "import matplotlib.pyplot as plt",
    "sns": "import seaborn as sns",
    "go": "import plotly.graph_objects as go",
}


def simulate_failure(code: str) -> tuple[str, str] | None:
    """(error_class, stderr_tail) a real engine would plausibly produce."""
    if not code.strip():
        return "syntax", "SyntaxError: empty script"
    try:
        compile(code, "<script>", "exec")
    except SyntaxError as exc:
        return "syntax", f"SyntaxError: {exc}"
    if re.search(r"(^|\.)\s*show\s*\(", code, re.M):
        return "other", "script blocked on an interactive show() call"
    if "import matplotlib.pyplot" in code and 'matplotlib.use("Agg")' not in code:
        return (
            "other",
            "_tkinter.TclError: no display name and no $DISPLAY environment variable",
        )
    for alias in _ALIASES:
        if re.search(rf"\b{alias}\.", code) and _ALIAS_IMPORT[alias] not in code:
            return "missing_symbol", f"NameError: name '{alias}' is not defined"
    if (
        "pd.read_csv" in code
        and not re.search(r"read_csv\(.*index_col", code)
        and "pd.to_numeric" not in code
    ):
        return (
            "data_shape",
            "ValueError: could not convert string to float: 'Category'",
        )
    if re.search(r"\.astype\(str\)", code) and "pd.to_numeric" not in code:
        return (
            "data_shape",
            "ValueError: could not convert string to float: '12.5'",
        )
    if "tight_layout" in code and re.search(r"figsize=\(\s*1\b", code):
        return "other", "UserWarning: tight_layout cannot make axes width small enough"
    if re.search(r"savefig\([^)]*\.jpg['\"]", code) and "format=" not in code:
        return "other", "ValueError: unknown file extension: .jpg"
    if re.search(r"dpi\s*=\s*\d{4,}", code):
        return "other", "ValueError: Image size of 80000x50000 pixels is too large"
    return None


def _noise_image(seed: str, size: tuple[int, int]) -> Image.Image:
    w, h = size
    data = hashlib.shake_256(seed.encode("utf-8")).digest(w * h * 3)
    return Image.frombytes("RGB", (w, h), data)


def _write_image(req: dict, directives: dict[str, str]) -> str:
    out_path = Path(req["out_path"])
    out_path.parent.mkdir(parents=True, exist_ok=True)
    size = (320, 240)
    if "size" in directives:
        w, h = directives["size"].lower().split("x")
        size = (int(w), int(h))
    if "tiny" in directives:
        size = (16, 16)
    if "blank" in directives:
        img = Image.new("RGB", size, (255, 255, 255))
    else:
        img = _noise_image(str(req["id"]), size)
    img.save(out_path, format="JPEG")
    return str(out_path)


def _respond(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, ensure_ascii=True) + "\n")
    sys.stdout.flush()


def handle(req: dict) -> None:
    started = time.monotonic()
    code = str(req.get("code", ""))
    directives = _directives(code)

    def done(status: str, error_class: str, stderr_tail: str = "", image_path=None) -> None:
        _respond(
            {
                "id": req.get("id", ""),
                "status": status,
                "error_class": error_class,
                "stderr_tail": stderr_tail,
                "image_path": image_path,
                "wall_ms": int((time.monotonic() - started) * 1000),
            }
        )

    if "crash" in directives:
        os._exit(1)
    if "garbage" in directives:
        sys.stdout.write("this is not json\n")
        sys.stdout.flush()
        return
    if "sleep" in directives:
        seconds = float(directives["sleep"])
        timeout_s = float(req.get("timeout_s", 30.0))
        time.sleep(min(seconds, timeout_s))
        if seconds > timeout_s:
            done("error", "timeout", f"killed after {timeout_s}s")
            return
    if "error" in directives:
        done("error", directives["error"], f"mock {directives['error']}")
        return
    failure = simulate_failure(code)
    if failure is not None:
        done("error", *failure)
        return
    image_path = _write_image(req, directives)
    if "wrong-id" in directives:
        req = dict(req, id=str(req.get("id", "")) + "-mismatch")
    done("ok", "none", image_path=image_path)


def main() -> int:
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        try:
            req = json.loads(line)
        except json.JSONDecodeError:
            _respond(
                {
                    "id": "",
                    "status": "error",
                    "error_class": "other",
                    "stderr_tail": "malformed request line",
                    "image_path": None,
                    "wall_ms": 0,
                }
            )
            continue
        handle(req)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
