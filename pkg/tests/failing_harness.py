"""Protocol-conformant harness that fails every request; test fodder."""

from __future__ import annotations

import json
import sys


def main() -> None:
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        try:
            req = json.loads(line)
        except json.JSONDecodeError:
            req = {}
        response = {
            "id": str(req.get("id", "")),
            "status": "error",
            "error_class": "sandbox_violation",
            "stderr_tail": "synthetic failure: this harness renders nothing",
            "image_path": None,
            "wall_ms": 0,
        }
        sys.stdout.write(json.dumps(response) + "\n")
        sys.stdout.flush()


if __name__ == "__main__":
    main()
