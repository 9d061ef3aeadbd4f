"""Child-side entry point: restrict the process, then run the script.

Runs as ``python -I -m render_harness.exec_shim <script.py> <cpu_budget_s>``
with its working directory already set to the per-request scratch dir.
The guards live here, inside the child, so the worker process itself never
imports or executes untrusted code.
"""

from __future__ import annotations

import resource
import runpy
import socket
import sys

from .classify import NETWORK_DENIED_MSG


def _deny_network() -> None:
    def _blocked(*_args, **_kwargs):
        raise PermissionError(NETWORK_DENIED_MSG)

    # must stay a class: ssl subclasses socket.socket at import time
    class _BlockedSocket(socket.socket):
        def connect(self, *_args, **_kwargs):
            raise PermissionError(NETWORK_DENIED_MSG)

        connect_ex = connect
        bind = connect
        sendto = connect
        sendmsg = connect

    socket.socket = _BlockedSocket  # type: ignore[misc,assignment]
    socket.socketpair = _blocked  # type: ignore[assignment]
    socket.create_connection = _blocked  # type: ignore[assignment]
    socket.getaddrinfo = _blocked  # type: ignore[assignment]
    socket.fromfd = _blocked  # type: ignore[assignment]


def _apply_rlimits(cpu_budget_s: int) -> None:
    resource.setrlimit(resource.RLIMIT_CPU, (cpu_budget_s, cpu_budget_s + 2))
    # caps runaway output files; rendered charts are well under this
    resource.setrlimit(resource.RLIMIT_FSIZE, (64 << 20, 64 << 20))
    try:
        resource.setrlimit(resource.RLIMIT_AS, (4 << 30, 4 << 30))
    except (ValueError, OSError):
        pass  # some kernels refuse lowering AS; CPU + FSIZE still hold


def main() -> None:
    script, cpu_budget_s = sys.argv[1], int(sys.argv[2])
    _apply_rlimits(cpu_budget_s)
    _deny_network()
    sys.argv = [script]
    runpy.run_path(script, run_name="__main__")


if __name__ == "__main__":
    main()
