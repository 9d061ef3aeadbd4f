"""Failure taxonomy shared with the render orchestrator.

The class strings ride the wire, so they are versioned: bump
TAXONOMY_VERSION whenever a class is added, removed, or renamed, and keep
the list byte-identical to the orchestrator's copy.
"""

from __future__ import annotations

TAXONOMY_VERSION = 1

ERROR_CLASSES: tuple[str, ...] = (
    "none",
    "syntax",
    "missing_symbol",
    "data_shape",
    "timeout",
    "sandbox_violation",
    "empty_image",
    "other",
)

# Marker raised by the in-child network guard; keep in sync with exec_shim.
NETWORK_DENIED_MSG = "network access disabled by render harness"

# Ordered stderr patterns; first hit wins. timeout, empty_image, and
# preflighted syntax errors are decided by the worker, not matched here.
_CLASS_PATTERNS: tuple[tuple[str, str], ...] = (
    (NETWORK_DENIED_MSG, "sandbox_violation"),
    ("SyntaxError", "syntax"),
    ("IndentationError", "syntax"),
    ("TabError", "syntax"),
    ("NameError", "missing_symbol"),
    ("ModuleNotFoundError", "missing_symbol"),
    ("ImportError", "missing_symbol"),
    ("could not convert string to float", "data_shape"),
    ("no numeric data to plot", "data_shape"),
    ("Length mismatch", "data_shape"),
    ("setting an array element with a sequence", "data_shape"),
    ("Unable to parse string", "data_shape"),
)


def classify_failure(stderr: str) -> str:
    """Map a failed script's stderr to an error class; 'other' if unknown."""
    for pattern, error_class in _CLASS_PATTERNS:
        if pattern in stderr:
            return error_class
    return "other"
