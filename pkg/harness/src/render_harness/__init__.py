"""Render harness: a worker process that executes plotting scripts.

Speaks newline-delimited JSON over stdio. One request line in, exactly one
response line out, even when the script inside crashes.
"""

__version__ = "0.1.0"
