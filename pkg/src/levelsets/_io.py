"""Small helper shared by the CSV writers."""

from __future__ import annotations

import contextlib


@contextlib.contextmanager
def open_text(target):
    """Yield a writable text stream for a path or an already open stream."""
    if hasattr(target, "write"):
        yield target
    else:
        with open(target, "w", newline="") as fh:
            yield fh
