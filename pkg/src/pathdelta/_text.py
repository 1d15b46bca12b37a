"""Shared number formatting for CLI output and Newick serialization."""

from __future__ import annotations

import math

__all__ = ["format_number"]


def format_number(x: float) -> str:
    """Shortest decimal form that reads back to exactly the same float.

    Integer-valued floats print without a decimal point ("2", not "2.0");
    everything else relies on repr's shortest round-trip representation.
    """
    x = float(x)
    if math.isfinite(x) and x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)
