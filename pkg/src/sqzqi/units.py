"""Physical constants and decibel helpers shared across the package.

All variance ratios are linear (relative to the vacuum level); public
reporting converts through the single pair of helpers here so that the
``-inf`` sentinel for unbounded squeezing is handled in exactly one place.
"""

from __future__ import annotations

import math

# CODATA 2018; c is exact by definition of the metre.
HBAR = 1.054571817e-34  # J s
C_LIGHT = 2.99792458e8  # m/s


def to_db(ratio: float) -> float:
    """10*log10 of a linear variance ratio; 0 or below maps to -inf."""
    if ratio <= 0.0:
        return -math.inf
    return 10.0 * math.log10(ratio)


def from_db(db: float) -> float:
    """Inverse of :func:`to_db`; the -inf sentinel maps back to 0."""
    if db == -math.inf:
        return 0.0
    return 10.0 ** (db / 10.0)


def format_db(db: float) -> str:
    """Fixed-width dB rendering, 4 decimals, with the "-inf" literal."""
    if db == -math.inf:
        return "-inf"
    return f"{db:.4f}"


def round_sig(x: float, digits: int = 6) -> float:
    """Round to a number of significant digits (used by report serialization)."""
    if x == 0.0 or not math.isfinite(x):
        return x
    return float(f"{x:.{digits}g}")
