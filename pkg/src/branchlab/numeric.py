"""Shared numeric kernel helpers.

Weights (squared amplitude moduli), credences, probabilities and utilities
travel through the package either as exact `fractions.Fraction` values or as
floats. The exact kernel is used wherever squared weights are rational; the
float kernel compares against the tolerances below.
"""
from __future__ import annotations

import math
from fractions import Fraction

NORM_TOL = 1e-9          # normalization and global-state comparisons (float kernel)
ZERO_TOL = 1e-12         # support / extremality tests (float kernel)
INDIFFERENCE_TOL = 1e-12  # preference-gap verdicts (float kernel)
SINGULAR_TOL = 1e-18     # squared-norm threshold below which an image counts as zero

Number = Fraction | float


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def exactify(x) -> Fraction:
    """Coerce to an exact rational; floats are read at decimal face value."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r}")
        return Fraction(str(x))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def parse_number(value, exact: bool = True) -> Number:
    """Parse a JSON-ish number ('1/3', 0.5, 2) in the requested kernel."""
    if exact:
        return exactify(value)
    if isinstance(value, str):
        return float(Fraction(value))
    return float(value)


def weight_is_zero(w: Number) -> bool:
    if is_exact(w):
        return w == 0
    return abs(w) <= ZERO_TOL


def weight_is_one(w: Number) -> bool:
    if is_exact(w):
        return w == 1
    return abs(w - 1.0) <= ZERO_TOL


def numbers_equal(a: Number, b: Number, tol: float = NORM_TOL) -> bool:
    if is_exact(a) and is_exact(b):
        return a == b
    return abs(float(a) - float(b)) <= tol


def fmt_number(x) -> str | float | int:
    """Render a number for JSON reports: exact values as 'p/q' strings."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int) and not isinstance(x, bool):
        return x
    return float(x)
