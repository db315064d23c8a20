"""Fixed-point tenths: exact integer representation of one-decimal values.

All profits, costs and budgets in this package are integers counting
tenths ("3.6" -> 36), so solver arithmetic and comparisons are exact.
Interchange documents carry these values as decimal strings with at most
one fractional digit.
"""

from __future__ import annotations

import re

_DECIMAL_RE = re.compile(r"^([0-9]+)(?:\.([0-9]))?$")


def parse_tenths(text: str) -> int:
    """Parse a nonnegative decimal string with <= 1 fractional digit into tenths.

    Raises ValueError for anything else, including floats-as-numbers,
    negative values, and more than one fractional digit.
    """
    if not isinstance(text, str):
        raise ValueError(
            f"expected a decimal string with at most one fractional digit, got {text!r}"
        )
    match = _DECIMAL_RE.match(text)
    if match is None:
        raise ValueError(f"not a one-decimal nonnegative value: {text!r}")
    whole, frac = match.groups()
    return int(whole) * 10 + (int(frac) if frac is not None else 0)


def format_tenths(tenths: int) -> str:
    """Render tenths as a decimal string with exactly one fractional digit."""
    if tenths < 0:
        return "-" + format_tenths(-tenths)
    return f"{tenths // 10}.{tenths % 10}"
