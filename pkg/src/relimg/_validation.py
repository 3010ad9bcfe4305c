"""Input checks shared by the library functions, estimators and CLI."""

from __future__ import annotations

import numbers
from fractions import Fraction
from typing import Iterable, Sequence


def check_exact(value, what: str = "value"):
    """Return ``value`` as an int or Fraction; reject floats and non-numbers."""
    if isinstance(value, bool):
        raise TypeError(f"{what} must be an exact number, got bool")
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, numbers.Rational):
        return Fraction(value.numerator, value.denominator)
    raise TypeError(f"{what} must be an integer or Fraction, got {type(value).__name__}")


def check_signal(values: Iterable) -> list:
    return [check_exact(v, "signal value") for v in values]


def check_window(w, n: int) -> int:
    if isinstance(w, bool) or not isinstance(w, numbers.Integral):
        raise TypeError(f"window must be an integer, got {w!r}")
    w = int(w)
    if not 1 <= w <= n:
        raise ValueError(f"window must satisfy 1 <= w <= {n}, got {w}")
    return w


def check_rect(rect: Sequence[int], width: int, height: int) -> tuple[int, int, int, int]:
    if len(rect) != 4:
        raise ValueError(f"rect must be (x, y, w, h), got {rect!r}")
    x, y, w, h = (int(r) for r in rect)
    if w < 1 or h < 1:
        raise ValueError(f"rect needs w, h >= 1, got {w}x{h}")
    if x < 0 or y < 0 or x + w > width or y + h > height:
        raise ValueError(
            f"rect {(x, y, w, h)} is outside the {width}x{height} image"
        )
    return x, y, w, h


def check_connectivity(connectivity) -> int:
    if connectivity not in (4, 8):
        raise ValueError(f"connectivity must be 4 or 8, got {connectivity!r}")
    return int(connectivity)


def parse_exact(token: str):
    """Parse ``"3"``, ``"-7"`` or ``"3/2"``; anything with a decimal point is refused."""
    try:
        if "/" in token:
            num, den = token.split("/")
            value = Fraction(int(num), int(den))
        else:
            value = int(token)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not an exact number: {token!r}") from None
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value)
    return value


def format_exact(value) -> str:
    if isinstance(value, Fraction) and value.denominator != 1:
        return f"{value.numerator}/{value.denominator}"
    return str(int(value))
