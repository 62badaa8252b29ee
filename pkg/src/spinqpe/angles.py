"""Angle expressions: decimal radians or rational multiples of pi.

Grammar (no whitespace inside a token, surrounding whitespace ignored):

    angle   := pifrac | decimal
    pifrac  := '-'? (INT ('/' INT)?)? 'pi' ('/' INT)?
    decimal := '-'? INT ('.' INT?)? (('e'|'E') ('+'|'-')? INT)?

Examples: "pi", "pi/3", "-pi/3", "3pi/4", "15/16pi", "2", "1.0471975512",
"-2.5e-3". Malformed input raises AngleParseError carrying the offending
position.
"""

import math
from dataclasses import dataclass

from .errors import AngleParseError


@dataclass(frozen=True)
class AngleExpr:
    """A raw angle string and its value in radians; str() gives back the raw
    text, so parse(str(expr)) reproduces the same value."""

    raw: str
    value: float

    def __str__(self) -> str:
        return self.raw


def _skip_ws(text: str, i: int) -> int:
    while i < len(text) and text[i].isspace():
        i += 1
    return i


def _read_int(text: str, i: int, what: str) -> tuple[int, int]:
    start = i
    while i < len(text) and text[i].isdigit():
        i += 1
    if i == start:
        raise AngleParseError(text, start, f"expected {what}")
    return i, int(text[start:i])


def _expect_end(text: str, i: int) -> None:
    i = _skip_ws(text, i)
    if i != len(text):
        raise AngleParseError(text, i, f"unexpected character {text[i]!r}")


def _pi_tail(text: str, i: int, base: float) -> float:
    """Optional '/INT' divisor after 'pi'."""
    if i < len(text) and text[i] == "/":
        den_pos = i + 1
        i, den = _read_int(text, den_pos, "an integer divisor")
        if den == 0:
            raise AngleParseError(text, den_pos, "division by zero")
        base /= den
    _expect_end(text, i)
    return base


def _decimal_end(text: str, i: int) -> int:
    """Index just past a decimal literal whose integer part ends at i."""
    if i < len(text) and text[i] == ".":
        i += 1
        while i < len(text) and text[i].isdigit():
            i += 1
    if i < len(text) and text[i] in "eE":
        i += 1
        if i < len(text) and text[i] in "+-":
            i += 1
        start = i
        while i < len(text) and text[i].isdigit():
            i += 1
        if i == start:
            raise AngleParseError(text, start, "expected exponent digits")
    return i


def parse_angle(text: str) -> AngleExpr:
    """Parse an angle expression; see the module grammar."""
    i = _skip_ws(text, 0)
    if i == len(text):
        raise AngleParseError(text, i, "expected a number or 'pi'")
    sign = 1.0
    if text[i] == "-":
        sign = -1.0
        i += 1
    if text.startswith("pi", i):
        value = _pi_tail(text, i + 2, sign * math.pi)
        return AngleExpr(text, value)
    if i < len(text) and text[i].isdigit():
        num_start = i
        i, num = _read_int(text, i, "digits")
        if i < len(text) and text[i] in ".eE":
            end = _decimal_end(text, i)
            _expect_end(text, end)
            return AngleExpr(text, sign * float(text[num_start:end]))
        if i < len(text) and text[i] == "/":
            den_pos = i + 1
            i, den = _read_int(text, den_pos, "an integer denominator")
            if den == 0:
                raise AngleParseError(text, den_pos, "division by zero")
            if not text.startswith("pi", i):
                raise AngleParseError(text, i, "expected 'pi' after a fraction")
            value = _pi_tail(text, i + 2, sign * math.pi * num / den)
            return AngleExpr(text, value)
        if text.startswith("pi", i):
            value = _pi_tail(text, i + 2, sign * math.pi * num)
            return AngleExpr(text, value)
        _expect_end(text, i)
        return AngleExpr(text, sign * float(num))
    raise AngleParseError(text, i, "expected a digit or 'pi'")
