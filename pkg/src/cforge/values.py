"""The value lattice used everywhere: exact rationals, booleans, Undefined.

Invariants evaluate to ``int``/``Fraction`` (never floats: thresholds like
n/2 must compare exactly), properties to ``bool``.  A concept that is not
defined on an object returns ``UNDEFINED``, and Undefined is strict: any
operation touching it yields Undefined again.  A claim counts as true only
when it evaluates to literally ``True``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union


class _Undefined:
    """Singleton marker for out-of-definition values."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Undefined"

    def __bool__(self) -> bool:
        raise TypeError("Undefined has no truth value; test with is_defined()")


UNDEFINED = _Undefined()

Rational = Union[int, Fraction]
Value = Union[bool, int, Fraction, _Undefined]


def is_defined(v: Value) -> bool:
    return v is not UNDEFINED


def is_true(v: Value) -> bool:
    """Literal truth: Undefined and False both count as not-true."""
    return v is True


def is_false(v: Value) -> bool:
    return v is False


def rational_to_text(v: Rational) -> str:
    f = Fraction(v)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def rational_from_text(text: str) -> Fraction:
    return Fraction(text)
