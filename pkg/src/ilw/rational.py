"""Exact rational helpers shared by every module."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

RationalLike = Union[Fraction, int, str]


def to_rational(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction.

    Floats are rejected on purpose: every value in the workbench is exact.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            num, sep, den = text.partition("/")
            if sep:
                if not den.strip().isdigit() or int(den) == 0:
                    raise ValueError
                return Fraction(int(num), int(den))
            return Fraction(int(text))
        except ValueError:
            raise ValueError(f"not an exact rational: {value!r}") from None
    raise TypeError(f"not an exact rational: {value!r}")


def fmt(q: Fraction | int) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def vector(values: Iterable[RationalLike]) -> tuple[Fraction, ...]:
    return tuple(to_rational(v) for v in values)


def check_probability(weights: Sequence[Fraction], what: str = "weights") -> None:
    if any(w < 0 for w in weights):
        raise ValueError(f"{what}: negative entry")
    if sum(weights, Fraction(0)) != 1:
        raise ValueError(f"{what}: entries must sum to exactly 1")
