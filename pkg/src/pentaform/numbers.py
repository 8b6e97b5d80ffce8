"""Exact extended-real scalars and utility profiles.

Scalars are ``fractions.Fraction`` for finite values and ``float('inf')`` /
``float('-inf')`` for the two infinities.  Mixing the two representations is
safe for comparison (Python orders Fractions against float infinities
correctly); arithmetic on infinities only ever happens where the callers have
already checked finiteness.

A profile is a plain ``dict`` mapping stakeholder labels to scalars.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Scalar = Union[Fraction, float]
Profile = dict[str, Scalar]

INF: float = float("inf")
NEG_INF: float = float("-inf")


def is_finite(x: Scalar) -> bool:
    return isinstance(x, Fraction)


def as_scalar(x) -> Scalar:
    """Normalize ints/Fractions/infinities to the canonical scalar types."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise ValueError("booleans are not utility values")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if x == INF or x == NEG_INF:
            return x
        # Floats carry binary rounding noise; require exact inputs.
        raise ValueError(f"finite values must be exact (Fraction/int/str), got float {x!r}")
    if isinstance(x, str):
        return parse_scalar(x)
    raise ValueError(f"cannot interpret {x!r} as an extended-real value")


def parse_scalar(text: str) -> Scalar:
    """Parse 'inf', '-inf', 'p/q', integer, or decimal strings exactly."""
    s = text.strip()
    if s == "inf":
        return INF
    if s == "-inf":
        return NEG_INF
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse number {text!r}") from exc


def format_scalar(x: Scalar) -> str:
    """Canonical text form: 'inf', '-inf', integers, terminating decimals,
    and 'p/q' for everything else.  ``parse_scalar`` round-trips exactly."""
    x = as_scalar(x)
    if not isinstance(x, Fraction):
        return "inf" if x > 0 else "-inf"
    if x.denominator == 1:
        return str(x.numerator)
    terminating = _terminating_digits(x.denominator)
    if terminating is not None:
        scaled = x.numerator * 10**terminating // x.denominator
        sign = "-" if scaled < 0 else ""
        digits = str(abs(scaled)).rjust(terminating + 1, "0")
        return f"{sign}{digits[:-terminating]}.{digits[-terminating:]}"
    return f"{x.numerator}/{x.denominator}"


def _terminating_digits(den: int) -> int | None:
    """Number of decimal digits needed if 1/den terminates, else None."""
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    return max(twos, fives) if den == 1 else None


_OVERLINE = "̅"  # combining overline, marks the repetend


def repeating_decimal(x: Scalar) -> str:
    """Exact decimal expansion with the repeating block overlined.

    5/9 renders as '.5̄' and 19/45 as '.42̄'; terminating fractions render
    plainly ('.55'); values with |x| < 1 drop the leading zero.
    """
    x = as_scalar(x)
    if not isinstance(x, Fraction):
        return "inf" if x > 0 else "-inf"
    sign = "-" if x < 0 else ""
    n, d = abs(x.numerator), x.denominator
    int_part, rem = divmod(n, d)
    if rem == 0:
        return f"{sign}{int_part}"
    digits: list[str] = []
    seen: dict[int, int] = {}
    while rem and rem not in seen:
        seen[rem] = len(digits)
        rem *= 10
        digit, rem = divmod(rem, d)
        digits.append(str(digit))
    head = "" if int_part == 0 else str(int_part)
    if rem == 0:
        return f"{sign}{head}.{''.join(digits)}"
    start = seen[rem]
    plain = "".join(digits[:start])
    repetend = "".join(ch + _OVERLINE for ch in digits[start:])
    return f"{sign}{head}.{plain}{repetend}"


def render_scalar(x: Scalar) -> str:
    """Report form: exact rational plus decimal, e.g. '5/9 (= .5̄)'."""
    base = format_scalar(x)
    if isinstance(x, Fraction) and x.denominator != 1 and _terminating_digits(x.denominator) is None:
        return f"{base} (= {repeating_decimal(x)})"
    return base


def make_profile(values: Mapping[str, object], stakeholders: Iterable[str] | None = None) -> Profile:
    """Normalize a mapping to a profile, optionally checking its domain."""
    prof = {str(k): as_scalar(v) for k, v in values.items()}
    if stakeholders is not None:
        expected = set(stakeholders)
        if set(prof) != expected:
            missing = sorted(expected - set(prof))
            extra = sorted(set(prof) - expected)
            raise ValueError(f"profile domain mismatch: missing {missing}, unexpected {extra}")
    return prof


def profiles_equal(a: Mapping[str, Scalar], b: Mapping[str, Scalar], tol: Scalar = Fraction(0)) -> bool:
    """Pointwise equality of profiles; `tol` loosens finite comparisons only."""
    if set(a) != set(b):
        return False
    return all(scalars_equal(a[k], b[k], tol) for k in a)


def scalars_equal(x: Scalar, y: Scalar, tol: Scalar = Fraction(0)) -> bool:
    if is_finite(x) != is_finite(y):
        return False
    if not is_finite(x):
        return x == y
    return abs(x - y) <= tol


def profile_str(prof: Mapping[str, Scalar]) -> str:
    return "(" + ", ".join(f"{k}: {render_scalar(prof[k])}" for k in sorted(prof)) + ")"
