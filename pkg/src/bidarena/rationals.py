"""Exact rational arithmetic helpers shared by the whole package.

Every quantity in the simulator (values, costs, bids, multipliers, payments,
welfare) is a `fractions.Fraction`. Floats are rejected at the boundary so a
binary rounding error can never masquerade as a tie-break.
"""

from __future__ import annotations

from fractions import Fraction


class Infinity:
    """Positive infinity for thresholds and cost multipliers.

    Compares above every finite rational. Arithmetic is deliberately not
    implemented: any accidental use of an infinite value in a sum fails
    loudly instead of propagating nonsense.
    """

    _instance: Infinity | None = None

    def __new__(cls) -> Infinity:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "inf"

    def __lt__(self, other: object) -> bool:
        return False

    def __le__(self, other: object) -> bool:
        return other is self

    def __gt__(self, other: object) -> bool:
        return other is not self

    def __ge__(self, other: object) -> bool:
        return True


INF = Infinity()

# A rational that may be positive infinity (reserves, multipliers, thresholds).
ExtRational = Fraction | Infinity


def is_finite(x: ExtRational) -> bool:
    return not isinstance(x, Infinity)


def as_fraction(x: int | str | Fraction) -> Fraction:
    """Convert exact input to Fraction. Floats are rejected on purpose."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"exact rational required, got {type(x).__name__}: {x!r}")


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or finite decimal text ("3/2", "0.25", "2") exactly."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def format_rational(x: ExtRational) -> str:
    """Canonical text for instance files: "p/q", or bare "p" for integers."""
    if isinstance(x, Infinity):
        return "inf"
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_ratio(x: ExtRational) -> str:
    """Text for reports: always "p/q", so consumers never guess the form."""
    if isinstance(x, Infinity):
        return "inf"
    return f"{x.numerator}/{x.denominator}"


def decimal_text(x: ExtRational, digits: int = 12) -> str:
    """Approximate decimal rendering for plotting tools; never used internally."""
    if isinstance(x, Infinity):
        return "inf"
    return f"{float(x):.{digits}g}"
