"""
Exact number helpers for StabLab.

Rationals are fractions.Fraction everywhere; they print as "p/q". Complex
values are pairs of rationals. Anything irrational (phases, masses, logs) is
evaluated with mpmath at WORKING_DPS digits and printed with a leading "~"
and the radius of its enclosure.
"""

from fractions import Fraction
from typing import Any, List, NamedTuple, Union

import mpmath

from errors import ConfigError

# mpmath working precision for every approximation we print or compare
WORKING_DPS = 50
mpmath.mp.dps = WORKING_DPS
ENCLOSURE_RADIUS = mpmath.mpf(10) ** -(WORKING_DPS - 10)

Rational = Union[int, Fraction]


def parse_rational(value: Any) -> Fraction:
    """
    Parse a rational from JSON or command-line input.

    Args:
        value: an int, a Fraction, or a string such as "3", "-1/2", "0.25"

    Returns:
        Fraction: the exact value

    Raises:
        ConfigError: for floats, booleans, zero denominators or garbage
    """
    if isinstance(value, bool):
        raise ConfigError(f"Expected a rational, got boolean {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        raise ConfigError(f"Float {value!r} is not exact; write it as a \"p/q\" string")
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ConfigError(f"Cannot parse rational {value!r}: {e}")
    raise ConfigError(f"Expected a rational, got {type(value).__name__}")


def parse_rational_list(values: Any) -> List[Fraction]:
    """Parse a JSON array of rationals."""
    if not isinstance(values, (list, tuple)):
        raise ConfigError(f"Expected an array of rationals, got {values!r}")
    return [parse_rational(v) for v in values]


def parse_int_matrix(value: Any, name: str = "matrix") -> List[List[int]]:
    """Parse a JSON array of integer arrays."""
    if not isinstance(value, (list, tuple)) or not all(isinstance(row, (list, tuple)) for row in value):
        raise ConfigError(f"\"{name}\" must be an array of integer arrays, got {value!r}")
    return [[parse_int(x) for x in row] for row in value]


def parse_int(value: Any) -> int:
    """Parse a JSON integer (rejecting booleans and non-integral rationals)."""
    q = parse_rational(value)
    if q.denominator != 1:
        raise ConfigError(f"Expected an integer, got {value!r}")
    return int(q)


def format_rational(q: Rational) -> str:
    """Print a rational as "p" or "p/q"."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class ExactComplex(NamedTuple):
    """A complex number with exact rational real and imaginary parts."""

    re: Fraction
    im: Fraction

    @classmethod
    def of(cls, re: Rational, im: Rational = 0) -> "ExactComplex":
        return cls(Fraction(re), Fraction(im))

    def __add__(self, other: "ExactComplex") -> "ExactComplex":  # type: ignore[override]
        return ExactComplex(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "ExactComplex") -> "ExactComplex":
        return ExactComplex(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "ExactComplex":
        return ExactComplex(-self.re, -self.im)

    def __mul__(self, other: Union["ExactComplex", Rational]) -> "ExactComplex":  # type: ignore[override]
        if isinstance(other, ExactComplex):
            return ExactComplex(self.re * other.re - self.im * other.im,
                                self.re * other.im + self.im * other.re)
        k = Fraction(other)
        return ExactComplex(self.re * k, self.im * k)

    __rmul__ = __mul__

    def conjugate(self) -> "ExactComplex":
        return ExactComplex(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def norm_squared(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def in_semi_closed_upper_half_plane(self) -> bool:
        """True iff the value is m*exp(i*pi*phi) with m > 0 and 0 < phi <= 1."""
        return self.im > 0 or (self.im == 0 and self.re < 0)

    def to_mpc(self) -> mpmath.mpc:
        return mpmath.mpc(mpmath.mpf(self.re.numerator) / self.re.denominator,
                          mpmath.mpf(self.im.numerator) / self.im.denominator)

    def format(self) -> str:
        """Print as "p/q + p'/q' i"."""
        if self.im == 0:
            return format_rational(self.re)
        sign = "-" if self.im < 0 else "+"
        return f"{format_rational(self.re)} {sign} {format_rational(abs(self.im))} i"

    def to_json(self) -> List[str]:
        return [format_rational(self.re), format_rational(self.im)]

    @classmethod
    def from_json(cls, data: Any) -> "ExactComplex":
        if not isinstance(data, (list, tuple)) or len(data) != 2:
            raise ConfigError(f"Expected a [re, im] pair, got {data!r}")
        return cls(parse_rational(data[0]), parse_rational(data[1]))


def to_mpf(q: Rational) -> mpmath.mpf:
    """Convert a rational to an mpmath float at the working precision."""
    q = Fraction(q)
    return mpmath.mpf(q.numerator) / q.denominator


def format_approx(value: Any, precision: int = 12, radius: Any = None) -> str:
    """
    Print an approximation with its provenance marker.

    Args:
        value: an mpmath number or float
        precision (int): decimal digits after the point
        radius: enclosure radius of the computation (defaults to ENCLOSURE_RADIUS)

    Returns:
        str: e.g. "~0.352416382350 (±5e-13)"
    """
    if radius is None:
        radius = ENCLOSURE_RADIUS
    # printing rounds to half a unit in the last digit
    total = mpmath.mpf(radius) + mpmath.mpf(10) ** -precision / 2
    rounded = f"{float(value):.{precision}f}"
    if rounded.startswith("-") and float(rounded) == 0.0:
        rounded = rounded[1:]
    return f"~{rounded} (±{float(total):.0e})"

