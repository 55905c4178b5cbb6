"""Precision bookkeeping shared by every numeric routine in the package.

All arbitrary-precision arithmetic goes through mpmath.  Routines never set
``mp.dps`` globally; they wrap their work in ``ctx.workdps()`` so precision
changes cannot leak across calls.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpf


@dataclass(frozen=True)
class PrecisionContext:
    """A working precision paired with the guard digits treated as noise.

    ``decimal_digits`` is what mpmath computes with; the trailing
    ``guard_digits`` are assumed to hold accumulated rounding error.  The
    difference is the *scale*: the number of digits actually trusted, which
    drives integer-relation embeddings and detection tolerances alike.
    """

    decimal_digits: int = 50
    guard_digits: int = 10

    MIN_DECIMAL_DIGITS = 30
    MIN_GUARD_DIGITS = 10

    def __post_init__(self) -> None:
        if self.decimal_digits < self.MIN_DECIMAL_DIGITS:
            raise ValueError(
                f"decimal_digits must be >= {self.MIN_DECIMAL_DIGITS}"
            )
        if self.guard_digits < self.MIN_GUARD_DIGITS:
            raise ValueError(f"guard_digits must be >= {self.MIN_GUARD_DIGITS}")
        if self.guard_digits >= self.decimal_digits:
            raise ValueError("guard_digits must leave at least one trusted digit")

    @property
    def scale(self) -> int:
        return self.decimal_digits - self.guard_digits

    def tolerance(self) -> mpf:
        """10**(-scale) as an mpf at this context's precision."""
        with self.workdps():
            return mpf(10) ** (-self.scale)

    def workdps(self):
        """Context manager installing this precision for a block."""
        return mp.workdps(self.decimal_digits)


WORKING_DEFAULT = PrecisionContext(50, 10)
# Morphological screens quantize values to 10 trusted digits regardless of how
# precisely the limits were computed; see IdentifierConfig for the rationale.
DETECTION_DEFAULT = PrecisionContext(30, 20)


def to_fraction(x) -> Fraction:
    """Exact rational value of a finite mpf.

    Every finite mpf is sign * mantissa * 2**exponent, so the conversion is
    lossless.  Ints and Fractions pass through unchanged.  The mantissa is
    read off directly — never ``mpf(x)`` here, which would silently re-round
    a high-precision value to whatever precision is ambient at call time.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if x != x or x in (float("inf"), float("-inf")):
            raise ValueError(f"cannot convert non-finite value {x!r}")
        return Fraction(x)
    if not hasattr(x, "_mpf_"):
        raise TypeError(f"expected an mpf/int/float/Fraction, got {type(x)!r}")
    if not mpmath.isfinite(x):
        raise ValueError(f"cannot convert non-finite value {x!r} to Fraction")
    if x == 0:
        return Fraction(0)
    sign, man, exp, _ = x._mpf_
    frac = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -frac if sign else frac


def from_fraction(fr: Fraction | int, ctx: PrecisionContext) -> mpf:
    """Round an exact rational to an mpf at the context's precision."""
    fr = Fraction(fr)
    with ctx.workdps():
        return mpf(fr.numerator) / fr.denominator
