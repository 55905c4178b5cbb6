"""Cosine power series summing to (ℓπ)².

For rational i, j, ℓ drawn from the printed tables, the series

    Σ_{k≥1} cos(ikπ) (2cos(jπ))^k / k²

equals (ℓπ)².  Each table row prints the triple (i/ℓ, j/ℓ, 1/ℓ); the true
arguments are recovered as i = col1/col3 and j = col2/col3.  One row, as
printed, is the true row divided by 10 in all three columns — its series
still sums to a rational multiple of π², just with 1/ℓ = 30 instead of the
printed 3.  The degenerate j = 1/2 makes the base 2cos(jπ) exactly zero, so
the sum is 0 and ℓ = 0.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from mpmath import mp

from ..cfrac import eval_series
from ..constants import library_values
from ..lattice import find_constant_combination
from ..precision import PrecisionContext
from .core import CaseResult, agreed_digits

CTX = PrecisionContext(50, 10)
MIN_DIGITS = 15

# (printed i/ℓ, printed j/ℓ, printed 1/ℓ, true 1/ℓ, group)
ROWS = (
    (Fraction(11), Fraction(5), Fraction(8), 8, "i+j=2"),
    (Fraction(14), Fraction(6), Fraction(10), 10, "i+j=2"),
    (Fraction(23), Fraction(9), Fraction(16), 16, "i+j=2"),
    (Fraction(26), Fraction(10), Fraction(18), 18, "i+j=2"),
    (Fraction(22, 5), Fraction(8, 5), Fraction(3), 30, "i+j=2"),
    (Fraction(31), Fraction(9), Fraction(20), 20, "i+j=2"),
    (Fraction(28), Fraction(8), Fraction(18), 18, "i+j=2"),
    (Fraction(19), Fraction(5), Fraction(12), 12, "i+j=2"),
    (Fraction(16), Fraction(4), Fraction(10), 10, "i+j=2"),
    (Fraction(13), Fraction(3), Fraction(8), 8, "i+j=2"),
    (Fraction(76), Fraction(16), Fraction(30), 30, "i+j!=2"),
    (Fraction(46), Fraction(10), Fraction(18), 18, "i+j!=2"),
    (Fraction(41), Fraction(9), Fraction(16), 16, "i+j!=2"),
    (Fraction(26), Fraction(6), Fraction(10), 10, "i+j!=2"),
    (Fraction(21), Fraction(5), Fraction(8), 8, "i+j!=2"),
)


def _base_is_zero(j: Fraction) -> bool:
    """2cos(jπ) == 0 exactly iff 2j is an odd integer."""
    twice = 2 * j
    return twice.denominator == 1 and twice.numerator % 2 == 1


def series_sum(
    i: Fraction,
    j: Fraction,
    ctx: PrecisionContext = CTX,
    cutoff: int | None = None,
):
    with ctx.workdps():
        if _base_is_zero(j):
            return mp.mpf(0)
        x = 2 * mp.cos(mp.pi * j.numerator / j.denominator)
        if cutoff is None:
            cutoff = int(
                (ctx.decimal_digits + 20) / float(-mp.log10(abs(x)))
            ) + 50
        i_num, i_den = i.numerator, i.denominator

        def term(k: int):
            return (
                mp.cos(mp.pi * i_num * k / i_den) * mp.power(x, k) / (k * k)
            )

    return eval_series(term, cutoff, ctx).value


def _sqrt_fraction(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    rn, rd = isqrt(q.numerator), isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def case_cloitre(
    i: Fraction,
    j: Fraction,
    ctx: PrecisionContext = CTX,
    cutoff: int | None = None,
) -> dict:
    """Sum the series, then ask the integer-relation screen whether the sum
    is a rational multiple of π²; if so, report ℓ = √(sum)/π in exact form."""
    s = series_sum(i, j, ctx, cutoff)
    row: dict = {"i": str(i), "j": str(j)}
    with ctx.workdps():
        row["sum"] = mp.nstr(s, 25, strip_zeros=False)
    if s == 0:
        row.update({"sum_over_pi2": "0", "ell": "0", "inverse_ell": None,
                    "combination": "sum = 0"})
        return row
    combo = find_constant_combination(s, library_values(("1", "pi^2"), ctx), ctx)
    if combo is None:
        row.update({"sum_over_pi2": None, "ell": None, "inverse_ell": None,
                    "combination": None})
        return row
    rel, equation = combo
    c = rel.coefficients  # over the basket (q·1, q·π², 1, π²)
    row["combination"] = equation
    if c[1] == 0 and c[2] == 0 and c[0] != 0:
        ratio = Fraction(-c[3], c[0])
        ell = _sqrt_fraction(ratio)
        row["sum_over_pi2"] = str(ratio)
        row["ell"] = str(ell) if ell is not None else None
        row["inverse_ell"] = (
            int(1 / ell) if ell not in (None, 0) and (1 / ell).denominator == 1
            else None
        )
    else:
        row.update({"sum_over_pi2": None, "ell": None, "inverse_ell": None})
    return row


def run(depth: int | None = None) -> CaseResult:
    """depth, when given, overrides the series cutoff."""
    rows = []
    problems = []
    for col1, col2, col3, true_inv, group in ROWS:
        i, j = col1 / col3, col2 / col3
        row = case_cloitre(i, j, CTX, cutoff=depth)
        with CTX.workdps():
            ref = (mp.pi / true_inv) ** 2
            digits = agreed_digits(mp.mpf(row["sum"]), ref)
        row.update(
            {
                "printed": f"({col1}, {col2}, {col3})",
                "group": group,
                "reference": f"(pi/{true_inv})^2",
                "agreed_digits": digits,
            }
        )
        rows.append(row)
        label = f"row ({col1}, {col2}, {col3})"
        if digits < MIN_DIGITS:
            problems.append(f"{label}: only {digits} digits against (ℓπ)²")
        if row["inverse_ell"] != true_inv:
            problems.append(
                f"{label}: recovered 1/ell {row['inverse_ell']}, "
                f"wanted {true_inv}"
            )
        elif true_inv != col3:
            row["scale_note"] = (
                f"printed 1/ell column reads {col3}; recovered {true_inv}"
            )
    # degenerate base: j = 1/2 zeroes every term
    degenerate = case_cloitre(Fraction(1), Fraction(1, 2), CTX)
    degenerate.update({"printed": "(none)", "group": "degenerate"})
    rows.append(degenerate)
    if degenerate["ell"] != "0":
        problems.append("degenerate j=1/2 row should give ell = 0")
    notes = (
        "The (22/5, 8/5, 3) row is the true row (44, 16, 30) divided by 10 "
        "in all three printed columns: the ratios i and j survive the "
        "mangling, so the series still converges to a rational multiple of "
        "pi^2, but to (pi/30)^2 rather than the (pi/3)^2 the last column "
        "suggests.",
        "j = 1/2 makes the base 2cos(j*pi) exactly zero: the sum is 0 and "
        "ell = 0.",
    )
    return CaseResult(
        name="cloitre",
        ok=not problems,
        rows=tuple(rows),
        notes=notes,
        problems=tuple(problems),
    )
