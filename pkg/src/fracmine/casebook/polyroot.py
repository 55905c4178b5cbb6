"""Constant fraction u/(u + u/(u + ...)) whose limit is a quadratic root.

The fold value r satisfies r² + u(r−1) = 0 for rational u outside [−4, 0]
(inside that band the roots are complex and the fold does not settle).  The
sweep walks u = −20 .. 20 in steps of 2/3, substituting u = 2/3 whenever the
grid point falls in the excluded band, and reports the residual at each
point.
"""

from __future__ import annotations

from fractions import Fraction

from mpmath import mp

from ..cfrac import FractionSchedule, eval_cfrac
from ..precision import PrecisionContext
from ..progressions import CyclicSequence, Literal
from .core import CaseResult

CTX = PrecisionContext(50, 10)
DEFAULT_DEPTH = 200
RESIDUAL_BOUND = Fraction(1, 10**6)
BAND = (Fraction(-4), Fraction(0))
BAND_SUBSTITUTE = Fraction(2, 3)


def surd_schedule(u: Fraction) -> FractionSchedule:
    return FractionSchedule(
        head=Fraction(0),
        numerators=CyclicSequence((Literal(u),)),
        denominators=CyclicSequence((Literal(u),)),
    )


def grid() -> tuple[Fraction, ...]:
    pts = []
    for k in range(61):
        u = Fraction(-20) + Fraction(2, 3) * k
        if BAND[0] <= u <= BAND[1]:
            u = BAND_SUBSTITUTE
        pts.append(u)
    return tuple(pts)


def case_polyroot(
    u: Fraction, depth: int = DEFAULT_DEPTH, ctx: PrecisionContext = CTX
) -> dict:
    if BAND[0] <= u <= BAND[1]:
        raise ValueError(
            f"u={u} lies in [{BAND[0]}, {BAND[1]}]: complex roots, no limit"
        )
    r = eval_cfrac(surd_schedule(u), depth, ctx)
    with ctx.workdps():
        uv = mp.mpf(u.numerator) / u.denominator
        residual = r.value**2 + uv * (r.value - 1)
        return {
            "u": str(u),
            "value": mp.nstr(r.value, 25),
            "residual": mp.nstr(residual, 3),
            "residual_ok": bool(abs(residual) < mp.mpf(1) / 10**6),
            "depth": depth,
        }


def run(depth: int | None = None) -> CaseResult:
    depth = DEFAULT_DEPTH if depth is None else depth
    rows = [case_polyroot(u, depth) for u in grid()]
    problems = [
        f"u={r['u']}: residual {r['residual']} above 1e-6"
        for r in rows
        if not r["residual_ok"]
    ]
    notes = (
        "u = 1 reproduces the golden-ratio fold (value (sqrt(5)-1)/2); grid "
        "points inside [-4, 0] are evaluated at the substitute u = 2/3.",
    )
    return CaseResult(
        name="polyroot",
        ok=not problems,
        rows=tuple(rows),
        notes=notes,
        problems=tuple(problems),
    )
