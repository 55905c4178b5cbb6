"""Unit-numerator fraction converging to e^{2/κ}.

Every third partial denominator follows the arithmetic progression
μ(i) = κ(i + 1/2) − 1 (i = 0, 1, 2, ...); the rest are 1, the head is 1.
κ = 1 gives e², κ = 2 gives e, κ = 4 gives √e; negative κ lands on the
reciprocals.  The sweep covers κ = −10 .. 10 in steps of 1/2, skipping 0.
"""

from __future__ import annotations

from fractions import Fraction

from mpmath import mp

from ..cfrac import FractionSchedule, eval_cfrac
from ..precision import PrecisionContext
from ..progressions import CyclicSequence, Literal, Progression
from .core import CaseResult, agreed_digits

CTX = PrecisionContext(50, 10)
DEFAULT_DEPTH = 2000
MIN_DIGITS = 18


def exp_kappa_schedule(kappa: Fraction) -> FractionSchedule:
    if kappa == 0:
        raise ValueError("kappa must be nonzero")
    return FractionSchedule(
        head=Fraction(1),
        numerators=CyclicSequence((Literal(1),)),
        denominators=CyclicSequence(
            (
                Progression(kappa / 2, kappa, 1, 1, -1, 0),
                Literal(1),
                Literal(1),
            )
        ),
    )


def sweep_grid() -> tuple[Fraction, ...]:
    return tuple(
        Fraction(k, 2) for k in range(-20, 21) if k != 0
    )


def case_exp_kappa(
    kappa: Fraction, depth: int = DEFAULT_DEPTH, ctx: PrecisionContext = CTX
) -> dict:
    r = eval_cfrac(exp_kappa_schedule(kappa), depth, ctx)
    with ctx.workdps():
        ref = mp.exp(2 * mp.mpf(kappa.numerator) / kappa.denominator)
        return {
            "kappa": str(kappa),
            "limit": mp.nstr(r.value, 25),
            "reference": mp.nstr(ref, 25),
            "diff": mp.nstr(abs(r.value - ref), 3),
            "agreed_digits": agreed_digits(r.value, ref),
            "depth": depth,
        }


def run(depth: int | None = None) -> CaseResult:
    depth = DEFAULT_DEPTH if depth is None else depth
    rows = [case_exp_kappa(k, depth) for k in sweep_grid()]
    problems = [
        f"kappa={r['kappa']}: only {r['agreed_digits']} digits of agreement"
        for r in rows
        if r["agreed_digits"] < MIN_DIGITS
    ]
    notes = (
        "Spot anchors: kappa=1 -> e^2, kappa=2 -> e, kappa=4 -> sqrt(e), "
        "kappa=6 -> cbrt(e); kappa=-2 -> 1/e.",
    )
    return CaseResult(
        name="expk",
        ok=not problems,
        rows=tuple(rows),
        notes=notes,
        problems=tuple(problems),
    )
