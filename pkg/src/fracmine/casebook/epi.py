"""Arithmetic-progression fraction whose limit is 2u(e^{uπ}+1)/(e^{uπ}−1).

Numerators n² + 4u², denominators 2n+1, head 1.  The sweep runs the
half-integer grid u = 1/2 .. 5; two irrational specializations (u = ln2/π
and u = 1/π) are folded through term callables since their ingredients are
not rational.
"""

from __future__ import annotations

from fractions import Fraction

from mpmath import mp

from ..cfrac import FractionSchedule, eval_cfrac, eval_cfrac_terms
from ..precision import PrecisionContext
from ..progressions import CyclicSequence, Progression
from .core import CaseResult, agreed_digits

CTX = PrecisionContext(50, 10)
DEFAULT_DEPTH = 20000
HALF_GRID = tuple(Fraction(k, 2) for k in range(1, 11))
MIN_DIGITS = 18


def epi_schedule(w: Fraction) -> FractionSchedule:
    """Schedule with numerators (n+1)² + w at 0-based cycle n — i.e. the
    level-n numerator is n² + w — and denominators 2n+3 (level n: 2n+1)."""
    return FractionSchedule(
        head=Fraction(1),
        numerators=CyclicSequence((Progression(1, 1, 1, 2, w, 0),)),
        denominators=CyclicSequence((Progression(3, 2, 1, 1, 0, 0),)),
    )


def reference(u, ctx: PrecisionContext = CTX):
    """2u(e^{uπ}+1)/(e^{uπ}−1) — u may be a Fraction or an mpf."""
    with ctx.workdps():
        if isinstance(u, Fraction):
            u = mp.mpf(u.numerator) / u.denominator
        x = mp.exp(u * mp.pi)
        return 2 * u * (x + 1) / (x - 1)


def case_epi(
    u: Fraction, depth: int = DEFAULT_DEPTH, ctx: PrecisionContext = CTX
) -> dict:
    r = eval_cfrac(epi_schedule(4 * u * u), depth, ctx)
    ref = reference(u, ctx)
    with ctx.workdps():
        return {
            "u": str(u),
            "limit": mp.nstr(r.value, 25),
            "reference": mp.nstr(ref, 25),
            "diff": mp.nstr(abs(r.value - ref), 3),
            "agreed_digits": agreed_digits(r.value, ref),
            "depth": depth,
        }


def _irrational_row(label: str, u_fn, ref_fn, depth: int, ctx) -> dict:
    with ctx.workdps():
        u = u_fn()
        w = 4 * u * u
        r = eval_cfrac_terms(
            lambda n: n * n + w, lambda n: 2 * n + 1, 1, depth, ctx
        )
        ref = ref_fn()
        return {
            "u": label,
            "limit": mp.nstr(r.value, 25),
            "reference": mp.nstr(ref, 25),
            "diff": mp.nstr(abs(r.value - ref), 3),
            "agreed_digits": agreed_digits(r.value, ref),
            "depth": depth,
        }


def run(depth: int | None = None) -> CaseResult:
    depth = DEFAULT_DEPTH if depth is None else depth
    rows = [case_epi(u, depth) for u in HALF_GRID]
    rows.append(
        _irrational_row(
            "ln(2)/pi",
            lambda: mp.log(2) / mp.pi,
            lambda: 6 * mp.log(2) / mp.pi,
            depth,
            CTX,
        )
    )
    rows.append(
        _irrational_row(
            "1/pi",
            lambda: 1 / mp.pi,
            lambda: 2 * (mp.e + 1) / (mp.pi * (mp.e - 1)),
            depth,
            CTX,
        )
    )
    problems = [
        f"u={r['u']}: only {r['agreed_digits']} digits of agreement"
        for r in rows
        if r["agreed_digits"] < MIN_DIGITS
    ]
    notes = (
        "The two irrational rows specialize the same fraction: u = ln(2)/pi "
        "gives 6*ln(2)/pi and u = 1/pi gives 2*(e+1)/(pi*(e-1)).",
    )
    return CaseResult(
        name="epi",
        ok=not problems,
        rows=tuple(rows),
        notes=notes,
        problems=tuple(problems),
    )
