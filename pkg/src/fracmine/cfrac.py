"""High-precision evaluation of scheduled continued fractions and series.

A schedule is head + K(a_n / b_n): a leading rational plus numerator and
denominator term sequences.  Evaluation folds backward from a finite depth,
seeding the tail with a_depth/b_depth; the error estimate is the spread
between the full-depth and half-depth folds, which for the (geometrically
convergent) fractions this package mines is a serviceable upper bound on the
truncation error.  Polynomially convergent fractions get a Richardson ladder
instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mpf

from .precision import PrecisionContext
from .progressions import CyclicSequence

AUTO_DEPTH_START = 64
AUTO_DEPTH_CAP = 2**20


class ZeroDenominatorError(ZeroDivisionError):
    """A backward fold hit b_n + tail == 0 at some level."""


class DivergentSeriesError(ArithmeticError):
    """Series terms stopped shrinking; no limit to report."""


@dataclass(frozen=True)
class FractionSchedule:
    head: Fraction
    numerators: CyclicSequence
    denominators: CyclicSequence

    def as_dict(self) -> dict:
        h = Fraction(self.head)
        return {
            "head": int(h) if h.denominator == 1 else str(h),
            "numerators": self.numerators.as_dict(),
            "denominators": self.denominators.as_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> FractionSchedule:
        return cls(
            head=Fraction(d.get("head", 0)),
            numerators=CyclicSequence.from_dict(d["numerators"]),
            denominators=CyclicSequence.from_dict(d["denominators"]),
        )


@dataclass(frozen=True)
class EvalResult:
    value: mpf
    error_estimate: mpf
    depth: int
    converged: bool = True


def _as_mpf(fr) -> mpf:
    if isinstance(fr, Fraction):
        return mpf(fr.numerator) / fr.denominator
    return mpf(fr)


def _term_lists(schedule: FractionSchedule, depth: int):
    # callers hold the precision context
    a = [_as_mpf(t) for t in schedule.numerators.terms(depth)]
    b = [_as_mpf(t) for t in schedule.denominators.terms(depth)]
    return a, b


def _fold_prefix(a: list, b: list, depth: int, head: mpf) -> mpf:
    bd = b[depth - 1]
    if bd == 0:
        raise ZeroDenominatorError(f"zero denominator seeding level {depth}")
    x = a[depth - 1] / bd
    for n in range(depth - 2, -1, -1):
        d = b[n] + x
        if d == 0:
            raise ZeroDenominatorError(
                f"zero denominator folding level {n + 1}"
            )
        x = a[n] / d
    return head + x


def eval_cfrac(
    schedule: FractionSchedule, depth: int, ctx: PrecisionContext
) -> EvalResult:
    """Fold the fraction at a fixed depth; estimate error via half depth.

    The converged flag records whether the estimate beat the context's
    tolerance — a fixed-depth fold of a slowly convergent fraction reports
    its value either way.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    with ctx.workdps():
        a, b = _term_lists(schedule, depth)
        head = _as_mpf(schedule.head)
        full = _fold_prefix(a, b, depth, head)
        if depth >= 2:
            half = _fold_prefix(a, b, depth // 2, head)
            err = abs(full - half)
        else:
            err = mpf("inf")
        return EvalResult(
            value=full,
            error_estimate=err,
            depth=depth,
            converged=bool(err < ctx.tolerance()),
        )


def eval_cfrac_terms(
    numerator_fn,
    denominator_fn,
    head,
    depth: int,
    ctx: PrecisionContext,
) -> EvalResult:
    """Fold a fraction whose terms come from callables, not schedules.

    For fractions with non-rational ingredients (term functions may return
    any mpmath value; they are invoked inside the precision context, with
    1-based level numbers).
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    with ctx.workdps():
        a = [_as_mpf(numerator_fn(n)) for n in range(1, depth + 1)]
        b = [_as_mpf(denominator_fn(n)) for n in range(1, depth + 1)]
        h = _as_mpf(head)
        full = _fold_prefix(a, b, depth, h)
        if depth >= 2:
            half = _fold_prefix(a, b, depth // 2, h)
            err = abs(full - half)
        else:
            err = mpf("inf")
        return EvalResult(
            value=full,
            error_estimate=err,
            depth=depth,
            converged=bool(err < ctx.tolerance()),
        )


def eval_cfrac_auto(
    schedule: FractionSchedule,
    ctx: PrecisionContext,
    *,
    target_digits: int | None = None,
    start_depth: int = AUTO_DEPTH_START,
    depth_cap: int = AUTO_DEPTH_CAP,
) -> EvalResult:
    """Double the depth until successive folds agree to target_digits.

    target_digits defaults to (and may not exceed) the context's trusted
    scale.  Hitting the cap is not an error: the last fold is returned with
    converged=False so the caller can decide what a slow fraction means.
    """
    target = ctx.scale if target_digits is None else target_digits
    if target > ctx.scale:
        raise ValueError(
            f"cannot certify {target} digits at a context trusting {ctx.scale}"
        )
    if target < 1:
        raise ValueError("target_digits must be >= 1")
    with ctx.workdps():
        tol = mpf(10) ** (-target)
        a, b = _term_lists(schedule, min(start_depth, depth_cap))
        head = _as_mpf(schedule.head)
        prev = _fold_prefix(a, b, min(start_depth, depth_cap), head)
        err = mpf("inf")
        depth = start_depth * 2
        while depth <= depth_cap:
            a, b = _term_lists(schedule, depth)
            cur = _fold_prefix(a, b, depth, head)
            err = abs(cur - prev)
            if err < tol:
                return EvalResult(
                    value=cur, error_estimate=err, depth=depth, converged=True
                )
            prev = cur
            depth *= 2
        return EvalResult(
            value=prev,
            error_estimate=err,
            depth=depth // 2,
            converged=False,
        )


def eval_cfrac_richardson(
    schedule: FractionSchedule,
    ctx: PrecisionContext,
    *,
    base_depth: int = 10**4,
    levels: int = 5,
    first_order: int = 2,
) -> EvalResult:
    """Richardson-extrapolated fold for polynomially convergent fractions.

    Folds at depths base_depth * 2**j and repeatedly eliminates the leading
    error term, assumed to follow C/d**p for p = first_order, first_order+1,
    ...  Each ladder stage applies (2**p * R(2d) - R(d)) / (2**p - 1).  The
    error estimate is the spread between the last two surviving extrapolants.
    """
    if levels < 2:
        raise ValueError("need at least two fold depths to extrapolate")
    with ctx.workdps():
        top = base_depth * 2 ** (levels - 1)
        a, b = _term_lists(schedule, top)
        head = _as_mpf(schedule.head)
        ladder = [
            _fold_prefix(a, b, base_depth * 2**j, head) for j in range(levels)
        ]
        spread = abs(ladder[-1] - ladder[-2])
        p = first_order
        while len(ladder) > 1:
            w = mpf(2) ** p
            ladder = [
                (w * ladder[j + 1] - ladder[j]) / (w - 1)
                for j in range(len(ladder) - 1)
            ]
            if len(ladder) > 1:
                spread = abs(ladder[-1] - ladder[-2])
            p += 1
        return EvalResult(
            value=ladder[0],
            error_estimate=spread,
            depth=top,
            converged=bool(spread < ctx.tolerance()),
        )


def eval_cfrac_exact(schedule: FractionSchedule, depth: int) -> Fraction:
    """Exact rational fold — for schedules whose numerators hit zero.

    A zero numerator at level m truncates the fraction there, so the limit is
    an exact rational; this fold computes it without rounding.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    a = schedule.numerators.terms(depth)
    b = schedule.denominators.terms(depth)
    bd = b[depth - 1]
    if bd == 0:
        raise ZeroDenominatorError(f"zero denominator seeding level {depth}")
    x = a[depth - 1] / bd
    for n in range(depth - 2, -1, -1):
        d = b[n] + x
        if d == 0:
            raise ZeroDenominatorError(
                f"zero denominator folding level {n + 1}"
            )
        x = a[n] / d
    return schedule.head + x


def eval_series(
    term_fn,
    cutoff: int,
    ctx: PrecisionContext,
    *,
    head: Fraction | int = 0,
) -> EvalResult:
    """Sum head + term_fn(1) + ... + term_fn(cutoff) at the context precision.

    term_fn is called inside the precision context and may return any mpmath
    value.  The error estimate is a geometric tail bound from the last two
    terms when they are shrinking, else the half-cutoff spread.  Terms that
    keep growing raise DivergentSeriesError rather than summing to noise.
    """
    if cutoff < 2:
        raise ValueError("cutoff must be >= 2")
    h = Fraction(head)
    with ctx.workdps():
        blowup = mpf(10) ** ctx.decimal_digits
        total = mpf(h.numerator) / h.denominator
        half_total = None
        prev_t = None
        last_t = None
        growth_run = 0
        for k in range(1, cutoff + 1):
            t = term_fn(k)
            at = abs(t)
            if at > blowup:
                raise DivergentSeriesError(
                    f"term {k} exceeds 10^{ctx.decimal_digits}"
                )
            if last_t is not None and at >= abs(last_t) and at >= 1:
                growth_run += 1
                if growth_run >= 64:
                    raise DivergentSeriesError(
                        f"terms non-decreasing through term {k}"
                    )
            else:
                growth_run = 0
            total += t
            if k == cutoff // 2:
                half_total = +total
            prev_t, last_t = last_t, t
        ratio = None
        if prev_t and last_t and abs(prev_t) > 0:
            ratio = abs(last_t) / abs(prev_t)
        if ratio is not None and ratio < mpf("0.99"):
            err = abs(last_t) * ratio / (1 - ratio)
        elif half_total is not None:
            err = abs(total - half_total)
        else:
            err = mpf("inf")
        return EvalResult(
            value=total,
            error_estimate=err,
            depth=cutoff,
            converged=bool(err < ctx.tolerance()),
        )
