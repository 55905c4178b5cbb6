"""Rationality screening via continued-fraction expansion, plus Farey series.

The screen asks: does this high-precision float look like p/q with a modest
denominator?  We expand the float's exact binary rational by the Euclidean
algorithm.  A genuinely rational limit shows up as a convergent followed by an
enormous partial quotient (the rounding residue); an irrational one walks off
with unremarkable quotients until the denominator bound cuts it.
"""

from __future__ import annotations

from fractions import Fraction

from .precision import PrecisionContext, to_fraction


def rationality_screen(
    x,
    ctx: PrecisionContext,
    *,
    max_denominator: int = 10**10,
    quotient_cutoff: int = 10**10,
) -> Fraction | None:
    """Return p/q if ``x`` agrees with it to the context's scale, else None.

    A candidate is only ever the convergent standing when the expansion *ends*:
    either naturally (the exact value is reached within ``max_denominator``) or
    at the first partial quotient above ``quotient_cutoff`` — the signature of
    a rational plus rounding residue.  If the walk instead runs out of room
    (next denominator would exceed ``max_denominator``) there is no candidate:
    every number has deep convergents within 1/q² of it, so accepting one would
    make the screen fire on anything.  The surviving candidate is accepted only
    if |x - p/q| < 10**-scale, compared exactly.
    """
    fr = to_fraction(x)
    tol = Fraction(1, 10**ctx.scale)

    num, den = fr.numerator, fr.denominator
    # convergent recurrences: p_k = a_k p_{k-1} + p_{k-2}, same for q
    pm2, qm2, pm1, qm1 = 0, 1, 1, 0
    candidate: Fraction | None = None
    first = True
    while True:
        if den == 0:  # exact value reached: natural termination
            candidate = Fraction(pm1, qm1) if not first else None
            break
        a = num // den
        # a huge quotient right after a modest convergent means the tail is
        # rounding noise; a huge *integer part* (first quotient) does not
        if not first and a > quotient_cutoff:
            candidate = Fraction(pm1, qm1)
            break
        q = a * qm1 + qm2
        if q > max_denominator:  # out of room, no rationality signature seen
            break
        p = a * pm1 + pm2
        pm2, qm2, pm1, qm1 = pm1, qm1, p, q
        num, den = den, num - a * den
        first = False

    if candidate is not None and abs(fr - candidate) < tol:
        return candidate
    return None


def farey(n: int) -> list[Fraction]:
    """Farey sequence of order n on [0, 1], ascending."""
    if n < 1:
        raise ValueError("order must be >= 1")
    out = [Fraction(0, 1)]
    a, b, c, d = 0, 1, 1, n
    while c <= n:
        out.append(Fraction(c, d))
        k = (n + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
    return out
