"""Shared result shape for the reproduction scenarios.

Every scenario returns a CaseResult: machine-readable rows (JSON-safe dicts,
numbers rendered as strings), free-text notes for anything a human should
read alongside the table, and a problems list that forces ok=False whenever
a pinned expectation was missed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import mp, mpf


@dataclass(frozen=True)
class CaseResult:
    name: str
    ok: bool
    rows: tuple[dict, ...]
    notes: tuple[str, ...] = ()
    problems: tuple[str, ...] = field(default=())

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "ok": self.ok,
            "rows": [dict(r) for r in self.rows],
            "notes": list(self.notes),
            "problems": list(self.problems),
        }


def as_mpf(x) -> mpf:
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpf(x)


def agreed_digits(a, b) -> int:
    """Leading decimal digits on which a and b agree, against the larger
    magnitude.  Exact agreement is capped at the active working precision:
    a fold cannot certify more digits than were in play.  Call inside the
    relevant precision context."""
    x, y = as_mpf(a), as_mpf(b)
    err = abs(x - y)
    scale = max(abs(x), abs(y))
    if scale == 0:
        return mp.dps
    if err == 0:
        return mp.dps
    return max(0, int(mp.floor(-mp.log10(err / scale))))


def small_prime_factors(n: int) -> dict[int, int]:
    """Trial-division factorization; adequate for the denominators that show
    up here (< 2**40 or so)."""
    n = abs(int(n))
    out: dict[int, int] = {}
    if n < 2:
        return out
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def factor_string(n: int) -> str:
    fac = small_prime_factors(n)
    if not fac:
        return str(n)
    return " * ".join(
        f"{p}^{e}" if e > 1 else str(p) for p, e in sorted(fac.items())
    )
