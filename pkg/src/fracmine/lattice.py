"""Integer lattice reduction and the relation finders built on top of it.

The reducer is the all-integer LLL variant: Gram-Schmidt data is carried as
integers ``lam[i][j]`` and ``D[i]`` with mu_{i,j} = lam[i][j]/D[j+1], so no
floating point enters the reduction itself.  Every division the algorithm
performs is exact by construction; we check that at runtime rather than trust
it.

Relation candidates proposed by the lattice are always re-verified against the
exact values of the inputs — the lattice only proposes, the residual decides.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mpf

from .precision import PrecisionContext, to_fraction

LOVASZ_NUM = 99
LOVASZ_DEN = 100

#: Smallest embedding scale (trusted digits) we agree to reduce at.  Below
#: this the lattice mostly reflects rounding noise.
MIN_SCALE = 10

DEFAULT_RELATION_BOUND = 10**4


class DegenerateBasisError(ValueError):
    """Input rows were linearly dependent (or a row was zero)."""


def _exact_div(a: int, b: int) -> int:
    q, r = divmod(a, b)
    if r:
        raise ArithmeticError("inexact division in integral LLL (bug)")
    return q


def lll_reduce(basis: list[list[int]]) -> list[list[int]]:
    """LLL-reduce integer row vectors (Lovász parameter 99/100).

    Returns a new list of rows spanning the same lattice.  Raises
    DegenerateBasisError when the rows are linearly dependent.
    """
    n = len(basis)
    if n == 0:
        return []
    m = len(basis[0])
    if any(len(row) != m for row in basis):
        raise ValueError("ragged basis")
    b = [list(row) for row in basis]

    # D[i] = Gram determinant of the first i rows; D[0] = 1.
    D = [0] * (n + 1)
    D[0] = 1
    lam = [[0] * n for _ in range(n)]

    def gram_row(k: int) -> None:
        for j in range(k + 1):
            u = sum(b[k][t] * b[j][t] for t in range(m))
            for i in range(j):
                u = _exact_div(D[i + 1] * u - lam[k][i] * lam[j][i], D[i])
            if j < k:
                lam[k][j] = u
            else:
                if u == 0:
                    raise DegenerateBasisError(
                        f"rows 0..{k} are linearly dependent"
                    )
                D[k + 1] = u

    def red(k: int, l: int) -> None:
        if abs(2 * lam[k][l]) <= D[l + 1]:
            return
        q = (2 * lam[k][l] + D[l + 1]) // (2 * D[l + 1])
        b[k] = [x - q * y for x, y in zip(b[k], b[l])]
        lam[k][l] -= q * D[l + 1]
        for i in range(l):
            lam[k][i] -= q * lam[l][i]

    def swap(k: int, kmax: int) -> None:
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lv = lam[k][k - 1]
        B = _exact_div(D[k - 1] * D[k + 1] + lv * lv, D[k])
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = _exact_div(D[k + 1] * lam[i][k - 1] - lv * t, D[k])
            lam[i][k - 1] = _exact_div(B * t + lv * lam[i][k], D[k + 1])
        D[k] = B

    gram_row(0)
    kmax = 0
    k = 1
    while k < n:
        if k > kmax:
            kmax = k
            gram_row(k)
        red(k, k - 1)
        lv = lam[k][k - 1]
        if LOVASZ_DEN * (D[k + 1] * D[k - 1] + lv * lv) < LOVASZ_NUM * D[k] * D[k]:
            swap(k, kmax)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return b


@dataclass(frozen=True)
class Relation:
    """An integer relation sum(c_i * v_i) ~ 0 verified against exact inputs."""

    coefficients: tuple[int, ...]
    residual: mpf
    norm: int
    alternatives: tuple[tuple[int, ...], ...] = ()

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coefficients) if c)


def _normalize_coeffs(coeffs: list[int]) -> tuple[int, ...]:
    for c in coeffs:
        if c > 0:
            return tuple(coeffs)
        if c < 0:
            return tuple(-x for x in coeffs)
    return tuple(coeffs)


def _candidate_rows(
    reduced: list[list[int]], n_coeffs: int, bound: int
) -> list[tuple[int, ...]]:
    seen: set[tuple[int, ...]] = set()
    out: list[tuple[int, ...]] = []
    for row in reduced:
        coeffs = _normalize_coeffs(row[:n_coeffs])
        if not any(coeffs):
            continue
        if max(abs(c) for c in coeffs) > bound:
            continue
        if coeffs in seen:
            continue
        seen.add(coeffs)
        out.append(coeffs)
    out.sort(key=lambda c: (max(abs(x) for x in c), sum(x * x for x in c), c))
    return out


def find_integer_relation(
    values,
    ctx: PrecisionContext,
    *,
    bound: int = DEFAULT_RELATION_BOUND,
    scale: int | None = None,
) -> Relation | None:
    """Search for small integers c with sum(c_i * values_i) = 0 to scale.

    The values are embedded as one extra lattice column at 10**scale; scale
    defaults to the context's trusted digits.  A candidate row is accepted only
    if its residual against the *exact* input values is below
    10**-scale * max|v|; the smallest-norm acceptable relation wins and the
    rest are kept as alternatives.
    """
    vals = list(values)
    if not 2 <= len(vals) <= 20:
        raise ValueError("need between 2 and 20 values")
    if scale is None:
        scale = ctx.scale
    if scale < MIN_SCALE:
        raise ValueError(
            f"embedding scale {scale} is below the trusted minimum {MIN_SCALE}"
        )
    fracs = [to_fraction(v) for v in vals]
    mult = Fraction(10) ** scale
    n = len(fracs)
    basis = [
        [1 if j == i else 0 for j in range(n)] + [round(mult * fracs[i])]
        for i in range(n)
    ]
    reduced = lll_reduce(basis)
    tol = Fraction(1, 10**scale) * max(abs(f) for f in fracs)
    accepted: list[tuple[tuple[int, ...], Fraction]] = []
    for coeffs in _candidate_rows(reduced, n, bound):
        res = abs(sum(c * f for c, f in zip(coeffs, fracs)))
        if res < tol:
            accepted.append((coeffs, res))
    if not accepted:
        return None
    best, best_res = accepted[0]
    with ctx.workdps():
        residual = mpf(best_res.numerator) / best_res.denominator
    return Relation(
        coefficients=best,
        residual=residual,
        norm=max(abs(c) for c in best),
        alternatives=tuple(c for c, _ in accepted[1:]),
    )


def find_simultaneous_relation(
    columns,
    ctx: PrecisionContext,
    *,
    bound: int = DEFAULT_RELATION_BOUND,
    scale: int | None = None,
) -> Relation | None:
    """Like find_integer_relation but one c must kill several value columns.

    ``columns`` is a sequence of equal-length value vectors; the returned
    coefficients satisfy sum(c_i * col[i]) ~ 0 for every column, with the
    residual reported as the worst column's.
    """
    cols = [list(col) for col in columns]
    if not cols:
        raise ValueError("need at least one column")
    n = len(cols[0])
    if any(len(c) != n for c in cols):
        raise ValueError("ragged columns")
    if not 2 <= n <= 20:
        raise ValueError("need between 2 and 20 values per column")
    if scale is None:
        scale = ctx.scale
    if scale < MIN_SCALE:
        raise ValueError(
            f"embedding scale {scale} is below the trusted minimum {MIN_SCALE}"
        )
    fcols = [[to_fraction(v) for v in col] for col in cols]
    mult = Fraction(10) ** scale
    basis = [
        [1 if j == i else 0 for j in range(n)]
        + [round(mult * fc[i]) for fc in fcols]
        for i in range(n)
    ]
    reduced = lll_reduce(basis)
    tols = [
        Fraction(1, 10**scale) * max(abs(f) for f in fc) for fc in fcols
    ]
    accepted: list[tuple[tuple[int, ...], Fraction]] = []
    for coeffs in _candidate_rows(reduced, n, bound):
        worst = Fraction(0)
        ok = True
        for fc, tol in zip(fcols, tols):
            res = abs(sum(c * f for c, f in zip(coeffs, fc)))
            if res >= tol:
                ok = False
                break
            worst = max(worst, res)
        if ok:
            accepted.append((coeffs, worst))
    if not accepted:
        return None
    best, best_res = accepted[0]
    with ctx.workdps():
        residual = mpf(best_res.numerator) / best_res.denominator
    return Relation(
        coefficients=best,
        residual=residual,
        norm=max(abs(c) for c in best),
        alternatives=tuple(c for c, _ in accepted[1:]),
    )


def _term_string(coeff: int, name: str, with_q: bool) -> str:
    parts = []
    if abs(coeff) != 1 or (name == "1" and not with_q):
        parts.append(str(abs(coeff)))
    if with_q:
        parts.append("q")
    if name != "1":
        parts.append(name)
    return "*".join(parts)


def find_constant_combination(
    q,
    constants,
    ctx: PrecisionContext,
    *,
    bound: int = 1000,
    scale: int | None = None,
) -> tuple[Relation, str] | None:
    """Match q against integer combinations of library constants.

    ``constants`` is an ordered mapping name -> high-precision value, "1"
    included by the caller if wanted.  Searches for integers a_j, b_j with
    q * sum(a_j * L_j) = sum(b_j * L_j) by reducing the 2k-value basket
    (q*L_1 .. q*L_k, L_1 .. L_k).  The best relation must touch at least two
    *distinct* constants, otherwise None: a relation over the constant 1 alone
    just restates rationality, and one over a single other constant cancels it.

    Returns (relation over the basket, human-readable equation) or None.
    """
    names = list(constants)
    if not names:
        raise ValueError("need at least one constant")
    with ctx.workdps():
        qv = mpf(q) if not isinstance(q, Fraction) else (
            mpf(q.numerator) / q.denominator
        )
        basket = [qv * mpf(constants[n]) for n in names] + [
            mpf(constants[n]) for n in names
        ]
    rel = find_integer_relation(basket, ctx, bound=bound, scale=scale)
    if rel is None:
        return None
    k = len(names)
    touched = {names[i % k] for i in rel.support}
    if len(touched) < 2:
        return None
    terms = []
    for i, c in enumerate(rel.coefficients):
        if not c:
            continue
        body = _term_string(c, names[i % k], with_q=i < k)
        terms.append(("- " if c < 0 else "+ ") + body)
    eq = " ".join(terms).lstrip("+ ") + " = 0"
    return rel, eq


def minimal_polynomial(
    x,
    ctx: PrecisionContext,
    *,
    max_degree: int = 10,
    coeff_bound: int = 100,
) -> list[int] | None:
    """Integer polynomial of least degree with x as an approximate root.

    Returns ascending coefficients [c0, c1, ...] with content 1 and positive
    leading coefficient, or None if nothing fits within max_degree and
    coeff_bound at the context's scale.

    Candidates with a zero constant term are rejected: they factor as
    x * q(x), which either restates a lower-degree witness or degenerates
    to "x = 0" (for values small enough that their high powers sink below
    the scale tolerance, every monomial looks like a root).
    """
    from math import gcd

    with ctx.workdps():
        if isinstance(x, Fraction):
            xv = mpf(x.numerator) / x.denominator
        else:
            xv = mpf(x)
        powers = [mpf(1)]
        for _ in range(max_degree):
            powers.append(powers[-1] * xv)
    for deg in range(1, max_degree + 1):
        rel = find_integer_relation(
            powers[: deg + 1], ctx, bound=coeff_bound
        )
        if rel is None:
            continue
        for cand in (rel.coefficients, *rel.alternatives):
            coeffs = list(cand)
            if coeffs[0] == 0:
                continue
            while coeffs and coeffs[-1] == 0:
                coeffs.pop()
            if len(coeffs) < 2:
                continue
            g = 0
            for c in coeffs:
                g = gcd(g, abs(c))
            coeffs = [c // g for c in coeffs]
            if coeffs[-1] < 0:
                coeffs = [-c for c in coeffs]
            return coeffs
    return None
