"""The ten structure tests run against a family of high-precision limits.

Five morphological tests inspect individual limit values (rationality,
algebraicity, pairwise shared constants, exponent ladders, known constants);
five serial tests fit closed-form models in the varied parameter (rational
function, exponential, inverse exponential, power and root plus constant).

Morphological lattice screens deliberately run at a coarse fixed detection
scale (ten trusted digits by default): the interesting families fire through
*near*-relations at display scale, and a screen that sharpens with working
precision would go silent on exactly the families it is meant to flag.
Structural recoveries (minimal polynomials, known-constant combinations) use
the full working scale.  All verdicts are pure functions of (family, config).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from mpmath import mp, mpf

from .constants import KNOWN_CONSTANTS, library_values
from .lattice import (
    Relation,
    find_constant_combination,
    find_integer_relation,
    find_simultaneous_relation,
    minimal_polynomial,
)
from .precision import (
    DETECTION_DEFAULT,
    WORKING_DEFAULT,
    PrecisionContext,
    to_fraction,
)
from .rationality import rationality_screen

#: Execution order; gates assume rationality results exist before the rest.
TEST_ORDER = (
    "RNI", "ANI", "CPI", "CEI", "KCI", "RFP", "EFP", "IEP", "PCP", "RCP",
)
#: Column order used when rendering verdict tables.
DISPLAY_ORDER = (
    "ANI", "RNI", "CPI", "CEI", "KCI", "RFP", "EFP", "IEP", "PCP", "RCP",
)

#: Fitted model parameters only need to be recovered as precisely as the fit
#: threshold they must survive, so snapping uses a deliberately coarse scale
#: (1e-6) and small cutoffs; the re-verification step is the real gate.
SNAP_CONTEXT = PrecisionContext(30, 24)
SNAP_CUTOFF = 10**4

#: A 10-name subset would put 20 values in the lattice basket, where integer
#: combinations under the coefficient bound become dense enough to fire on
#: anything; five names keep the expected spurious-relation count negligible.
DEFAULT_KCI_SUBSET = ("1", "pi", "e", "ln2", "zeta3")


@dataclass(frozen=True)
class IdentifierConfig:
    working: PrecisionContext = WORKING_DEFAULT
    detection: PrecisionContext = DETECTION_DEFAULT
    rni_max_denominator: int = 10**10
    rni_quotient_cutoff: int = 10**10
    ani_max_degree: int = 10
    ani_coeff_bound: int = 100
    cpi_coeff_bound: int = 32
    # Quadruple relations worth reporting in practice carry tiny coefficients
    # (the structural ones are all +-1 or +-2); a looser bound starts
    # admitting relations that merely re-encode rational pair aggregates with
    # medium-size numerators (e.g. coefficient-5 combinations of 1/9 and
    # 1/49), which the pair test already accounts for.
    cei_coeff_bound: int = 4
    kci_coeff_bound: int = 1000
    kci_constants: tuple[str, ...] = DEFAULT_KCI_SUBSET
    relation_bound: int = 10**4
    rfp_max_power_sum: int = 6
    rfp_rel_residual: float = 1e-10
    fit_rel_residual: float = 1e-8
    exponent_sweep: tuple[int, ...] = (2, 3, 4, 5, 6)


@dataclass(frozen=True)
class LimitFamily:
    """Ten-or-more limits along one varied parameter, ready for testing."""

    values: tuple[mpf, ...]
    regressor: tuple[Fraction, ...]
    varied_slot: str = "x"
    label: str = ""

    def __post_init__(self) -> None:
        if len(self.values) != len(self.regressor):
            raise ValueError("values and regressor lengths differ")
        if len(self.values) < 10:
            raise ValueError("need at least 10 points (morphological tests)")
        object.__setattr__(
            self, "regressor", tuple(Fraction(r) for r in self.regressor)
        )


@dataclass(frozen=True)
class Verdict:
    fired: bool
    witness: str | None = None
    likelihood: float = 0.0
    details: dict = field(default_factory=dict)
    errors: tuple[str, ...] = ()


@dataclass(frozen=True)
class TestReport:
    verdicts: dict[str, Verdict]

    def vector(self) -> str:
        """The ✓/✗ row in display order."""
        return " ".join(
            "✓" if self.verdicts[name].fired else "✗"
            for name in DISPLAY_ORDER
        )

    def fired_names(self) -> tuple[str, ...]:
        return tuple(n for n in DISPLAY_ORDER if self.verdicts[n].fired)


def _mpf_frac(fr: Fraction) -> mpf:
    """mpf() cannot consume Fraction directly; divide at ambient precision."""
    return mpf(fr.numerator) / fr.denominator


def _lik(residual, threshold) -> float:
    """Crude confidence heuristic: how far under its threshold a hit landed."""
    if threshold <= 0:
        return 0.0
    r = float(residual) / float(threshold)
    return max(0.0, min(1.0, 1.0 - r))


def _fmt(x, digits: int = 20) -> str:
    return mp.nstr(mpf(x), digits)


def _poly_string(coeffs: list[int], name: str = "x") -> str:
    terms = []
    for power in range(len(coeffs) - 1, -1, -1):
        c = coeffs[power]
        if c == 0:
            continue
        mag = abs(c)
        if power == 0:
            body = str(mag)
        else:
            var = name if power == 1 else f"{name}^{power}"
            body = var if mag == 1 else f"{mag}*{var}"
        terms.append(("- " if c < 0 else "+ ") + body)
    joined = " ".join(terms).lstrip("+ ")
    return f"{joined} = 0"


# ---------------------------------------------------------------------------
# morphological tests


def rational_limit_points(
    values, cfg: IdentifierConfig
) -> list[Fraction | None]:
    """Per-point rationality screen; shared by the RNI verdict and the gates."""
    return [
        rationality_screen(
            v,
            cfg.detection,
            max_denominator=cfg.rni_max_denominator,
            quotient_cutoff=cfg.rni_quotient_cutoff,
        )
        for v in values
    ]


def _test_rni(values, rationals, cfg: IdentifierConfig) -> Verdict:
    hits = [(i, r) for i, r in enumerate(rationals) if r is not None]
    if not hits:
        return Verdict(fired=False)
    tol = Fraction(1, 10**cfg.detection.scale)
    best = 0.0
    for i, r in hits:
        err = abs(to_fraction(values[i]) - r)
        best = max(best, _lik(err, tol))
    parts = ", ".join(f"Q{i} = {r}" for i, r in hits)
    return Verdict(
        fired=True,
        witness=parts,
        likelihood=best,
        details={"points": [[i, str(r)] for i, r in hits]},
    )


def _test_ani(values, rationals, cfg: IdentifierConfig) -> Verdict:
    hits = []
    for i, v in enumerate(values):
        if rationals[i] is not None:  # rationals are the other screen's news
            continue
        poly = minimal_polynomial(
            v,
            cfg.working,
            max_degree=cfg.ani_max_degree,
            coeff_bound=cfg.ani_coeff_bound,
        )
        if poly is not None and len(poly) >= 3:  # degree >= 2
            hits.append((i, poly))
    if not hits:
        return Verdict(fired=False)
    i, poly = hits[0]
    # re-verify at twice the working precision: the polynomial value at the
    # limit must stay under the scale tolerance
    wide = PrecisionContext(
        2 * cfg.working.decimal_digits, cfg.working.guard_digits
    )
    with wide.workdps():
        x = mpf(values[i])
        pval = abs(mp.polyval([mpf(c) for c in reversed(poly)], x))
        tol = mpf(10) ** (-cfg.working.scale) * max(
            abs(x) ** (len(poly) - 1), mpf(1)
        )
        if pval >= tol:
            return Verdict(
                fired=False,
                errors=(f"witness unstable at 2x precision: |p(Q{i})| = "
                        f"{_fmt(pval, 5)}",),
            )
        lik = _lik(pval, tol)
    return Verdict(
        fired=True,
        witness=f"Q{i} root of {_poly_string(poly)}",
        likelihood=lik,
        details={"points": [[j, p] for j, p in hits]},
    )


def _solve_mobius_pair(coeffs) -> tuple[int, int, int, int, int, int, int, int] | None:
    """Factor a basket relation into two integer Möbius forms, if possible.

    The relation (r0, r1, r2, r3) over (1, P1, P2, P1*P2) matches
    P_k = (a_k + b_k*U)/(c_k + d_k*U) when r0 = a2*b1 - a1*b2,
    r1 = b2*c1 - a2*d1, r2 = a1*d2 - b1*c2, r3 = c2*d1 - c1*d2.
    Enumerates the first quadruple over a small box and solves the second
    linearly; returns (a1, b1, c1, d1, a2, b2, c2, d2) or None.
    """
    r0, r1, r2, r3 = coeffs
    rng = range(-3, 4)
    for a1 in rng:
        for b1 in rng:
            for c1 in rng:
                for d1 in rng:
                    det = b1 * c1 - a1 * d1
                    if det == 0:
                        continue
                    # [b1 -a1][a2]   [r0]      [-b1  a1][c2]   [r2]
                    # [-d1 c1][b2] = [r1]      [ d1 -c1][d2] = [r3]
                    a2n = c1 * r0 + a1 * r1
                    b2n = d1 * r0 + b1 * r1
                    c2n = -c1 * r2 - a1 * r3
                    d2n = -d1 * r2 - b1 * r3
                    if any(x % det for x in (a2n, b2n, c2n, d2n)):
                        continue
                    return (
                        a1, b1, c1, d1,
                        a2n // det, b2n // det, c2n // det, d2n // det,
                    )
    return None


def _test_cpi(values, rationals, cfg: IdentifierConfig) -> Verdict:
    n = len(values)
    fired_pairs = []
    first_witness = None
    first_lik = 0.0
    errors: list[str] = []
    with cfg.working.workdps():
        for i, j in combinations(range(n), 2):
            if rationals[i] is not None and rationals[j] is not None:
                continue  # both rational: nothing to share
            basket = [mpf(1), values[i], values[j], values[i] * values[j]]
            try:
                rel = find_integer_relation(
                    basket,
                    cfg.detection,
                    bound=cfg.cpi_coeff_bound,
                    scale=cfg.detection.scale,
                )
            except Exception as exc:  # noqa: BLE001 - verdict must not die
                errors.append(f"pair ({i},{j}): {exc}")
                continue
            chosen = None
            if rel is not None:
                for cand in (rel.coefficients, *rel.alternatives):
                    support = frozenset(
                        k for k, c in enumerate(cand) if c
                    )
                    if support <= {0, 1} or support <= {0, 2}:
                        continue  # one member close to rational: not a pair
                    if support <= {0, 3}:
                        continue  # pure product: the exponent test's news
                    chosen = cand
                    break
            if chosen is None:
                continue
            fired_pairs.append([i, j, list(chosen)])
            if first_witness is None:
                parts = _solve_mobius_pair(chosen)
                extra = ""
                if parts is not None:
                    a1, b1, c1, d1 = parts[:4]
                    den = d1 * values[i] - b1
                    if den != 0:
                        u_est = (a1 - c1 * values[i]) / den
                        extra = f"; U ≈ {_fmt(u_est)}"
                only = [c * f for c, f in zip(
                    chosen,
                    [Fraction(1),
                     to_fraction(values[i]),
                     to_fraction(values[j]),
                     to_fraction(values[i]) * to_fraction(values[j])],
                )]
                resid = abs(sum(only))
                tol = Fraction(1, 10**cfg.detection.scale) * max(
                    abs(to_fraction(values[i] * values[j])), Fraction(1)
                )
                first_lik = _lik(resid, tol)
                first_witness = (
                    f"pair (Q{i}, Q{j}): {list(chosen)} on "
                    f"(1, Q{i}, Q{j}, Q{i}*Q{j}){extra}"
                )
    if not fired_pairs:
        return Verdict(fired=False, errors=tuple(errors))
    return Verdict(
        fired=True,
        witness=first_witness,
        likelihood=first_lik,
        details={"pairs": fired_pairs},
        errors=tuple(errors),
    )


def _cei_basket(block):
    """The sixteen products over a quadruple: 1, singles, pairs, triples, all.

    Returns (values, masks) where each mask is the frozenset of member
    indices (0..3) multiplied into that basket slot.
    """
    vals = [mpf(1)]
    masks = [frozenset()]
    idx = range(4)
    for size in (1, 2, 3):
        for combo in combinations(idx, size):
            prod = mpf(1)
            for c in combo:
                prod = prod * block[c]
            vals.append(prod)
            masks.append(frozenset(combo))
    prod = block[0] * block[1] * block[2] * block[3]
    vals.append(prod)
    masks.append(frozenset(idx))
    return vals, masks


def _pair_sum_explained(cand, masks, block, cfg: IdentifierConfig) -> bool:
    """True when a quadruple relation is arithmetic on rational pair-sums.

    If the coefficients are constant on the singles of one 2+2 split, constant
    on the singles of the other side, constant on the four cross products, and
    zero elsewhere (within-pair products, triples, full product), the relation
    is a polynomial in a = Q_a + Q_b and b = Q_c + Q_d alone.  When each
    involved sum is itself rational — something the pair screen already
    detects — the relation is plain arithmetic on those facts, not news.
    Example: sums 1/9 and 1/49 always admit a - 5b - 4ab = 0 (49 = 45 + 4).
    """
    for first, second in (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))):
        fa, fb = frozenset(first), frozenset(second)
        s1 = {cand[t] for t, m in enumerate(masks) if len(m) == 1 and m <= fa}
        s2 = {cand[t] for t, m in enumerate(masks) if len(m) == 1 and m <= fb}
        cross = {
            cand[t]
            for t, m in enumerate(masks)
            if len(m) == 2 and m != fa and m != fb
        }
        rest = [
            cand[t]
            for t, m in enumerate(masks)
            if m in (fa, fb) or len(m) > 2
        ]
        if len(s1) != 1 or len(s2) != 1 or len(cross) != 1 or any(rest):
            continue
        a_coeff, b_coeff, x_coeff = s1.pop(), s2.pop(), cross.pop()
        need = []
        if a_coeff or x_coeff:
            need.append(first)
        if b_coeff or x_coeff:
            need.append(second)
        if not need:
            continue
        explained = True
        for i, j in need:
            s = rationality_screen(
                block[i] + block[j],
                cfg.detection,
                max_denominator=cfg.rni_max_denominator,
                quotient_cutoff=cfg.rni_quotient_cutoff,
            )
            if s is None:
                explained = False
                break
        if explained:
            return True
    return False


def _test_cei(values, rationals, cfg: IdentifierConfig) -> Verdict:
    n = len(values)
    errors: list[str] = []
    fired = []
    first_witness = None
    first_lik = 0.0
    with cfg.working.workdps():
        for k in range(n - 3):
            block = values[k : k + 4]
            block_rational = [rationals[k + t] is not None for t in range(4)]
            basket, masks = _cei_basket(block)
            try:
                rel = find_integer_relation(
                    basket,
                    cfg.detection,
                    bound=cfg.cei_coeff_bound,
                    scale=cfg.detection.scale,
                )
            except Exception as exc:  # noqa: BLE001
                errors.append(f"quadruple at {k}: {exc}")
                continue
            chosen = None
            if rel is not None:
                for cand in (rel.coefficients, *rel.alternatives):
                    support = [masks[t] for t, c in enumerate(cand) if c]
                    members = frozenset().union(*support) if support else (
                        frozenset()
                    )
                    if members and all(
                        block_rational[m] for m in members
                    ):
                        continue  # plain rational arithmetic, not structure
                    singles = [m for m in support if len(m) == 1]
                    if singles and len(members) <= 2:
                        # lives inside one pair's Möbius basket: CPI's news
                        continue
                    if _pair_sum_explained(cand, masks, block, cfg):
                        continue
                    chosen = cand
                    break
            if chosen is None:
                continue
            fired.append([k, list(chosen)])
            if first_witness is None:
                fracs = [to_fraction(v) for v in basket]
                resid = abs(sum(c * f for c, f in zip(chosen, fracs)))
                tol = Fraction(1, 10**cfg.detection.scale) * max(
                    abs(f) for f in fracs
                )
                first_lik = _lik(resid, tol)
                labels = ["1"] + [
                    "*".join(f"Q{k + m}" for m in sorted(mask))
                    for mask in masks[1:]
                ]
                terms = [
                    f"{c}·{labels[t]}"
                    for t, c in enumerate(chosen)
                    if c
                ]
                first_witness = (
                    f"quadruple (Q{k}..Q{k + 3}): "
                    + " + ".join(terms).replace("+ -", "- ")
                    + " ≈ 0"
                )
    if not fired:
        return Verdict(fired=False, errors=tuple(errors))
    return Verdict(
        fired=True,
        witness=first_witness,
        likelihood=first_lik,
        details={"quadruples": fired},
        errors=tuple(errors),
    )


def _test_kci(values, constants: tuple[str, ...], cfg: IdentifierConfig) -> Verdict:
    if not constants:
        return Verdict(fired=False, errors=("empty constant subset",))
    lib = library_values(constants, cfg.working)
    errors: list[str] = []
    for i, v in enumerate(values):
        try:
            out = find_constant_combination(
                v,
                lib,
                cfg.working,
                bound=cfg.kci_coeff_bound,
                scale=cfg.working.scale,
            )
        except Exception as exc:  # noqa: BLE001
            errors.append(f"point {i}: {exc}")
            continue
        if out is None:
            continue
        rel, eq = out
        tol = mpf(10) ** (-cfg.working.scale)
        return Verdict(
            fired=True,
            witness=f"Q{i}: {eq}",
            likelihood=_lik(rel.residual, tol),
            details={
                "point": i,
                "coefficients": list(rel.coefficients),
                "constants": list(constants),
            },
            errors=tuple(errors),
        )
    return Verdict(fired=False, errors=tuple(errors))


# ---------------------------------------------------------------------------
# serial model fits


def _snap_param(x) -> Fraction | None:
    """Round a fitted parameter to a small rational, or give up."""
    try:
        return rationality_screen(
            x,
            SNAP_CONTEXT,
            max_denominator=SNAP_CUTOFF,
            quotient_cutoff=SNAP_CUTOFF,
        )
    except (ValueError, TypeError):
        return None


def _match_library(x, cfg: IdentifierConfig) -> str | None:
    """Name a library constant equal to x at snap tolerance, if any."""
    lib = library_values(KNOWN_CONSTANTS, cfg.working)
    with cfg.working.workdps():
        for name, val in lib.items():
            if name == "1":
                continue
            if abs(x - val) < mpf(10) ** (-6) * max(abs(val), mpf(1)):
                return name
    return None


def _linear_fit(xs, ys):
    """Least-squares slope/intercept at working precision (normal equations)."""
    n = len(xs)
    sx = sum(xs)
    sy = sum(ys)
    sxx = sum(x * x for x in xs)
    sxy = sum(x * y for x, y in zip(xs, ys))
    den = n * sxx - sx * sx
    if den == 0:
        return None
    slope = (n * sxy - sx * sy) / den
    intercept = (sy - slope * sx) / n
    return slope, intercept


def _max_rel_residual(model_fn, xs, ys) -> mpf:
    worst = mpf(0)
    for x, y in zip(xs, ys):
        pred = model_fn(x)
        denom = max(abs(y), mpf(10) ** -30)
        worst = max(worst, abs(pred - y) / denom)
    return worst


def _test_rfp(family: LimitFamily, cfg: IdentifierConfig) -> Verdict:
    xs = family.regressor
    ys = family.values
    errors: list[str] = []
    with cfg.working.workdps():
        for total in range(0, cfg.rfp_max_power_sum + 1):
            for dp in range(0, total + 1):
                dq = total - dp
                columns = []
                for x, y in zip(xs, ys):
                    xp = [Fraction(x) ** k for k in range(dp + 1)]
                    xq = [-(y * _mpf_frac(Fraction(x) ** k)) for k in range(dq + 1)]
                    columns.append([*xp, *xq])
                try:
                    rel = find_simultaneous_relation(
                        columns,
                        cfg.working,
                        bound=cfg.relation_bound,
                        scale=cfg.working.scale,
                    )
                except Exception as exc:  # noqa: BLE001
                    errors.append(f"degrees ({dp},{dq}): {exc}")
                    continue
                if rel is None:
                    continue
                num = list(rel.coefficients[: dp + 1])
                den = list(rel.coefficients[dp + 1 :])
                if not any(den):
                    continue  # P(x) = 0 for all points: not a function fit
                # verify against every point at twice the precision
                wide = PrecisionContext(
                    2 * cfg.working.decimal_digits, cfg.working.guard_digits
                )
                with wide.workdps():
                    ok = True
                    worst = mpf(0)
                    for x, y in zip(xs, ys):
                        nv = sum(c * Fraction(x) ** k for k, c in enumerate(num))
                        dv = sum(c * Fraction(x) ** k for k, c in enumerate(den))
                        if dv == 0:
                            ok = False
                            break
                        pred = _mpf_frac(Fraction(nv, dv))
                        rr = abs(pred - mpf(y)) / max(abs(mpf(y)), mpf(10) ** -30)
                        worst = max(worst, rr)
                    if not ok or worst >= mpf(cfg.rfp_rel_residual):
                        continue
                witness = (
                    f"Q = ({_poly_string(num).removesuffix(' = 0')}) / "
                    f"({_poly_string(den).removesuffix(' = 0')})"
                )
                return Verdict(
                    fired=True,
                    witness=witness,
                    likelihood=_lik(worst, cfg.rfp_rel_residual),
                    details={
                        "numerator": num,
                        "denominator": den,
                        "max_rel_residual": float(worst),
                    },
                    errors=tuple(errors),
                )
    return Verdict(fired=False, errors=tuple(errors))


def _render_coeff(value: Fraction | str) -> str:
    return value if isinstance(value, str) else str(value)


def _fit_exponential(
    family: LimitFamily, cfg: IdentifierConfig, inverse: bool
) -> Verdict:
    xs = family.regressor
    ys = family.values
    if inverse and any(x == 0 for x in xs):
        return Verdict(fired=False, errors=("regressor contains zero",))
    signs = {1 if y > 0 else (-1 if y < 0 else 0) for y in ys}
    if len(signs) != 1 or 0 in signs:
        return Verdict(fired=False)
    sign = signs.pop()
    with cfg.working.workdps():
        regs = [
            mpf(1) / _mpf_frac(Fraction(x)) if inverse else _mpf_frac(Fraction(x))
            for x in xs
        ]
        logs = [mp.log(abs(y)) for y in ys]
        fit = _linear_fit(regs, logs)
        if fit is None:
            return Verdict(fired=False, errors=("degenerate regressor",))
        slope, intercept = fit
        a_hat = mp.exp(slope)
        b_hat = sign * mp.exp(intercept)
        a_snap: Fraction | str | None = _snap_param(a_hat)
        if a_snap is None:
            a_snap = _match_library(a_hat, cfg)
        b_snap: Fraction | str | None = _snap_param(b_hat)
        if b_snap is None:
            b_snap = _match_library(b_hat, cfg)
        if a_snap is None or b_snap is None:
            return Verdict(fired=False)
        wide = PrecisionContext(
            2 * cfg.working.decimal_digits, cfg.working.guard_digits
        )
        lib_wide = library_values(KNOWN_CONSTANTS, wide)
        with wide.workdps():
            av = (
                lib_wide[a_snap]
                if isinstance(a_snap, str)
                else _mpf_frac(a_snap)
            )
            bv = (
                lib_wide[b_snap]
                if isinstance(b_snap, str)
                else _mpf_frac(b_snap)
            )
            if av * bv == 0:
                return Verdict(fired=False)  # degenerate: constant/zero model

            def model(x):
                e = mpf(1) / _mpf_frac(Fraction(x)) if inverse else _mpf_frac(Fraction(x))
                return bv * av**e

            worst = _max_rel_residual(model, xs, ys)
        if worst >= mpf(cfg.fit_rel_residual):
            return Verdict(fired=False)
    exp_sym = f"1/{family.varied_slot}" if inverse else family.varied_slot
    note = (
        "; base matched from the constant library"
        if isinstance(a_snap, str)
        else ""
    )
    return Verdict(
        fired=True,
        witness=(
            f"Q = {_render_coeff(b_snap)} * "
            f"({_render_coeff(a_snap)})^({exp_sym}){note}"
        ),
        likelihood=_lik(worst, cfg.fit_rel_residual),
        details={
            "a": _render_coeff(a_snap),
            "b": _render_coeff(b_snap),
            "max_rel_residual": float(worst),
            "library_base": isinstance(a_snap, str),
        },
    )


def _fit_power_or_root(
    family: LimitFamily, cfg: IdentifierConfig, root: bool
) -> Verdict:
    xs = family.regressor
    ys = family.values
    if root and any(Fraction(x) < 0 for x in xs):
        return Verdict(fired=False, errors=("negative regressor",))
    with cfg.working.workdps():
        for a_exp in cfg.exponent_sweep:
            if root:
                regs = [_mpf_frac(Fraction(x)) ** (mpf(1) / a_exp) for x in xs]
            else:
                regs = [_mpf_frac(Fraction(x)) ** a_exp for x in xs]
            fit = _linear_fit(regs, [mpf(y) for y in ys])
            if fit is None:
                continue
            slope, intercept = fit
            b_snap = _snap_param(slope)
            c_snap = _snap_param(intercept)
            if b_snap is None or c_snap is None or b_snap == 0:
                continue
            wide = PrecisionContext(
                2 * cfg.working.decimal_digits, cfg.working.guard_digits
            )
            with wide.workdps():
                bv = _mpf_frac(b_snap)
                cv = _mpf_frac(c_snap)

                def model(x):
                    base = _mpf_frac(Fraction(x))
                    e = (mpf(1) / a_exp) if root else mpf(a_exp)
                    return bv * base**e + cv

                worst = _max_rel_residual(model, xs, ys)
            if worst >= mpf(cfg.fit_rel_residual):
                continue
            sym = family.varied_slot
            form = (
                f"{sym}^(1/{a_exp})" if root else f"{sym}^{a_exp}"
            )
            tail = "" if c_snap == 0 else f" + {c_snap}"
            return Verdict(
                fired=True,
                witness=f"Q = {b_snap} * {form}{tail}",
                likelihood=_lik(worst, cfg.fit_rel_residual),
                details={
                    "a": a_exp,
                    "b": str(b_snap),
                    "c": str(c_snap),
                    "max_rel_residual": float(worst),
                },
            )
    return Verdict(fired=False)


# ---------------------------------------------------------------------------
# single-value entry points (shared with the CLI's identify command)


def screen_rational(value, cfg: IdentifierConfig) -> Verdict:
    r = rationality_screen(
        value,
        cfg.detection,
        max_denominator=cfg.rni_max_denominator,
        quotient_cutoff=cfg.rni_quotient_cutoff,
    )
    if r is None:
        return Verdict(fired=False)
    err = abs(to_fraction(value) - r)
    tol = Fraction(1, 10**cfg.detection.scale)
    return Verdict(
        fired=True,
        witness=str(r),
        likelihood=_lik(err, tol),
        details={"rational": str(r)},
    )


def screen_algebraic(
    value, cfg: IdentifierConfig, *, skip_if_rational: bool = True
) -> Verdict:
    if skip_if_rational and screen_rational(value, cfg).fired:
        return Verdict(fired=False)
    poly = minimal_polynomial(
        value,
        cfg.working,
        max_degree=cfg.ani_max_degree,
        coeff_bound=cfg.ani_coeff_bound,
    )
    if poly is None or len(poly) < 3:
        return Verdict(fired=False)
    return Verdict(
        fired=True,
        witness=_poly_string(poly),
        likelihood=1.0,
        details={"polynomial": poly},
    )


def screen_known_constants(
    value, constants: tuple[str, ...], cfg: IdentifierConfig
) -> Verdict:
    return _test_kci([value], constants, cfg)


# ---------------------------------------------------------------------------
# the full battery


def run_all(
    family: LimitFamily,
    cfg: IdentifierConfig | None = None,
    *,
    kci_constants: tuple[str, ...] | None = None,
) -> TestReport:
    """Run the ten tests in order with gating; pure in (family, config)."""
    cfg = cfg or IdentifierConfig()
    constants = kci_constants if kci_constants is not None else (
        cfg.kci_constants
    )
    morph = family.values[:10]

    def guarded(fn, *args) -> Verdict:
        try:
            return fn(*args)
        except Exception as exc:  # noqa: BLE001 - aggregate, never abort
            return Verdict(fired=False, errors=(f"{type(exc).__name__}: {exc}",))

    rationals = []
    try:
        rationals = rational_limit_points(morph, cfg)
    except Exception as exc:  # noqa: BLE001
        rationals = [None] * len(morph)
        rni = Verdict(fired=False, errors=(f"{type(exc).__name__}: {exc}",))
    else:
        rni = guarded(_test_rni, morph, rationals, cfg)

    verdicts = {
        "RNI": rni,
        "ANI": guarded(_test_ani, morph, rationals, cfg),
        "CPI": guarded(_test_cpi, morph, rationals, cfg),
        "CEI": guarded(_test_cei, morph, rationals, cfg),
        "KCI": guarded(_test_kci, morph, constants, cfg),
        "RFP": guarded(_test_rfp, family, cfg),
        "EFP": guarded(_fit_exponential, family, cfg, False),
        "IEP": guarded(_fit_exponential, family, cfg, True),
        "PCP": guarded(_fit_power_or_root, family, cfg, False),
        "RCP": guarded(_fit_power_or_root, family, cfg, True),
    }
    return TestReport(verdicts={k: verdicts[k] for k in TEST_ORDER})
