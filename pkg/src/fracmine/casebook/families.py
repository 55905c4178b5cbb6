"""Live limit families for the five benchmark scenarios, battery-ready.

Each builder re-evaluates its fractions (or series) from scratch at the
requested working precision and returns a LimitFamily the ten-test battery
can consume; family_config supplies the matching IdentifierConfig (constant
subsets, precision contexts, coefficient bounds).  Builders are cached per
precision context — families are deterministic, so one evaluation per
context is enough.
"""

from __future__ import annotations

from dataclasses import replace
from fractions import Fraction
from functools import lru_cache

from ..cfrac import eval_cfrac, eval_cfrac_richardson
from ..identifier import IdentifierConfig, LimitFamily
from ..precision import PrecisionContext
from .catalan import CATALAN_CTX, _u1_base_depth, catalan_schedule
from .cloitre import ROWS as CLOITRE_ROWS
from .cloitre import series_sum
from .epi import epi_schedule
from .expk import exp_kappa_schedule
from .polyroot import surd_schedule

WORKING = PrecisionContext(50, 10)

# the half-integer κ window the battery looks at (the full sweep is wider)
FAMILY_KAPPAS = tuple(
    Fraction(k, 2) for k in range(-4, 7) if k != 0
)

FAMILY_NAMES = ("epi", "polyroot", "expk", "catalan", "cloitre")

_CONFIG_BASE = {
    "epi": {},
    "polyroot": {},
    "expk": {"kci_constants": ("1", "pi")},
    "catalan": {
        "working": CATALAN_CTX,
        "detection": CATALAN_CTX,
        "ani_coeff_bound": 10,
        "kci_constants": ("1", "G"),
    },
    "cloitre": {"kci_constants": ("1", "pi", "pi^2", "pi^3")},
}


def family_config(
    name: str, working: PrecisionContext | None = None
) -> IdentifierConfig:
    if name not in _CONFIG_BASE:
        raise KeyError(f"no such family: {name!r}")
    cfg = IdentifierConfig(**_CONFIG_BASE[name])
    if working is not None and name != "catalan":
        cfg = replace(cfg, working=working)
    return cfg


@lru_cache(maxsize=None)
def epi_family(ctx: PrecisionContext = WORKING, depth: int = 2000) -> LimitFamily:
    vals, regs = [], []
    for u in range(7, 17):
        w = Fraction(4 * u * u)
        r = eval_cfrac(epi_schedule(w), depth, ctx)
        vals.append(r.value)
        regs.append(w)
    return LimitFamily(tuple(vals), tuple(regs), varied_slot="w", label="epi")


@lru_cache(maxsize=None)
def polyroot_family(
    ctx: PrecisionContext = WORKING, depth: int = 200
) -> LimitFamily:
    vals, regs = [], []
    for u in range(1, 11):
        r = eval_cfrac(surd_schedule(Fraction(u)), depth, ctx)
        vals.append(r.value)
        regs.append(Fraction(u))
    return LimitFamily(tuple(vals), tuple(regs), varied_slot="u", label="polyroot")


@lru_cache(maxsize=None)
def expk_family(
    ctx: PrecisionContext = WORKING, depth: int = 2000
) -> LimitFamily:
    vals, regs = [], []
    for k in FAMILY_KAPPAS:
        r = eval_cfrac(exp_kappa_schedule(k), depth, ctx)
        vals.append(r.value)
        regs.append(k)
    return LimitFamily(tuple(vals), tuple(regs), varied_slot="k", label="expk")


@lru_cache(maxsize=None)
def catalan_family(ctx: PrecisionContext = CATALAN_CTX) -> LimitFamily:
    vals, regs = [], []
    for i in range(1, 11):
        v = 4 * i * i - 1
        r = eval_cfrac_richardson(
            catalan_schedule(1, v),
            ctx,
            base_depth=_u1_base_depth(i),
            levels=5,
            first_order=2,
        )
        with ctx.workdps():
            vals.append(abs(r.value / (2 * v)))
        regs.append(Fraction(v))
    return LimitFamily(tuple(vals), tuple(regs), varied_slot="v", label="catalan")


@lru_cache(maxsize=None)
def cloitre_family(ctx: PrecisionContext = WORKING) -> LimitFamily:
    vals, regs = [], []
    for col1, col2, col3, _true_inv, group in CLOITRE_ROWS:
        if group != "i+j=2":
            continue
        i, j = col1 / col3, col2 / col3
        vals.append(series_sum(i, j, ctx))
        regs.append(i)
    return LimitFamily(tuple(vals), tuple(regs), varied_slot="i", label="cloitre")


_BUILDERS = {
    "epi": epi_family,
    "polyroot": polyroot_family,
    "expk": expk_family,
    "catalan": catalan_family,
    "cloitre": cloitre_family,
}


def build_family(
    name: str, ctx: PrecisionContext | None = None
) -> LimitFamily:
    if name not in _BUILDERS:
        raise KeyError(f"no such family: {name!r}")
    if name == "catalan":
        return catalan_family()  # pinned to its own context
    return _BUILDERS[name](ctx if ctx is not None else WORKING)
