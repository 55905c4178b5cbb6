"""Reproduction scenarios: each evaluates a known fraction or series family
from scratch and checks the outcome against its pinned expectations.

Every scenario is a callable taking an optional depth override and
returning a CaseResult; CASES maps the public scenario names onto them.
"""

from __future__ import annotations

from . import catalan, cloitre, epi, expk, polyroot
from .core import CaseResult

CASES = {
    "epi": epi.run,
    "polyroot": polyroot.run,
    "expk": expk.run,
    "catalan-u1": catalan.run_u1,
    "catalan-u3": catalan.run_u3,
    "catalan-misc": catalan.run_misc,
    "numerator-variation": catalan.run_numerator_variation,
    "cloitre": cloitre.run,
}


def run_case(name: str, depth: int | None = None) -> CaseResult:
    if name not in CASES:
        known = ", ".join(sorted(CASES))
        raise KeyError(f"unknown case {name!r}; known cases: {known}")
    return CASES[name](depth)


__all__ = ["CASES", "CaseResult", "run_case"]
