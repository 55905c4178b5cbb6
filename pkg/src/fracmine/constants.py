"""Library of named mathematical constants used by the identification tests.

Names are short strings ("pi^2", "G", "ln2", ...) so they can travel through
JSON configs and CLI flags.  Values are computed fresh at whatever precision
the caller's context requests — nothing is cached at a fixed precision.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence

from mpmath import mp, mpf

from .precision import PrecisionContext

_BUILDERS: dict[str, Callable[[], mpf]] = {
    "1": lambda: mpf(1),
    "sqrt_pi": lambda: mp.sqrt(mp.pi),
    "pi": lambda: +mp.pi,
    "pi^2": lambda: mp.pi**2,
    "pi^3": lambda: mp.pi**3,
    "zeta3": lambda: mp.zeta(3),
    "zeta5": lambda: mp.zeta(5),
    "zeta7": lambda: mp.zeta(7),
    "sqrt_e": lambda: mp.exp(mpf(1) / 2),
    "e": lambda: +mp.e,
    "e^2": lambda: mp.exp(2),
    "e^3": lambda: mp.exp(3),
    "phi^2": lambda: mp.phi**2,
    "gamma": lambda: +mp.euler,
    "G": lambda: +mp.catalan,
    "ln2": lambda: mp.log(2),
    "ln3": lambda: mp.log(3),
    "ln5": lambda: mp.log(5),
}

#: Canonical ordering of the library; lattice columns follow this order.
KNOWN_CONSTANTS: tuple[str, ...] = tuple(_BUILDERS)


def constant_value(name: str, ctx: PrecisionContext) -> mpf:
    """Value of a library constant at the context's precision."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise KeyError(
            f"unknown constant {name!r}; known: {', '.join(KNOWN_CONSTANTS)}"
        ) from None
    with ctx.workdps():
        return builder()


def library_values(names: Sequence[str], ctx: PrecisionContext) -> dict[str, mpf]:
    """Ordered name -> value mapping at the context's working precision."""
    return {n: constant_value(n, ctx) for n in names}
