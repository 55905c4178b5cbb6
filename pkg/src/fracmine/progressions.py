"""Parameterized rational term sequences feeding the fraction evaluator.

A Progression is the six-parameter shape

    mu(i) = poly_coeff * i**poly_power + (base + i*step)**power * ratio**i

with rational base/step/ratio/poly_coeff and small integer exponents.  It
covers arithmetic, geometric, polynomial and mixed term rules in one searchable
space.  The convention 0**0 = 1 applies throughout (Python's own).

A CyclicSequence deals such rules out over the levels of a continued fraction:
an optional literal prefix, then a cycle of slots where slot j at cycle number
i contributes its rule's value at i.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass, field
from fractions import Fraction

MAX_EXPONENT = 6

_NUMERIC = (int, str, Fraction)


def _as_fraction(v, what: str) -> Fraction:
    if isinstance(v, float):
        raise TypeError(
            f"{what} must be exact (int, string or Fraction); "
            f"floats are lossy: {v!r}"
        )
    try:
        return Fraction(v)
    except (ValueError, TypeError) as exc:
        raise TypeError(f"{what} must be rational, got {v!r}") from exc


@dataclass(frozen=True)
class Progression:
    """Six-parameter term rule; see module docstring for the formula."""

    base: Fraction
    step: Fraction
    ratio: Fraction
    power: int
    poly_coeff: Fraction
    poly_power: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "base", _as_fraction(self.base, "base"))
        object.__setattr__(self, "step", _as_fraction(self.step, "step"))
        object.__setattr__(self, "ratio", _as_fraction(self.ratio, "ratio"))
        object.__setattr__(
            self, "poly_coeff", _as_fraction(self.poly_coeff, "poly_coeff")
        )
        for name in ("power", "poly_power"):
            v = getattr(self, name)
            if not isinstance(v, int):
                raise TypeError(f"{name} must be an integer, got {v!r}")
            if abs(v) > MAX_EXPONENT:
                raise ValueError(f"|{name}| must be <= {MAX_EXPONENT}, got {v}")

    def value(self, i: int) -> Fraction:
        """Term value at cycle index i >= 0 (exact)."""
        if i < 0:
            raise ValueError(f"cycle index must be >= 0, got {i}")
        poly = self.poly_coeff * Fraction(i) ** self.poly_power
        geo = (self.base + i * self.step) ** self.power * self.ratio**i
        return poly + geo

    def as_list(self) -> list[str | int]:
        out: list[str | int] = []
        for v in (
            self.base,
            self.step,
            self.ratio,
            self.power,
            self.poly_coeff,
            self.poly_power,
        ):
            if isinstance(v, Fraction):
                out.append(int(v) if v.denominator == 1 else str(v))
            else:
                out.append(v)
        return out

    @classmethod
    def from_list(cls, spec) -> Progression:
        if len(spec) != 6:
            raise ValueError(f"expected 6 parameters, got {len(spec)}")
        base, step, ratio, power, poly_coeff, poly_power = spec
        return cls(
            base=_as_fraction(base, "base"),
            step=_as_fraction(step, "step"),
            ratio=_as_fraction(ratio, "ratio"),
            power=int(power),
            poly_coeff=_as_fraction(poly_coeff, "poly_coeff"),
            poly_power=int(poly_power),
        )


@dataclass(frozen=True)
class Literal:
    """A slot that deals the same rational at every cycle."""

    value_: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "value_", _as_fraction(self.value_, "literal"))

    def value(self, i: int) -> Fraction:
        return self.value_

    def as_list(self) -> list[str | int]:
        v = self.value_
        return ["lit", int(v) if v.denominator == 1 else str(v)]


Slot = Progression | Literal


def slot_from_spec(spec) -> Slot:
    """Parse a slot from its JSON shape: [6 params] or ["lit", value]."""
    if isinstance(spec, (int, str)):
        return Literal(_as_fraction(spec, "literal"))
    spec = list(spec)
    if spec and spec[0] == "lit":
        if len(spec) != 2:
            raise ValueError("literal slot takes exactly one value")
        return Literal(_as_fraction(spec[1], "literal"))
    return Progression.from_list(spec)


@dataclass(frozen=True)
class CyclicSequence:
    """Prefix of fixed rationals, then slot rules dealt cyclically.

    Level n (1-based) yields prefix[n-1] while the prefix lasts; after that,
    with k = n - 1 - len(prefix) and L slots, slot k % L is evaluated at cycle
    index (k + offset) // L.
    """

    slots: tuple[Slot, ...]
    prefix: tuple[Fraction, ...] = ()
    offset: int = 0

    def __post_init__(self) -> None:
        if not self.slots:
            raise ValueError("need at least one slot")
        object.__setattr__(
            self,
            "prefix",
            tuple(_as_fraction(p, "prefix entry") for p in self.prefix),
        )

    @property
    def period(self) -> int:
        return len(self.slots)

    def term(self, n: int) -> Fraction:
        if n < 1:
            raise ValueError(f"level must be >= 1, got {n}")
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        k = n - 1 - len(self.prefix)
        L = len(self.slots)
        return self.slots[k % L].value((k + self.offset) // L)

    def terms(self, depth: int) -> list[Fraction]:
        return [self.term(n) for n in range(1, depth + 1)]

    def as_dict(self) -> dict:
        d: dict = {"slots": [s.as_list() for s in self.slots]}
        if self.prefix:
            d["prefix"] = [
                int(p) if p.denominator == 1 else str(p) for p in self.prefix
            ]
        if self.offset:
            d["offset"] = self.offset
        return d

    @classmethod
    def from_dict(cls, d: dict) -> CyclicSequence:
        return cls(
            slots=tuple(slot_from_spec(s) for s in d["slots"]),
            prefix=tuple(
                _as_fraction(p, "prefix entry") for p in d.get("prefix", ())
            ),
            offset=int(d.get("offset", 0)),
        )


def complexity_ordered(values) -> list[Fraction]:
    """Sort rationals by how early a search should try them: |v| then v."""
    vals = [_as_fraction(v, "domain value") for v in values]
    vals.sort(key=lambda v: (abs(v), v))
    return vals


@dataclass(frozen=True)
class RationalGrid:
    """Inclusive arithmetic grid start, start+step, ..., up to stop."""

    start: Fraction
    stop: Fraction
    step: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "start", _as_fraction(self.start, "start"))
        object.__setattr__(self, "stop", _as_fraction(self.stop, "stop"))
        object.__setattr__(self, "step", _as_fraction(self.step, "step"))
        if self.step == 0:
            raise ValueError("step must be nonzero")

    def values(self) -> tuple[Fraction, ...]:
        out = []
        v = self.start
        if self.step > 0:
            while v <= self.stop:
                out.append(v)
                v += self.step
        else:
            while v >= self.stop:
                out.append(v)
                v += self.step
        return tuple(out)


@dataclass(frozen=True)
class ExplicitValues:
    """An irregular set of parameter values, given outright."""

    entries: tuple[Fraction, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "entries",
            tuple(_as_fraction(v, "domain value") for v in self.entries),
        )

    def values(self) -> tuple[Fraction, ...]:
        return self.entries


@dataclass(frozen=True)
class FareyBox:
    """All reduced fractions of denominator <= order on [0, scale].

    The finest refinement stage: after the fixed-step grids are exhausted, the
    Farey net reaches every small-denominator rational in the box.
    """

    order: int
    scale: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ValueError("order must be >= 1")
        object.__setattr__(self, "scale", _as_fraction(self.scale, "scale"))
        if self.scale <= 0:
            raise ValueError("scale must be positive")

    def values(self) -> tuple[Fraction, ...]:
        from .rationality import farey

        return tuple(self.scale * f for f in farey(self.order))


Domain = RationalGrid | ExplicitValues | FareyBox


def domain_from_spec(spec) -> Domain:
    """Parse a domain from JSON: {"grid": [a, b, step]}, {"values": [...]}
    or {"farey": [order, scale]}."""
    if isinstance(spec, dict):
        if "grid" in spec:
            a, b, s = spec["grid"]
            return RationalGrid(
                _as_fraction(a, "start"),
                _as_fraction(b, "stop"),
                _as_fraction(s, "step"),
            )
        if "values" in spec:
            return ExplicitValues(
                tuple(_as_fraction(v, "domain value") for v in spec["values"])
            )
        if "farey" in spec:
            order, scale = spec["farey"]
            return FareyBox(int(order), _as_fraction(scale, "scale"))
        raise ValueError(
            f"domain dict needs 'grid', 'values' or 'farey': {spec!r}"
        )
    return ExplicitValues(tuple(_as_fraction(v, "domain value") for v in spec))


@dataclass(frozen=True)
class SearchSpace:
    """Coarse-to-fine refinement stages for one searched parameter.

    Stage 0 is typically an integer grid; later stages add 1/6 and 1/30
    grids, then a Farey net.  Whether a later stage is *entered* at all is
    the caller's decision (the explorer only refines a parameter whose
    coarser values already produced a hit).
    """

    stages: tuple[Domain, ...]

    def __post_init__(self) -> None:
        if not self.stages:
            raise ValueError("need at least one stage")

    @property
    def depth(self) -> int:
        return len(self.stages)

    def cumulative(self, stage: int) -> list[Fraction]:
        """All values of stages 0..stage, deduplicated, in complexity order."""
        if stage < 0:
            raise ValueError("stage must be >= 0")
        merged: set[Fraction] = set()
        for s in self.stages[: stage + 1]:
            merged.update(s.values())
        return complexity_ordered(merged)

    def all_values(self) -> list[Fraction]:
        return self.cumulative(self.depth - 1)

    @classmethod
    def from_spec(cls, spec) -> SearchSpace:
        """{"stages": [domain, ...]} or a bare single-stage domain spec."""
        if isinstance(spec, dict) and "stages" in spec:
            return cls(tuple(domain_from_spec(d) for d in spec["stages"]))
        return cls((domain_from_spec(spec),))


def iterate_space(spaces) -> Iterator[tuple[int, dict[str, Fraction]]]:
    """Yield (stage, assignment) over the product of named search spaces.

    Coarser stages come first and assignments already seen at a coarser
    stage are not repeated.  Within a stage the order is deterministic:
    slots sorted by name, each slot's values in complexity order, product
    in lexicographic order.  An empty mapping yields the single empty
    assignment (a query whose only tag is its serial axis still has one
    sweep to run).
    """
    from itertools import product

    names = sorted(spaces)
    if not names:
        yield 0, {}
        return
    depth = max(spaces[n].depth for n in names)
    seen: set[tuple[Fraction, ...]] = set()
    for stage in range(depth):
        per_slot = [
            spaces[n].cumulative(min(stage, spaces[n].depth - 1))
            for n in names
        ]
        for combo in product(*per_slot):
            if combo in seen:
                continue
            seen.add(combo)
            yield stage, dict(zip(names, combo))
