"""Sweep driver: enumerate parameter assignments, evaluate, test, record.

A Query binds continued-fraction schedule *templates* (slot entries may be
tags like "$u0") to a SearchSpace per tag.  One tag is the serial axis: its
values index the members of each limit family.  The driver walks the other
tags' spaces coarse-to-fine, evaluates the family limits in batches of ten
serial values, runs the identification battery on each batch, and emits one
self-contained ConjectureRecord per family member whenever at least one test
fires.

Refinement gating: a finer stage of the non-serial spaces is entered only if
the immediately coarser stage produced at least one fired record.  The serial
axis is exempt — it is the family index, not a searched parameter — so its
stages are flattened up front.

Failed or non-convergent evaluations are recorded (on the batch's records and
in the optional failure sink) and skipped; they never abort a sweep.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from pathlib import Path

from mpmath import mp

from .cfrac import AUTO_DEPTH_CAP, FractionSchedule, eval_cfrac_auto
from .constants import KNOWN_CONSTANTS
from .identifier import (
    DEFAULT_KCI_SUBSET,
    IdentifierConfig,
    LimitFamily,
    TestReport,
    run_all,
)
from .progressions import CyclicSequence, SearchSpace, iterate_space

BATCH = 10  # family members per identification run


class QueryError(ValueError):
    """A query file or template that cannot be run as written."""


# --------------------------------------------------------------- templates


def _walk_tags(node, found: set[str]) -> None:
    if isinstance(node, str) and node.startswith("$"):
        found.add(node[1:])
    elif isinstance(node, (list, tuple)):
        for item in node:
            _walk_tags(item, found)
    elif isinstance(node, dict):
        for item in node.values():
            _walk_tags(item, found)


def template_tags(template: dict) -> set[str]:
    """Names of all $-tagged positions in a schedule template."""
    found: set[str] = set()
    _walk_tags(template, found)
    return found


def _subst(node, assignment: Mapping[str, Fraction]):
    if isinstance(node, str) and node.startswith("$"):
        name = node[1:]
        if name not in assignment:
            raise QueryError(f"tag ${name} has no assigned value")
        return str(assignment[name])
    if isinstance(node, (list, tuple)):
        return [_subst(item, assignment) for item in node]
    if isinstance(node, dict):
        return {k: _subst(v, assignment) for k, v in node.items()}
    return node


def _force_exponents(slots: list) -> None:
    # six-entry progression specs carry integer exponents at positions 3, 5;
    # a tag resolved to a non-integer there is a query error, not a crash
    for spec in slots:
        if isinstance(spec, list) and len(spec) == 6:
            for pos in (3, 5):
                f = Fraction(spec[pos])
                if f.denominator != 1:
                    raise QueryError(
                        f"exponent slot got non-integer value {spec[pos]}"
                    )
                spec[pos] = int(f)


def resolve_sequence(
    template: dict, assignment: Mapping[str, Fraction]
) -> CyclicSequence:
    """Fill a template's tags from an assignment and build the sequence."""
    filled = _subst(template, assignment)
    _force_exponents(filled.get("slots", []))
    return CyclicSequence.from_dict(filled)


# ------------------------------------------------------------------- query


@dataclass(frozen=True)
class Query:
    """One mining job: tagged schedules, spaces, and evaluation settings."""

    name: str
    head: Fraction
    numerators: dict
    denominators: dict
    spaces: dict[str, SearchSpace]
    serial: str
    kci_constants: tuple[str, ...] = DEFAULT_KCI_SUBSET
    target_digits: int = 20
    depth_cap: int = AUTO_DEPTH_CAP

    def __post_init__(self) -> None:
        object.__setattr__(self, "head", Fraction(self.head))
        tags = template_tags(self.numerators) | template_tags(
            self.denominators
        )
        declared = set(self.spaces)
        if tags != declared:
            raise QueryError(
                f"tagged slots {sorted(tags)} do not match declared spaces "
                f"{sorted(declared)}"
            )
        if self.serial not in self.spaces:
            raise QueryError(f"serial slot {self.serial!r} has no space")
        unknown = [c for c in self.kci_constants if c not in KNOWN_CONSTANTS]
        if unknown:
            raise QueryError(f"unknown constants in kci_constants: {unknown}")
        if self.target_digits < 1:
            raise QueryError("target_digits must be >= 1")
        if self.depth_cap < 2:
            raise QueryError("depth_cap must be >= 2")

    def schedule_for(
        self, assignment: Mapping[str, Fraction]
    ) -> FractionSchedule:
        return FractionSchedule(
            head=self.head,
            numerators=resolve_sequence(self.numerators, assignment),
            denominators=resolve_sequence(self.denominators, assignment),
        )

    @classmethod
    def from_dict(cls, d: dict) -> Query:
        try:
            ev = d.get("eval", {})
            return cls(
                name=d["name"],
                head=Fraction(d.get("head", 0)),
                numerators=d["numerators"],
                denominators=d["denominators"],
                spaces={
                    k: SearchSpace.from_spec(v)
                    for k, v in d["spaces"].items()
                },
                serial=d["serial"],
                kci_constants=tuple(
                    d.get("kci_constants", DEFAULT_KCI_SUBSET)
                ),
                target_digits=int(ev.get("target_digits", 20)),
                depth_cap=int(ev.get("depth_cap", AUTO_DEPTH_CAP)),
            )
        except KeyError as exc:
            raise QueryError(f"query is missing required field {exc}") from None

    @classmethod
    def load(cls, path: str | Path) -> Query:
        text = Path(path).read_text()
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise QueryError(f"{path}: not valid JSON: {exc}") from None


# ------------------------------------------------------------------ records


@dataclass(frozen=True)
class ConjectureRecord:
    """One family member of one fired sweep batch; self-contained.

    The resolved schedule and depth travel with the record, so re-evaluating
    the limit requires nothing beyond the record itself.  Timestamps are
    excluded from equality: two runs of the same sweep produce equal records.
    """

    query: str
    assignment: dict[str, str]
    schedule: dict
    limit: str
    depth: int
    converged: bool
    report: dict
    witnesses: dict[str, str]
    identity: list | None
    failures: tuple[str, ...]
    config_hash: str
    timestamp: str = field(compare=False, default="")

    def as_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["failures"] = list(self.failures)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> ConjectureRecord:
        return cls(
            query=d["query"],
            assignment=dict(d["assignment"]),
            schedule=d["schedule"],
            limit=d["limit"],
            depth=int(d["depth"]),
            converged=bool(d["converged"]),
            report=d["report"],
            witnesses=dict(d["witnesses"]),
            identity=d["identity"],
            failures=tuple(d["failures"]),
            config_hash=d["config_hash"],
            timestamp=d.get("timestamp", ""),
        )


def _now() -> str:
    from datetime import datetime, timezone

    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def config_digest(query: Query, cfg: IdentifierConfig) -> str:
    """Stable fingerprint of everything that influences a sweep's verdicts."""
    blob = {
        "config": dataclasses.asdict(cfg),
        "eval": {
            "target_digits": query.target_digits,
            "depth_cap": query.depth_cap,
        },
        "kci": list(query.kci_constants),
    }
    return hashlib.sha256(
        json.dumps(blob, sort_keys=True).encode()
    ).hexdigest()[:16]


def _report_dict(report: TestReport) -> dict:
    return {
        name: {
            "fired": v.fired,
            "witness": v.witness,
            "likelihood": v.likelihood,
            "errors": list(v.errors),
        }
        for name, v in report.verdicts.items()
    }


def _primitive(coeffs: Iterable[int]) -> list[int]:
    cs = list(coeffs)
    g = 0
    for c in cs:
        g = gcd(g, abs(c))
    if g > 1:
        cs = [c // g for c in cs]
    for c in cs:
        if c:
            return cs if c > 0 else [-x for x in cs]
    return cs


def _identity_for(index: int, report: TestReport) -> list | None:
    """Dedup key for one family member, from the battery's point-level finds.

    Rational value, minimal polynomial (already sign-normalized), or known-
    constant combination (normalized to primitive coefficients), whichever
    the battery established for this member; None when it only participated
    in family-level fits.
    """
    for i, r in report.verdicts["RNI"].details.get("points", []):
        if i == index:
            return ["rational", str(Fraction(r))]
    for i, poly in report.verdicts["ANI"].details.get("points", []):
        if i == index:
            return ["minpoly", list(poly)]
    kci = report.verdicts["KCI"].details
    if kci.get("point") == index:
        return [
            "combo",
            list(kci["constants"]),
            _primitive(kci["coefficients"]),
        ]
    return None


# ------------------------------------------------------------------ explore


def explore(
    query: Query,
    budget: int,
    cfg: IdentifierConfig | None = None,
    *,
    failure_sink: list[str] | None = None,
) -> Iterator[ConjectureRecord]:
    """Run the sweep; yield records for every batch where a test fired.

    ``budget`` caps the number of (assignment, serial value) evaluations
    attempted.  Deterministic: same query, budget and config produce the same
    records in the same order (timestamps aside).
    """
    cfg = cfg or IdentifierConfig()
    if query.target_digits > cfg.working.scale:
        raise QueryError(
            f"target_digits {query.target_digits} exceeds the working "
            f"context's trusted scale {cfg.working.scale}"
        )
    digest = config_digest(query, cfg)
    serial_values = query.spaces[query.serial].all_values()
    others = {n: s for n, s in query.spaces.items() if n != query.serial}
    used = 0
    fired_stages: set[int] = set()
    for stage, assignment in iterate_space(others):
        if stage > 0 and (stage - 1) not in fired_stages:
            return  # the coarser stage found nothing; don't refine
        for lo in range(0, len(serial_values) - BATCH + 1, BATCH):
            batch = serial_values[lo : lo + BATCH]
            if used + len(batch) > budget:
                return
            used += len(batch)
            members: list[tuple[Fraction, FractionSchedule, object]] = []
            failures: list[str] = []
            for v in batch:
                full = dict(assignment)
                full[query.serial] = v
                label = f"{query.serial}={v}"
                try:
                    sched = query.schedule_for(full)
                    est = eval_cfrac_auto(
                        sched,
                        cfg.working,
                        target_digits=query.target_digits,
                        depth_cap=query.depth_cap,
                    )
                except Exception as exc:  # noqa: BLE001 - record and move on
                    failures.append(f"{label}: {type(exc).__name__}: {exc}")
                    continue
                if not est.converged:
                    failures.append(
                        f"{label}: not converged by depth {est.depth}"
                    )
                    continue
                members.append((v, sched, est))
            if failure_sink is not None:
                failure_sink.extend(failures)
            if len(members) < BATCH:
                continue  # the battery needs a full family
            family = LimitFamily(
                values=tuple(est.value for _, _, est in members),
                regressor=tuple(v for v, _, _ in members),
                varied_slot=query.serial,
                label=query.name,
            )
            report = run_all(family, cfg, kci_constants=query.kci_constants)
            if not report.fired_names():
                continue
            fired_stages.add(stage)
            rep_dict = _report_dict(report)
            witnesses = {
                n: report.verdicts[n].witness for n in report.fired_names()
            }
            stamp = _now()
            for index, (v, sched, est) in enumerate(members):
                full = dict(assignment)
                full[query.serial] = v
                with cfg.working.workdps():
                    limit = mp.nstr(
                        est.value,
                        cfg.working.decimal_digits,
                        strip_zeros=False,
                    )
                yield ConjectureRecord(
                    query=query.name,
                    assignment={k: str(f) for k, f in sorted(full.items())},
                    schedule={
                        "head": str(query.head),
                        "numerators": sched.numerators.as_dict(),
                        "denominators": sched.denominators.as_dict(),
                    },
                    limit=limit,
                    depth=est.depth,
                    converged=est.converged,
                    report=rep_dict,
                    witnesses=witnesses,
                    identity=_identity_for(index, report),
                    failures=tuple(failures),
                    config_hash=digest,
                    timestamp=stamp,
                )


# -------------------------------------------------------------------- dedup


def dedup(records: Iterable[ConjectureRecord]) -> list[ConjectureRecord]:
    """Drop records re-witnessing an earlier record's find; keep order.

    Two records are the same find when their identities agree: the same
    rational, the same minimal polynomial (sign already normalized), or the
    same constant combination (coefficients already scaled primitive).
    Records without a point-level identity are never merged.
    """
    out: list[ConjectureRecord] = []
    seen: set[str] = set()
    for rec in records:
        if rec.identity is not None:
            key = json.dumps(rec.identity, sort_keys=True)
            if key in seen:
                continue
            seen.add(key)
        out.append(rec)
    return out


# ------------------------------------------------------------------ persist


def persist(records: Iterable[ConjectureRecord], path: str | Path) -> int:
    """Append records to a line-delimited file; returns how many were written."""
    n = 0
    with open(path, "a", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec.as_dict(), sort_keys=True))
            fh.write("\n")
            n += 1
    return n


def load(path: str | Path) -> list[ConjectureRecord]:
    """Read records back; bit-exact (limits are stored as decimal strings)."""
    out: list[ConjectureRecord] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                out.append(ConjectureRecord.from_dict(json.loads(line)))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ValueError(
                    f"{path}: line {lineno}: malformed record ({exc})"
                ) from None
    return out
