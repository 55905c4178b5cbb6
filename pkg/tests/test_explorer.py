"""Sweep driver: tagged templates, refinement gating, records, persistence.

The end-to-end sweeps here use two cheap families.  The "near-even-integers"
query is a ten-member family whose limits sit a few parts in 10^9 above the
even integers 14..32; the tail members land inside the rationality screen's
tolerance while the early ones stay outside it, and a square-root model fits
the whole family.  The "quadratic-surds" query solves x^2 + c*x - u = 0, so
every member is either a small surd or (when c^2 + 4u is a perfect square) an
exact integer — handy for exercising dedup across refinement stages.
"""

from __future__ import annotations

import json
from fractions import Fraction

import pytest
from mpmath import mp

from fracmine.cfrac import FractionSchedule, eval_cfrac
from fracmine.explorer import (
    ConjectureRecord,
    Query,
    QueryError,
    _identity_for,
    config_digest,
    dedup,
    explore,
    load,
    persist,
    resolve_sequence,
    template_tags,
)
from fracmine.identifier import (
    DEFAULT_KCI_SUBSET,
    IdentifierConfig,
    TestReport as Report,
    Verdict,
)
from fracmine.progressions import CyclicSequence

NEAR_EVEN = {
    "name": "near-even-integers",
    "head": "1",
    "numerators": {"slots": [[1, 1, 1, 2, "$w", 0]]},
    "denominators": {"slots": [[3, 2, 1, 1, 0, 0]]},
    "spaces": {
        "w": {"values": [196, 256, 324, 400, 484, 576, 676, 784, 900, 1024]}
    },
    "serial": "w",
    "eval": {"target_digits": 20, "depth_cap": 1 << 14},
}


def surd_query(c_spec) -> Query:
    # x = u/(c + u/(c + ...)) solves x^2 + c*x - u = 0
    return Query.from_dict(
        {
            "name": "quadratic-surds",
            "head": "0",
            "numerators": {"slots": [["lit", "$u"]]},
            "denominators": {"slots": [["lit", "$c"]]},
            "spaces": {"u": {"values": list(range(1, 11))}, "c": c_spec},
            "serial": "u",
        }
    )


@pytest.fixture(scope="module")
def near_even_records():
    return list(explore(Query.from_dict(NEAR_EVEN), budget=100))


@pytest.fixture(scope="module")
def surd_records():
    q = surd_query({"stages": [{"values": [1]}, {"values": [2]}]})
    return list(explore(q, budget=100))


# ---------------------------------------------------------------- templates


def test_template_tags_are_found_at_any_nesting():
    t = {
        "slots": [[1, 1, 1, 2, "$w", 0], ["lit", "$c"]],
        "prefix": ["$p0"],
        "offset": 1,
    }
    assert template_tags(t) == {"w", "c", "p0"}
    assert template_tags({"slots": [[3, 2, 1, 1, 0, 0]]}) == set()


def test_resolve_sequence_substitutes_assigned_values():
    t = {"slots": [[1, 1, 1, 2, "$w", 0]]}
    seq = resolve_sequence(t, {"w": Fraction(196)})
    assert seq.term(1) == Fraction(197)  # 196 + 1^2
    assert seq.term(3) == Fraction(205)  # 196 + 3^2


def test_resolve_sequence_rejects_unassigned_tag():
    with pytest.raises(QueryError, match="no assigned value"):
        resolve_sequence({"slots": [["lit", "$c"]]}, {})


def test_resolve_sequence_rejects_fractional_exponent():
    # a tag may land in an exponent position, but only integers make sense
    t = {"slots": [[1, 1, 1, "$p", 0, 0]]}
    with pytest.raises(QueryError, match="non-integer"):
        resolve_sequence(t, {"p": Fraction(1, 2)})


# -------------------------------------------------------------------- query


def test_query_defaults_to_standard_constant_subset():
    q = Query.from_dict(NEAR_EVEN)
    assert q.kci_constants == DEFAULT_KCI_SUBSET
    assert q.head == Fraction(1)


def test_query_tags_must_match_declared_spaces():
    d = dict(NEAR_EVEN)
    d["spaces"] = {**NEAR_EVEN["spaces"], "z": {"values": [1]}}
    with pytest.raises(QueryError, match="do not match"):
        Query.from_dict(d)


def test_query_serial_slot_needs_a_space():
    d = dict(NEAR_EVEN)
    d["serial"] = "q"
    with pytest.raises(QueryError, match="has no space"):
        Query.from_dict(d)


def test_query_rejects_unknown_constant_names():
    d = {**NEAR_EVEN, "kci_constants": ["1", "feigenbaum"]}
    with pytest.raises(QueryError, match="unknown constants"):
        Query.from_dict(d)


def test_query_missing_field_is_a_query_error():
    d = dict(NEAR_EVEN)
    del d["serial"]
    with pytest.raises(QueryError, match="missing required field"):
        Query.from_dict(d)


def test_query_load_round_trips_through_json(tmp_path):
    p = tmp_path / "q.json"
    p.write_text(json.dumps(NEAR_EVEN))
    q = Query.load(p)
    assert q.name == "near-even-integers"
    assert q.target_digits == 20 and q.depth_cap == 1 << 14


def test_query_load_rejects_broken_json(tmp_path):
    p = tmp_path / "q.json"
    p.write_text("{not json")
    with pytest.raises(QueryError, match="not valid JSON"):
        Query.load(p)


# ---------------------------------------------------------------- sweeping


def test_sweep_emits_one_record_per_family_member(near_even_records):
    recs = near_even_records
    assert len(recs) == 10
    assert [r.assignment for r in recs] == [
        {"w": str(w)} for w in (196, 256, 324, 400, 484, 576, 676, 784, 900, 1024)
    ]
    assert all(r.converged and r.depth <= 1 << 14 for r in recs)
    assert len({r.config_hash for r in recs}) == 1


def test_sweep_fires_the_expected_tests(near_even_records):
    w = near_even_records[0].witnesses
    assert set(w) == {"RNI", "CPI", "CEI", "RCP"}
    assert w["RNI"] == (
        "Q2 = 18, Q3 = 20, Q4 = 22, Q5 = 24, Q6 = 26, "
        "Q7 = 28, Q8 = 30, Q9 = 32"
    )
    assert w["RCP"] == "Q = 1 * w^(1/2)"


def test_members_inside_screen_tolerance_get_rational_identities(
    near_even_records,
):
    # the first two limits are ~8e-9 and ~4e-10 away from 14 and 16 — real
    # irrationals, correctly left unidentified
    idents = [r.identity for r in near_even_records]
    assert idents[:2] == [None, None]
    assert idents[2:] == [["rational", str(n)] for n in range(18, 34, 2)]


def test_record_reverifies_offline(near_even_records):
    """A record alone suffices to recompute its limit digit-for-digit."""
    rec = near_even_records[3]
    sched = FractionSchedule(
        head=Fraction(rec.schedule["head"]),
        numerators=CyclicSequence.from_dict(rec.schedule["numerators"]),
        denominators=CyclicSequence.from_dict(rec.schedule["denominators"]),
    )
    ctx = IdentifierConfig().working
    redone = eval_cfrac(sched, rec.depth, ctx)
    with ctx.workdps():
        assert (
            mp.nstr(redone.value, ctx.decimal_digits, strip_zeros=False)
            == rec.limit
        )


def test_sweep_is_deterministic(near_even_records):
    again = list(explore(Query.from_dict(NEAR_EVEN), budget=100))
    assert again == near_even_records  # timestamps excluded from equality


def test_empty_space_yields_empty_stream():
    q = Query.from_dict({**NEAR_EVEN, "spaces": {"w": {"values": []}}})
    assert list(explore(q, budget=100)) == []


def test_budget_counts_attempted_evaluations():
    q = surd_query({"stages": [{"values": [1]}, {"values": [2]}]})
    assert len(list(explore(q, budget=9))) == 0  # can't afford one batch
    assert len(list(explore(q, budget=19))) == 10  # first stage only


def test_target_digits_beyond_working_scale_is_refused():
    q = Query.from_dict({**NEAR_EVEN, "eval": {"target_digits": 41}})
    with pytest.raises(QueryError, match="trusted scale"):
        list(explore(q, budget=10))


# ------------------------------------------------------- refinement gating


def test_finer_stage_runs_once_the_coarse_stage_fired(surd_records):
    recs = surd_records
    assert len(recs) == 20
    assert [r.assignment["c"] for r in recs] == ["1"] * 10 + ["2"] * 10
    assert recs[0].witnesses["ANI"] == "Q0 root of x^2 + x - 1 = 0"
    assert recs[10].witnesses["ANI"] == "Q0 root of x^2 + 2*x - 1 = 0"


def test_surd_members_carry_minimal_polynomial_identities(surd_records):
    # c=1, u=3: x^2 + x - 3; c=1, u=2 collapses to the integer 1
    assert surd_records[2].identity == ["minpoly", [-3, 1, 1]]
    assert surd_records[1].identity == ["rational", "1"]


def test_unfired_coarse_stage_blocks_refinement():
    # c=0 zeroes every denominator: all ten evaluations fail, nothing fires,
    # and the c=1 stage (which would fire) must never be entered
    q = surd_query({"stages": [{"values": [0]}, {"values": [1]}]})
    sink: list[str] = []
    recs = list(explore(q, budget=100, failure_sink=sink))
    assert recs == []
    assert len(sink) == 10
    assert sink[0].startswith("u=1: ZeroDenominatorError")


# ------------------------------------------------------------------- dedup


def make_record(name: str, identity) -> ConjectureRecord:
    return ConjectureRecord(
        query=name,
        assignment={"u": "1"},
        schedule={
            "head": "0",
            "numerators": {"slots": [["lit", "1"]]},
            "denominators": {"slots": [["lit", "1"]]},
        },
        limit="0.61803398874989484820458683436563811772030917980576",
        depth=64,
        converged=True,
        report={},
        witnesses={},
        identity=identity,
        failures=(),
        config_hash="0" * 16,
        timestamp="2026-01-01T00:00:00+00:00",
    )


def test_dedup_merges_equal_rationals():
    # 2/4 normalizes to 1/2 before it ever reaches a record
    a = make_record("a", ["rational", str(Fraction("2/4"))])
    b = make_record("b", ["rational", "1/2"])
    assert dedup([a, b]) == [a]


def test_dedup_merges_equal_polynomials_keeps_distinct_combos():
    a = make_record("a", ["minpoly", [-1, 1, 1]])
    b = make_record("b", ["minpoly", [-1, 1, 1]])
    g = make_record("g", ["combo", ["1", "G"], [1, -1]])
    p = make_record("p", ["combo", ["1", "pi"], [1, -1]])
    assert dedup([a, b, g, p]) == [a, g, p]


def test_dedup_never_merges_records_without_identities():
    a = make_record("a", None)
    b = make_record("b", None)
    assert dedup([a, b]) == [a, b]


def test_dedup_across_stages_drops_rational_refinds(surd_records):
    kept = dedup(surd_records)
    assert len(kept) == 18
    dropped = [r for r in surd_records if r not in kept]
    assert [(r.assignment["u"], r.identity) for r in dropped] == [
        ("3", ["rational", "1"]),
        ("8", ["rational", "2"]),
    ]


def test_identity_extraction_prefers_rational_over_combo():
    rep = Report(
        verdicts={
            "RNI": Verdict(fired=True, witness="Q1 = 2/4",
                           details={"points": [[1, "2/4"]]}),
            "ANI": Verdict(fired=False),
            "KCI": Verdict(fired=True, witness="Q1: ...",
                           details={"point": 1,
                                    "coefficients": [2, 0, -2, 2],
                                    "constants": ["1", "pi", "e"]}),
        }
    )
    assert _identity_for(1, rep) == ["rational", "1/2"]
    # the combo key is scaled primitive so 2q - 2e + 2 merges with q - e + 1
    rep.verdicts["RNI"] = Verdict(fired=False)
    assert _identity_for(1, rep) == ["combo", ["1", "pi", "e"], [1, 0, -1, 1]]
    assert _identity_for(0, rep) is None


# ----------------------------------------------------------- persistence


def test_persist_load_round_trip(tmp_path, surd_records):
    p = tmp_path / "records.jsonl"
    assert persist(surd_records, p) == 20
    assert load(p) == surd_records


def test_persist_is_append_only(tmp_path):
    p = tmp_path / "records.jsonl"
    batch = [make_record("a", None), make_record("b", ["rational", "1"])]
    persist(batch, p)
    persist(batch, p)
    assert load(p) == batch + batch


def test_load_of_empty_file_is_empty(tmp_path):
    p = tmp_path / "records.jsonl"
    p.write_text("")
    assert load(p) == []


def test_load_skips_blank_lines(tmp_path):
    p = tmp_path / "records.jsonl"
    rec = make_record("a", None)
    p.write_text(json.dumps(rec.as_dict()) + "\n\n" + json.dumps(rec.as_dict()) + "\n")
    assert load(p) == [rec, rec]


def test_load_names_the_malformed_line(tmp_path):
    p = tmp_path / "records.jsonl"
    p.write_text(json.dumps(make_record("a", None).as_dict()) + "\n{broken\n")
    with pytest.raises(ValueError, match="line 2"):
        load(p)


def test_load_flags_records_missing_fields(tmp_path):
    p = tmp_path / "records.jsonl"
    p.write_text('{"query": "a"}\n')
    with pytest.raises(ValueError, match="line 1: malformed record"):
        load(p)


# ----------------------------------------------------------------- digest


def test_config_digest_tracks_battery_settings():
    q = Query.from_dict(NEAR_EVEN)
    base = config_digest(q, IdentifierConfig())
    assert base == config_digest(q, IdentifierConfig())
    assert base != config_digest(q, IdentifierConfig(ani_coeff_bound=5))
    q2 = Query.from_dict({**NEAR_EVEN, "kci_constants": ["1", "G"]})
    assert base != config_digest(q2, IdentifierConfig())
