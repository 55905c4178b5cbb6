"""The rational screen's stop-reason semantics, and Farey generation."""

from fractions import Fraction

from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf

from fracmine.precision import PrecisionContext, from_fraction
from fracmine.rationality import farey, rationality_screen

DET = PrecisionContext(30, 20)  # trusts 10 digits
WORK = PrecisionContext(50, 10)  # trusts 40


def test_simple_rational():
    with mp.workdps(30):
        x = mpf(1) / 2
    assert rationality_screen(x, DET) == Fraction(1, 2)


def test_rational_plus_rounding_residue_fires():
    # 18 + 1.9e-11: quotient after the convergent 18 is ~5e10 > cutoff
    with mp.workdps(50):
        x = mpf(18) + mpf("1.9e-11")
    assert rationality_screen(x, DET) == 18


def test_irrational_walks_out_of_room():
    # pi has convergents within the detection tolerance (q ~ 8e7 gives
    # error ~1e-16), but the expansion never *ends*, so no candidate.
    with mp.workdps(50):
        assert rationality_screen(mp.pi, DET) is None
        assert rationality_screen(mp.catalan, DET) is None


def test_candidate_must_also_meet_tolerance():
    # ends naturally at 1/3 + 1e-8 only if the quotient cutoff is crossed;
    # with a small cutoff the candidate appears but misses the tolerance
    with mp.workdps(30):
        x = mpf(1) / 3 + mpf("1e-8")
    assert rationality_screen(x, DET, quotient_cutoff=10**6) is None


def test_huge_integer_part_is_not_a_stop_signature():
    # the *first* quotient may legitimately be enormous (a big integer part)
    with mp.workdps(40):
        x = mpf(10) ** 12 + mp.sqrt(2)
    assert rationality_screen(x, DET) is None


def test_exact_binary_rational_terminates_naturally():
    with mp.workdps(30):
        x = mpf(3) / 8
    assert rationality_screen(x, WORK) == Fraction(3, 8)


@settings(max_examples=300, deadline=None)
@given(
    num=st.integers(min_value=-(10**6), max_value=10**6),
    den=st.integers(min_value=1, max_value=10**6),
)
def test_round_trip_recovers_every_modest_rational(num, den):
    fr = Fraction(num, den)
    x = from_fraction(fr, WORK)
    assert rationality_screen(x, WORK) == fr


def test_farey_order_five():
    assert farey(5) == [
        Fraction(0),
        Fraction(1, 5),
        Fraction(1, 4),
        Fraction(1, 3),
        Fraction(2, 5),
        Fraction(1, 2),
        Fraction(3, 5),
        Fraction(2, 3),
        Fraction(3, 4),
        Fraction(4, 5),
        Fraction(1),
    ]


def brute_farey(n):
    return sorted(
        {
            Fraction(p, q)
            for q in range(1, n + 1)
            for p in range(q + 1)
        }
    )


@given(st.integers(min_value=1, max_value=30))
def test_farey_matches_brute_force(n):
    assert farey(n) == brute_farey(n)


@given(st.integers(min_value=2, max_value=40))
def test_farey_neighbors_are_unimodular(n):
    seq = farey(n)
    for left, right in zip(seq, seq[1:]):
        assert (
            right.numerator * left.denominator
            - left.numerator * right.denominator
            == 1
        )
