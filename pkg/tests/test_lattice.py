"""Lattice reduction and the relation finders built on it.

Where a second, independent route exists (sympy's Hermite normal form,
mpmath's pslq, brute-force enumeration) the tests take it, so a bug in the
reduction can't certify itself.
"""

import random
from fractions import Fraction
from math import gcd

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpf, pslq
from sympy.matrices.normalforms import hermite_normal_form

from fracmine.constants import library_values
from fracmine.lattice import (
    DegenerateBasisError,
    find_constant_combination,
    find_integer_relation,
    find_simultaneous_relation,
    lll_reduce,
    minimal_polynomial,
)
from fracmine.precision import PrecisionContext

CTX = PrecisionContext(50, 10)


def row_lattice_hnf(rows):
    # sympy canonicalizes the *column* lattice, hence the transpose
    return hermite_normal_form(sympy.Matrix(rows).T)


def primitive(vec):
    g = 0
    for c in vec:
        g = gcd(g, abs(c))
    out = [c // g for c in vec]
    for c in out:
        if c:
            return tuple(out) if c > 0 else tuple(-x for x in out)
    raise AssertionError("zero vector")


# ---------------------------------------------------------------- lll_reduce


def test_reduce_known_basis():
    reduced = lll_reduce([[201, 37], [1648, 297]])
    assert reduced == [[1, 32], [40, 1]]
    # brute force confirms (1, 32) is a shortest nonzero lattice vector
    best = min(
        (u * 201 + v * 1648) ** 2 + (u * 37 + v * 297) ** 2
        for u in range(-60, 61)
        for v in range(-60, 61)
        if (u, v) != (0, 0)
    )
    assert reduced[0][0] ** 2 + reduced[0][1] ** 2 == best


def test_reduce_preserves_lattice_on_random_bases():
    rng = random.Random(7)
    for _ in range(100):
        n = rng.randint(2, 5)
        while True:
            basis = [
                [rng.randint(-30, 30) for _ in range(n)] for _ in range(n)
            ]
            if sympy.Matrix(basis).det() != 0:
                break
        reduced = lll_reduce(basis)
        assert row_lattice_hnf(reduced) == row_lattice_hnf(basis)


def test_reduce_rejects_dependent_rows():
    with pytest.raises(DegenerateBasisError):
        lll_reduce([[1, 2], [2, 4]])


def test_reduce_rejects_ragged_input():
    with pytest.raises(ValueError):
        lll_reduce([[1, 2], [3]])


def test_reduce_empty_basis():
    assert lll_reduce([]) == []


# ----------------------------------------------------- find_integer_relation


def test_relation_on_planted_triple():
    with CTX.workdps():
        values = [mpf(1), mp.sqrt(2), mpf(2)]
    rel = find_integer_relation(values, CTX)
    assert rel.coefficients == (2, 0, -1)
    assert rel.support == (0, 2)
    assert rel.residual < mpf(10) ** -CTX.scale * 2


def test_no_relation_between_one_and_sqrt2():
    with CTX.workdps():
        values = [mpf(1), mp.sqrt(2)]
    assert find_integer_relation(values, CTX) is None


def test_relation_input_validation():
    with CTX.workdps():
        one = mpf(1)
    with pytest.raises(ValueError):
        find_integer_relation([one], CTX)
    with pytest.raises(ValueError):
        find_integer_relation([one] * 21, CTX)
    with pytest.raises(ValueError):
        find_integer_relation([one, one], CTX, scale=9)


def test_planted_relations_match_pslq():
    rng = random.Random(11)
    with CTX.workdps():
        roots = [mp.sqrt(2), mp.sqrt(3), mp.sqrt(5)]
        for _ in range(20):
            c = [rng.randint(-9, 9) for _ in range(3)]
            c3 = rng.choice([1, 2, 3, -1, -2])
            if not any(c):
                c[0] = 1
            planted = c + [c3]
            w = -(c[0] * roots[0] + c[1] * roots[1] + c[2] * roots[2]) / c3
            values = roots + [w]
            rel = find_integer_relation(values, CTX)
            assert rel is not None
            assert rel.coefficients == primitive(planted)
            other = pslq(values, tol=mpf(10) ** -CTX.scale, maxcoeff=10**6)
            assert primitive(other) == rel.coefficients


# ------------------------------------------------ find_simultaneous_relation


def test_simultaneous_relation_shared_across_columns():
    # +mp.pi forces the lazy constant into an mpf at the working precision;
    # the bare constant object would rematerialize at whatever precision the
    # finder's exact-residual check happens to read it at
    with CTX.workdps():
        col_a = [mp.sqrt(2), (mp.sqrt(2) + mp.sqrt(3)) / 2, mp.sqrt(3)]
        col_b = [+mp.pi, (mp.pi + mp.e) / 2, +mp.e]
    rel = find_simultaneous_relation([col_a, col_b], CTX)
    assert rel.coefficients == (1, -2, 1)


def test_simultaneous_relation_requires_a_common_kill():
    # each column has its own relation but they share none
    with CTX.workdps():
        col_a = [mp.sqrt(2), 2 * mp.sqrt(2), mp.sqrt(3)]
        col_b = [+mp.pi, +mp.e, 2 * mp.e]
    assert find_simultaneous_relation([col_a, col_b], CTX) is None


def test_simultaneous_relation_rejects_ragged_columns():
    with CTX.workdps():
        one = mpf(1)
    with pytest.raises(ValueError):
        find_simultaneous_relation([[one, one], [one]], CTX)


# ------------------------------------------------- find_constant_combination


def test_combination_recovers_log_ratio():
    lib = library_values(("1", "pi", "ln2"), CTX)
    with CTX.workdps():
        q = 6 * mp.log(2) / mp.pi
    hit = find_constant_combination(q, lib, CTX)
    assert hit is not None
    rel, eq = hit
    assert eq == "q*pi - 6*ln2 = 0"


def test_combination_ignores_plain_rationals():
    # q = 5 only touches the constant 1; that's rationality, not a combination
    lib = library_values(("1", "pi", "ln2"), CTX)
    assert find_constant_combination(mpf(5), lib, CTX) is None


def test_combination_with_catalan_shift():
    lib = library_values(("1", "G"), CTX)
    with CTX.workdps():
        q = 1 - mp.catalan
    hit = find_constant_combination(q, lib, CTX)
    assert hit is not None
    assert hit[1] == "q - 1 + G = 0"


def test_combination_requires_constants():
    with pytest.raises(ValueError):
        find_constant_combination(mpf(2), {}, CTX)


# ------------------------------------------------------- minimal_polynomial


@pytest.mark.parametrize(
    "value,coeffs",
    [
        (2, [-2, 1]),
        ("1/phi", [-1, 1, 1]),
        ("sqrt(2/3)", [-2, 0, 3]),
    ],
)
def test_minimal_polynomial_known_algebraics(value, coeffs):
    with CTX.workdps():
        if value == "1/phi":
            x = 2 / (1 + mp.sqrt(5))
        elif value == "sqrt(2/3)":
            x = mp.sqrt(mpf(2) / 3)
        else:
            x = mpf(value)
    assert minimal_polynomial(x, CTX) == coeffs


def test_minimal_polynomial_gives_up_on_pi():
    assert minimal_polynomial(mp.pi, CTX, max_degree=3) is None


def test_near_zero_value_is_not_called_a_root():
    # every monomial annihilates a value this small; reporting "x is a root
    # of x" would be content-free, so nothing should be reported at all
    ctx = PrecisionContext(30, 20)
    assert minimal_polynomial(mpf("1e-35"), ctx) is None


@settings(deadline=None, max_examples=25)
@given(
    a=st.integers(1, 8),
    b=st.integers(-8, 8),
    c=st.integers(-8, 8),
)
def test_minimal_polynomial_on_planted_quadratics(a, b, c):
    disc = b * b - 4 * a * c
    if disc <= 0 or sympy.sqrt(disc).is_rational:
        return
    with CTX.workdps():
        x = (-b + mp.sqrt(disc)) / (2 * a)
    g = gcd(gcd(abs(a), abs(b)), abs(c))
    expected = [c // g, b // g, a // g]  # leading entry a > 0 by construction
    assert minimal_polynomial(x, CTX, max_degree=4) == expected
