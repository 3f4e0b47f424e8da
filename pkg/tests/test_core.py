from fractions import Fraction
from math import prod
import threading

import pytest
from hypothesis import given, strategies as st

from absentminded.core import (
    HarmonicCache,
    Poly,
    bernoulli,
    complete_bell,
    double_factorial_odd,
    format_rational,
    harmonic,
    harmonic_bar,
    parse_rational,
    pochhammer_poly,
    rational_arith,
    stirling2,
    stirling2_row,
)
from absentminded.errors import DomainError

F = Fraction
rationals = st.fractions(max_denominator=10**6)


# --- rationals ---


def test_rational_examples():
    assert rational_arith(F(1, 2), F(1, 3), "add") == F(5, 6)
    assert rational_arith(F(5869, 1260), F(1260, 5869), "mul") == 1
    assert rational_arith(F(50293, 2100), F(5869, 1260), "sub") == F(60767, 3150)


def test_rational_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        rational_arith(F(1), F(0), "div")


def test_rational_unknown_op():
    with pytest.raises(ValueError):
        rational_arith(F(1), F(2), "pow")


@given(rationals)
def test_rational_string_roundtrip(x):
    assert parse_rational(format_rational(x)) == x


def test_rational_format_canonical():
    assert format_rational(F(4, 2)) == "2"
    assert format_rational(F(-3, 6)) == "-1/2"
    assert format_rational(F(0)) == "0"


# --- polynomials ---


def test_poly_examples():
    assert Poly([2, 0, 3]).derivative() == Poly([0, 6])
    assert (Poly([2, 0, 3, 1]).scale(F(1, 6))).eval_at(1) == 1
    assert Poly([1, -1]) * Poly([1, 1]) == Poly([1, 0, -1])


def test_poly_zero_degree():
    assert Poly([0, 0]).degree == -1
    assert Poly([]).is_zero()


@given(st.lists(rationals, max_size=6), st.lists(rationals, max_size=6), rationals)
def test_poly_ring_homomorphism(a, b, x):
    p, q = Poly(a), Poly(b)
    assert (p + q).eval_at(x) == p.eval_at(x) + q.eval_at(x)
    assert (p * q).eval_at(x) == p.eval_at(x) * q.eval_at(x)
    assert (p - q).eval_at(x) == p.eval_at(x) - q.eval_at(x)


@given(st.lists(st.integers(-50, 50), max_size=7), st.integers(-5, 5))
def test_poly_divmod_linear(coeffs, root):
    p = Poly(coeffs)
    q, rem = p.divmod_linear(root)
    assert rem == p.eval_at(root)
    assert q * Poly([-root, 1]) + Poly([rem]) == p


@given(st.lists(st.integers(-20, 20), max_size=6), st.integers(-4, 4), st.integers(-4, 4))
def test_poly_taylor_shift(coeffs, a, x):
    p = Poly(coeffs)
    assert p.taylor_shift(a).eval_at(x) == p.eval_at(x + a)


def test_poly_mul_linear_matches_product():
    p = Poly([1, 2, 3])
    assert p.mul_linear(4, 5) == p * Poly([4, 5])


# --- Pochhammer ---


def test_pochhammer_examples():
    assert pochhammer_poly(1, 0) == Poly([1])
    assert pochhammer_poly(1, 1) == Poly([2, 1])
    assert pochhammer_poly(1, 2) == Poly([6, 5, 1])


@given(st.integers(0, 6), st.integers(0, 12))
def test_pochhammer_at_one(r, length):
    assert pochhammer_poly(r, length).eval_at(1) == prod(range(r + 2, r + length + 2))


# --- Stirling numbers ---


def test_stirling_examples():
    assert stirling2(1, 1) == 1
    assert stirling2(3, 2) == 3
    assert stirling2(4, 2) == 7
    assert stirling2(0, 0) == 1
    assert stirling2(5, 0) == 0


def test_stirling_domain():
    with pytest.raises(DomainError):
        stirling2(2, 3)


@pytest.mark.parametrize("l", range(13))
def test_stirling_falling_factorial_expansion(l):
    # sum_r S(l, r) x (x-1)...(x-r+1) == x^l, as polynomials in x
    total = Poly([])
    for r, s in enumerate(stirling2_row(l)):
        fall = Poly([1])
        for i in range(r):
            fall = fall * Poly([-i, 1])
        total = total + fall.scale(s)
    assert total == Poly([0] * l + [1])


# --- harmonic numbers ---


def test_harmonic_examples():
    assert harmonic(1, 4) == F(25, 12)
    assert harmonic(2, 2) == F(5, 4)
    assert harmonic(1, 9) == F(7129, 2520)
    assert harmonic(3, 0) == 0
    assert harmonic_bar(1, 10) == harmonic(1, 9)


@given(st.integers(1, 5), st.integers(1, 300))
def test_harmonic_increment(o, m):
    assert harmonic(o, m) - harmonic(o, m - 1) == F(1, m**o)


def test_harmonic_cache_concurrent_lookups_agree():
    cache = HarmonicCache()
    results = []

    def work():
        results.append([cache.get(o, m) for o in (1, 2, 3) for m in range(0, 400, 7)])

    threads = [threading.Thread(target=work) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r == results[0] for r in results)
    assert results[0] == [harmonic(o, m) for o in (1, 2, 3) for m in range(0, 400, 7)]


def test_harmonic_domain():
    with pytest.raises(DomainError):
        harmonic(0, 3)
    with pytest.raises(DomainError):
        harmonic(1, -1)


# --- double factorial, Bernoulli, Bell ---


@pytest.mark.parametrize("l, value", [(1, 1), (2, 3), (3, 15), (4, 105), (9, 34459425)])
def test_double_factorial_odd(l, value):
    assert double_factorial_odd(l) == value


def test_bernoulli_examples():
    assert bernoulli(0) == 1
    assert bernoulli(1) == F(-1, 2)
    assert bernoulli(2) == F(1, 6)
    assert bernoulli(4) == F(-1, 30)
    assert bernoulli(3) == 0
    assert bernoulli(12) == F(-691, 2730)


def test_complete_bell_small():
    g1, g2, g3 = F(2), F(3), F(5)
    y = complete_bell([g1, g2, g3])
    assert y[:4] == [1, g1, g1**2 + g2, g1**3 + 3 * g1 * g2 + g3]


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=5))
def test_complete_bell_exponential(coeffs):
    # Y_j(a, 0, 0, ...) = a^j
    a = coeffs[0]
    y = complete_bell([F(a)] + [F(0)] * 5)
    assert y == [F(a) ** j for j in range(7)]
