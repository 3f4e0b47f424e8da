from fractions import Fraction
from itertools import permutations
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from absentminded.distribution import (
    ENUMERATION_MAX_N,
    enumerate_exact,
    generating_polynomial,
    probability,
)
from absentminded.errors import DomainError, SizeError
from absentminded.moments import theta_moments

F = Fraction


def test_small_examples():
    assert generating_polynomial(2, 1).probabilities() == [F(1, 2), 0, F(1, 2)]
    assert generating_polynomial(3, 1).probabilities() == [F(1, 3), 0, F(1, 2), F(1, 6)]
    assert generating_polynomial(3, 1).numerators == (2, 0, 3, 1)
    assert generating_polynomial(3, 1).denominator == 6


def test_ten_two_mean():
    assert theta_moments(generating_polynomial(10, 2), 1)[1] == F(5869, 1260)


def test_probability_examples():
    assert probability(2, 1, 0) == F(1, 2)
    assert probability(3, 1, 1) == 0
    assert probability(3, 1, 3) == F(1, 6)


def test_probability_out_of_range():
    with pytest.raises(DomainError):
        probability(3, 1, 4)
    with pytest.raises(DomainError):
        probability(3, 1, -1)


@pytest.mark.parametrize("n, k", [(1, 1), (3, 0), (3, 4), (0, 0)])
def test_domain_guard(n, k):
    with pytest.raises(DomainError):
        generating_polynomial(n, k)
    with pytest.raises(DomainError):
        enumerate_exact(n, k)


def test_enumeration_examples():
    assert enumerate_exact(2, 1) == [F(1, 2), 0, F(1, 2)]
    assert enumerate_exact(3, 1) == [F(1, 3), 0, F(1, 2), F(1, 6)]
    assert enumerate_exact(3, 3) == [F(1, 6), 0, F(1, 2), F(1, 3)]


def test_enumeration_guard():
    with pytest.raises(SizeError):
        enumerate_exact(ENUMERATION_MAX_N + 1, 1)


@pytest.mark.parametrize("n", range(2, 8))
def test_k_equals_n_is_uniform_permutation(n):
    # everyone random: wrong count = n - fixed points of a uniform permutation
    counts = [0] * (n + 1)
    for perm in permutations(range(n)):
        counts[sum(1 for i, s in enumerate(perm) if s != i)] += 1
    assert generating_polynomial(n, n).probabilities() == [F(c, factorial(n)) for c in counts]


@pytest.mark.parametrize("n, k", [(n, k) for n in range(2, 9) for k in range(1, n + 1)])
def test_formula_matches_enumeration(n, k):
    assert generating_polynomial(n, k).probabilities() == enumerate_exact(n, k)


def test_formula_matches_enumeration_n9():
    for k in range(1, 10):
        assert generating_polynomial(9, k).probabilities() == enumerate_exact(9, k)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 200).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n))))
def test_normalized_and_no_single_wrong_seat(nk):
    n, k = nk
    p = generating_polynomial(n, k).probabilities()
    assert len(p) == n + 1
    assert sum(p) == 1
    assert p[1] == 0
    assert all(x >= 0 for x in p)


def test_one_over_n_prefactor_would_not_normalize():
    # the alternative 1/n scaling of the same sum is off by (n-1)! at n=3
    gp = generating_polynomial(3, 1)
    assert sum(F(c, 3) for c in gp.numerators) != 1
