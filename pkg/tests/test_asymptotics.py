from fractions import Fraction

import mpmath
import pytest

from absentminded.asymptotics import (
    ConstantPool,
    claimed_limit,
    expand_moment,
    extrapolate_inverse_log,
    harmonic_expansion,
    limit_ratio,
    printed_m2_expansion,
    printed_m3_expansion,
    rational_function_series,
    remainder_profile,
)
from absentminded.core import harmonic
from absentminded.errors import DependencyError, DomainError
from absentminded.symbolic import RationalFunction, symbolic_central_moment

POOL = ConstantPool(128)
NS = (200, 400, 800, 1600)


def mpq(x: Fraction):
    with mpmath.workprec(128):
        return mpmath.mpf(x.numerator) / x.denominator


def test_constants():
    with mpmath.workprec(128):
        assert abs(harmonic_expansion(1, 3, POOL).coefficient(0, 0) - mpmath.euler) < mpmath.mpf(10) ** -35
        assert harmonic_expansion(1, 3, POOL).coefficient(0, 1) == 1
        assert mpmath.nstr(harmonic_expansion(2, 3, POOL).coefficient(0, 0), 8) == "1.6449341"
        assert mpmath.nstr(POOL.gamma, 6) == "0.577216"


def test_zeta_domain():
    with pytest.raises(DomainError):
        POOL.zeta(1)


def test_harmonic_expansion_at_ten():
    s = harmonic_expansion(1, 3, POOL)
    assert abs(s(10) - mpq(Fraction(7129, 2520))) < 1e-4


@pytest.mark.parametrize("o", [1, 2, 3, 4])
@pytest.mark.parametrize("N", [2, 3, 4])
def test_euler_maclaurin_error_decay(o, N):
    s = harmonic_expansion(o, N, POOL)
    errs = [abs(s(n) - mpq(harmonic(o, n - 1))) for n in (100, 200, 400, 800)]
    for a, b in zip(errs, errs[1:]):
        assert 2**N <= a / b <= 2 ** (N + 2)


def test_rational_function_series():
    n = RationalFunction.n()
    series = rational_function_series(1 / (n - 2) + n, 3)
    assert series == {(-1, 0): 1, (1, 0): 1, (2, 0): 2, (3, 0): 4}


def test_expansion_tends_to_exact():
    expr = symbolic_central_moment(1, 2)
    s = expand_moment(1, 2, 3, POOL, expr=expr)
    diffs = [abs(s(n) - mpq(expr(n))) for n in (50, 100, 200, 400)]
    assert all(a > b for a, b in zip(diffs, diffs[1:]))
    assert diffs[-1] < 1e-9


def test_expand_moment_missing_expression():
    with pytest.raises(DependencyError):
        expand_moment(12, 2)


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("l", [2, 3])
def test_remainder_order(k, l):
    expr = symbolic_central_moment(k, l)
    prof = remainder_profile(expand_moment(k, l, 3, POOL, expr=expr), expr, NS)
    assert max(prof) / min(prof) < 4


@pytest.mark.parametrize("k", [1, 2, 3])
def test_printed_m2_expansion_matches(k):
    derived = expand_moment(k, 2, 3, POOL)
    printed = printed_m2_expansion(k, POOL)
    keys = set(derived.coefficients) | set(printed.coefficients)
    for key in keys:
        assert abs(derived.coefficient(*key) - printed.coefficient(*key)) < mpmath.mpf(10) ** -30


@pytest.mark.parametrize("k", [1, 2, 3])
def test_printed_m3_expansion_matches(k):
    derived = expand_moment(k, 3, 3, POOL)
    printed = printed_m3_expansion(k, POOL)
    keys = set(derived.coefficients) | set(printed.coefficients)
    for key in keys:
        assert abs(derived.coefficient(*key) - printed.coefficient(*key)) < mpmath.mpf(10) ** -30


@pytest.mark.parametrize("k", [1, 2, 3])
def test_printed_m2_bounded_remainder(k):
    expr = symbolic_central_moment(k, 2)
    prof = remainder_profile(printed_m2_expansion(k, POOL), expr, NS)
    assert max(prof) / min(prof) < 4


@pytest.mark.parametrize("k", [1, 3])
def test_session_output_quadratic_coefficient_fails(k):
    # k(6k-1)/12 agrees with k(18k-25)/12 only at k = 2
    expr = symbolic_central_moment(k, 2)
    prof = remainder_profile(printed_m2_expansion(k, POOL, quadratic="output"), expr, NS)
    assert prof[-1] / prof[0] > 50


@pytest.mark.parametrize("k", [2, 3])
def test_plain_harmonic_reading_fails(k):
    expr = symbolic_central_moment(k, 2)
    prof = remainder_profile(printed_m2_expansion(k, POOL, harmonic_k="plain"), expr, NS)
    assert prof[-1] / prof[0] > 50


def test_render_sorted():
    text = harmonic_expansion(1, 2, POOL).render(6)
    assert text.index("log") < text.index("n^-2")


# --- limits ---


def test_claimed_limits():
    assert [claimed_limit(l) for l in (2, 3, 4, 6, 8)] == [1, 0, 3, 15, 105]
    with pytest.raises(DomainError):
        claimed_limit(1)


def test_extrapolation_recovers_polynomial():
    with mpmath.workprec(128):
        pts = [(n, 3 + 2 / mpmath.log(n) - 5 / mpmath.log(n) ** 2) for n in (10**4, 10**6, 10**8)]
        assert abs(extrapolate_inverse_log(pts) - 3) < mpmath.mpf(10) ** -30


def test_second_order_ratio_is_one():
    est = limit_ratio(1, 2, (10**4, 10**6))
    assert all(v == 1 for _, v in est.samples)


def test_fourth_order_limit():
    est = limit_ratio(1, 4, (10**4, 10**6, 10**8))
    assert est.claimed_limit == 3
    assert est.relative_error < 0.01


def test_odd_ratio_decreases():
    est = limit_ratio(2, 3, (10**4, 10**6, 10**8))
    assert est.odd_ratios_decreasing()
    assert est.samples[-1][1] > 0


def test_limit_needs_two_samples():
    with pytest.raises(DomainError):
        limit_ratio(1, 4, (10**4,))


def test_limit_json():
    d = limit_ratio(1, 4, (10**4, 10**5)).to_json()
    assert d["claimed_limit"] == 3
    assert [s["n"] for s in d["samples"]] == [10**4, 10**5]
