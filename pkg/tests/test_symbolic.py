import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from absentminded.core import Poly, complete_bell, harmonic, pochhammer_poly
from absentminded.errors import DomainError, SizeError
from absentminded.moments import moment_pipeline
from absentminded.symbolic import (
    HarmonicExpr,
    RationalFunction,
    closed_form_expr,
    expr_equal,
    log_derivative_power_sums,
    symbolic_central_moment,
    symbolic_central_moments,
    symbolic_exponential_moment,
    symbolic_exponential_moments,
)

F = Fraction
n_ = RationalFunction.n()


# --- rational functions ---


def test_rational_function_cancels():
    f = (n_ * n_ - 1) / (n_ - 1)
    assert f == n_ + 1
    assert f.is_constant() is False
    assert (n_ / n_).is_constant()


@given(st.integers(2, 50))
def test_rational_function_evaluates(n):
    f = (n_ + 2) / (n_ * (n_ - 1)) - 3 / (n_ + 5) ** 2
    assert f(n) == F(n + 2, n * (n - 1)) - F(3, (n + 5) ** 2)


def test_rational_function_pole():
    with pytest.raises(DomainError):
        (1 / (n_ - 3))(3)


def test_rational_function_non_split_divisor():
    with pytest.raises(DomainError):
        n_ / (n_ * n_ + 1)


def test_rational_function_order_at_infinity():
    assert (1 / (n_ * n_)).order_at_infinity() == -2
    assert (n_ + 1).order_at_infinity() == 1


# --- harmonic expressions ---


def test_shift_identity():
    for c in (-3, -1, 0, 2):
        e = HarmonicExpr.shifted(2, c)
        for n in range(5, 12):
            assert e(n) == harmonic(2, n + c)


def test_expression_arithmetic_and_eval():
    a = HarmonicExpr.sbar(1) * (n_ + 2) / n_ - HarmonicExpr.sbar(2)
    for n in range(2, 20):
        assert a(n) == F(n + 2, n) * harmonic(1, n - 1) - harmonic(2, n - 1)
    assert (a - a).is_zero()
    assert (a * a)(7) == a(7) ** 2
    assert (a ** 3)(5) == a(5) ** 3


def test_weight():
    e = HarmonicExpr.sbar(1, 2) * HarmonicExpr.sbar(3) + HarmonicExpr.sbar(2)
    assert e.weight() == 5
    assert HarmonicExpr.one().weight() == 0


def test_render_and_serialize_deterministic():
    e = HarmonicExpr.sbar(2) + HarmonicExpr.sbar(1, 2) * 3 + 1 / n_
    f = 1 / n_ + HarmonicExpr.sbar(1, 2) * 3 + HarmonicExpr.sbar(2)
    assert e.render() == f.render()
    assert e.serialize() == f.serialize()
    json.loads(e.serialize())
    assert "Sb1(n)^2" in e.render()


def test_normalize_idempotent():
    for k in (1, 2, 3):
        for m in symbolic_central_moments(k, 4):
            once = m.normalize()
            assert once.normalize() == once
            assert once.serialize() == m.serialize()


# --- moments ---


def test_exponential_examples():
    assert symbolic_exponential_moment(1, 0) == HarmonicExpr.one()
    assert symbolic_exponential_moment(1, 1) == HarmonicExpr.sbar(1)
    assert symbolic_exponential_moment(2, 1)(10) == F(5869, 1260)


def test_variance_k1():
    expected = HarmonicExpr.sbar(1) * (n_ + 2) / n_ - HarmonicExpr.sbar(2)
    assert symbolic_central_moment(1, 2) == expected


def test_log_derivatives_vanish_at_r0():
    assert all(e.is_zero() for e in log_derivative_power_sums(0, 4, 5))


@pytest.mark.parametrize("r, k", [(1, 1), (1, 3), (2, 2), (2, 4), (3, 3)])
@pytest.mark.parametrize("n", [6, 9])
def test_log_derivatives_against_literal_differentiation(r, k, n):
    # h(w) = (1 + r w) w^r (2 + r w)...(n - k + r w); Y_j(g) = h^(j)(1) / h(1)
    h = Poly([1, r]) * Poly([0] * r + [1]) * pochhammer_poly(r, n - k - 1)
    g = [e(n) for e in log_derivative_power_sums(r, k, 4)]
    ys = complete_bell(g)
    d, h1 = h, h.eval_at(1)
    for j in range(1, 5):
        d = d.derivative()
        assert ys[j] == F(d.eval_at(1)) / h1


@pytest.mark.parametrize("k", [1, 2, 3])
def test_soundness_against_pipeline(k):
    ms = symbolic_central_moments(k, 4)
    for n in range(max(4, k + 1), 41):
        t = moment_pipeline(n, k, 4)
        assert [m(n) for m in ms] == list(t.central_moments)


@pytest.mark.parametrize("k", range(1, 9))
def test_first_central_moment_vanishes(k):
    assert symbolic_central_moments(k, 1)[1].is_zero()


@pytest.mark.parametrize("k", [1, 2, 3])
def test_weight_bound(k):
    for l, m in enumerate(symbolic_central_moments(k, 6)):
        assert m.weight() <= l


def test_high_order_soundness_spot():
    m = symbolic_central_moment(3, 7)
    assert m(25) == moment_pipeline(25, 3, 7).central_moments[7]
    assert m.weight() <= 7


def test_guards():
    with pytest.raises(SizeError):
        symbolic_exponential_moments(9, 2)
    with pytest.raises(SizeError):
        symbolic_exponential_moments(2, 9)


# --- equality with printed forms ---


def test_specialization_displays():
    assert expr_equal(symbolic_central_moment(1, 4), closed_form_expr("m4_k1", 1)) == (True, None)
    assert expr_equal(symbolic_central_moment(2, 4), closed_form_expr("m4_k2", 2)) == (True, None)


@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_variance_forms_equal(k):
    assert expr_equal(closed_form_expr("V_closed_plain", k), closed_form_expr("V_closed", k))[0]
    assert expr_equal(closed_form_expr("V_closed", k), symbolic_central_moment(k, 2))[0]


def test_expr_equal_trivial_and_witness():
    v = closed_form_expr("V_closed", 2)
    assert expr_equal(v, v) == (True, None)
    flipped = v - 2 * HarmonicExpr.sbar(2)
    ok, witness = expr_equal(v, flipped)
    assert not ok
    assert v(witness) != flipped(witness)


@settings(max_examples=20, deadline=None)
@given(st.integers(4, 60))
def test_completed_m4_symbolic(n):
    for k in (2, 3):
        e = closed_form_expr("m4_completed", k)
        assert e == symbolic_central_moment(k, 4)
        assert e(max(n, k + 1)) == moment_pipeline(max(n, k + 1), k, 4).central_moments[4]
