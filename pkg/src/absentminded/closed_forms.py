"""Closed forms and definite-sum representations of E, V, M_2, M_3, m_3 and m_4.

Every formula is written once, against a small context object that supplies
``n``, ``k`` and the harmonic numbers.  A numeric context evaluates exact
rationals; :mod:`absentminded.symbolic` passes a symbolic context so the very
same transcription yields a :class:`~absentminded.symbolic.HarmonicExpr`.

Harmonic numbers are written ``Sb(o, x)`` for ``S_o(x - 1)`` and ``S(o, x)``
for ``S_o(x)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import HarmonicCache, harmonic
from .distribution import check_nk
from .errors import DomainError


@dataclass(frozen=True)
class DeltaIndicator:
    """delta(x) = 1 for x >= 0, else 0."""

    argument: int

    @property
    def value(self) -> int:
        return 1 if self.argument >= 0 else 0


def delta(x: int) -> int:
    return DeltaIndicator(x).value


class NumericContext:
    """Exact rational evaluation at integer ``n`` and ``k``."""

    def __init__(self, n: int, k: int, cache: HarmonicCache | None = None):
        self.n = Fraction(n)
        self.k = k
        self._n = n
        self._cache = cache

    def Sbn(self, o):
        return harmonic(o, self._n - 1, self._cache)

    def Sn(self, o):
        return harmonic(o, self._n, self._cache)

    def Sbk(self, o):
        return harmonic(o, self.k - 1, self._cache)

    def Sk(self, o):
        return harmonic(o, self.k, self._cache)


# --- transcriptions ------------------------------------------------------
# Each function reads top-to-bottom in the order the terms are printed.


def _E_plain(c):
    n, k = c.n, c.k
    return k * (n - 1) / n - k * c.Sk(1) + k * c.Sn(1)


def _E_bar(c):
    k = c.k
    return -1 + k - k * c.Sbk(1) + k * c.Sbn(1)


def _V_plain(c):
    n, k = c.n, c.k
    rat = (2 * k - k**2 - 2 * n - 2 * k * n + 2 * k**2 * n + 2 * n**2 - k * n**2) / ((n - 1) * n**2)
    return (
        rat
        - k * (2 + n) * c.Sk(1) / n
        + k * (2 + n) * c.Sn(1) / n
        + k**2 * c.Sk(2)
        - k**2 * c.Sn(2)
    )


def _V_bar(c):
    n, k = c.n, c.k
    return (
        (k - 1) * k / ((n - 1) * n)
        - k * (2 + n) * c.Sbk(1) / n
        + k * (2 + n) * c.Sbn(1) / n
        + k**2 * c.Sbk(2)
        - k**2 * c.Sbn(2)
    )


def _M2(c, include_pole_term=False):
    n, k = c.n, c.k
    a1, b1 = c.Sbk(1), c.Sbn(1)
    out = (
        (k - 1) ** 2
        + (-2 * k + k * n - 2 * k**2 * n) * a1 / n
        + k**2 * a1**2
        + (2 * k - k * n + 2 * k**2 * n) * b1 / n
        - 2 * k**2 * a1 * b1
        + k**2 * b1**2
        + k**2 * c.Sbk(2)
        - k**2 * c.Sbn(2)
    )
    if include_pole_term:
        out = out + (k - 1) * k / ((n - 1) * n)
    return out


def _M2_completed(c):
    return _M2(c, include_pole_term=True)


def _M3(c):
    n, k = c.n, c.k
    a1, b1 = c.Sbk(1), c.Sbn(1)
    return (
        2 * k**3 * c.Sbn(3)
        - 2 * k**3 * c.Sbk(3)
        - k * (6 * k - n**2 - 5 * n) * b1 / ((n - 1) * n)
        - 3 * k * a1**2 / n
        - 3 * k * b1**2 / n
        + a1 * (6 * k * b1 / n + k * (6 * k - n**2 - 5 * n) / ((n - 1) * n))
        + 3 * k * (k * n + 2 * k - 1) * c.Sbk(2) / n
        - 3 * k * (k * n + 2 * k - 1) * c.Sbn(2) / n
        - (k - 2) * (k - 1) * k / ((n - 2) * (n - 1) * n)
        + 3 * (k - 2) * k * (n - k) / ((n - 1) ** 2 * n) * delta(k - 2)
    )


def _m3(c):
    n, k = c.n, c.k
    a1, b1 = c.Sbk(1), c.Sbn(1)
    return (
        -(k - 2) * (k - 1) * k / ((n - 2) * (n - 1) * n)
        + 2 * k**3 * c.Sbn(3)
        + (6 * k**2 - 5 * k * n - k * n**2) * a1 / ((n - 1) * n)
        - 3 * k * a1**2 / n
        + (-6 * k**2 + 5 * k * n + k * n**2) * b1 / ((n - 1) * n)
        + 6 * k * a1 * b1 / n
        - 3 * k * b1**2 / n
        + 3 * (-k + 2 * k**2 + k**2 * n) * c.Sbk(2) / n
        - 2 * k**3 * c.Sbk(3)
        - 3 * (-k + 2 * k**2 + k**2 * n) * c.Sbn(2) / n
        + 3 * (k - 2) * k * (n - k) / ((n - 1) ** 2 * n) * delta(k - 2)
    )


def _m4(c, include_sk2_square=False):
    n, k = c.n, c.k
    a1, b1 = c.Sbk(1), c.Sbn(1)
    a2, b2 = c.Sbk(2), c.Sbn(2)
    p2 = 6 * k - 12 * k**2 + 30 * k**3 - 6 * k**4 + 18 * k * n - 29 * k**2 * n - 7 * k**2 * n**2
    p1 = -52 * k + 36 * k**2 - 12 * k**3 + 40 * k * n - 11 * k * n**2 - k * n**3
    q = -2 * k + 4 * k**2 - 6 * k * n + 3 * k**2 * n + k**2 * n**2
    u = 2 * k - 4 * k**2 + 2 * k**3 + k**3 * n
    v = 2 * k - 6 * k**2 + 6 * k**3 + 3 * k**3 * n
    d3 = (
        -4 * k + 36 * k**2 - 30 * k**3 + 6 * k**4 - 24 * k * n + k**2 * n + 15 * k**3 * n
        - 4 * k**4 * n + 16 * k * n**2 - 15 * k**2 * n**2 + 3 * k**3 * n**2
    )
    d2s = -2 * k - 5 * k**2 + 3 * k**3 + 10 * k * n - 7 * k**2 * n + k**3 * n
    d2r = (
        -k + 37 * k**2 - 42 * k**3 + 12 * k**4 - 34 * k * n + 52 * k**2 * n
        - 18 * k**3 * n - 13 * k * n**2 + 7 * k**2 * n**2
    )
    out = (
        (k - 3) * (k - 2) * (k - 1) * k / ((n - 3) * (n - 2) * (n - 1) * n)
        + p2 / ((n - 1) * n) * b2
        + a2 / ((n - 1) * n) * (-p2)
        + a1 / ((n - 2) * (n - 1) * n) * p1
        + b1 / ((n - 2) * (n - 1) * n) * (-p1)
        + 3 * q * a1**2 / ((n - 1) * n)
        - 4 * k * a1**3 / n
        + 3 * k**4 * b2**2
        - 6 * q * a1 * b1 / ((n - 1) * n)
        + 12 * k * a1**2 * b1 / n
        + 3 * q * b1**2 / ((n - 1) * n)
        - 12 * k * a1 * b1**2 / n
        + 4 * k * b1**3 / n
        - 6 * u * a1 * a2 / n
        + 6 * u * b1 * a2 / n
        - 4 * v * c.Sbk(3) / n
        + 6 * k**4 * c.Sbk(4)
        + 6 * u * a1 * b2 / n
        - 6 * u * b1 * b2 / n
        - 6 * k**4 * a2 * b2
        + 4 * v * c.Sbn(3) / n
        - 6 * k**4 * c.Sbn(4)
        - 2 / ((n - 2) ** 2 * (n - 1) ** 2 * n) * d3 * delta(k - 3)
        + (
            -6 * a1 / ((n - 1) ** 2 * n) * d2s
            + 6 * b1 / ((n - 1) ** 2 * n) * d2s
            + 1 / ((n - 1) ** 3 * n) * d2r
        )
        * delta(k - 2)
    )
    if include_sk2_square:
        out = out + 3 * k**4 * a2**2
    return out


def _m4_printed(c):
    return _m4(c, include_sk2_square=False)


def _m4_completed(c):
    return _m4(c, include_sk2_square=True)


def _m4_k1(c):
    n = c.n
    b1, b2 = c.Sbn(1), c.Sbn(2)
    return (
        ((14 + n) / n - 6 * b2) * b1
        + 3 * (n - 2) * b1**2 / n
        + 4 * b1**3 / n
        - (18 + 7 * n) * b2 / n
        + 3 * b2**2
        + 4 * (2 + 3 * n) * c.Sbn(3) / n
        - 6 * c.Sbn(4)
    )


def _m4_k2(c):
    n = c.n
    b1, b2 = c.Sbn(1), c.Sbn(2)
    return (
        (2 * (-74 + 13 * n + 13 * n**2) / ((n - 1) * n) - 24 * (1 + 2 * n) * b2 / n) * b1
        + 48 * b2**2
        + 12 * (5 - 2 * n + n**2) * b1**2 / ((n - 1) * n)
        + 8 * b1**3 / n
        - 4 * (21 + 19 * n) * b2 / n
        + 16 * (7 + 6 * n) * c.Sbn(3) / n
        - 96 * c.Sbn(4)
        + 2 * (51 - 45 * n + 19 * n**2) / ((n - 1) * n)
    )


@dataclass(frozen=True)
class _Formula:
    fn: object
    poles: tuple[int, ...]  # n must avoid these values
    fixed_k: int | None = None


FORMULAS: dict[str, _Formula] = {
    "E_closed_plain": _Formula(_E_plain, (0,)),
    "E_closed": _Formula(_E_bar, ()),
    "V_closed_plain": _Formula(_V_plain, (0, 1)),
    "V_closed": _Formula(_V_bar, (0, 1)),
    "M2": _Formula(_M2, (0,)),
    "M2_completed": _Formula(_M2_completed, (0, 1)),
    "M3": _Formula(_M3, (0, 1, 2)),
    "m3": _Formula(_m3, (0, 1, 2)),
    "m4": _Formula(_m4_printed, (0, 1, 2, 3)),
    "m4_completed": _Formula(_m4_completed, (0, 1, 2, 3)),
    "m4_k1": _Formula(_m4_k1, (0,), fixed_k=1),
    "m4_k2": _Formula(_m4_k2, (0, 1), fixed_k=2),
}

CLOSED_FORM_IDS = ("E_sum", "V_sum") + tuple(FORMULAS)


def _factor_name(a: int) -> str:
    return "n" if a == 0 else f"(n-{a})"


def check_poles(form_id: str, n: int) -> None:
    f = FORMULAS[form_id]
    for a in f.poles:
        if n == a:
            raise DomainError(f"{form_id} has a pole at n={n}: factor {_factor_name(a)} vanishes")


def apply_formula(form_id: str, ctx):
    """Evaluate a transcribed closed form against an arbitrary context."""
    try:
        return FORMULAS[form_id].fn(ctx)
    except KeyError:
        raise DomainError(f"unknown closed form {form_id!r}") from None


def eval_closed_form(form_id: str, n: int, k: int, cache: HarmonicCache | None = None) -> Fraction:
    """Exact value of a printed closed form at integer ``n`` and ``k``."""
    if form_id in ("E_sum", "V_sum"):
        return eval_definite_sums(form_id, n, k)
    if form_id not in FORMULAS:
        raise DomainError(f"unknown closed form {form_id!r}")
    f = FORMULAS[form_id]
    if f.fixed_k is not None and k != f.fixed_k:
        raise DomainError(f"{form_id} is the k={f.fixed_k} specialization, got k={k}")
    if not isinstance(n, int) or n < 1 or k < 1:
        raise DomainError("closed forms need integers n >= 1, k >= 1")
    check_poles(form_id, n)
    return Fraction(f.fn(NumericContext(n, k, cache)))


def eval_definite_sums(form_id: str, n: int, k: int) -> Fraction:
    """Literal summation of the single and double sum representations of E and V."""
    check_nk(n, k)
    n_, k_ = Fraction(n), Fraction(k)
    if form_id == "E_sum":
        return k_ * (n_ - 1) / n_ + sum((k_ / (1 - i + n_) for i in range(1, n - k + 1)), Fraction(0))
    if form_id == "V_sum":
        single = sum(
            (
                (1 - i - k_ + n_) * (1 - (1 - i - k_ + n_) / (1 - i + n_)) / (1 - i + n_)
                for i in range(1, n - k + 1)
            ),
            Fraction(0),
        )
        double = sum(
            (
                ((1 - j - k_ + n_) / (-j + n_) - (1 - j - k_ + n_) / (1 - j + n_)) / n_
                for i in range(1, k + 1)
                for j in range(1, n - k + 1)
            ),
            Fraction(0),
        )
        return k_ * (n_ - 1) / n_**2 + single + 2 * ((k_ - 1) * k_ / (2 * (n_ - 1) * n_**2) + double)
    raise DomainError(f"{form_id!r} is not a definite-sum representation")
