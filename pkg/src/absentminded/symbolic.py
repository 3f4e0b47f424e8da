"""Closed forms in ``n`` at fixed numeric ``k``.

Moments are produced as polynomials in the shifted harmonic numbers
``Sb_j(n) = S_j(n - 1)`` whose coefficients are rational functions of ``n``.
Every harmonic argument of the form ``n + c`` is rewritten to ``n`` on
construction, so a :class:`HarmonicExpr` is always in normal form and two
expressions are equal exactly when their term maps coincide.

All denominators that arise here are products of linear factors ``n - a``
with integer ``a`` (falling factorials and shift corrections), so
:class:`RationalFunction` keeps its denominator factored.  Cancellation is a
synthetic division per root, and no polynomial gcd is needed.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import comb

from .closed_forms import apply_formula
from .core import Poly, format_rational, harmonic
from .errors import DomainError, SizeError
from .moments import assemble_exponential_moments, central_moments, stirling_transform

SYMBOLIC_MAX = 8
_ROOT_SEARCH = 256


class RationalFunction:
    """``numerator(n) / prod_a (n - a)^mult_a`` in lowest terms."""

    __slots__ = ("num", "roots")

    def __init__(self, num, roots=None):
        if not isinstance(num, Poly):
            num = Poly([Fraction(num)])
        roots = {a: m for a, m in (roots or {}).items() if m > 0}
        if num.is_zero():
            roots = {}
        else:
            for a in list(roots):
                m = roots[a]
                while m:
                    q, rem = num.divmod_linear(a)
                    if rem != 0:
                        break
                    num, m = q, m - 1
                if m:
                    roots[a] = m
                else:
                    del roots[a]
        self.num = num
        self.roots = roots

    @classmethod
    def n(cls) -> RationalFunction:
        return cls(Poly([0, 1]))

    @classmethod
    def coerce(cls, x) -> RationalFunction:
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(Poly([Fraction(x)]))
        raise TypeError(f"cannot coerce {type(x).__name__} to RationalFunction")

    @property
    def denominator(self) -> Poly:
        p = Poly([1])
        for a in sorted(self.roots):
            p = p * (Poly([-a, 1]) ** self.roots[a])
        return p

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return not self.roots and self.num.degree <= 0

    def order_at_infinity(self) -> int:
        """deg(numerator) - deg(denominator); behaves like n**order for large n."""
        return self.num.degree - sum(self.roots.values())

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalFunction.coerce(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.roots == other.roots

    def __hash__(self):
        return hash((tuple(self.num.coeffs), tuple(sorted(self.roots.items()))))

    def __neg__(self):
        return RationalFunction(-self.num, self.roots)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalFunction.coerce(other)
        elif not isinstance(other, RationalFunction):
            return NotImplemented
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        roots = dict(self.roots)
        for a, m in other.roots.items():
            roots[a] = max(roots.get(a, 0), m)
        a_num = self.num
        b_num = other.num
        for a, m in roots.items():
            da, db = m - self.roots.get(a, 0), m - other.roots.get(a, 0)
            if da:
                a_num = a_num * (Poly([-a, 1]) ** da)
            if db:
                b_num = b_num * (Poly([-a, 1]) ** db)
        return RationalFunction(a_num + b_num, roots)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, RationalFunction)):
            return self + (-RationalFunction.coerce(other))
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalFunction.coerce(other) - self
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return RationalFunction(Poly())
            return RationalFunction(self.num.scale(Fraction(other)), self.roots)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        roots = dict(self.roots)
        for a, m in other.roots.items():
            roots[a] = roots.get(a, 0) + m
        return RationalFunction(self.num * other.num, roots)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return 1 / (self ** (-e))
        return RationalFunction(self.num**e, {a: m * e for a, m in self.roots.items()})

    def _split_numerator(self):
        """Factor the numerator as ``c * prod (n - a)`` over integer roots."""
        p = self.num
        found: dict[int, int] = {}
        while p.degree > 0:
            for a in _candidate_roots(p):
                q, rem = p.divmod_linear(a)
                if rem == 0:
                    p = q
                    found[a] = found.get(a, 0) + 1
                    break
            else:
                raise DomainError("divisor does not split into integer linear factors")
        return p[0], found

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division of a rational function by zero")
            return RationalFunction(self.num.scale(1 / Fraction(other)), self.roots)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        c, found = other._split_numerator()
        num = self.num.scale(1 / Fraction(c))
        for a, m in other.roots.items():
            num = num * (Poly([-a, 1]) ** m)
        roots = dict(self.roots)
        for a, m in found.items():
            roots[a] = roots.get(a, 0) + m
        return RationalFunction(num, roots)

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalFunction.coerce(other) / self
        return NotImplemented

    def __call__(self, n) -> Fraction:
        n = Fraction(n)
        den = Fraction(1)
        for a, m in self.roots.items():
            if n == a:
                raise DomainError(f"pole at n={n}: factor (n-{a}) vanishes" if a else f"pole at n={n}")
            den *= (n - a) ** m
        return Fraction(self.num.eval_at(n)) / den

    def render(self) -> str:
        num = _render_poly(self.num)
        if not self.roots:
            return num
        den = "*".join(_render_factor(a, self.roots[a]) for a in sorted(self.roots))
        return f"({num})/({den})"

    def __repr__(self):
        return f"RationalFunction({self.render()})"

    def to_json(self):
        return {
            "numerator": [format_rational(c) for c in self.num.coeffs],
            "denominator": [format_rational(c) for c in self.denominator.coeffs],
        }


def _candidate_roots(p: Poly):
    # trailing-zero root first, then small integers by magnitude
    if p[0] == 0:
        yield 0
    for a in range(1, _ROOT_SEARCH):
        yield a
        yield -a


def _render_factor(a: int, m: int) -> str:
    base = "n" if a == 0 else (f"(n-{a})" if a > 0 else f"(n+{-a})")
    return base if m == 1 else f"{base}^{m}"


def _render_poly(p: Poly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for i in range(p.degree, -1, -1):
        c = p[i]
        if c == 0:
            continue
        mono = "" if i == 0 else ("n" if i == 1 else f"n^{i}")
        mag = abs(c)
        if mono and mag == 1:
            s = mono
        elif mono:
            s = f"{format_rational(mag)}*{mono}"
        else:
            s = format_rational(mag)
        sign = "-" if c < 0 else "+"
        parts.append((sign, s))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, s in parts[1:]:
        out += f" {sign} {s}"
    return out


def _trim(exps):
    exps = tuple(exps)
    while exps and exps[-1] == 0:
        exps = exps[:-1]
    return exps


class HarmonicExpr:
    """Polynomial in ``Sb_1(n), Sb_2(n), ...`` with :class:`RationalFunction` coefficients.

    ``terms`` maps an exponent vector ``(e_1, ..., e_L)`` (trailing zeros
    trimmed) to its coefficient; zero coefficients are never stored.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for exps, coeff in (terms or {}).items():
            coeff = RationalFunction.coerce(coeff)
            if coeff.is_zero():
                continue
            key = _trim(exps)
            if key in clean:
                coeff = clean[key] + coeff
                if coeff.is_zero():
                    del clean[key]
                    continue
            clean[key] = coeff
        self.terms = clean

    # constructors

    @classmethod
    def constant(cls, c) -> HarmonicExpr:
        return cls({(): RationalFunction.coerce(c)})

    @classmethod
    def one(cls) -> HarmonicExpr:
        return cls.constant(1)

    @classmethod
    def sbar(cls, j: int, power: int = 1) -> HarmonicExpr:
        """``Sb_j(n)^power``."""
        if j < 1:
            raise DomainError("harmonic order must be >= 1")
        exps = [0] * j
        exps[j - 1] = power
        return cls({tuple(exps): RationalFunction.coerce(1)})

    @classmethod
    def shifted(cls, j: int, c: int) -> HarmonicExpr:
        """``S_j(n + c)`` rewritten in terms of ``Sb_j(n)``."""
        n = RationalFunction.n()
        out = cls.sbar(j)
        if c >= 0:
            corr = sum((1 / (n + t) ** j for t in range(c + 1)), RationalFunction.coerce(0))
            return out + corr
        corr = sum((1 / (n + t) ** j for t in range(c + 1, 0)), RationalFunction.coerce(0))
        return out - corr

    # algebra

    @staticmethod
    def _wrap(x):
        if isinstance(x, HarmonicExpr):
            return x
        if isinstance(x, (int, Fraction, RationalFunction)):
            return HarmonicExpr.constant(x)
        return None

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __neg__(self):
        return HarmonicExpr({e: -c for e, c in self.terms.items()})

    def __add__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return HarmonicExpr(terms)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RationalFunction)):
            if other == 0:
                return HarmonicExpr()
            return HarmonicExpr({e: c * other for e, c in self.terms.items()})
        if not isinstance(other, HarmonicExpr):
            return NotImplemented
        acc: dict[tuple, RationalFunction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                size = max(len(e1), len(e2))
                e = tuple(
                    (e1[i] if i < len(e1) else 0) + (e2[i] if i < len(e2) else 0) for i in range(size)
                )
                prod_ = c1 * c2
                acc[e] = acc[e] + prod_ if e in acc else prod_
        return HarmonicExpr(acc)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, RationalFunction)):
            return HarmonicExpr({e: c / other for e, c in self.terms.items()})
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            raise DomainError("negative powers of harmonic expressions are not supported")
        out = HarmonicExpr.one()
        for _ in range(e):
            out = out * self
        return out

    def normalize(self) -> HarmonicExpr:
        """Return the canonical form (terms are kept canonical on construction)."""
        return HarmonicExpr(self.terms)

    def weight(self) -> int:
        """Largest ``sum_j j * e_j`` over the monomials present."""
        return max((sum((i + 1) * x for i, x in enumerate(e)) for e in self.terms), default=0)

    def __call__(self, n: int, cache=None) -> Fraction:
        """Exact value at integer ``n`` (harmonic numbers evaluated exactly)."""
        total = Fraction(0)
        sb = {}
        for exps, coeff in self.terms.items():
            v = coeff(n)
            for j, e in enumerate(exps, start=1):
                if e:
                    if j not in sb:
                        if n < 1:
                            raise DomainError("harmonic numbers need n >= 1")
                        sb[j] = harmonic(j, n - 1, cache)
                    v *= sb[j] ** e
            total += v
        return total

    eval_at = __call__

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, coeff in self.sorted_terms():
            mono = "*".join(
                (f"Sb{j}(n)" if e == 1 else f"Sb{j}(n)^{e}") for j, e in enumerate(exps, start=1) if e
            )
            c = coeff.render()
            parts.append(f"[{c}]" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"HarmonicExpr({self.render()})"

    def to_json(self):
        return {
            "terms": [
                {"exponents": list(exps), **coeff.to_json()} for exps, coeff in self.sorted_terms()
            ]
        }

    def serialize(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


# --- symbolic moments ----------------------------------------------------


def _check_guard(k: int, l: int) -> None:
    if k < 1 or l < 0:
        raise DomainError("need k >= 1 and l >= 0")
    if k > SYMBOLIC_MAX or l > SYMBOLIC_MAX:
        raise SizeError(f"symbolic moments are limited to k, l <= {SYMBOLIC_MAX}")


def log_derivative_power_sums(r: int, k: int, j_max: int) -> list[HarmonicExpr]:
    """``(log h_r)^{(j)}(1)`` for j = 1..j_max, where h_r = (1 + r w) w^r (2 + r w)_(n-k-1).

    Each linear factor ``b + a w`` contributes ``(-1)^(j-1) (j-1)! (a / (b + a))^j``.
    The Pochhammer factors evaluate to ``r + 2, ..., r + n - k`` at ``w = 1``,
    giving ``r^j (S_j(n + r - k) - S_j(r + 1))``.
    """
    if not 0 <= r <= k:
        raise DomainError("need 0 <= r <= k")
    out = []
    for j in range(1, j_max + 1):
        if r == 0:
            out.append(HarmonicExpr())
            continue
        const = Fraction(r, 1 + r) ** j + r - Fraction(r) ** j * harmonic(j, r + 1)
        v = HarmonicExpr.shifted(j, r - k) * (Fraction(r) ** j) + const
        sign = 1 if j % 2 else -1
        fact = 1
        for t in range(2, j):
            fact *= t
        out.append(v * (sign * fact))
    return out


def _prefactor(k: int, r: int) -> RationalFunction:
    # r! C(k, r) h_r(1) / n! = C(k, r) / (n (n-1) ... (n-k+r+1))
    roots: dict[int, int] = {}
    for t in range(k - r):
        roots[t] = roots.get(t, 0) + 1
    return RationalFunction(Poly([Fraction(comb(k, r))]), roots)


def symbolic_exponential_moments(k: int, l_max: int) -> list[HarmonicExpr]:
    """Mbar_0..Mbar_{l_max} as harmonic expressions in ``n``."""
    _check_guard(k, l_max)
    return assemble_exponential_moments(
        k,
        l_max,
        lambda r: _prefactor(k, r),
        lambda r, j_max: log_derivative_power_sums(r, k, j_max),
        HarmonicExpr.one(),
    )


def symbolic_exponential_moment(k: int, l: int) -> HarmonicExpr:
    return symbolic_exponential_moments(k, l)[l]


def symbolic_raw_moments(k: int, l_max: int) -> list[HarmonicExpr]:
    return stirling_transform(symbolic_exponential_moments(k, l_max))


def symbolic_central_moments(k: int, l_max: int) -> list[HarmonicExpr]:
    return central_moments(symbolic_raw_moments(k, l_max), l_max)


def symbolic_central_moment(k: int, l: int) -> HarmonicExpr:
    return symbolic_central_moments(k, l)[l]


class SymbolicContext:
    """Context for :func:`absentminded.closed_forms.apply_formula` with symbolic ``n``."""

    def __init__(self, k: int):
        self.n = RationalFunction.n()
        self.k = k

    def Sbn(self, o):
        return HarmonicExpr.sbar(o)

    def Sn(self, o):
        return HarmonicExpr.shifted(o, 0)

    def Sbk(self, o):
        return harmonic(o, self.k - 1)

    def Sk(self, o):
        return harmonic(o, self.k)


def closed_form_expr(form_id: str, k: int) -> HarmonicExpr:
    """A printed closed form, at numeric ``k``, as a normalized harmonic expression."""
    v = apply_formula(form_id, SymbolicContext(k))
    return v if isinstance(v, HarmonicExpr) else HarmonicExpr.constant(v)


def expr_equal(a: HarmonicExpr, b: HarmonicExpr, search=range(2, 200)):
    """``(True, None)`` if the normal forms coincide, else ``(False, n)`` with a witness ``n``."""
    a, b = a.normalize(), b.normalize()
    if a.terms == b.terms:
        return True, None
    diff = a - b
    for n in search:
        try:
            if diff(n) != 0:
                return False, n
        except DomainError:
            continue
    raise AssertionError("normal forms differ but no witness found in the search range")
