"""Exact arithmetic substrate.

Rationals are :class:`fractions.Fraction` throughout.  This module adds a dense
univariate polynomial type and the memoized combinatorial tables the rest of
the engine draws on: binomials, Stirling numbers of the second kind, Bernoulli
numbers, harmonic numbers of arbitrary order, Pochhammer products and odd
double factorials.
"""

from __future__ import annotations

import operator
import threading
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod

from .errors import DomainError

__all__ = [
    "Fraction",
    "Poly",
    "HarmonicCache",
    "rational_arith",
    "parse_rational",
    "format_rational",
    "pochhammer_poly",
    "stirling2",
    "stirling2_row",
    "harmonic",
    "harmonic_bar",
    "double_factorial_odd",
    "bernoulli",
    "complete_bell",
    "comb",
    "factorial",
]

_OPS = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
}


def rational_arith(a, b, op):
    """Apply ``op`` in {add, sub, mul, div} to two rationals exactly."""
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    a, b = Fraction(a), Fraction(b)
    if op == "div" and b == 0:
        raise ZeroDivisionError("rational division by zero")
    return fn(a, b)


def format_rational(x) -> str:
    """Canonical ``"num/den"`` string; the denominator is dropped when it is 1."""
    return str(Fraction(x))


def parse_rational(s: str) -> Fraction:
    return Fraction(s.strip())


class Poly:
    """Dense univariate polynomial with exact coefficients.

    ``coeffs[i]`` is the coefficient of ``x**i``.  Trailing zeros are stripped
    so the zero polynomial has an empty coefficient list.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = c

    @classmethod
    def constant(cls, c) -> Poly:
        return cls([c])

    @classmethod
    def x(cls) -> Poly:
        return cls([0, 1])

    @classmethod
    def linear(cls, a, b) -> Poly:
        """The polynomial ``a + b*x``."""
        return cls([a, b])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def __repr__(self):
        return f"Poly({[format_rational(c) for c in self.coeffs]})"

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        return self + (-other)

    def __rsub__(self, other):
        return Poly([other]) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly([c * other for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise DomainError("negative polynomial power")
        result = Poly([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def mul_linear(self, a, b) -> Poly:
        """Multiply by ``a + b*x`` in O(degree) operations."""
        c = self.coeffs
        if not c:
            return Poly()
        out = [0] * (len(c) + 1)
        for i, ci in enumerate(c):
            out[i] += a * ci
            out[i + 1] += b * ci
        return Poly(out)

    def derivative(self) -> Poly:
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def eval_at(self, x):
        """Exact Horner evaluation."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    __call__ = eval_at

    def scale(self, s) -> Poly:
        return Poly([c * s for c in self.coeffs])

    def divmod_linear(self, root):
        """Synthetic division by ``(x - root)``; returns ``(quotient, remainder)``."""
        c = self.coeffs
        if not c:
            return Poly(), 0
        q = [0] * (len(c) - 1)
        acc = 0
        for i in range(len(c) - 1, 0, -1):
            acc = acc * root + c[i]
            q[i - 1] = acc
        rem = acc * root + c[0]
        return Poly(q), rem

    def taylor_shift(self, a) -> Poly:
        """Coefficients of ``p(x + a)``."""
        c = list(self.coeffs)
        n = len(c)
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                c[j] += a * c[j + 1]
        return Poly(c)


def pochhammer_poly(r: int, length: int) -> Poly:
    """Integer polynomial ``(2 + r*w)_length`` = prod_{i<length} (2 + i + r*w)."""
    if length < 0:
        raise DomainError("Pochhammer length must be non-negative")
    p = Poly([1])
    for i in range(length):
        p = p.mul_linear(2 + i, r)
    return p


_stirling_rows: list[list[int]] = [[1]]
_stirling_lock = threading.Lock()


def stirling2_row(l: int) -> tuple[int, ...]:
    """Row ``S(l, 0..l)`` of the Stirling numbers of the second kind."""
    if l < 0:
        raise DomainError("Stirling row index must be non-negative")
    with _stirling_lock:
        while len(_stirling_rows) <= l:
            prev = _stirling_rows[-1]
            m = len(prev)
            row = [0] * (m + 1)
            for r in range(1, m + 1):
                row[r] = (r * prev[r] if r < m else 0) + prev[r - 1]
            _stirling_rows.append(row)
        return tuple(_stirling_rows[l])


def stirling2(l: int, r: int) -> int:
    if r < 0 or r > l:
        raise DomainError(f"stirling2 needs 0 <= r <= l, got l={l}, r={r}")
    return stirling2_row(l)[r]


class HarmonicCache:
    """Thread-safe memo of prefix sums ``S_o(0..m)`` for each order ``o``."""

    def __init__(self):
        self._tables: dict[int, list[Fraction]] = {}
        self._lock = threading.Lock()

    def get(self, o: int, m: int) -> Fraction:
        if o < 1:
            raise DomainError("harmonic order must be >= 1")
        if m < 0:
            raise DomainError("harmonic upper index must be >= 0")
        with self._lock:
            table = self._tables.setdefault(o, [Fraction(0)])
            if m >= len(table):
                acc = table[-1]
                for i in range(len(table), m + 1):
                    acc += Fraction(1, i**o)
                    table.append(acc)
            return table[m]


DEFAULT_HARMONIC_CACHE = HarmonicCache()


def harmonic(o: int, m: int, cache: HarmonicCache | None = None) -> Fraction:
    """Generalized harmonic number S_o(m) = sum_{i=1}^m 1/i^o."""
    return (cache or DEFAULT_HARMONIC_CACHE).get(o, m)


def harmonic_bar(o: int, m: int, cache: HarmonicCache | None = None) -> Fraction:
    """Shifted harmonic number S_o(m - 1); requires m >= 1."""
    return harmonic(o, m - 1, cache)


def double_factorial_odd(l: int) -> int:
    """(2l - 1)!! = 1 * 3 * ... * (2l - 1)."""
    if l < 1:
        raise DomainError("double_factorial_odd needs l >= 1")
    return prod(range(1, 2 * l, 2))


@lru_cache(maxsize=None)
def _bernoulli_table(m: int) -> tuple[Fraction, ...]:
    # sum_{i<=j} C(j+1, i) B_i = 0 for j >= 1
    b = [Fraction(1)]
    for j in range(1, m + 1):
        s = sum(comb(j + 1, i) * b[i] for i in range(j))
        b.append(-s / (j + 1))
    return tuple(b)


def bernoulli(j: int) -> Fraction:
    """Bernoulli number B_j with B_1 = -1/2."""
    if j < 0:
        raise DomainError("Bernoulli index must be non-negative")
    size = max(32, 1 << (j.bit_length()))
    return _bernoulli_table(size)[j]


def complete_bell(g, one=1):
    """Complete Bell polynomials Y_0..Y_m evaluated at ``g[0..m-1]`` = (x_1..x_m).

    Works over any ring whose elements support ``+`` and ``*`` and integer
    scaling.  If ``h = exp(G)`` with ``G^{(i)} = x_i`` at a point, then
    ``h^{(j)} / h = Y_j`` there (Faa di Bruno for the exponential).
    """
    m = len(g)
    y = [one]
    for j in range(m):
        acc = None
        for i in range(j + 1):
            term = y[j - i] * g[i]
            c = comb(j, i)
            if c != 1:
                term = term * c
            acc = term if acc is None else acc + term
        y.append(acc)
    return y
