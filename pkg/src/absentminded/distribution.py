"""Exact distribution of the wrong-seat count.

The generating polynomial is built from the closed hypergeometric-sum form

    f_n^(k)(w) = 1/n! * sum_{r=0}^{k} (1 + r w) r! C(k, r) w^r (1 - w)^(k-r) (2 + r w)_(n-k-1)

and :func:`enumerate_exact` walks the seating process itself, so the two
routes are independent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from .core import Poly, pochhammer_poly
from .errors import DomainError, SizeError

ENUMERATION_MAX_N = 10


def check_nk(n: int, k: int) -> None:
    if not isinstance(n, int) or not isinstance(k, int):
        raise DomainError("n and k must be integers")
    if n < 2:
        raise DomainError(f"need n >= 2 seats, got n={n}")
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got k={k}, n={n}")


@dataclass(frozen=True)
class GeneratingPolynomial:
    """f_n^(k)(w) with ``poly[r] = p_{n,k,r}``.

    ``numerators`` holds the integer coefficients of ``n! * f`` so moment
    sums can run in integer arithmetic and divide once.
    """

    n: int
    k: int
    numerators: tuple[int, ...]
    poly: Poly = field(compare=False, repr=False)

    @property
    def denominator(self) -> int:
        return factorial(self.n)

    def probabilities(self) -> list[Fraction]:
        return [self.poly[r] for r in range(self.n + 1)]


def _scaled_generating_poly(n: int, k: int) -> Poly:
    """Integer polynomial ``n! * f_n^(k)(w)``."""
    total = Poly()
    length = n - k - 1
    for r in range(k + 1):
        c = factorial(r) * comb(k, r)
        if length >= 0:
            term = pochhammer_poly(r, length).mul_linear(1, r)
        else:
            # k = n: (2 + r w)_{-1} = 1/(1 + r w) cancels the (1 + r w) factor
            term = Poly([1])
        term = Poly([0] * r + [c * a for a in term.coeffs])
        term = term * (Poly([1, -1]) ** (k - r))
        total = total + term
    return total


def generating_polynomial(n: int, k: int) -> GeneratingPolynomial:
    check_nk(n, k)
    scaled = _scaled_generating_poly(n, k)
    nfact = factorial(n)
    nums = tuple(scaled[r] for r in range(n + 1))
    if scaled.degree > n:
        raise AssertionError("generating polynomial exceeds degree n")
    poly = Poly([Fraction(a, nfact) for a in nums])
    return GeneratingPolynomial(n, k, nums, poly)


def probability(n: int, k: int, r: int) -> Fraction:
    """p_{n,k,r}: probability that exactly ``r`` passengers sit in a wrong seat."""
    check_nk(n, k)
    if not 0 <= r <= n:
        raise DomainError(f"r must lie in [0, {n}], got {r}")
    return generating_polynomial(n, k).poly[r]


def enumerate_exact(n: int, k: int) -> list[Fraction]:
    """Distribution of the wrong-seat count by exhaustive recursion.

    Passenger ``i`` holds ticket ``i``.  Passengers ``0..k-1`` pick uniformly
    among free seats; the others take their own seat when free and otherwise
    pick uniformly among free seats.
    """
    check_nk(n, k)
    if n > ENUMERATION_MAX_N:
        raise SizeError(f"exhaustive enumeration limited to n <= {ENUMERATION_MAX_N}")
    dist = [Fraction(0)] * (n + 1)
    free = [True] * n

    def walk(i: int, wrong: int, prob: Fraction) -> None:
        if i == n:
            dist[wrong] += prob
            return
        if i >= k and free[i]:
            free[i] = False
            walk(i + 1, wrong, prob)
            free[i] = True
            return
        choices = [s for s in range(n) if free[s]]
        p = prob / len(choices)
        for s in choices:
            free[s] = False
            walk(i + 1, wrong + (s != i), p)
            free[s] = True

    walk(0, 0, Fraction(1))
    return dist
