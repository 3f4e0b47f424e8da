"""Exponential, raw and central moments of the wrong-seat count.

The exact pipeline runs three steps:

1. exponential (falling-factorial) moments ``Mbar_l = f^{(l)}(1)``,
2. raw moments ``M_l = sum_r S(l, r) Mbar_r`` (Stirling numbers, second kind),
3. central moments ``m_l = sum_i C(l, i) (-1)^(l-i) M_i M_1^(l-i)``.

Raw moments are also computed directly as ``(w d/dw)^l f`` at ``w = 1`` and
the two routes must agree exactly.

:func:`big_n_moments` evaluates the same quantities in floating point for ``n``
far beyond the exact range, never forming the degree-``n`` polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import mpmath

from .core import complete_bell, stirling2_row
from .distribution import GeneratingPolynomial, check_nk, generating_polynomial
from .errors import CrossCheckError, DomainError, PrecisionError, SizeError

EXACT_MAX_N = 2000
BIG_N_MAX_LMAX = 12
DEFAULT_PRECISION = 128


@dataclass(frozen=True)
class MomentTable:
    n: int
    k: int
    l_max: int
    exp_moments: tuple[Fraction, ...]
    raw_moments: tuple[Fraction, ...]
    central_moments: tuple[Fraction, ...]
    theta_checked: bool = True


def _falling(r: int, l: int) -> int:
    out = 1
    for i in range(l):
        out *= r - i
    return out


def exponential_moments(gp: GeneratingPolynomial, l_max: int) -> list[Fraction]:
    """Mbar_0..Mbar_{l_max}: the l-th derivative of f at w = 1."""
    if l_max < 0:
        raise DomainError("l_max must be >= 0")
    den = gp.denominator
    c = gp.numerators
    return [
        Fraction(sum(_falling(r, l) * c[r] for r in range(l, len(c))), den)
        for l in range(l_max + 1)
    ]


def theta_moments(gp: GeneratingPolynomial, l_max: int) -> list[Fraction]:
    """M_0..M_{l_max} as power sums ``sum_r r^l p_r`` (theta = w d/dw at w = 1)."""
    if l_max < 0:
        raise DomainError("l_max must be >= 0")
    den = gp.denominator
    c = gp.numerators
    out = []
    powers = [1] * len(c)
    for l in range(l_max + 1):
        out.append(Fraction(sum(p * a for p, a in zip(powers, c)), den))
        powers = [p * r for r, p in enumerate(powers)]
    return out


def theta_operator_moments(gp: GeneratingPolynomial, l_max: int) -> list[Fraction]:
    """Literal route: apply ``w d/dw`` to the polynomial ``l`` times, evaluate at 1.

    Slow (one polynomial derivative per order); kept as a redundancy check.
    """
    p = gp.poly
    out = [p.eval_at(1)]
    for _ in range(l_max):
        p = p.derivative().mul_linear(0, 1)
        out.append(p.eval_at(1))
    return out


def stirling_transform(exp_moments) -> list:
    """Raw moments from exponential moments: M_l = sum_{r=1}^{l} S(l, r) Mbar_r."""
    exp_moments = list(exp_moments)
    out = [exp_moments[0] * 0 + 1] if exp_moments else []
    for l in range(1, len(exp_moments)):
        row = stirling2_row(l)
        acc = exp_moments[0] * 0
        for r in range(1, l + 1):
            acc = acc + exp_moments[r] * row[r]
        out.append(acc)
    return out


def central_moments(raw_moments, l_max: int | None = None) -> list:
    """m_l = sum_{i=0}^{l} C(l, i) (-1)^(l-i) M_i M_1^(l-i)."""
    raw = list(raw_moments)
    if l_max is None:
        l_max = len(raw) - 1
    if l_max >= len(raw):
        raise DomainError("not enough raw moments for requested order")
    if l_max == 0:
        return [raw[0]]
    mean = raw[1]
    powers = [raw[0] * 0 + 1]
    for _ in range(l_max):
        powers.append(powers[-1] * mean)
    out = []
    for l in range(l_max + 1):
        acc = raw[0] * 0
        for i in range(l + 1):
            term = raw[i] * powers[l - i] * comb(l, i)
            acc = acc - term if (l - i) % 2 else acc + term
        out.append(acc)
    return out


def central_moment(raw_moments, l: int):
    """Single order of :func:`central_moments`, without building the lower ones."""
    raw = list(raw_moments)
    if l >= len(raw):
        raise DomainError("not enough raw moments for requested order")
    mean = raw[1] if l else None
    acc = raw[0] * 0
    power = raw[0] * 0 + 1
    for i in range(l, -1, -1):
        term = raw[i] * power * comb(l, i)
        acc = acc - term if (l - i) % 2 else acc + term
        if i:
            power = power * mean
    return acc


def moment_pipeline(n: int, k: int, l_max: int, max_n: int = EXACT_MAX_N) -> MomentTable:
    """Exact three-step pipeline with the theta-route cross-check."""
    check_nk(n, k)
    if n > max_n:
        raise SizeError(
            f"n={n} exceeds the exact range n <= {max_n}; use big_n_moments for large n"
        )
    gp = generating_polynomial(n, k)
    exp_m = exponential_moments(gp, l_max)
    raw = stirling_transform(exp_m)
    theta = theta_moments(gp, l_max)
    if raw != theta:
        bad = next(l for l in range(l_max + 1) if raw[l] != theta[l])
        raise CrossCheckError(f"raw moment paths disagree at l={bad} for n={n}, k={k}")
    cen = central_moments(raw, l_max)
    return MomentTable(n, k, l_max, tuple(exp_m), tuple(raw), tuple(cen))


# --- truncated-sum assembly shared by the floating and symbolic routes ---


def assemble_exponential_moments(k: int, l_max: int, prefactor, log_derivatives, one):
    """Mbar_0..Mbar_{l_max} from the truncated hypergeometric sum.

    For each ``r`` in ``max(0, k-l)..k`` the factor ``(1-w)^(k-r)`` vanishes at
    ``w = 1`` unless exactly ``k - r`` derivatives hit it, which contributes
    ``C(l, k-r) (k-r)! (-1)^(k-r)``.  The rest of the summand,
    ``h_r(w) = (1 + r w) w^r (2 + r w)_(n-k-1)``, is differentiated through
    its log-derivatives and complete Bell polynomials.

    ``prefactor(r)`` must return ``r! C(k, r) h_r(1) / n!`` and
    ``log_derivatives(r, j_max)`` the list of ``(log h_r)^{(i)}(1)``,
    ``i = 1..j_max``, both in the caller's ring.
    """
    zero = one * 0
    out = [zero] * (l_max + 1)
    for r in range(max(0, k - l_max), k + 1):
        s = k - r
        j_max = l_max - s
        bell = complete_bell(log_derivatives(r, j_max), one)
        pre = prefactor(r)
        for l in range(s, l_max + 1):
            c = comb(l, s) * factorial(s) * (-1 if s % 2 else 1)
            out[l] = out[l] + pre * bell[l - s] * c
    return out


@dataclass(frozen=True)
class BigNMomentResult:
    n: int
    k: int
    l_max: int
    exp_moments: tuple
    raw_moments: tuple
    central_moments: tuple
    precision: int


def _harmonic_bar_mp(o: int, n: int):
    """S_o(n - 1) at the current mpmath precision."""
    if o == 1:
        return mpmath.harmonic(n - 1)
    return mpmath.zeta(o) - mpmath.zeta(o, n)


def _big_n_exp_moments(n: int, k: int, l_max: int):
    sbar = {}

    def shifted(o: int, c: int):
        # S_o(n + c) for -k <= c <= 0
        if o not in sbar:
            sbar[o] = _harmonic_bar_mp(o, n)
        v = sbar[o]
        if c == 0:
            return v + mpmath.mpf(1) / mpmath.mpf(n) ** o
        for m in range(n + c + 1, n):
            v -= mpmath.mpf(1) / mpmath.mpf(m) ** o
        return v

    def prefactor(r):
        den = mpmath.mpf(1)
        for t in range(k - r):
            den *= n - t
        return comb(k, r) / den

    def log_derivatives(r, j_max):
        out = []
        for i in range(1, j_max + 1):
            if r == 0:
                out.append(mpmath.mpf(0))
                continue
            base = mpmath.mpf(r) / (1 + r)
            poch = shifted(i, r - k) - _small_harmonic_mp(i, r + 1)
            v = base**i + r + mpmath.mpf(r) ** i * poch
            sign = 1 if i % 2 else -1
            out.append(sign * factorial(i - 1) * v)
        return out

    return assemble_exponential_moments(k, l_max, prefactor, log_derivatives, mpmath.mpf(1))


def _small_harmonic_mp(o: int, m: int):
    return mpmath.fsum(mpmath.mpf(1) / mpmath.mpf(i) ** o for i in range(1, m + 1))


def _big_n_at(n: int, k: int, l_max: int, prec: int):
    with mpmath.workprec(prec):
        exp_m = _big_n_exp_moments(n, k, l_max)
        raw = stirling_transform(exp_m)
        cen = central_moments(raw, l_max)
        return exp_m, raw, cen


def big_n_moments(n: int, k: int, l_max: int, precision: int = DEFAULT_PRECISION) -> BigNMomentResult:
    """Floating-point moments for large ``n``, checked against a doubled precision.

    Raises :class:`PrecisionError` if any value at ``precision`` bits differs
    from the ``2 * precision`` evaluation by more than ``2^(-precision/2)``
    relative (absolute near zero, scaled by the raw moment of the same order).
    """
    check_nk(n, k)
    if precision < 64:
        raise DomainError("precision must be at least 64 mantissa bits")
    if not 0 <= l_max <= BIG_N_MAX_LMAX:
        raise DomainError(f"l_max must lie in [0, {BIG_N_MAX_LMAX}]")
    lo = _big_n_at(n, k, l_max, precision)
    hi = _big_n_at(n, k, l_max, 2 * precision)
    tol = mpmath.mpf(2) ** (-(precision // 2))
    with mpmath.workprec(2 * precision):
        for name, a_list, b_list, scales in zip(
            ("exponential", "raw", "central"), lo, hi, (hi[0], hi[1], hi[1])
        ):
            for l, (a, b) in enumerate(zip(a_list, b_list)):
                scale = max(abs(b), abs(scales[l]) * tol, mpmath.mpf(2) ** -precision)
                if abs(a - b) > tol * scale:
                    raise PrecisionError(
                        f"{name} moment l={l} unstable at {precision} bits for n={n}, k={k}"
                    )
    return BigNMomentResult(n, k, l_max, tuple(lo[0]), tuple(lo[1]), tuple(lo[2]), precision)
