"""Large-``n`` behaviour: Euler-Maclaurin expansions and normalized-moment limits.

Series are kept as maps ``(j, t) -> c`` standing for ``c * n^(-j) * log(n)^t``.
Constants (Euler's gamma, zeta values) are numeric at a configurable
precision; rational prefactors are expanded exactly in ``1/n`` before being
converted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .closed_forms import delta
from .core import bernoulli, double_factorial_odd, harmonic
from .errors import DependencyError, DomainError, PrecisionError, SizeError
from .moments import DEFAULT_PRECISION, big_n_moments
from .symbolic import HarmonicExpr, RationalFunction, symbolic_central_moment

DEFAULT_ORDER = 3
DEFAULT_LIMIT_SAMPLES = (10**4, 10**5, 10**6, 10**7, 10**8)


@dataclass
class ConstantPool:
    """Euler's constant and zeta values at ``precision`` bits."""

    precision: int = DEFAULT_PRECISION
    _zeta: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        with mpmath.workprec(self.precision):
            self.gamma = +mpmath.euler

    def zeta(self, j: int):
        if j < 2:
            raise DomainError("zeta(j) needs j >= 2")
        if j not in self._zeta:
            with mpmath.workprec(self.precision):
                self._zeta[j] = mpmath.zeta(j)
        return self._zeta[j]


@dataclass
class AsymptoticSeries:
    """``sum c[j, t] * n^(-j) * log(n)^t`` with remainder ``O(n^-(order+1))`` up to logs."""

    k: int | None
    order: int
    coefficients: dict
    precision: int = DEFAULT_PRECISION

    @property
    def error_exponent(self) -> int:
        return self.order + 1

    def coefficient(self, j: int, t: int = 0):
        return self.coefficients.get((j, t), mpmath.mpf(0))

    def __call__(self, n):
        with mpmath.workprec(self.precision):
            n = mpmath.mpf(n)
            L = mpmath.log(n)
            return mpmath.fsum(c * n ** (-j) * L**t for (j, t), c in self.coefficients.items())

    def render(self, digits: int = 12) -> str:
        parts = []
        for (j, t), c in sorted(self.coefficients.items()):
            s = mpmath.nstr(c, digits)
            if j:
                s += f" * n^-{j}"
            if t:
                s += " * log(n)" + (f"^{t}" if t > 1 else "")
            parts.append(s)
        return " + ".join(parts) if parts else "0"

    def to_json(self, digits: int = 30):
        return {
            "k": self.k,
            "order": self.order,
            "error_exponent": self.error_exponent,
            "precision_bits": self.precision,
            "terms": [
                {"n_power": -j, "log_power": t, "coefficient": mpmath.nstr(c, digits)}
                for (j, t), c in sorted(self.coefficients.items())
            ],
        }


# --- series algebra on dicts (j, t) -> coefficient ---


def _series_mul(a: dict, b: dict, jmax: int) -> dict:
    out: dict = {}
    for (j1, t1), c1 in a.items():
        for (j2, t2), c2 in b.items():
            j = j1 + j2
            if j > jmax:
                continue
            key = (j, t1 + t2)
            out[key] = out.get(key, 0) + c1 * c2
    return out


def _series_add(a: dict, b: dict, scale=1) -> dict:
    out = dict(a)
    for key, c in b.items():
        out[key] = out.get(key, 0) + scale * c
    return out


def _harmonic_series_exact(o: int, jmax: int):
    """Rational part of the Euler-Maclaurin series of ``Sb_o(n)``.

    The constant (``gamma`` for ``o = 1``, ``zeta(o)`` otherwise) is added by
    the caller.
    """
    out: dict = {}
    if o == 1:
        out[(0, 1)] = Fraction(1)
        out[(1, 0)] = Fraction(-1, 2)
        t = 1
        while 2 * t <= jmax:
            out[(2 * t, 0)] = -bernoulli(2 * t) / (2 * t)
            t += 1
    else:
        # tail sum_{m >= n} m^-o = n^(1-o)/(o-1) + n^-o/2 + sum_t B_2t/(2t)! (o)_{2t-1} n^-(o+2t-1)
        tail = {(o - 1, 0): Fraction(1, o - 1), (o, 0): Fraction(1, 2)}
        t = 1
        while o + 2 * t - 1 <= jmax:
            rising = math.prod(range(o, o + 2 * t - 1))
            tail[(o + 2 * t - 1, 0)] = bernoulli(2 * t) / math.factorial(2 * t) * rising
            t += 1
        out = {key: -c for key, c in tail.items() if key[0] <= jmax}
    return {key: c for key, c in out.items() if key[0] <= jmax}


def harmonic_expansion(o: int, N: int = DEFAULT_ORDER, pool: ConstantPool | None = None) -> AsymptoticSeries:
    """Euler-Maclaurin expansion of ``Sb_o(n) = S_o(n - 1)`` through ``n^-N``."""
    if o < 1 or N < 1:
        raise DomainError("need o >= 1 and N >= 1")
    pool = pool or ConstantPool()
    with mpmath.workprec(pool.precision):
        coeffs = {key: mpmath.mpf(c.numerator) / c.denominator for key, c in _harmonic_series_exact(o, N).items()}
        const = pool.gamma if o == 1 else pool.zeta(o)
        coeffs[(0, 0)] = coeffs.get((0, 0), 0) + const
    return AsymptoticSeries(None, N, coeffs, pool.precision)


def rational_function_series(rf: RationalFunction, jmax: int) -> dict:
    """Exact Laurent expansion of ``rf`` in ``1/n`` through ``n^-jmax``; keys ``(j, 0)``."""
    # num(n) = sum c_d n^d contributes at j = -d
    series = {(-d, 0): Fraction(c) for d, c in enumerate(rf.num.coeffs) if c != 0}
    for a, m in rf.roots.items():
        # 1/(n - a) = sum_{i >= 0} a^i n^-(i+1)
        geo = {(i + 1, 0): Fraction(a) ** i for i in range(jmax + rf.num.degree + 1)}
        for _ in range(m):
            series = _series_mul(series, geo, jmax)
    return {key: c for key, c in series.items() if key[0] <= jmax and c != 0}


def expand_expr(expr: HarmonicExpr, N: int = DEFAULT_ORDER, pool: ConstantPool | None = None, k=None) -> AsymptoticSeries:
    """Substitute Euler-Maclaurin series into a harmonic expression and collect terms."""
    pool = pool or ConstantPool()
    # factors may grow like n^g; expand everything further by that margin
    margin = max([0] + [c.order_at_infinity() for c in expr.terms.values()])
    jmax = N + margin
    with mpmath.workprec(pool.precision):
        hs = {}
        total: dict = {}
        for exps, coeff in expr.terms.items():
            part = {key: mpmath.mpf(c.numerator) / c.denominator for key, c in rational_function_series(coeff, jmax).items()}
            for j, e in enumerate(exps, start=1):
                if not e:
                    continue
                if j not in hs:
                    hs[j] = harmonic_expansion(j, jmax, pool).coefficients
                for _ in range(e):
                    part = _series_mul(part, hs[j], jmax)
            total = _series_add(total, part)
        coeffs = {key: c for key, c in total.items() if key[0] <= N and c != 0}
    return AsymptoticSeries(k, N, coeffs, pool.precision)


def expand_moment(k: int, l: int, N: int = DEFAULT_ORDER, pool: ConstantPool | None = None, expr: HarmonicExpr | None = None) -> AsymptoticSeries:
    """Asymptotic expansion of the central moment ``m_l(n, k)`` at numeric ``k``."""
    if expr is None:
        try:
            expr = symbolic_central_moment(k, l)
        except (SizeError, DomainError) as exc:
            raise DependencyError(f"no closed form available for k={k}, l={l}: {exc}") from exc
    return expand_expr(expr, N, pool, k=k)


# --- printed expansions (numeric k) ---


def printed_m2_expansion(k: int, pool: ConstantPool | None = None, harmonic_k: str = "bar", quadratic: str = "display") -> AsymptoticSeries:
    """The printed expansion of ``m_2`` through ``n^-3``, as a numeric series.

    ``harmonic_k`` chooses how the printed ``S_o(k)`` is read: ``"plain"`` is
    ``S_o(k)`` literally, ``"bar"`` is ``S_o(k - 1)``.  ``quadratic`` selects the
    ``n^-2`` coefficient: ``"display"`` is ``k(18k - 25)/12`` from the summary
    display, ``"output"`` is ``k(6k - 1)/12`` from the session output above it.
    """
    pool = pool or ConstantPool()
    off = 0 if harmonic_k == "plain" else -1
    S1k, S2k = harmonic(1, k + off), harmonic(2, k + off)
    q = Fraction(k * (18 * k - 25), 12) if quadratic == "display" else Fraction(k * (6 * k - 1), 12)
    with mpmath.workprec(pool.precision):
        g, z2 = pool.gamma, pool.zeta(2)
        f = lambda x: mpmath.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else mpmath.mpf(x)
        c = {
            (3, 0): f(Fraction(7 * (k - 1) * k, 6)),
            (2, 0): f(q),
            (1, 0): f(Fraction(k * (2 * k - 1), 2)) - 2 * k * f(S1k) + 2 * k * g,
            (1, 1): mpmath.mpf(2 * k),
            (0, 0): -k * f(S1k) + k * k * f(S2k) - k * k * z2 + k * g,
            (0, 1): mpmath.mpf(k),
        }
    return AsymptoticSeries(k, 3, c, pool.precision)


def printed_m3_expansion(k: int, pool: ConstantPool | None = None, harmonic_k: str = "bar") -> AsymptoticSeries:
    """The printed expansion of ``m_3`` through ``n^-3`` (delta terms for k >= 2)."""
    pool = pool or ConstantPool()
    off = 0 if harmonic_k == "plain" else -1
    S1, S2, S3 = (harmonic(o, k + off) for o in (1, 2, 3))
    d = delta(k - 2)
    with mpmath.workprec(pool.precision):
        g, z2, z3 = pool.gamma, pool.zeta(2), pool.zeta(3)
        f = lambda x: mpmath.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else mpmath.mpf(x)
        S1, S2, S3 = f(S1), f(S2), f(S3)
        c: dict = {}

        def add(j, t, v):
            c[(j, t)] = c.get((j, t), 0) + v

        add(3, 0, -f(Fraction(k * (31 - 38 * k + 8 * k * k), 4)))
        add(2, 0, -f(Fraction(k * (73 - 90 * k + 12 * k * k), 12)))
        add(1, 0, f(Fraction(k * (6 * k - 1), 2)) - 3 * k * (2 * k - 1) * z2)
        # (gamma + log n) * (k - k(12k-13)/(2n^3) - 3k(2k-3)/n^2 + 6k/n + 6k S1/n)
        lin = {0: mpmath.mpf(k), 3: -f(Fraction(k * (12 * k - 13), 2)), 2: mpmath.mpf(-3 * k * (2 * k - 3)), 1: 6 * k + 6 * k * S1}
        for j, v in lin.items():
            add(j, 0, g * v)
            add(j, 1, v)
        # (-k + k(12k-13)/(2n^3) + 3k(2k-3)/n^2 - 6k/n) S1
        add(0, 0, -k * S1)
        add(3, 0, f(Fraction(k * (12 * k - 13), 2)) * S1)
        add(2, 0, 3 * k * (2 * k - 3) * S1)
        add(1, 0, -6 * k * S1)
        add(1, 0, -3 * k * S1**2)
        add(0, 0, 3 * k * k * S2)
        add(1, 0, 3 * k * (2 * k - 1) * S2)
        add(0, 0, -2 * k**3 * S3 - 3 * k * k * z2 + 2 * k**3 * z3)
        # -3k (gamma + log n)^2 / n
        add(1, 0, -3 * k * g * g)
        add(1, 1, -6 * k * g)
        add(1, 2, mpmath.mpf(-3 * k))
        add(3, 0, -3 * (k - 2) ** 2 * k * d)
        add(2, 0, 3 * (k - 2) * k * d)
    return AsymptoticSeries(k, 3, {key: v for key, v in c.items()}, pool.precision)


def remainder_profile(series: AsymptoticSeries, exact, ns) -> list:
    """``|series(n) - exact(n)| * n^(order+1)`` for each ``n``."""
    out = []
    with mpmath.workprec(series.precision):
        for n in ns:
            ex = exact(n)
            ex = mpmath.mpf(ex.numerator) / ex.denominator if isinstance(ex, Fraction) else mpmath.mpf(ex)
            out.append(abs(series(n) - ex) * mpmath.mpf(n) ** series.error_exponent)
    return out


# --- limits ---


@dataclass
class LimitEstimate:
    k: int
    l: int
    samples: list  # (n, ratio)
    extrapolated_limit: object
    claimed_limit: int
    precision: int

    @property
    def relative_error(self):
        if self.claimed_limit == 0:
            return abs(self.extrapolated_limit)
        return abs(self.extrapolated_limit / self.claimed_limit - 1)

    def odd_ratios_decreasing(self) -> bool:
        r = [abs(v) for _, v in self.samples]
        return all(a > b for a, b in zip(r, r[1:]))

    def to_json(self, digits: int = 20):
        return {
            "k": self.k,
            "l": self.l,
            "precision_bits": self.precision,
            "samples": [{"n": n, "ratio": mpmath.nstr(v, digits)} for n, v in self.samples],
            "extrapolated_limit": mpmath.nstr(self.extrapolated_limit, digits),
            "claimed_limit": self.claimed_limit,
        }


def claimed_limit(l: int) -> int:
    """(l - 1)!! for even ``l``, 0 for odd ``l``."""
    if l < 2:
        raise DomainError("limits are defined for l >= 2")
    return double_factorial_odd(l // 2) if l % 2 == 0 else 0


def extrapolate_inverse_log(points) -> object:
    """Value at ``x = 0`` of the polynomial through ``(1/log n, ratio)`` points (Neville)."""
    xs = [1 / mpmath.log(n) for n, _ in points]
    ys = [v for _, v in points]
    p = list(ys)
    m = len(xs)
    for level in range(1, m):
        for i in range(m - level):
            p[i] = (xs[i + level] * p[i] - xs[i] * p[i + 1]) / (xs[i + level] - xs[i])
    return p[0]


def limit_ratio(k: int, l: int, n_samples=DEFAULT_LIMIT_SAMPLES, precision: int = DEFAULT_PRECISION, fit_points: int = 3) -> LimitEstimate:
    """Normalized central moment ``m_l / m_2^(l/2)`` at increasing ``n`` and its extrapolation.

    The extrapolation fits a polynomial in ``1/log n`` through the last
    ``fit_points`` samples (2 means linear) and reads off its value at 0.
    """
    ns = sorted(int(n) for n in n_samples)
    if len(ns) < 2:
        raise DomainError("need at least two sample points")
    samples = []
    for n in ns:
        res = big_n_moments(n, k, max(l, 2), precision)
        with mpmath.workprec(precision):
            m2 = res.central_moments[2]
            ratio = res.central_moments[l] / m2 ** (mpmath.mpf(l) / 2)
            if not mpmath.isfinite(ratio):
                raise PrecisionError(f"non-finite ratio at n={n}")
            samples.append((n, ratio))
    with mpmath.workprec(precision):
        fit = samples[-max(2, min(fit_points, len(samples))):]
        est = extrapolate_inverse_log(fit)
    return LimitEstimate(k, l, samples, est, claimed_limit(l), precision)
