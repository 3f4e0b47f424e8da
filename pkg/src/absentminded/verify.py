"""Invariant suites run by ``absentminded verify`` and the acceptance tests.

Each suite walks a grid of cells and records, per identity, how many cases
were checked and the first counterexample.  Grid cells are independent, so
they may be spread over worker processes without changing any result.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import mpmath

from .asymptotics import expand_moment, printed_m2_expansion, printed_m3_expansion, remainder_profile
from .closed_forms import eval_closed_form, eval_definite_sums
from .core import harmonic
from .distribution import enumerate_exact, generating_polynomial
from .moments import moment_pipeline, theta_operator_moments
from .symbolic import (
    HarmonicExpr,
    closed_form_expr,
    expr_equal,
    symbolic_central_moments,
)

SUITES = ("oracle", "closed-forms", "symbolic", "asymptotics")
DEFAULTS = {
    "oracle": (8, None),
    "closed-forms": (40, None),
    "symbolic": (30, 3),
    "asymptotics": (1600, 3),
}
ASYMPTOTIC_NS = (200, 400, 800, 1600)


@dataclass
class Check:
    name: str
    count: int = 0
    failures: int = 0
    counterexample: str | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, ok: bool, where: str) -> None:
        self.count += 1
        if not ok:
            self.failures += 1
            if self.counterexample is None:
                self.counterexample = where

    def to_json(self):
        return {
            "name": self.name,
            "status": "pass" if self.passed else "fail",
            "cases": self.count,
            "counterexample": self.counterexample,
        }


@dataclass
class Report:
    suite: str
    n_max: int
    k_max: int | None
    cells: int = 0
    _by_name: dict = field(default_factory=dict, repr=False)

    @property
    def checks(self) -> list[Check]:
        return list(self._by_name.values())

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, ok: bool, where: str) -> None:
        self._by_name.setdefault(name, Check(name)).record(ok, where)

    def check(self, name: str) -> Check:
        return self._by_name[name]


# --- per-cell workers (top level so they pickle) ---


def oracle_cell(nk, l_max: int = 6):
    n, k = nk
    out = []
    gp = generating_polynomial(n, k)
    oracle = enumerate_exact(n, k)
    out.append(("generating polynomial == exhaustive enumeration", gp.probabilities() == oracle))
    table = moment_pipeline(n, k, l_max)
    sums = [sum(r**l * p for r, p in enumerate(oracle)) for l in range(l_max + 1)]
    out.append((f"pipeline raw moments == oracle power sums (l <= {l_max})", list(table.raw_moments) == sums))
    out.append(("coefficient of w^1 is zero", oracle[1] == 0))
    return nk, out


def closed_forms_cell(nk, l_max: int = 4):
    n, k = nk
    out = []
    t = moment_pipeline(n, k, max(l_max, 4) if n >= 4 else 3)
    M1, M2 = t.raw_moments[1], t.raw_moments[2]
    m2 = t.central_moments[2]
    out.append(("E: definite sum == pipeline M1", eval_definite_sums("E_sum", n, k) == M1))
    out.append(("E: S-form == pipeline M1", eval_closed_form("E_closed_plain", n, k) == M1))
    out.append(("E: Sbar-form == pipeline M1", eval_closed_form("E_closed", n, k) == M1))
    out.append(("V: definite double sum == pipeline m2", eval_definite_sums("V_sum", n, k) == m2))
    out.append(("V: S-form == pipeline m2", eval_closed_form("V_closed_plain", n, k) == m2))
    out.append(("V: Sbar-form == pipeline m2", eval_closed_form("V_closed", n, k) == m2))
    out.append(("M2 (with restored (k-1)k/((n-1)n) term) == pipeline M2", eval_closed_form("M2_completed", n, k) == M2))
    out.append(
        ("M2 as printed == pipeline M2 - (k-1)k/((n-1)n)", eval_closed_form("M2", n, k) == M2 - type(M2)((k - 1) * k, (n - 1) * n))
    )
    if n >= 3:
        m3 = t.central_moments[3]
        out.append(("m3 closed form == pipeline m3", eval_closed_form("m3", n, k) == m3))
        out.append(("display labelled M3 == pipeline central m3", eval_closed_form("M3", n, k) == m3))
    if n >= 4:
        m4 = t.central_moments[4]
        sk2 = harmonic(2, k - 1)
        out.append(("m4 (with restored 3k^4 Sbar2(k)^2 term) == pipeline m4", eval_closed_form("m4_completed", n, k) == m4))
        out.append(("m4 as printed == pipeline m4 - 3k^4 Sbar2(k)^2", eval_closed_form("m4", n, k) == m4 - 3 * k**4 * sk2**2))
        if k == 1:
            out.append(("m4(n,1) display == pipeline m4", eval_closed_form("m4_k1", n, 1) == m4))
        if k == 2:
            out.append(("m4(n,2) display == pipeline m4", eval_closed_form("m4_k2", n, 2) == m4))
    return nk, out


def _run_cells(fn, cells, workers: int):
    if workers and workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, cells, chunksize=max(1, len(cells) // (4 * workers))))
    return [fn(c) for c in cells]


def _grid(n_min: int, n_max: int, k_max: int | None = None):
    return [(n, k) for n in range(n_min, n_max + 1) for k in range(1, (n if k_max is None else min(n, k_max)) + 1)]


def oracle_suite(n_max: int = 8, workers: int = 1) -> Report:
    if n_max > 10:
        raise ValueError("the enumeration oracle is limited to n <= 10")
    cells = _grid(2, n_max)
    rep = Report("oracle", n_max, None, len(cells))
    for (n, k), results in _run_cells(oracle_cell, cells, workers):
        for name, ok in results:
            rep.add(name, ok, f"n={n}, k={k}")
    return rep


def closed_forms_suite(n_max: int = 40, workers: int = 1, n_min: int = 2) -> Report:
    cells = _grid(n_min, n_max)
    rep = Report("closed-forms", n_max, None, len(cells))
    for (n, k), results in _run_cells(closed_forms_cell, cells, workers):
        for name, ok in results:
            rep.add(name, ok, f"n={n}, k={k}")
    return rep


def symbolic_suite(n_max: int = 30, k_max: int = 3, l_max: int = 4) -> Report:
    rep = Report("symbolic", n_max, k_max)
    for k in range(1, k_max + 1):
        ms = symbolic_central_moments(k, l_max)
        rep.add("m1 normalizes to zero", ms[1] == HarmonicExpr(), f"k={k}")
        for l in range(l_max + 1):
            rep.add("weight of m_l <= l", ms[l].weight() <= l, f"k={k}, l={l}")
        for n in range(max(4, k + 1), n_max + 1):
            rep.cells += 1
            t = moment_pipeline(n, k, l_max)
            for l in range(l_max + 1):
                rep.add(f"symbolic m_l == pipeline (l <= {l_max})", ms[l](n) == t.central_moments[l], f"n={n}, k={k}, l={l}")
    if k_max >= 1:
        eq, w = expr_equal(symbolic_central_moments(1, 4)[4], closed_form_expr("m4_k1", 1))
        rep.add("symbolic m4(n,1) == printed m4(n,1) display", eq, f"witness n={w}")
    if k_max >= 2:
        eq, w = expr_equal(symbolic_central_moments(2, 4)[4], closed_form_expr("m4_k2", 2))
        rep.add("symbolic m4(n,2) == printed m4(n,2) display", eq, f"witness n={w}")
    for k in range(1, k_max + 1):
        eq, w = expr_equal(closed_form_expr("V_closed_plain", k), closed_form_expr("V_closed", k))
        rep.add("V: S-form and Sbar-form normalize identically", eq, f"k={k}, witness n={w}")
    return rep


def asymptotics_suite(k_max: int = 3, ns=ASYMPTOTIC_NS) -> Report:
    rep = Report("asymptotics", max(ns), k_max)
    for k in range(1, k_max + 1):
        ms = symbolic_central_moments(k, 3)
        for l in (2, 3):
            rep.cells += 1
            prof = remainder_profile(expand_moment(k, l, 3, expr=ms[l]), ms[l], ns)
            spread = max(prof) / min(prof)
            rep.add(f"m{l} expansion: n^4 * remainder varies < 4x", spread < 4, f"k={k}, spread={mpmath.nstr(spread, 5)}")
        for l, printed in ((2, printed_m2_expansion(k)), (3, printed_m3_expansion(k))):
            derived = expand_moment(k, l, 3, expr=ms[l])
            keys = set(printed.coefficients) | set(derived.coefficients)
            ok = all(abs(printed.coefficient(*key) - derived.coefficient(*key)) < mpmath.mpf(10) ** -25 for key in keys)
            rep.add(f"printed m{l} expansion (harmonics of k read as Sbar) == derived", ok, f"k={k}")
    return rep


def paths_suite(n_max: int = 60, l_max: int = 8) -> Report:
    """Stirling route vs theta route; the pipeline itself raises on disagreement."""
    rep = Report("paths", n_max, None)
    for n, k in _grid(2, n_max):
        rep.cells += 1
        t = moment_pipeline(n, k, l_max)
        rep.add("m1 == 0", t.central_moments[1] == 0, f"n={n}, k={k}")
        rep.add("exp + stirling == theta", t.theta_checked, f"n={n}, k={k}")
        if n <= 12:
            gp = generating_polynomial(n, k)
            rep.add("literal theta operator == power sums", theta_operator_moments(gp, l_max) == list(t.raw_moments), f"n={n}, k={k}")
    return rep


def run_suite(suite: str, n_max: int | None = None, k_max: int | None = None, workers: int = 1) -> Report:
    d_n, d_k = DEFAULTS[suite]
    n_max = d_n if n_max is None else n_max
    k_max = d_k if k_max is None else k_max
    if suite == "oracle":
        return oracle_suite(n_max, workers)
    if suite == "closed-forms":
        return closed_forms_suite(n_max, workers)
    if suite == "symbolic":
        return symbolic_suite(n_max, k_max)
    if suite == "asymptotics":
        return asymptotics_suite(k_max)
    raise ValueError(f"unknown suite {suite!r}")
