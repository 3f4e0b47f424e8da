"""Monte Carlo simulation of the seating process.

Trials are vectorized with NumPy: all trials of a chunk advance one passenger
at a time.  Each trial keeps its free seats in the first ``m`` slots of a row
(``m`` = number of free seats, identical across trials at every step), plus
the inverse map seat -> slot, so a uniform draw and a removal are both O(1).

Randomness: ``numpy.random.PCG64`` streams spawned from
``SeedSequence(seed)``, one per worker; bounded integers come from
``Generator.integers`` (Lemire's unbiased method).  Results depend only on
``(n, k, trials, seed, worker_count)``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import stats

from .distribution import check_nk
from .errors import DomainError

CHUNK = 100_000


@dataclass(frozen=True)
class SimConfig:
    n: int
    k: int
    trials: int
    seed: int = 0
    worker_count: int = 1


@dataclass(frozen=True)
class SimResult:
    config: SimConfig
    histogram: tuple[int, ...]
    raw_moments: tuple[Fraction, ...]
    raw_moment_se: tuple[float, ...]
    variance: Fraction
    variance_se: float

    @property
    def mean(self) -> Fraction:
        return self.raw_moments[1]


def _run_chunk(rng: np.random.Generator, n: int, k: int, size: int) -> np.ndarray:
    rows = np.arange(size)
    free = np.tile(np.arange(n, dtype=np.int32), (size, 1))
    pos = free.copy()
    wrong = np.zeros(size, dtype=np.int32)
    for i in range(n):
        m = n - i
        if i < k:
            j = rng.integers(0, m, size=size)
        else:
            j = pos[:, i].astype(np.int64)
            taken = j >= m
            cnt = int(taken.sum())
            if cnt:
                j[taken] = rng.integers(0, m, size=cnt)
        seat = free[rows, j]
        wrong += seat != i
        last = free[:, m - 1].copy()
        free[rows, j] = last
        pos[rows, last] = j
        pos[rows, seat] = m - 1
    return np.bincount(wrong, minlength=n + 1)


def _worker(args) -> np.ndarray:
    n, k, trials, seed_seq = args
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    hist = np.zeros(n + 1, dtype=np.int64)
    done = 0
    while done < trials:
        size = min(CHUNK, trials - done)
        hist += _run_chunk(rng, n, k, size)
        done += size
    return hist


def simulate(config: SimConfig, l_max: int = 2) -> SimResult:
    n, k, trials = config.n, config.k, config.trials
    check_nk(n, k)
    if trials < 1:
        raise DomainError("trials must be >= 1")
    if config.worker_count < 1:
        raise DomainError("worker_count must be >= 1")
    w = config.worker_count
    seqs = np.random.SeedSequence(config.seed).spawn(w)
    shares = [trials // w + (i < trials % w) for i in range(w)]
    jobs = [(n, k, s, seq) for s, seq in zip(shares, seqs)]
    if w == 1:
        parts = [_worker(jobs[0])]
    else:
        with ProcessPoolExecutor(max_workers=w) as pool:
            parts = list(pool.map(_worker, jobs))
    hist = np.zeros(n + 1, dtype=np.int64)
    for p in parts:
        hist += p
    return _summarize(config, [int(h) for h in hist], l_max)


def _summarize(config: SimConfig, hist: list[int], l_max: int) -> SimResult:
    T = sum(hist)
    top = max(2 * l_max, 4)
    # exact empirical power sums from the integer histogram
    raw = [Fraction(sum(r**l * h for r, h in enumerate(hist)), T) for l in range(top + 1)]
    se = tuple(
        math.sqrt(max(float(raw[2 * l] - raw[l] ** 2), 0.0) / T) for l in range(l_max + 1)
    )
    mean = raw[1]
    mu = [sum(Fraction(h) * (r - mean) ** l for r, h in enumerate(hist)) / T for l in (2, 4)]
    var = mu[0]
    var_se = math.sqrt(max(float(mu[1] - var**2), 0.0) / T)
    return SimResult(config, tuple(hist), tuple(raw[: l_max + 1]), se, var, var_se)


def z_score(estimate, exact, se: float) -> float:
    if se == 0:
        return 0.0 if estimate == exact else math.inf
    return float(estimate - exact) / se


def chi_square(histogram, probabilities, min_expected: float = 5.0):
    """Pearson chi-square of a histogram against exact probabilities.

    Buckets with expected count below ``min_expected`` are pooled into one.
    Returns ``(statistic, dof, p_value)``.
    """
    T = sum(histogram)
    obs, exp = [], []
    pool_o = pool_e = 0.0
    for h, p in zip(histogram, probabilities):
        e = T * float(p)
        if e >= min_expected:
            obs.append(h)
            exp.append(e)
        else:
            pool_o += h
            pool_e += e
    if pool_e > 0:
        obs.append(pool_o)
        exp.append(pool_e)
    stat = sum((o - e) ** 2 / e for o, e in zip(obs, exp))
    dof = len(obs) - 1
    return stat, dof, float(stats.chi2.sf(stat, dof))
