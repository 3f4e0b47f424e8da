"""Normalized central moments m_l / m_2^(l/2) tend to the normal values (l-1)!!.

The approach is logarithmically slow, so the table extrapolates in 1/log n.
"""
import mpmath

from absentminded.asymptotics import limit_ratio

samples = (10**4, 10**6, 10**8)
print(f"{'k':>2} {'l':>2} " + " ".join(f"{'n=' + format(n, '.0e'):>12}" for n in samples) + f" {'extrap.':>10} {'claim':>6}")
for k in (1, 2, 3):
    for l in range(2, 9):
        est = limit_ratio(k, l, samples)
        row = " ".join(f"{mpmath.nstr(v, 6):>12}" for _, v in est.samples)
        print(f"{k:>2} {l:>2} {row} {mpmath.nstr(est.extrapolated_limit, 6):>10} {est.claimed_limit:>6}")

# odd orders shrink like 1/sqrt(k log n)
est = limit_ratio(2, 3, samples)
for n, v in est.samples:
    print(f"n={n:.0e}: m3/m2^1.5 = {mpmath.nstr(v, 6)}, sqrt(k log n) * ratio = {mpmath.nstr(v * mpmath.sqrt(2 * mpmath.log(n)), 6)}")
