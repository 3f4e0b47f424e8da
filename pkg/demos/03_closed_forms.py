"""The printed closed forms, evaluated exactly and compared with the pipeline.

Two general displays are not right as printed; the differences are exact
and simple, and the completed versions agree everywhere.
"""
from fractions import Fraction

from absentminded import moment_pipeline
from absentminded.closed_forms import eval_closed_form, eval_definite_sums
from absentminded.core import harmonic

n, k = 17, 3
t = moment_pipeline(n, k, 4)
M, m = t.raw_moments, t.central_moments

print("E  as sum / S-form / Sbar-form:", eval_definite_sums("E_sum", n, k) == eval_closed_form("E_closed_plain", n, k) == eval_closed_form("E_closed", n, k) == M[1])
print("V  as sum / S-form / Sbar-form:", eval_definite_sums("V_sum", n, k) == eval_closed_form("V_closed_plain", n, k) == eval_closed_form("V_closed", n, k) == m[2])
print("m3 closed form:", eval_closed_form("m3", n, k) == m[3])

# the display labelled M3 is the central moment, not the raw one
print("'M3' display == central m3:", eval_closed_form("M3", n, k) == m[3], "| == raw M3:", eval_closed_form("M3", n, k) == M[3])

# raw M2 as printed lacks (k-1)k/((n-1)n)
gap = M[2] - eval_closed_form("M2", n, k)
print("M2 printed is short by", gap, "=", Fraction((k - 1) * k, (n - 1) * n))

# general m4 as printed lacks 3 k^4 Sbar_2(k)^2 (invisible at k=1, where Sbar_2(1)=0)
gap = m[4] - eval_closed_form("m4", n, k)
print("m4 printed is short by", gap, "=", 3 * k**4 * harmonic(2, k - 1) ** 2)
print("completed m4:", eval_closed_form("m4_completed", n, k) == m[4])

for n in (6, 25):
    print(f"n={n}: m4(n,1) display ok: {eval_closed_form('m4_k1', n, 1) == moment_pipeline(n, 1, 4).central_moments[4]},",
          f"m4(n,2) display ok: {eval_closed_form('m4_k2', n, 2) == moment_pipeline(n, 2, 4).central_moments[4]}")
