"""Three-step moment pipeline at n=10, k=2.

step 1: exponential (falling-factorial) moments from derivatives at w=1
step 2: raw moments through Stirling numbers of the second kind
step 3: central moments from the raw ones
and, independently, the raw moments as power sums sum_r r^l p_r.
"""
from absentminded import generating_polynomial, moment_pipeline
from absentminded.core import format_rational, stirling2_row
from absentminded.moments import exponential_moments, stirling_transform, theta_moments

gp = generating_polynomial(10, 2)
exp = exponential_moments(gp, 3)
raw = stirling_transform(exp)
print("Mbar:", [format_rational(x) for x in exp])
print("M   :", [format_rational(x) for x in raw])
print("theta path agrees:", raw == theta_moments(gp, 3))

# the transform sums Mbar_r with weights S(l, r)
print("S(3, r):", stirling2_row(3), "->", format_rational(sum(s * m for s, m in zip(stirling2_row(3), exp))))

t = moment_pipeline(10, 2, 3)
print("m   :", [format_rational(x) for x in t.central_moments])
print("E X =", float(t.raw_moments[1]), " Var X =", float(t.central_moments[2]))
