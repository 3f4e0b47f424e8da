"""Moments as expressions in the harmonic sums Sbar_j(n) = S_j(n-1), for numeric k."""
from absentminded.symbolic import closed_form_expr, expr_equal, symbolic_central_moment, symbolic_central_moments

print("m2(n, 1) =", symbolic_central_moment(1, 2).render())
print()
print("m2(n, 2) =", symbolic_central_moment(2, 2).render())
print()

for k in (1, 2):
    ok, witness = expr_equal(symbolic_central_moment(k, 4), closed_form_expr(f"m4_k{k}", k))
    print(f"m4(n,{k}) derived == printed display: {ok}")

# a perturbed expression is caught, with a concrete n where they differ
v = closed_form_expr("V_closed", 3)
print("perturbed V:", expr_equal(v, v + closed_form_expr("V_closed", 3) / 1000))

for k in (1, 2, 3):
    ms = symbolic_central_moments(k, 6)
    print(f"k={k}: m1 == 0: {ms[1].is_zero()}; weights of m_0..m_6: {[m.weight() for m in ms]};",
          f"serialized size of m_6: {len(ms[6].serialize())} bytes")

print("m6(25, 3) =", symbolic_central_moments(3, 6)[6](25))
