"""Large-n expansions of m2 and m3 and how fast the remainder decays."""
import mpmath

from absentminded.asymptotics import (
    ConstantPool,
    expand_moment,
    harmonic_expansion,
    printed_m2_expansion,
    printed_m3_expansion,
    remainder_profile,
)
from absentminded.symbolic import symbolic_central_moment

pool = ConstantPool(128)
print("Sbar_1(n) ~", harmonic_expansion(1, 4, pool).render(8))
print()

ns = (200, 400, 800, 1600)
for k in (1, 2, 3):
    for l in (2, 3):
        expr = symbolic_central_moment(k, l)
        series = expand_moment(k, l, 3, pool, expr=expr)
        prof = remainder_profile(series, expr, ns)
        print(f"k={k} m{l}: n^4 * |remainder| at n = {ns}:", [mpmath.nstr(p, 4) for p in prof])
print()

print("m2(n,2) ~", expand_moment(2, 2, 3, pool).render(8))
print()

# the printed expansions use S_o(k); they only match when read as Sbar_o(k)
for k in (2, 3):
    d2, d3 = expand_moment(k, 2, 3, pool), expand_moment(k, 3, 3, pool)
    for name, printed, derived in (("m2", printed_m2_expansion, d2), ("m3", printed_m3_expansion, d3)):
        for reading in ("bar", "plain"):
            p = printed(k, pool, harmonic_k=reading)
            diff = max(abs(p.coefficient(*key) - derived.coefficient(*key)) for key in set(p.coefficients) | set(derived.coefficients))
            print(f"k={k} {name}, harmonics of k read as {reading:>5}: max coefficient difference {mpmath.nstr(diff, 3)}")

# two versions of the 1/n^2 coefficient of m2 appear; only k(18k-25)/12 is right
for k in (1, 3):
    out = printed_m2_expansion(k, pool, quadratic="output")
    expr = symbolic_central_moment(k, 2)
    print(f"k={k}: with k(6k-1)/12 the n^4 remainder grows:", [mpmath.nstr(p, 4) for p in remainder_profile(out, expr, ns)])
