"""The wrong-seat distribution, exactly, and a brute-force check of it.

n passengers board in order; the first k have lost their tickets and sit at
random.  Everyone after that takes their own seat if it is free, otherwise a
random free one.  X = number of passengers not in their own seat.
"""
from absentminded import enumerate_exact, generating_polynomial
from absentminded.core import format_rational

# small case by hand: n=3, k=1 -> (2 + 3w^2 + w^3) / 6
gp = generating_polynomial(3, 1)
print("n=3, k=1:", [format_rational(p) for p in gp.probabilities()])
print("  numerators of n! * f:", gp.numerators, " denominator:", gp.denominator)

# nobody can be the *only* one in a wrong seat, so p[1] is always 0
for n, k in [(5, 2), (12, 4), (40, 40)]:
    p = generating_polynomial(n, k).probabilities()
    print(f"n={n:>2}, k={k:>2}: sum = {sum(p)}, p[1] = {p[1]}, mode r = {p.index(max(p))}")

# the closed formula against a plain tree walk over all seat choices
for n in range(2, 9):
    agree = all(generating_polynomial(n, k).probabilities() == enumerate_exact(n, k) for k in range(1, n + 1))
    print(f"n={n}: formula == enumeration for every k: {agree}")

# the 1/n scaling of the same sum would not even normalize
print("1/n scaling at n=3 sums to", sum(c for c in gp.numerators) / 3)
