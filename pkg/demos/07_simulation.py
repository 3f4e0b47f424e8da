"""Monte Carlo check of the exact distribution at n=20, k=3."""
from absentminded import generating_polynomial, moment_pipeline
from absentminded.simulate import SimConfig, chi_square, simulate, z_score

cfg = SimConfig(n=20, k=3, trials=10**6, seed=2026, worker_count=2)
res = simulate(cfg)
exact = moment_pipeline(20, 3, 2)
probs = generating_polynomial(20, 3).probabilities()

print("r   observed   expected")
for r, (h, p) in enumerate(zip(res.histogram, probs)):
    if h or p * cfg.trials >= 1:
        print(f"{r:>2} {h:>10} {float(p) * cfg.trials:>10.1f}")

print("mean     z =", round(z_score(res.mean, exact.raw_moments[1], res.raw_moment_se[1]), 3))
print("variance z =", round(z_score(res.variance, exact.central_moments[2], res.variance_se), 3))
stat, dof, p = chi_square(res.histogram, probs)
print(f"chi-square = {stat:.2f} on {dof} dof, p = {p:.3g}")
print("same config, same histogram:", simulate(cfg) == res)
