"""Monte Carlo volume of the convergence condition, and a simulation check.

Part 1: fraction of the probability cube where the mixed ring game has a
well-behaved long-run limit. The volume grows with the mixing weight up to
1/3 and is flat after that.

Part 2: simulate one long trajectory and compare the batch-means estimate
against the exact chain moments: the running mean should land within a few
standard errors, and batch means should look Gaussian.
"""

import numpy as np

from ringgames import (
    Schedule,
    SpatialParams,
    build_game_a_prime,
    build_game_b,
    condition_volume,
    mix,
    moments,
    play,
)

print("volume of the convergence region, p1 = p2 slice (10^5 samples):")
for gamma in (0.0, 0.1, 0.2, 1 / 3, 0.5, 0.9):
    est = condition_volume(gamma, dims="three_param_p1_eq_p2", samples=10**5, seed=7)
    print(f"  gamma = {gamma:.3f}:  volume = {est.volume:.4f} +- {est.ci95:.4f}")

est4 = condition_volume(0.5, dims="four_param", samples=10**5, seed=7)
print(f"full 4-parameter cube at gamma = 1/2: {est4.volume:.4f} (target 5/6 = {5/6:.4f})")

# one million turns of the even mixture on a 6-ring
pars = SpatialParams(6, (1.0, 4 / 25, 4 / 25, 7 / 10))
sched = Schedule.mixture(pars, 0.5)
exact = moments(mix(0.5, build_game_a_prime(pars), build_game_b(pars)))
run = play(sched, n_turns=10**6, seed=42)

se = np.sqrt(exact.sigma2 / run.n)
dev = (run.running_mean - exact.mu) / se
print()
print(f"schedule {sched.label}, n = {run.n:,} turns, seed {run.seed}")
print(f"  exact mean     = {exact.mu:+.8f}")
print(f"  running mean   = {run.running_mean:+.8f}  ({dev:+.2f} standard errors)")
print(f"  exact sigma^2  = {exact.sigma2:.6f}")
print(f"  batch estimate = {np.var(run.batch_means, ddof=1) * run.batch_size:.6f}"
      f"  ({run.n // run.batch_size} batches of {run.batch_size})")

bm = np.asarray(run.batch_means)
z = (bm - bm.mean()) / bm.std(ddof=1)
print(f"  batch-mean skewness {np.mean(z**3):+.3f}, excess kurtosis {np.mean(z**4) - 3:+.3f}")
