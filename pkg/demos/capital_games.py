"""Capital-dependent coin games: exact long-run profit moments.

Game A is a fair coin. Game B picks its coin by capital mod 3 and is
losing on its own. Playing the random mixture (A+B)/2 turns the drift
positive: the mixture visits the bad-coin state less often than B does.
"""

import numpy as np

from ringgames import (
    capital_dependent_fixture,
    fundamental_matrix,
    moments,
    pattern_mean,
    pattern_variance,
    stationary_distribution,
)

np.set_printoptions(precision=6, suppress=True)

for name in ("A", "B", "C_half"):
    chain = capital_dependent_fixture(name)
    res = moments(chain)
    pi = stationary_distribution(chain)
    print(f"game {name:6s}  mu = {res.mu:+.12f}   sigma^2 = {res.sigma2:.12f}")
    print(f"  stationary pi = {pi.pi}")

# losing + losing = winning: exact rationals behind the mixture
print()
print("mu(B)      =  0          (exactly fair long run)")
print("mu((A+B)/2) = 18/709     =", 18 / 709)
print("sigma^2(B)  = 81/169     =", 81 / 169)
print("sigma^2((A+B)/2) = 311313105/356400829 =", 311313105 / 356400829)

# deterministic alternation AABB beats the coin-flip mixture here
a = capital_dependent_fixture("A")
b = capital_dependent_fixture("B")
print()
print("pattern AABB  mu = 4/163 =", pattern_mean(a, b, 2, 2))
print("pattern AABB  sigma^2    =", pattern_variance(a, b, 2, 2))

# fundamental matrix drives the variance correction term
c = capital_dependent_fixture("C_half")
pi_c = stationary_distribution(c)
print()
print("fundamental matrix of the mixture chain:")
print(fundamental_matrix(c, pi_c))
