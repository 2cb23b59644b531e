"""Symmetry reduction for games on a ring of players.

States are bit patterns of winners/losers around an n-cycle. Rotating the
ring never changes the dynamics, so states can be merged by rotation class
(necklaces); with left-right symmetric parameters, reflections merge too
(bracelets). The quotient chain is exponentially smaller and keeps the
exact profit moments.
"""

import numpy as np

from ringgames import (
    SpatialParams,
    build_game_a_prime,
    build_game_b,
    check_lumpability,
    lump,
    moments,
    necklace_count,
    orbits,
)

np.set_printoptions(precision=6, suppress=True)

# class counts: 2^n states collapse to ~2^n/(2n)
print(" n   states   rotation classes   rotation+reflection classes")
for n in range(3, 19, 3):
    print(
        f"{n:2d}  {2**n:7d}   {necklace_count(n, 'cyclic'):16d}"
        f"   {necklace_count(n, 'dihedral'):27d}"
    )

n = 4
pars = SpatialParams(n, (1.0, 4 / 25, 4 / 25, 7 / 10))
q = orbits(n, "dihedral")
print()
print(f"n={n}: class representatives {q.representative}, sizes {q.class_size}")

b_full = build_game_b(pars)
b_red = lump(b_full, q)
print()
print("neighbor-dependent game on 16 states, lumped to 6x6:")
print(b_red.P)

# exactness: full-space and quotient moments agree to machine precision
f, r = moments(b_full), moments(b_red)
print()
print(f"full   chain: mu = {f.mu:+.15f}  sigma^2 = {f.sigma2:.15f}")
print(f"lumped chain: mu = {r.mu:+.15f}  sigma^2 = {r.sigma2:.15f}")

# reflection symmetry needs p1 == p2; an asymmetric draw breaks it at n=6
asym = SpatialParams(6, (0.3, 0.2, 0.8, 0.6))
print()
print("asymmetric params, n=6:")
print("  rotation quotient exact? ",
      check_lumpability(build_game_b(asym), orbits(6, "cyclic")))
print("  reflection quotient exact?",
      check_lumpability(build_game_b(asym), orbits(6, "dihedral")))

a_red = lump(build_game_a_prime(pars), q)
print()
print("neighbor-betting fair game, same quotient (rows x4):")
print(4 * a_red.P)
