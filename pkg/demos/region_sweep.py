"""Classify parameter space: where does mixing rescue a losing game?

Sweeps the (p0, p1=p2, p2) probability cube on a coarse grid for a ring of
6 players. A node is 'parrondo' when game B alone is non-winning but the
even mixture with the fair neighbor-betting game wins; 'anti_parrondo' is
the reverse. Corner nodes whose chain splits into disconnected pieces are
flagged and left unclassified.
"""

from collections import Counter

from ringgames.analysis import classify_node, parrondo_region_sweep, region_to_csv

points = parrondo_region_sweep(6, 0.25, gamma=0.5)
tally = Counter(pt.classification for pt in points)
print(f"grid step 0.25 -> {len(points)} nodes:", dict(tally))
print("flagged (non-ergodic corners):", sum(bool(pt.flag) for pt in points))

print()
print("sample rows (p0, p1, p2, mu_B, mu_mix, class):")
for pt in points[:: len(points) // 8]:
    print(f"  {pt.p0:4.2f} {pt.p1:4.2f} {pt.p2:4.2f}"
          f"  {pt.mu_b:+.6f}  {pt.mu_combined:+.6f}  {pt.classification}")

# a specific strongly-paradoxical node off the grid
node = classify_node(6, (1.0, 4 / 25, 7 / 10), gamma=0.5)
print()
print(f"node (1, 0.16, 0.7): mu_B = {node.mu_b:+.7f}, "
      f"mu_mix = {node.mu_combined:+.7f} -> {node.classification}")

# same node under a deterministic alternation instead of a coin flip
pat = classify_node(6, (1.0, 4 / 25, 7 / 10), pattern=(2, 2))
print(f"same node, pattern AABB: mu = {pat.mu_combined:+.7f} -> {pat.classification}")

csv_text = region_to_csv(points)
print()
print("csv export, first three lines:")
for line in csv_text.splitlines()[:3]:
    print(" ", line)
