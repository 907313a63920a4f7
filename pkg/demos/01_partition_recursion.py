"""Exact partition functions of the forest gas on small wired trees.

We weight each spanning forest f of the wired d-ary tree by
p^(open edges) * (1-p)^(closed edges) and split the total weight Z by
whether the root joins the boundary cluster (Z_S) or not (Z_X).  The
depth-n values follow from depth n-1 by a two-term recursion; here we
check it against brute-force enumeration over all edge subsets.
"""

from fractions import Fraction

from arboreal_gas import (
    GasParams,
    TreeShape,
    enumerate_partitions,
    partition_recursion,
)

d, p = 2, Fraction(1, 2)
params = GasParams(d, p)

print(f"binary wired tree, p = {p}")
print(f"{'n':>2} {'Z_S':>10} {'Z_X':>10} {'Z':>10}  matches enumeration?")
seq = partition_recursion(4, params)
for n in range(5):
    z_s, z_x = seq[n]
    z = (1 - p) * z_s + z_x
    if n <= 3:  # enumeration is exponential in the edge count
        triple = enumerate_partitions(TreeShape(d, n), p)
        ok = (triple.Z_S, triple.Z_X) == (z_s, z_x)
    else:
        ok = "(skipped)"
    print(f"{n:>2} {str(z_s):>10} {str(z_x):>10} {str(z):>10}  {ok}")

# the same recursion runs at any rational p with exact arithmetic
for p in (Fraction(1, 4), Fraction(2, 3)):
    seq = partition_recursion(3, GasParams(d, p))
    print(f"p = {p}: Z_S at depths 0..3 -> {[str(s) for s, _ in seq]}")
