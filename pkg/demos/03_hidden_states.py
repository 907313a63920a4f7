"""The three-state hidden encoding and its exact pushforward.

Each edge is relabeled 0' (closed), 2' (open, head reaches the boundary
inside its own subtree) or 1' (open, it does not).  Under this encoding
the forest gas becomes a tree-indexed Markov chain: every vertex's
child-edge block depends only on the parent edge's state, through two
numbers (theta, alpha) per remaining depth.  We verify the chain-rule
probability against full enumeration on a small tree.
"""

from fractions import Fraction

from arboreal_gas import (
    GasParams,
    TreeShape,
    exact_state_measure,
    finite_kernel,
    k_recursive,
    kernel_table,
    limit_kernel,
    phi_inverse,
    state_config_probability,
)

d, n, p = 2, 2, Fraction(1, 2)
shape = TreeShape(d, n)
params = GasParams(d, p)

table = kernel_table(n, params)
print(f"kernels at p = {p} (by remaining depth m):")
for m in (1, 2):
    kp = table[m]
    print(f"  m={m}: theta = {kp.theta}, alpha = {kp.alpha}")

# theta_m coincides with the survival probability q_m
s = k_recursive(n, params)
assert all(finite_kernel(m, params, s).theta == s.q[m] for m in (1, 2))

total = Fraction(0)
worst = None
for sc, mass in exact_state_measure(shape, p):
    prob = state_config_probability(sc, params, table)
    assert prob == mass  # exact rational equality, configuration by configuration
    total += prob
    if worst is None or mass < worst[1]:
        worst = (sc, mass)
print(f"sum of chain-rule masses over all valid state configs: {total}")
sc, mass = worst
print(f"rarest configuration {sc.states.tolist()} -> forest "
      f"{phi_inverse(sc).bits.tolist()} with probability {mass}")

lim = limit_kernel(GasParams(2, Fraction(3, 4)))
print(f"limit kernel at d=2, p=3/4: (theta, alpha) = ({lim.theta}, {lim.alpha})")
