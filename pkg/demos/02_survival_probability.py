"""Root-to-boundary connection probability q_n and its n -> infinity limit.

q_n obeys an affine recursion through K_n = Z_X / Z_S and has a closed
form in both regimes.  Above the threshold p = 1/d the limit is
(dp - 1) / (p(d - 1)); at the threshold q_n decays like 1/n; below it
q_n vanishes geometrically.
"""

from fractions import Fraction

from arboreal_gas import (
    GasParams,
    k_closed_form,
    k_recursive,
    q_at_criticality,
    survival_prob_limit,
)

d = 2

print("supercritical: d=2, p=3/4 (limit should be 2/3)")
params = GasParams(d, Fraction(3, 4))
seq = k_recursive(20, params)
limit = survival_prob_limit(params)
for n in (1, 2, 5, 10, 20):
    gap = float(seq.q[n] - limit)
    assert seq.K[n] == k_closed_form(n, params)
    print(f"  q_{n:<3} = {float(seq.q[n]):.8f}   gap to {limit} = {gap:+.2e}")

print("\ncritical: d=2, p=1/2 (q_n = 2/(n+2) exactly)")
crit = k_recursive(50, GasParams(d, Fraction(1, 2)))
for n in (1, 10, 50):
    assert crit.q[n] == q_at_criticality(n, d)
    print(f"  q_{n:<3} = {crit.q[n]}")

print("\nsubcritical: d=2, p=2/5 (geometric decay, float path)")
sub = k_recursive(40, GasParams(d, 0.4))
for n in (5, 20, 40):
    print(f"  q_{n:<3} = {sub.q[n]:.3e}   envelope 0.8^n = {0.8 ** n:.3e}")
