"""Partition-function recursions, survival probabilities and Markov kernels.

Two arithmetic modes share one API: exact `fractions.Fraction` values for
verification at small depth, and double precision for sampling-scale depth.
The float path never materializes raw partition functions (they grow doubly
exponentially); it iterates the survival probability directly.
"""

from dataclasses import dataclass
from fractions import Fraction

FLOAT_CRITICAL_TOL = 1e-12  # relative tolerance on |dp - 1| for branch choice


@dataclass(frozen=True)
class GasParams:
    """Branching factor and edge weight; the type of ``p`` picks the mode."""

    d: int
    p: object  # Fraction (exact mode) or float

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"branching factor must be >= 2, got {self.d}")
        if isinstance(self.p, float):
            pass
        elif isinstance(self.p, (Fraction, int)):
            object.__setattr__(self, "p", Fraction(self.p))
        else:
            raise TypeError(f"p must be a Fraction or float, got {type(self.p)}")
        if not 0 <= self.p < 1:
            raise ValueError(f"p must lie in [0, 1), got {self.p}")

    @property
    def exact(self) -> bool:
        return isinstance(self.p, Fraction)

    def one(self):
        return Fraction(1) if self.exact else 1.0


@dataclass(frozen=True)
class SurvivalSequence:
    """q_0..q_n and K_0..K_n; q_m = 1/(1 + K_m) except in the p=0 case."""

    q: tuple
    K: tuple
    degenerate: bool = False  # p == 0: q_m = 0 for m >= 1, K undefined there


@dataclass(frozen=True)
class KernelParams:
    """Per-block parameters: spawn weight theta, independent open weight alpha."""

    theta: object
    alpha: object


def partition_recursion(n: int, params: GasParams) -> list:
    """Exact (Z_S_m, Z_X_m) for m = 0..n.

    Z_S_0 = 1, Z_X_0 = 0, then
    Z_S_m = d p Z_S ((1-p) Z_S + Z_X)^(d-1) and Z_X_m = ((1-p) Z_S + Z_X)^d.
    """
    if not params.exact:
        raise TypeError(
            "partition_recursion is exact-only; use k_recursive in float mode"
        )
    d, p = params.d, params.p
    z_s, z_x = Fraction(1), Fraction(0)
    out = [(z_s, z_x)]
    for _ in range(n):
        mixed = (1 - p) * z_s + z_x
        z_s, z_x = d * p * z_s * mixed ** (d - 1), mixed ** d
        out.append((z_s, z_x))
    return out


def k_recursive(n: int, params: GasParams) -> SurvivalSequence:
    """Survival sequence by recursion.

    Exact mode iterates the affine map K_m = (1-p)/(dp) + K_{m-1}/(dp) from
    K_0 = 0.  Float mode iterates q directly via the normalized form
    q_m = dp q A^(d-1) / (dp q A^(d-1) + A^d) with A = 1 - p q, which stays
    bounded for every p (K blows up geometrically below criticality).
    """
    d, p = params.d, params.p
    if p == 0:
        one, zero = params.one(), params.one() * 0
        return SurvivalSequence(
            q=(one,) + (zero,) * n, K=(zero,) * (n + 1), degenerate=True
        )
    if params.exact:
        k = Fraction(0)
        ks = [k]
        for _ in range(n):
            k = (1 - p) / (d * p) + k / (d * p)
            ks.append(k)
        qs = tuple(1 / (1 + k) for k in ks)
        return SurvivalSequence(q=qs, K=tuple(ks))
    q = 1.0
    qs = [q]
    for _ in range(n):
        a = 1.0 - p * q
        top = d * p * q * a ** (d - 1)
        q = top / (top + a ** d)
        qs.append(q)
    ks = tuple((1.0 - q) / q for q in qs)
    return SurvivalSequence(q=tuple(qs), K=ks)


def _is_critical(params: GasParams) -> bool:
    if params.exact:
        return params.d * params.p == 1
    return abs(params.d * params.p - 1.0) < FLOAT_CRITICAL_TOL


def k_closed_form(n: int, params: GasParams):
    """K_n in closed form: geometric-sum off criticality, linear at p = 1/d."""
    d, p = params.d, params.p
    if p == 0:
        raise ValueError("K is undefined at p = 0")
    if _is_critical(params):
        return (1 - params.one() / d) * n
    return (1 - p) / (d * p - 1) * (1 - (d * p) ** -n)


def survival_prob_limit(params: GasParams):
    """Limit of q_n: (dp - 1)/(p(d - 1)) above criticality, else 0."""
    d, p = params.d, params.p
    if p * d > 1:
        return (d * p - 1) / (p * (d - 1))
    return params.one() * 0


def finite_kernel(m: int, params: GasParams, survival: SurvivalSequence) -> KernelParams:
    """Depth-m block parameters from the survival sequence.

    With q = q_{m-1} and A = 1 - p q:
    theta_m = dpq A^(d-1) / (dpq A^(d-1) + A^d), alpha_m = p(1 - q)/A.
    """
    if m < 1:
        raise ValueError("kernel depth m must be >= 1")
    d, p = params.d, params.p
    q = survival.q[m - 1]
    a = 1 - p * q
    top = d * p * q * a ** (d - 1)
    denom = top + a ** d
    theta = top / denom if denom != 0 else params.one() * 0
    return KernelParams(theta=theta, alpha=p * (1 - q) / a)


def limit_kernel(params: GasParams) -> KernelParams:
    """Constant kernel of the weak limit: (q, 1/d) supercritical, (0, p) otherwise."""
    d, p = params.d, params.p
    if p * d > 1:
        return KernelParams(theta=survival_prob_limit(params), alpha=params.one() / d)
    return KernelParams(theta=params.one() * 0, alpha=p)


def kernel_table(n: int, params: GasParams) -> list:
    """KernelParams indexed by remaining depth m (entry 0 is a placeholder)."""
    survival = k_recursive(n, params)
    table = [None]
    for m in range(1, n + 1):
        table.append(finite_kernel(m, params, survival))
    return table


def kernel_block_probability(parent_state: int, child_states, kp: KernelParams):
    """Probability of an exact ordered child pattern given the parent state.

    Patterns with two 2' children, a 2' child under a 1' parent, or no 2'
    child under a 2' parent have probability zero.
    """
    child_states = tuple(int(s) for s in child_states)
    if parent_state not in (0, 1, 2):
        raise ValueError(f"parent state must be 0, 1 or 2, got {parent_state}")
    if any(s not in (0, 1, 2) for s in child_states):
        raise ValueError(f"malformed child pattern {child_states}")
    d = len(child_states)
    theta, alpha = kp.theta, kp.alpha
    one = Fraction(1) if isinstance(alpha, Fraction) else 1.0
    n_two = child_states.count(2)
    n_one = child_states.count(1)
    if parent_state == 1:
        if n_two:
            return one * 0
        return alpha ** n_one * (1 - alpha) ** (d - n_one)
    if parent_state == 2:
        if n_two != 1:
            return one * 0
        return (one / d) * alpha ** n_one * (1 - alpha) ** (d - 1 - n_one)
    if n_two == 0:
        return (1 - theta) * alpha ** n_one * (1 - alpha) ** (d - n_one)
    if n_two == 1:
        return (theta / d) * alpha ** n_one * (1 - alpha) ** (d - 1 - n_one)
    return one * 0


def float_kernel(kp: KernelParams) -> tuple:
    """(theta, alpha) as doubles, for the sampling paths."""
    return float(kp.theta), float(kp.alpha)


def q_at_criticality(n: int, d: int) -> Fraction:
    """Exact q_n at p = 1/d: 1/(1 + (1 - 1/d) n)."""
    return 1 / (1 + Fraction(d - 1, d) * n)


def gas_params(d: int, p) -> GasParams:
    """Convenience constructor accepting 'a/b' strings, Fractions or floats."""
    if isinstance(p, str):
        p = Fraction(p)
    return GasParams(d=d, p=p)
