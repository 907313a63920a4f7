"""Cross-module verification suites behind ``verify --suite ...``.

Each suite returns a report dict: {"suite", "passed", "checks": [...]} with
one entry per check carrying expected/actual values.  Exact suites compare
rationals with zero tolerance; statistical suites run at fixed seeds so the
verdict is deterministic.
"""

from fractions import Fraction
from itertools import product

import numpy as np

from . import enumeration, recursion, sampling, stats, streaming
from .configs import phi_inverse
from .recursion import GasParams
from .sampling import SamplerSpec
from .tree import TreeShape

SUITES = ("recursion", "kernels", "pushforward", "sampler-gof", "gw", "bernoulli")


def _check(name, expected, actual, passed=None):
    if passed is None:
        passed = expected == actual
    return {
        "check": name,
        "expected": str(expected),
        "actual": str(actual),
        "passed": bool(passed),
    }


def _report(suite, checks):
    return {"suite": suite, "passed": all(c["passed"] for c in checks), "checks": checks}


def verify_recursion(d: int, n: int, p: Fraction, cap=enumeration.DEFAULT_ENUMERATION_CAP):
    """partition_recursion against brute-force enumeration, every depth to n."""
    params = GasParams(d=d, p=Fraction(p))
    rec = recursion.partition_recursion(n, params)
    checks = []
    for m in range(n + 1):
        triple = enumeration.enumerate_partitions(TreeShape(d, m, wired=True), p, cap)
        checks.append(
            _check(f"Z_S at depth {m}", triple.Z_S, rec[m][0])
        )
        checks.append(
            _check(f"Z_X at depth {m}", triple.Z_X, rec[m][1])
        )
    return _report("recursion", checks)


def _patterns(d):
    return list(product((0, 1, 2), repeat=d))


def verify_kernels(d: int, p, n: int = 30):
    """Block probabilities normalize; theta_m equals q_m; limits agree."""
    params = GasParams(d=d, p=p)
    survival = recursion.k_recursive(n, params)
    exact = params.exact
    checks = []
    pats = _patterns(d)
    for m in (1, 2, min(5, n), n):
        kp = recursion.finite_kernel(m, params, survival)
        for parent in (0, 1, 2):
            total = sum(
                recursion.kernel_block_probability(parent, pat, kp) for pat in pats
            )
            ok = total == 1 if exact else abs(total - 1) < 1e-12
            checks.append(_check(f"block sum, parent {parent}', m={m}", 1, total, ok))
        if p != 0:
            ok = (
                kp.theta == survival.q[m]
                if exact
                else abs(kp.theta - survival.q[m]) < 1e-12
            )
            checks.append(_check(f"theta_{m} = q_{m}", survival.q[m], kp.theta, ok))
    lim = recursion.limit_kernel(params)
    fin = recursion.finite_kernel(n, params, survival)
    # geometric convergence at rate min(dp, 1/dp); linear at criticality
    dp = float(params.p) * d
    rate = min(dp, 1 / dp) if dp not in (0.0, 1.0) else 0.0
    tol = max(1e-9, 10 * rate ** n) if rate else 2.0 / max(n, 1)
    checks.append(
        _check(
            "finite kernel approaches the limit kernel",
            (str(lim.theta), str(lim.alpha)),
            (str(fin.theta), str(fin.alpha)),
            abs(float(fin.theta) - float(lim.theta)) < tol
            and abs(float(fin.alpha) - float(lim.alpha)) < tol,
        )
    )
    return _report("kernels", checks)


def verify_pushforward(d: int, n: int, p: Fraction, cap=enumeration.DEFAULT_ENUMERATION_CAP):
    """Kernel-product probabilities match the enumerated pushforward exactly."""
    params = GasParams(d=d, p=Fraction(p))
    shape = TreeShape(d, n, wired=True)
    pushed = enumeration.exact_state_measure(shape, p, cap)
    table = recursion.kernel_table(n, params)
    checks = []
    total = Fraction(0)
    mismatches = 0
    for sc, mass in pushed:
        prob = sampling.state_config_probability(sc, params, table)
        total += prob
        if prob != mass:
            mismatches += 1
        back = phi_inverse(sc)
        forward = enumeration.apply_phi(back)
        if forward.key() != sc.key():
            mismatches += 1
    checks.append(_check("kernel-product mass mismatches", 0, mismatches))
    checks.append(_check("total mass over all state configurations", Fraction(1), total))
    return _report("pushforward", checks)


def verify_sampler_gof(
    d: int,
    n: int,
    p: Fraction,
    replicas: int = 200_000,
    seed: int = 20240,
    tv_bound: float = 0.01,
    p_value_floor: float = 0.001,
):
    """Empirical law of the finite sampler against the exact measure."""
    shape = TreeShape(d, n, wired=True)
    params = GasParams(d=d, p=Fraction(p))
    measure = enumeration.exact_measure(shape, p)
    index = {cfg.key(): j for j, (cfg, _) in enumerate(measure.entries)}
    probs = np.array([float(mass) for _, mass in measure.entries])
    counts = np.zeros(len(index))
    spec = SamplerSpec(shape=shape, params=params, master_seed=seed, replicas=replicas)
    violations = 0
    for r in range(replicas):
        sc = sampling.sample_states_finite(spec, r)
        violations += stats.one_ended_violations(sc)
        counts[index[phi_inverse(sc).key()]] += 1
    gof = stats.goodness_of_fit(counts, probs)
    checks = [
        _check(
            f"TV distance < {tv_bound}", f"< {tv_bound}", gof.tv_distance,
            gof.tv_distance < tv_bound,
        ),
        _check(
            f"chi-square p-value > {p_value_floor}", f"> {p_value_floor}", gof.p_value,
            gof.p_value > p_value_floor,
        ),
        _check("one-ended violations", 0, violations),
    ]
    return _report("sampler-gof", checks)


def verify_gw(
    d: int,
    p: float,
    depth: int = 30,
    site_max_level: int = 5,
    size_cap: int = 50,
    min_collected: int = 100_000,
    seed: int = 1234,
    p_value_floor: float = 0.001,
):
    """Finite clusters of supercritical limit windows against the critical
    branching-process total-progeny law."""
    params = GasParams(d=d, p=float(p))
    shape = TreeShape(d, depth, wired=False)
    spec = SamplerSpec(shape=shape, params=params, master_seed=seed, replicas=1)
    harvest = streaming.stream_cluster_sizes(
        spec, site_max_level=site_max_level, size_cap=size_cap,
        min_collected=min_collected,
    )
    ref = stats.gw_total_progeny_pmf(d, size_cap)
    observed = np.append(harvest.size_counts[1:], harvest.tail_count)
    reference = np.append(ref.pmf[1:], ref.tail_mass)
    gof = stats.goodness_of_fit(observed, reference)
    n_collected = harvest.collected
    p1_hat = harvest.size_counts[1] / n_collected
    p1 = float(ref.pmf[1])
    sigma = (p1 * (1 - p1) / n_collected) ** 0.5
    checks = [
        _check(
            f"collected clusters >= {min_collected}", f">= {min_collected}",
            n_collected, n_collected >= min_collected,
        ),
        _check(
            "censored fraction < 1%", "< 0.01", harvest.censored_fraction,
            harvest.censored_fraction < 0.01,
        ),
        _check(
            f"chi-square p-value > {p_value_floor}", f"> {p_value_floor}",
            gof.p_value, gof.p_value > p_value_floor,
        ),
        _check(
            "P(size=1) within 3 sigma", p1, float(p1_hat),
            abs(p1_hat - p1) < 3 * sigma,
        ),
        _check("one-ended violations", 0, harvest.one_ended_violations),
    ]
    return _report("gw", checks)


def verify_bernoulli(
    d: int,
    p: float,
    depth: int = 12,
    replicas: int = 10_000,
    seed: int = 1,
):
    """Sub/critical limit windows: no 2', i.i.d. Bernoulli open marginals."""
    params = GasParams(d=d, p=float(p))
    if float(params.p) * d > 1:
        raise ValueError("the bernoulli suite applies to p <= 1/d")
    shape = TreeShape(d, depth, wired=False)
    spec = SamplerSpec(shape=shape, params=params, master_seed=seed, replicas=replicas)
    m = shape.d * (shape.d ** shape.depth - 1) // (shape.d - 1)
    open_total = 0
    pair_sum = 0.0
    pair_n = 0
    two_count = 0
    for r in range(replicas):
        sc = sampling.sample_states_limit(spec, r)
        two_count += int((sc.states == 2).sum())
        opens = (sc.states != 0).astype(np.float64)
        open_total += int(opens.sum())
        # unordered sibling pairs; for d = 2 they use disjoint edge sets
        sib = opens.reshape(-1, d)
        rows = sib.sum(axis=1)
        pair_sum += float(((rows * rows - (sib * sib).sum(axis=1)) / 2.0).sum())
        pair_n += sib.shape[0] * d * (d - 1) // 2
    pv = float(p)
    freq = open_total / (replicas * m)
    se = (pv * (1 - pv) / (replicas * m)) ** 0.5
    # mean of products over sibling pairs; independence predicts p^2
    mean_prod = pair_sum / pair_n
    corr = (mean_prod - pv * pv) / (pv * (1 - pv))
    corr_sigma = (pv * pv * (1 - pv * pv) / pair_n) ** 0.5 / (pv * (1 - pv))
    checks = [
        _check("2' states observed", 0, two_count),
        _check(
            "pooled per-edge open frequency within 3 sigma", pv, freq,
            abs(freq - pv) < 3 * se,
        ),
        _check(
            "mean sibling correlation within 3 sigma of 0", 0.0, corr,
            abs(corr) < 3 * corr_sigma,
        ),
    ]
    return _report("bernoulli", checks)


def run_suite(name: str, **kwargs):
    if name == "recursion":
        return verify_recursion(**kwargs)
    if name == "kernels":
        return verify_kernels(**kwargs)
    if name == "pushforward":
        return verify_pushforward(**kwargs)
    if name == "sampler-gof":
        return verify_sampler_gof(**kwargs)
    if name == "gw":
        return verify_gw(**kwargs)
    if name == "bernoulli":
        return verify_bernoulli(**kwargs)
    raise ValueError(f"unknown suite {name!r}; choose from {SUITES}")
