"""From sampled configurations to verdicts: clusters, survival, fit tests."""

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as sps

from .configs import ForestConfig, StateConfig, level_slice
from .tree import (
    TreeShape,
    VertexRef,
    edge_count,
    edge_from_flat,
    head_vertex,
    tail_vertex,
    vertex_count,
    vertex_flat_index,
)


@dataclass
class ClusterReport:
    """Component decomposition of one configuration.

    ``component_sizes`` lists vertex counts (isolated vertices are size-1
    components); ``censored_flags`` aligns with it and marks components that
    touch the window boundary (always all-False for wired shapes).
    """

    component_sizes: list
    root_cluster_size: int
    boundary_connected: bool
    censored_flags: list


@dataclass
class GwPmf:
    """Total-progeny law of a critical branching process, offspring Bin(d, 1/d).

    ``pmf[k]`` is P(total progeny = k) for k = 1..k_max (index 0 unused);
    ``tail_mass`` is the remaining probability beyond k_max.
    """

    d: int
    pmf: np.ndarray
    tail_mass: float


@dataclass
class GofResult:
    tv_distance: float
    chi_square: float
    p_value: float
    dof: int


def components(config: ForestConfig) -> ClusterReport:
    """Union-find decomposition; the wired boundary vertex counts once."""
    shape = config.shape
    from .enumeration import _DSU, is_forest_wired

    if shape.wired and not is_forest_wired(config):
        raise ValueError("wired configuration contains a cycle")
    nv = vertex_count(shape)
    dsu = _DSU(nv)
    for i in np.nonzero(config.bits)[0]:
        e = edge_from_flat(int(i), shape)
        dsu.union(
            vertex_flat_index(tail_vertex(e, shape), shape),
            vertex_flat_index(head_vertex(e, shape), shape),
        )
    roots = [dsu.find(v) for v in range(nv)]
    sizes = {}
    for r in roots:
        sizes[r] = sizes.get(r, 0) + 1
    order = sorted(sizes)
    component_sizes = [sizes[r] for r in order]
    root_comp = roots[vertex_flat_index(VertexRef(0, 0), shape)]
    if shape.wired and shape.depth > 0:
        boundary_connected = root_comp == roots[nv - 1]
    else:
        boundary_connected = shape.depth == 0 and shape.wired
    censored = [False] * len(order)
    if not shape.wired and shape.depth > 0:
        first_leaf = vertex_flat_index(VertexRef(shape.depth, 0), shape)
        clipped = {roots[v] for v in range(first_leaf, nv)}
        censored = [r in clipped for r in order]
    return ClusterReport(
        component_sizes=component_sizes,
        root_cluster_size=sizes[root_comp],
        boundary_connected=boundary_connected,
        censored_flags=censored,
    )


def gw_total_progeny_pmf(d: int, k_max: int) -> GwPmf:
    """Closed-form total-progeny pmf via the cycle lemma:
    P(T = k) = (1/k) P(Bin(dk, 1/d) = k - 1).
    """
    if d < 2 or k_max < 1:
        raise ValueError("need d >= 2 and k_max >= 1")
    ks = np.arange(1, k_max + 1)
    pmf = np.zeros(k_max + 1)
    pmf[1:] = sps.binom.pmf(ks - 1, d * ks, 1.0 / d) / ks
    return GwPmf(d=d, pmf=pmf, tail_mass=float(1.0 - pmf.sum()))


def one_ended_violations(sc: StateConfig) -> int:
    """2' edges with an interior head lacking exactly one 2' child."""
    shape, s = sc.shape, sc.states
    d, n = shape.d, shape.depth
    bad = 0
    for level in range(1, n):
        cur = s[level_slice(shape, level)]
        nxt = s[level_slice(shape, level + 1)]
        two_children = (nxt.reshape(-1, d) == 2).sum(axis=1)
        bad += int(((cur == 2) & (two_children != 1)).sum())
    return bad


def finite_cluster_samples(
    sc: StateConfig, site_max_level=None, size_cap=None
) -> list:
    """Finite clusters at collection sites of a materialized limit window.

    A site is the head of a 0' edge (at level < window depth, optionally at
    most ``site_max_level``) none of whose child edges is 2'.  Its cluster is
    the head plus everything reachable through 1' edges below; ``censored``
    marks clusters touching the window boundary while within ``size_cap``
    (clusters beyond the cap count as uncensored tail members).
    """
    shape, s = sc.shape, sc.states
    if shape.wired:
        raise ValueError("cluster collection runs on limit windows")
    d, n = shape.d, shape.depth
    top = n - 1 if site_max_level is None else min(site_max_level, n - 1)
    out = []
    for level in range(1, top + 1):
        sl = level_slice(shape, level)
        cur = s[sl]
        nxt = s[level_slice(shape, level + 1)]
        two_children = (nxt.reshape(-1, d) == 2).sum(axis=1)
        for i in np.nonzero((cur == 0) & (two_children == 0))[0]:
            size, touched = _explore_cluster(s, shape, level, int(i), size_cap)
            if size_cap is not None and size > size_cap:
                out.append((size, False))
            else:
                out.append((size, touched))
    return out


def _explore_cluster(s, shape, level, index, size_cap):
    d, n = shape.d, shape.depth
    size = 0
    touched = False
    stack = [(level, index)]
    while stack:
        lv, ix = stack.pop()
        size += 1
        if size_cap is not None and size > size_cap:
            return size, touched
        if lv == n:
            touched = True
            continue
        child_level = s[level_slice(shape, lv + 1)]
        for j in range(d):
            if child_level[ix * d + j] == 1:
                stack.append((lv + 1, ix * d + j))
    return size, touched


def goodness_of_fit(observed, reference, min_expected: float = 5.0) -> GofResult:
    """Pearson chi-square with low-expectation pooling, plus binned TV.

    ``observed`` are counts over bins aligned with the ``reference``
    probabilities (which must sum to 1 up to rounding).  Bins whose expected
    count falls below ``min_expected`` are pooled from the right; TV is
    computed on the unpooled bins.
    """
    observed = np.asarray(observed, dtype=float)
    reference = np.asarray(reference, dtype=float)
    if observed.shape != reference.shape:
        raise ValueError("observed and reference bins are not aligned")
    n = observed.sum()
    if n <= 0:
        raise ValueError("empty histogram")
    expected = n * reference
    tv = 0.5 * float(np.abs(observed / n - reference).sum())
    # pool from the right until every retained bin has enough mass
    obs_p, exp_p = list(observed), list(expected)
    while len(obs_p) > 1 and exp_p[-1] < min_expected:
        e_last, o_last = exp_p.pop(), obs_p.pop()
        exp_p[-1] += e_last
        obs_p[-1] += o_last
    keep_obs, keep_exp, pool_obs, pool_exp = [], [], 0.0, 0.0
    for o, e in zip(obs_p, exp_p):
        if e < min_expected:
            pool_obs += o
            pool_exp += e
        else:
            keep_obs.append(o)
            keep_exp.append(e)
    if pool_exp > 0:
        keep_obs.append(pool_obs)
        keep_exp.append(pool_exp)
    keep_obs, keep_exp = np.array(keep_obs), np.array(keep_exp)
    chi2 = float(((keep_obs - keep_exp) ** 2 / keep_exp).sum())
    dof = max(len(keep_obs) - 1, 1)
    return GofResult(
        tv_distance=tv,
        chi_square=chi2,
        p_value=float(sps.chi2.sf(chi2, dof)),
        dof=dof,
    )


def survival_frequency(boundary_flags) -> tuple:
    """Fraction of samples connecting root to boundary, with binomial SE."""
    flags = np.asarray(list(boundary_flags), dtype=bool)
    if flags.size == 0:
        raise ValueError("empty batch")
    est = float(flags.mean())
    se = math.sqrt(est * (1.0 - est) / flags.size)
    return est, se
