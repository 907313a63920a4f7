"""Compiled streaming pipelines for large truncation windows.

These walk the same depth-first block process as ``sampling.stream_sample``
but run as numba kernels, so a depth-24 window (tens of millions of edges)
takes well under a second per replica with O(depth) resident memory.

The cluster pipeline prunes subtrees that can influence neither site
discovery nor a cluster currently being measured; pruned subtrees are
independent of everything retained, so the collected statistics have exactly
the law of a full traversal.
"""

from dataclasses import dataclass

import numpy as np
from numba import njit

from .recursion import float_kernel, limit_kernel
from .sampling import SamplerSpec, replica_rng


@dataclass
class WindowStats:
    """Full-traversal accumulators for one or more window replicas."""

    edges: int
    state_counts: np.ndarray  # occurrences of 0', 1', 2'
    one_ended_violations: int
    replicas: int

    @property
    def open_fraction(self) -> float:
        return (self.state_counts[1] + self.state_counts[2]) / self.edges


@dataclass
class ClusterHarvest:
    """Finite-cluster sizes collected at 0'-rooted sites in limit windows."""

    size_counts: np.ndarray  # index k = clusters of size k (entry 0 unused)
    tail_count: int  # clusters that grew past the size cap (true size > cap)
    censored_count: int  # clipped by the window while still within the cap
    sites: int
    one_ended_violations: int
    replicas: int

    @property
    def collected(self) -> int:
        return int(self.size_counts.sum()) + self.tail_count

    @property
    def censored_fraction(self) -> float:
        return self.censored_count / max(self.sites, 1)


@njit(cache=True)
def _window_stats_kernel(rng, d, depth, theta, alpha):
    cap = d * (depth + 2) + 2
    stack_level = np.empty(cap, dtype=np.int64)
    stack_state = np.empty(cap, dtype=np.uint8)
    block = np.empty(d, dtype=np.uint8)
    counts = np.zeros(3, dtype=np.int64)
    violations = 0
    sp = 0
    stack_level[sp] = 0
    stack_state[sp] = 0
    sp += 1
    while sp > 0:
        sp -= 1
        level = stack_level[sp]
        state = stack_state[sp]
        if level == depth:
            continue
        if state == 0:
            spawn = rng.random() < theta
        elif state == 2:
            spawn = True
        else:
            spawn = False
        pos = -1
        if spawn:
            pos = int(d * rng.random())
        n_two = 0
        for j in range(d):
            block[j] = 1 if rng.random() < alpha else 0
        if spawn:
            block[pos] = 2
        for j in range(d):
            counts[block[j]] += 1
            if block[j] == 2:
                n_two += 1
        if state == 2 and n_two != 1:
            violations += 1
        for j in range(d - 1, -1, -1):
            stack_level[sp] = level + 1
            stack_state[sp] = block[j]
            sp += 1
    return counts, violations


@njit(cache=True)
def _cluster_kernel(rng, d, depth, theta, alpha, site_max_level, size_cap, max_sites):
    cap = d * (depth + 2) + 2
    stack_level = np.empty(cap, dtype=np.int64)
    stack_state = np.empty(cap, dtype=np.uint8)
    stack_cluster = np.empty(cap, dtype=np.int64)
    block = np.empty(d, dtype=np.uint8)
    csize = np.zeros(max_sites, dtype=np.int64)
    cactive = np.zeros(max_sites, dtype=np.uint8)
    ctouched = np.zeros(max_sites, dtype=np.uint8)
    hist = np.zeros(size_cap + 1, dtype=np.int64)
    n_sites = 0
    tail = 0
    violations = 0
    sp = 0
    stack_level[sp] = 0
    stack_state[sp] = 0
    stack_cluster[sp] = -1
    sp += 1
    while sp > 0:
        sp -= 1
        level = stack_level[sp]
        state = stack_state[sp]
        cid = stack_cluster[sp]
        if cid >= 0 and cactive[cid] == 1 and state == 1:
            csize[cid] += 1
            if csize[cid] > size_cap:
                cactive[cid] = 0
                tail += 1
                cid = -1
            elif level == depth:
                ctouched[cid] = 1
        if level == depth:
            continue
        in_cluster = cid >= 0 and cactive[cid] == 1
        # blocks are needed through the site region and inside live clusters
        if level > site_max_level and not in_cluster:
            continue
        if state == 0:
            spawn = rng.random() < theta
        elif state == 2:
            spawn = True
        else:
            spawn = False
        pos = -1
        if spawn:
            pos = int(d * rng.random())
        for j in range(d):
            block[j] = 1 if rng.random() < alpha else 0
        if spawn:
            block[pos] = 2
        n_two = 0
        for j in range(d):
            if block[j] == 2:
                n_two += 1
        if state == 2 and n_two != 1:
            violations += 1
        child_cid = cid
        if state == 0 and level >= 1 and not spawn and level <= site_max_level:
            if n_sites < max_sites:
                child_cid = n_sites
                csize[child_cid] = 1
                cactive[child_cid] = 1
                n_sites += 1
            else:
                child_cid = -1
        elif state == 0:
            child_cid = -1
        elif state == 2:
            child_cid = -1
        for j in range(d - 1, -1, -1):
            s = block[j]
            c = child_cid if (s == 1 and child_cid >= 0 and cactive[child_cid] == 1) else -1
            if level + 1 <= site_max_level or c >= 0:
                stack_level[sp] = level + 1
                stack_state[sp] = s
                stack_cluster[sp] = c
                sp += 1
    censored = 0
    for c in range(n_sites):
        if cactive[c] == 1:
            if ctouched[c] == 1:
                censored += 1
            else:
                hist[csize[c]] += 1
    return hist, tail, censored, n_sites, violations


def _limit_kernel_floats(spec: SamplerSpec):
    if spec.shape.wired:
        raise ValueError("streaming pipelines run on unwired truncation windows")
    return float_kernel(limit_kernel(spec.params))


def stream_window_stats(spec: SamplerSpec, replicas=None) -> WindowStats:
    """Full-window traversal statistics over ``replicas`` replicas."""
    theta, alpha = _limit_kernel_floats(spec)
    shape = spec.shape
    reps = spec.replicas if replicas is None else replicas
    counts = np.zeros(3, dtype=np.int64)
    violations = 0
    for r in range(reps):
        rng = replica_rng(spec.master_seed, r)
        c, v = _window_stats_kernel(rng, shape.d, shape.depth, theta, alpha)
        counts += c
        violations += v
    return WindowStats(
        edges=int(counts.sum()),
        state_counts=counts,
        one_ended_violations=violations,
        replicas=reps,
    )


def stream_cluster_sizes(
    spec: SamplerSpec,
    site_max_level: int = 5,
    size_cap: int = 50,
    replicas=None,
    min_collected=None,
) -> ClusterHarvest:
    """Collect finite-cluster sizes from streamed limit windows.

    Sites are heads of 0' edges at levels 1..site_max_level whose block
    spawned no 2'; each contributes its open descendant cluster.  Clusters
    that outgrow ``size_cap`` belong to the pooled tail whether or not the
    window clips them; clusters clipped while still within the cap are
    censored and excluded.  If ``min_collected`` is given, replicas keep
    going (past ``spec.replicas``) until that many clusters are in hand.
    """
    theta, alpha = _limit_kernel_floats(spec)
    shape = spec.shape
    if site_max_level >= shape.depth:
        raise ValueError("the site region must end above the window boundary")
    max_sites = shape.d * (shape.d ** site_max_level - 1) // (shape.d - 1) + 1
    hist = np.zeros(size_cap + 1, dtype=np.int64)
    tail = censored = sites = violations = 0
    reps = spec.replicas if replicas is None else replicas
    r = 0
    while (
        r < reps
        if min_collected is None
        else int(hist.sum()) + tail < min_collected
    ):
        rng = replica_rng(spec.master_seed, r)
        h, t, c, s, v = _cluster_kernel(
            rng, shape.d, shape.depth, theta, alpha, site_max_level, size_cap, max_sites
        )
        hist += h
        tail += t
        censored += c
        sites += s
        violations += v
        r += 1
    return ClusterHarvest(
        size_counts=hist,
        tail_count=tail,
        censored_count=censored,
        sites=sites,
        one_ended_violations=violations,
        replicas=r,
    )
