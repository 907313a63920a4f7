from fractions import Fraction
from functools import lru_cache

import numpy as np
import pytest
from scipy import stats as sps

from arboreal_gas import (
    ForestConfig,
    GasParams,
    SamplerSpec,
    StateConfig,
    TreeShape,
    components,
    edge_count,
    finite_cluster_samples,
    goodness_of_fit,
    gw_total_progeny_pmf,
    one_ended_violations,
    phi_inverse,
    sample_states_finite,
    sample_states_limit,
    survival_frequency,
    vertex_count,
)


def _cfg(shape, open_flat):
    bits = np.zeros(edge_count(shape), dtype=np.uint8)
    bits[list(open_flat)] = 1
    return ForestConfig(bits, shape)


def _sc(shape, states):
    return StateConfig(np.array(states, dtype=np.uint8), shape)


def test_components_examples():
    shape = TreeShape(2, 2)
    rep = components(_cfg(shape, []))
    assert rep.component_sizes == [1, 1, 1, 1]
    assert not rep.boundary_connected
    rep1 = components(_cfg(TreeShape(2, 1), [0]))
    assert rep1.boundary_connected
    assert rep1.root_cluster_size == 2
    rep2 = components(_cfg(shape, [0, 2]))  # root -> u -> boundary
    assert rep2.root_cluster_size == 3
    assert rep2.boundary_connected


def test_components_euler_relation():
    shape = TreeShape(2, 3)
    spec = SamplerSpec(shape, GasParams(2, Fraction(3, 5)), master_seed=8)
    for r in range(50):
        fc = phi_inverse(sample_states_finite(spec, r))
        rep = components(fc)
        assert sum(rep.component_sizes) == vertex_count(shape)
        assert len(rep.component_sizes) == vertex_count(shape) - fc.open_count()


def test_components_window_censoring():
    shape = TreeShape(2, 2, wired=False)
    rep = components(_cfg(shape, [0, 2]))  # root-u-leaf path
    flagged = [s for s, c in zip(rep.component_sizes, rep.censored_flags) if c]
    assert 3 in flagged  # the path touches the window boundary


@lru_cache(maxsize=None)
def _gw_oracle(d, k_max):
    """Convolution recursion: P(T=k) = sum_j P(off=j) P(T_1+..+T_j = k-1).

    Totals of size k only involve subtree totals below k, so filling the pmf
    upward and convolving what is already final is well defined.
    """
    off = [float(sps.binom.pmf(j, d, 1.0 / d)) for j in range(d + 1)]
    pmf = np.zeros(k_max + 1)
    memo = {}

    def conv(j, s):
        # P(sum of j independent totals equals s); each total is >= 1
        if j == 0:
            return 1.0 if s == 0 else 0.0
        if (j, s) not in memo:
            memo[(j, s)] = sum(
                pmf[k] * conv(j - 1, s - k) for k in range(1, s - j + 2)
            )
        return memo[(j, s)]

    for k in range(1, k_max + 1):
        pmf[k] = sum(off[j] * conv(j, k - 1) for j in range(d + 1))
    return pmf


def test_gw_pmf_examples():
    pmf = gw_total_progeny_pmf(2, 10).pmf
    assert pmf[1] == pytest.approx(0.25)
    assert pmf[2] == pytest.approx(1 / 8)
    assert pmf[1:].sum() <= 1


@pytest.mark.parametrize("d", [2, 3, 4])
def test_gw_pmf_matches_convolution_oracle(d):
    k_max = 30
    got = gw_total_progeny_pmf(d, k_max).pmf
    want = _gw_oracle(d, k_max)
    for k in range(1, k_max + 1):
        assert got[k] == pytest.approx(want[k], rel=1e-12)


def test_one_ended_violations():
    shape = TreeShape(2, 2)
    assert one_ended_violations(_sc(shape, [0, 0, 0, 0, 0, 0])) == 0
    assert one_ended_violations(_sc(shape, [2, 0, 2, 0, 0, 0])) == 0
    # a 2' edge with two 2' children: one offending edge
    assert one_ended_violations(_sc(shape, [2, 0, 2, 2, 0, 0])) == 1


def test_finite_cluster_collection():
    shape = TreeShape(2, 3, wired=False)
    # closed root edge whose head has open (1') left child: cluster of size 2
    sc = _sc(shape, [0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0])
    got = finite_cluster_samples(sc)
    assert (2, False) in got
    # all-closed: every interior head is a singleton cluster
    sc0 = _sc(shape, [0] * 14)
    sizes = [s for s, _ in finite_cluster_samples(sc0)]
    assert sizes == [1] * 6  # heads at levels 1 and 2


def test_cluster_censoring_flag():
    shape = TreeShape(2, 2, wired=False)
    # closed root edge; head's 1' child reaches the window boundary
    sc = _sc(shape, [0, 0, 1, 0, 0, 0])
    got = finite_cluster_samples(sc)
    assert (2, True) in got  # reached the window boundary under the cap
    assert (1, False) in got  # the other root edge's head is a clean singleton
    capped = finite_cluster_samples(sc, size_cap=1)
    assert (2, False) in capped  # over the cap: pooled tail, not censored


def test_subcritical_window_collects_everything():
    spec = SamplerSpec(
        TreeShape(2, 6, wired=False), GasParams(2, 0.3), master_seed=2
    )
    sc = sample_states_limit(spec, 0)
    clusters = finite_cluster_samples(sc)
    assert all(size >= 1 for size, _ in clusters)


def test_goodness_of_fit_trivial():
    ref = np.array([0.25, 0.25, 0.25, 0.25])
    g = goodness_of_fit(ref * 400, ref)
    assert g.tv_distance == 0 and g.chi_square == 0
    point = np.array([1.0, 0, 0, 0])
    g2 = goodness_of_fit(np.array([100.0, 100, 100, 100]), point)
    assert g2.tv_distance == pytest.approx(1 - 1 / 4)
    with pytest.raises(ValueError):
        goodness_of_fit(np.zeros(3), np.ones(3) / 3)


def test_goodness_of_fit_pools_sparse_bins():
    ref = np.array([0.5, 0.5 - 1e-4, 5e-5, 5e-5])
    g = goodness_of_fit(np.array([50.0, 50.0, 0.0, 0.0]), ref)
    assert g.dof == 1  # the two starved bins were pooled away


def test_survival_frequency():
    est, se = survival_frequency([True, False, True, True])
    assert est == 0.75
    assert se == pytest.approx((0.75 * 0.25 / 4) ** 0.5)
    with pytest.raises(ValueError):
        survival_frequency([])
