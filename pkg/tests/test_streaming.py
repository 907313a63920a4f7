import numpy as np
import pytest

from arboreal_gas import (
    GasParams,
    SamplerSpec,
    TreeShape,
    gw_total_progeny_pmf,
    stream_cluster_sizes,
    stream_window_stats,
)


def _spec(d, depth, p, seed=0, replicas=1):
    return SamplerSpec(
        TreeShape(d, depth, wired=False), GasParams(d, p), master_seed=seed,
        replicas=replicas,
    )


def test_window_stats_counts_every_edge():
    spec = _spec(2, 10, 0.75, seed=1)
    ws = stream_window_stats(spec)
    assert ws.edges == 2 * (2 ** 10 - 1)
    assert ws.one_ended_violations == 0


def test_window_stats_deterministic():
    spec = _spec(2, 12, 0.75, seed=5, replicas=3)
    a = stream_window_stats(spec)
    b = stream_window_stats(spec)
    assert a.state_counts.tolist() == b.state_counts.tolist()


def test_window_stats_subcritical_marginal():
    spec = _spec(2, 16, 0.4, seed=2)
    ws = stream_window_stats(spec)
    assert ws.state_counts[2] == 0
    se = (0.4 * 0.6 / ws.edges) ** 0.5
    assert abs(ws.open_fraction - 0.4) < 4 * se


def test_cluster_sizes_match_gw_law():
    spec = _spec(2, 25, 0.75, seed=31)
    harvest = stream_cluster_sizes(
        spec, site_max_level=4, size_cap=40, min_collected=20000
    )
    assert harvest.one_ended_violations == 0
    assert harvest.censored_fraction < 0.01
    ref = gw_total_progeny_pmf(2, 40)
    n = harvest.collected
    p1 = harvest.size_counts[1] / n
    assert abs(p1 - 0.25) < 3 * (0.25 * 0.75 / n) ** 0.5
    tail = harvest.tail_count / n
    assert abs(tail - ref.tail_mass) < 4 * (ref.tail_mass / n) ** 0.5


def test_cluster_kernel_agrees_with_materialized_collection():
    """The pruned compiled pipeline and the array pipeline sample the same
    law; compare collected-size histograms at matching parameters."""
    from arboreal_gas import finite_cluster_samples, sample_states_limit

    d, depth, p = 2, 14, 0.75
    cap = 20
    spec = _spec(d, depth, p, seed=17, replicas=400)
    harvest = stream_cluster_sizes(spec, site_max_level=3, size_cap=cap)
    entries = []
    for r in range(400):
        sc = sample_states_limit(spec, r)
        entries.extend(finite_cluster_samples(sc, site_max_level=3, size_cap=cap))
    collected = [s for s, censored in entries if not censored]
    assert harvest.sites > 0 and len(entries) > 0
    # site discovery happens at the same rate
    assert abs(harvest.sites / 400 - len(entries) / 400) / (harvest.sites / 400) < 0.15
    # and the size-1 fraction among collected clusters agrees
    s1_stream = harvest.size_counts[1] / harvest.collected
    s1_mat = sum(1 for s in collected if s == 1) / len(collected)
    assert abs(s1_stream - s1_mat) < 0.05


def test_cluster_sizes_deterministic():
    spec = _spec(2, 20, 0.8, seed=6, replicas=5)
    a = stream_cluster_sizes(spec, site_max_level=3, size_cap=30)
    b = stream_cluster_sizes(spec, site_max_level=3, size_cap=30)
    assert a.size_counts.tolist() == b.size_counts.tolist()
    assert (a.tail_count, a.censored_count, a.sites) == (
        b.tail_count, b.censored_count, b.sites,
    )


def test_streaming_requires_window():
    wired = SamplerSpec(TreeShape(2, 5), GasParams(2, 0.75))
    with pytest.raises(ValueError):
        stream_window_stats(wired)
    with pytest.raises(ValueError):
        stream_cluster_sizes(_spec(2, 4, 0.75), site_max_level=4)
