"""Arboreal gas on wired d-ary trees: exact recursions, samplers, statistics.

The model is Bernoulli bond percolation conditioned to contain no cycle,
studied on the depth-n d-ary tree with all leaves identified into a single
boundary vertex, and on finite truncation windows of its weak limit.
"""

from .configs import (
    ForestConfig,
    StateConfig,
    pack_states,
    phi_inverse,
    state_violations,
    unpack_states,
)
from .enumeration import (
    DEFAULT_ENUMERATION_CAP,
    EnumerationCapError,
    ExactMeasure,
    PartitionTriple,
    apply_phi,
    config_weight,
    enumerate_forests,
    enumerate_partitions,
    exact_measure,
    exact_state_measure,
    is_forest_wired,
    root_connection_probability,
)
from .recursion import (
    GasParams,
    KernelParams,
    SurvivalSequence,
    finite_kernel,
    gas_params,
    k_closed_form,
    k_recursive,
    kernel_block_probability,
    kernel_table,
    limit_kernel,
    partition_recursion,
    q_at_criticality,
    survival_prob_limit,
)
from .sampling import (
    CollectingVisitor,
    SamplerSpec,
    replica_rng,
    replica_seed,
    sample_states_finite,
    sample_states_limit,
    state_config_probability,
    stream_sample,
)
from .stats import (
    ClusterReport,
    GofResult,
    GwPmf,
    components,
    finite_cluster_samples,
    goodness_of_fit,
    gw_total_progeny_pmf,
    one_ended_violations,
    survival_frequency,
)
from .streaming import (
    ClusterHarvest,
    WindowStats,
    stream_cluster_sizes,
    stream_window_stats,
)
from .tree import (
    EdgeRef,
    TreeShape,
    VertexRef,
    children_edges,
    edge_count,
    edge_from_flat,
    flat_index,
    head_is_boundary,
    head_vertex,
    parent_edge,
    sibling_edges,
    tail_vertex,
    vertex_count,
)

__version__ = "0.1.0"
