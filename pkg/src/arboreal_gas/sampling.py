"""Exact samplers of the hidden three-state process and its decoding.

Two generation orders exist with the same law:

* the array samplers draw whole levels at once (vectorized, level order);
* ``stream_sample`` walks the tree depth first with O(d * depth) memory.

Replica r of a run always uses the generator derived from
``SeedSequence(entropy=master_seed, spawn_key=(r,))``, so output is a pure
function of (spec, replica) regardless of scheduling.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .configs import ForestConfig, StateConfig, phi_inverse  # noqa: F401  (re-export)
from .recursion import (
    GasParams,
    KernelParams,
    float_kernel,
    kernel_block_probability,
    kernel_table,
    limit_kernel,
)
from .tree import EdgeRef, TreeShape, edge_count


@dataclass(frozen=True)
class SamplerSpec:
    """What to sample: shape (wired or window), parameters, seed, replicas."""

    shape: TreeShape
    params: GasParams
    master_seed: int = 0
    replicas: int = 1

    def __post_init__(self):
        if self.params.d != self.shape.d:
            raise ValueError("shape and params disagree on the branching factor")
        if self.replicas < 0:
            raise ValueError("replica count must be >= 0")


def replica_seed(master_seed: int, replica: int) -> int:
    """The derived 64-bit seed identifying one replica (for reporting)."""
    words = np.random.SeedSequence(
        entropy=master_seed, spawn_key=(replica,)
    ).generate_state(2, dtype=np.uint64)
    return int(words[0])


def replica_rng(master_seed: int, replica: int) -> np.random.Generator:
    seq = np.random.SeedSequence(entropy=master_seed, spawn_key=(replica,))
    return np.random.Generator(np.random.PCG64(seq))


def _sample_block_level(parent_states, theta, alpha, d, rng):
    """Child-edge states for one whole level of vertices.

    Draw order per level: one spawn uniform per vertex, one position uniform
    per vertex, then a (vertices x d) matrix of sibling uniforms.  The chosen
    2' position overrides its sibling draw.
    """
    v = parent_states.size
    spawn = rng.random(v) < theta
    spawn = np.where(parent_states == 2, True, spawn & (parent_states == 0))
    pos = np.floor(d * rng.random(v)).astype(np.int64)
    children = (rng.random((v, d)) < alpha).astype(np.uint8)
    rows = np.nonzero(spawn)[0]
    children[rows, pos[rows]] = 2
    return children.reshape(-1)


def _sample_levels(shape: TreeShape, kernels, rng) -> StateConfig:
    """kernels[k] gives (theta, alpha) for the level-(k+1) edge blocks."""
    states = np.empty(edge_count(shape), dtype=np.uint8)
    parents = np.zeros(1, dtype=np.uint8)  # virtual parent of the root is 0'
    pos = 0
    for k in range(shape.depth):
        theta, alpha = kernels[k]
        block = _sample_block_level(parents, theta, alpha, shape.d, rng)
        states[pos : pos + block.size] = block
        pos += block.size
        parents = block
    return StateConfig(states, shape)


@lru_cache(maxsize=64)
def _finite_float_kernels(shape: TreeShape, params: GasParams):
    table = kernel_table(shape.depth, params)
    # level-(k+1) edges sit at remaining depth n - k
    return [float_kernel(table[shape.depth - k]) for k in range(shape.depth)]


def sample_states_finite(spec: SamplerSpec, replica: int = 0) -> StateConfig:
    """One exact sample of the wired finite-depth process."""
    if not spec.shape.wired:
        raise ValueError("finite sampling requires a wired shape")
    rng = replica_rng(spec.master_seed, replica)
    return _sample_levels(spec.shape, _finite_float_kernels(spec.shape, spec.params), rng)


def sample_states_limit(spec: SamplerSpec, replica: int = 0) -> StateConfig:
    """One sample of the weak limit restricted to a depth-L window."""
    if spec.shape.wired:
        raise ValueError("limit sampling uses an unwired truncation window")
    theta, alpha = float_kernel(limit_kernel(spec.params))
    kernels = [(theta, alpha)] * spec.shape.depth
    rng = replica_rng(spec.master_seed, replica)
    return _sample_levels(spec.shape, kernels, rng)


def state_config_probability(sc: StateConfig, params: GasParams, kernels=None):
    """Chain-rule probability of a state configuration under the block kernels.

    ``kernels`` may be a precomputed list indexed by remaining depth (as from
    ``kernel_table``); in exact mode the result is an exact rational.  Any
    invariant-violating configuration comes out as exactly zero because some
    block pattern is impossible.
    """
    shape = sc.shape
    if kernels is None:
        if shape.wired:
            kernels = kernel_table(shape.depth, params)
        else:
            kernels = [limit_kernel(params)] * (shape.depth + 1)
    prob = params.one()
    d = shape.d
    parents = [0]
    pos = 0
    for k in range(shape.depth):
        kp = kernels[shape.depth - k] if shape.wired else kernels[1]
        width = d ** (k + 1)
        level = sc.states[pos : pos + width]
        for i, parent in enumerate(parents):
            block = level[i * d : (i + 1) * d]
            prob *= kernel_block_probability(parent, block, kp)
            if prob == 0:
                return prob
        pos += width
        parents = level
    return prob


def _scalar_block(parent_state, theta, alpha, d, rng):
    """One block with scalar draws; shared discipline with the numba kernels.

    Draws: a spawn uniform only for 0' parents, a position uniform only when a
    2' child is due, then d sibling uniforms (the 2' position overrides).
    """
    if parent_state == 0:
        spawn = rng.random() < theta
    elif parent_state == 2:
        spawn = True
    else:
        spawn = False
    pos = int(d * rng.random()) if spawn else -1
    block = [1 if rng.random() < alpha else 0 for _ in range(d)]
    if spawn:
        block[pos] = 2
    return block


def stream_sample(spec: SamplerSpec, visitor, replica: int = 0, prune=None):
    """Depth-first generation that never materializes the configuration.

    ``visitor(edge_ref, state)`` is invoked once per edge in depth-first
    preorder; its return values are ignored and its exceptions propagate.
    ``prune(edge_ref, state)`` may return True to skip the subtree below an
    edge (the law of everything visited is unchanged: blocks are sampled with
    an independent draw sequence per vertex visit order).  Returns the
    visitor itself for fluent use.
    """
    shape, params = spec.shape, spec.params
    d, n = shape.d, shape.depth
    if shape.wired:
        table = [
            None if kp is None else float_kernel(kp)
            for kp in kernel_table(n, params)
        ]

        def block_params(level):
            return table[n - level]

    else:
        const = float_kernel(limit_kernel(params))

        def block_params(level):
            return const

    rng = replica_rng(spec.master_seed, replica)
    # stack of vertices awaiting expansion: (level, index, incoming state)
    stack = [(0, 0, 0)]
    while stack:
        level, index, state = stack.pop()
        if level == n:
            continue
        theta, alpha = block_params(level)
        block = _scalar_block(state, theta, alpha, d, rng)
        children = []
        for j, s in enumerate(block):
            e = EdgeRef(level + 1, index * d + j)
            visitor(e, s)
            if prune is None or not prune(e, s):
                children.append((level + 1, index * d + j, s))
        stack.extend(reversed(children))
    return visitor


class CollectingVisitor:
    """Materializes a streamed sample into a StateConfig."""

    def __init__(self, shape: TreeShape):
        self.shape = shape
        self.states = np.zeros(edge_count(shape), dtype=np.uint8)

    def __call__(self, e: EdgeRef, state: int):
        from .tree import flat_index

        self.states[flat_index(e, self.shape)] = state

    def config(self) -> StateConfig:
        return StateConfig(self.states.copy(), self.shape)
