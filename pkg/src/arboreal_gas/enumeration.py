"""Brute-force ground truth on small wired trees.

Everything here is exact: probabilities are `fractions.Fraction`, subsets are
enumerated in ascending integer order (bit i of the subset integer is the
flat-index-i edge), and forests are recognized with a union-find pass.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .configs import (
    CLOSED,
    OPEN_DEAD,
    OPEN_SURVIVING,
    ForestConfig,
    StateConfig,
    level_slice,
)
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

#: Largest edge count the enumerator will touch (2**cap subsets).
DEFAULT_ENUMERATION_CAP = 24


class EnumerationCapError(ValueError):
    """Shape too large for exhaustive enumeration."""


@dataclass(frozen=True)
class PartitionTriple:
    """Exact partition function split by root-boundary connectivity."""

    Z: Fraction
    Z_S: Fraction
    Z_X: Fraction


@dataclass
class ExactMeasure:
    """Every forest with its exact probability; masses sum to exactly 1."""

    entries: list  # (ForestConfig, Fraction)
    shape: TreeShape
    p: Fraction


class _DSU:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> bool:
        """Merge; returns False if a and b were already connected."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def _require_exact(p) -> Fraction:
    if isinstance(p, float):
        raise TypeError("the enumeration oracle takes exact rationals, not floats")
    p = Fraction(p)
    if not 0 <= p < 1:
        raise ValueError(f"p must lie in [0, 1), got {p}")
    return p


def _endpoint_indices(shape: TreeShape):
    tails = np.empty(edge_count(shape), dtype=np.int64)
    heads = np.empty(edge_count(shape), dtype=np.int64)
    for i in range(edge_count(shape)):
        e = edge_from_flat(i, shape)
        tails[i] = vertex_flat_index(tail_vertex(e, shape), shape)
        heads[i] = vertex_flat_index(head_vertex(e, shape), shape)
    return tails, heads


def is_forest_wired(config: ForestConfig) -> bool:
    """True iff the open edges are acyclic after boundary identification."""
    shape = config.shape
    if not shape.wired:
        raise ValueError("is_forest_wired requires a wired shape")
    tails, heads = _endpoint_indices(shape)
    dsu = _DSU(vertex_count(shape))
    for i in np.nonzero(config.bits)[0]:
        if not dsu.union(int(tails[i]), int(heads[i])):
            return False
    return True


def config_weight(config: ForestConfig, p) -> Fraction:
    """p^{#open} (1-p)^{#closed}."""
    p = _require_exact(p)
    n_open = config.open_count()
    return p ** n_open * (1 - p) ** (config.bits.size - n_open)


def _check_cap(shape: TreeShape, cap: int):
    if not shape.wired:
        raise ValueError("enumeration is only defined for wired shapes")
    if edge_count(shape) > cap:
        raise EnumerationCapError(
            f"{edge_count(shape)} edges exceed the enumeration cap of {cap}"
        )


@lru_cache(maxsize=None)
def _forest_subsets(shape: TreeShape) -> tuple:
    """All forest subsets as (subset_int, root_connected) pairs, ascending."""
    m = edge_count(shape)
    tails, heads = _endpoint_indices(shape)
    root = vertex_flat_index(VertexRef(0, 0), shape)
    boundary = vertex_count(shape) - 1
    out = []
    for subset in range(1 << m):
        dsu = _DSU(vertex_count(shape))
        ok = True
        for i in range(m):
            if subset >> i & 1:
                if not dsu.union(int(tails[i]), int(heads[i])):
                    ok = False
                    break
        if ok:
            out.append((subset, dsu.find(root) == dsu.find(boundary)))
    return tuple(out)


def _subset_config(subset: int, shape: TreeShape) -> ForestConfig:
    m = edge_count(shape)
    bits = np.fromiter(((subset >> i) & 1 for i in range(m)), dtype=np.uint8, count=m)
    return ForestConfig(bits, shape)


def enumerate_forests(shape: TreeShape, cap: int = DEFAULT_ENUMERATION_CAP):
    """All forests of a wired shape in ascending subset order."""
    _check_cap(shape, cap)
    return [_subset_config(s, shape) for s, _ in _forest_subsets(shape)]


def enumerate_partitions(
    shape: TreeShape, p, cap: int = DEFAULT_ENUMERATION_CAP
) -> PartitionTriple:
    p = _require_exact(p)
    _check_cap(shape, cap)
    if shape.depth == 0:
        # the root is its own boundary
        return PartitionTriple(Fraction(1), Fraction(1), Fraction(0))
    m = edge_count(shape)
    z_s = z_x = Fraction(0)
    for subset, connected in _forest_subsets(shape):
        k = bin(subset).count("1")
        w = p ** k * (1 - p) ** (m - k)
        if connected:
            z_s += w
        else:
            z_x += w
    return PartitionTriple(z_s + z_x, z_s, z_x)


def exact_measure(
    shape: TreeShape, p, cap: int = DEFAULT_ENUMERATION_CAP
) -> ExactMeasure:
    p = _require_exact(p)
    _check_cap(shape, cap)
    z = enumerate_partitions(shape, p, cap).Z
    entries = []
    for subset, _ in _forest_subsets(shape):
        cfg = _subset_config(subset, shape)
        entries.append((cfg, config_weight(cfg, p) / z))
    return ExactMeasure(entries, shape, p)


def root_connection_probability(
    shape: TreeShape, p, cap: int = DEFAULT_ENUMERATION_CAP
) -> Fraction:
    """Exact probability that the root reaches the wired boundary."""
    triple = enumerate_partitions(shape, p, cap)
    return triple.Z_S / triple.Z


def apply_phi(config: ForestConfig) -> StateConfig:
    """Relabel open edges by whether their head reaches the boundary.

    Connectivity is evaluated inside the head's own descendant subtree, so
    that sibling subtrees never influence an edge's label.
    """
    shape = config.shape
    if not shape.wired:
        raise ValueError("the state relabeling is defined on wired shapes")
    if not is_forest_wired(config):
        raise ValueError("input configuration is not a forest")
    d, n = shape.d, shape.depth
    states = np.zeros_like(config.bits)
    # reaches[i]: head vertex of level-k edge i reaches the boundary below itself
    reaches = np.ones(d ** n, dtype=bool)  # level-n heads are the boundary
    for level in range(n, 0, -1):
        sl = level_slice(shape, level)
        open_ = config.bits[sl].astype(bool)
        states[sl] = np.where(open_, np.where(reaches, OPEN_SURVIVING, OPEN_DEAD), CLOSED)
        if level > 1:
            reaches = (open_ & reaches).reshape(-1, d).any(axis=1)
    return StateConfig(states, shape)


def exact_state_measure(
    shape: TreeShape, p, cap: int = DEFAULT_ENUMERATION_CAP
) -> list:
    """The exact forest measure pushed forward through the relabeling map.

    The map is injective on forests, so each state configuration inherits the
    mass of its unique preimage.  Returned in the enumeration order.
    """
    measure = exact_measure(shape, p, cap)
    return [(apply_phi(cfg), mass) for cfg, mass in measure.entries]
