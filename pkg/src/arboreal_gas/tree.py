"""Addressing of wired d-ary trees and finite truncation windows.

Edges live on levels 1..n, with ``d**k`` edges on level k.  The flat index
(level-order, left to right) is the normative serialization order for every
configuration format in this package.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class TreeShape:
    """A depth-n d-ary tree, either wired at the leaves or a plain window.

    ``wired=True`` identifies all depth-n vertices into a single boundary
    vertex; ``wired=False`` is a finite truncation window of the infinite
    tree (no identification).
    """

    d: int
    depth: int
    wired: bool = True

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"branching factor must be >= 2, got {self.d}")
        if self.depth < 0:
            raise ValueError(f"depth must be >= 0, got {self.depth}")


@dataclass(frozen=True)
class EdgeRef:
    """Edge at ``level`` in 1..n, with ``index`` in 0..d**level."""

    level: int
    index: int


@dataclass(frozen=True)
class VertexRef:
    """Vertex at ``level`` in 0..n; level 0 is the root.

    In wired shapes all level-n vertices are aliased to the single boundary
    vertex, canonically represented as ``VertexRef(n, 0)``.
    """

    level: int
    index: int


def edge_count(shape: TreeShape) -> int:
    """Number of edges: d(d^n - 1)/(d - 1); zero at depth 0."""
    return shape.d * (shape.d ** shape.depth - 1) // (shape.d - 1)


def level_offset(shape: TreeShape, level: int) -> int:
    """Flat index of the first edge at ``level`` (levels 1..n)."""
    if not 1 <= level <= shape.depth:
        raise ValueError(f"edge level {level} outside [1, {shape.depth}]")
    return shape.d * (shape.d ** (level - 1) - 1) // (shape.d - 1)


def flat_index(e: EdgeRef, shape: TreeShape) -> int:
    _check_edge(e, shape)
    return level_offset(shape, e.level) + e.index


def edge_from_flat(i: int, shape: TreeShape) -> EdgeRef:
    if not 0 <= i < edge_count(shape):
        raise ValueError(f"flat index {i} outside [0, {edge_count(shape)})")
    level, width = 1, shape.d
    while i >= width:
        i -= width
        level += 1
        width *= shape.d
    return EdgeRef(level, i)


def _check_edge(e: EdgeRef, shape: TreeShape):
    if not 1 <= e.level <= shape.depth:
        raise ValueError(f"edge level {e.level} outside [1, {shape.depth}]")
    if not 0 <= e.index < shape.d ** e.level:
        raise ValueError(f"edge index {e.index} outside [0, d**{e.level})")


def parent_edge(e: EdgeRef, shape: TreeShape):
    """Parent edge, or ``None`` for the root's own edges (level 1)."""
    _check_edge(e, shape)
    if e.level == 1:
        return None
    return EdgeRef(e.level - 1, e.index // shape.d)


def children_edges(e: EdgeRef, shape: TreeShape) -> list:
    """The d edges hanging off the head of ``e``; empty at the deepest level."""
    _check_edge(e, shape)
    if e.level == shape.depth:
        return []
    return [EdgeRef(e.level + 1, e.index * shape.d + j) for j in range(shape.d)]


def sibling_edges(e: EdgeRef, shape: TreeShape) -> list:
    """The other d-1 edges sharing e's tail (root edges are mutual siblings)."""
    _check_edge(e, shape)
    group = e.index // shape.d * shape.d
    return [
        EdgeRef(e.level, group + j)
        for j in range(shape.d)
        if group + j != e.index
    ]


def head_is_boundary(e: EdgeRef, shape: TreeShape) -> bool:
    """True iff the head of ``e`` is the wired boundary vertex."""
    if not shape.wired:
        raise ValueError("boundary queries require a wired shape")
    _check_edge(e, shape)
    return e.level == shape.depth


def tail_vertex(e: EdgeRef, shape: TreeShape) -> VertexRef:
    _check_edge(e, shape)
    return VertexRef(e.level - 1, e.index // shape.d)


def head_vertex(e: EdgeRef, shape: TreeShape) -> VertexRef:
    _check_edge(e, shape)
    if shape.wired and e.level == shape.depth:
        return VertexRef(shape.depth, 0)
    return VertexRef(e.level, e.index)


def vertex_count(shape: TreeShape) -> int:
    """Distinct vertices (the wired boundary counts once)."""
    if shape.depth == 0:
        return 1
    interior = (shape.d ** shape.depth - 1) // (shape.d - 1)
    if shape.wired:
        return interior + 1
    return interior + shape.d ** shape.depth


def vertex_flat_index(v: VertexRef, shape: TreeShape) -> int:
    """Bijection of distinct vertices with 0..vertex_count; root is 0.

    In wired shapes the boundary vertex maps to the last index regardless of
    the alias used for it.
    """
    if not 0 <= v.level <= shape.depth:
        raise ValueError(f"vertex level {v.level} outside [0, {shape.depth}]")
    if shape.wired and v.level == shape.depth and shape.depth > 0:
        return vertex_count(shape) - 1
    if not 0 <= v.index < shape.d ** v.level:
        raise ValueError(f"vertex index {v.index} outside [0, d**{v.level})")
    return (shape.d ** v.level - 1) // (shape.d - 1) + v.index
