"""Edge configurations: open/closed forests and their three-state encoding.

States are stored as small integers in flat-index order:

* ``0`` -- closed edge (0')
* ``1`` -- open edge whose head does not reach the boundary inside its own
  descendant subtree (1')
* ``2`` -- open edge whose head does reach the boundary (2')
"""

import base64
from dataclasses import dataclass, field

import numpy as np

from .tree import TreeShape, edge_count, level_offset

CLOSED, OPEN_DEAD, OPEN_SURVIVING = 0, 1, 2


@dataclass
class ForestConfig:
    """One open/closed bit per edge, flat-index order."""

    bits: np.ndarray
    shape: TreeShape

    def __post_init__(self):
        self.bits = np.asarray(self.bits, dtype=np.uint8)
        if self.bits.shape != (edge_count(self.shape),):
            raise ValueError(
                f"expected {edge_count(self.shape)} bits, got {self.bits.shape}"
            )

    def key(self) -> bytes:
        return self.bits.tobytes()

    def open_count(self) -> int:
        return int(self.bits.sum())


@dataclass
class StateConfig:
    """Per-edge state in {0', 1', 2'}, flat-index order."""

    states: np.ndarray
    shape: TreeShape

    def __post_init__(self):
        self.states = np.asarray(self.states, dtype=np.uint8)
        if self.states.shape != (edge_count(self.shape),):
            raise ValueError(
                f"expected {edge_count(self.shape)} states, got {self.states.shape}"
            )
        if self.states.size and self.states.max() > 2:
            raise ValueError("states must lie in {0, 1, 2}")

    def key(self) -> bytes:
        return self.states.tobytes()


def level_slice(shape: TreeShape, level: int) -> slice:
    off = level_offset(shape, level)
    return slice(off, off + shape.d ** level)


def state_violations(sc: StateConfig) -> list:
    """All invariant breaches of a state configuration, as messages.

    Checks, per the hidden-Markov encoding: a 1' edge never has a 2' child,
    a 2' edge with a non-boundary (non-window-leaf) head has exactly one 2'
    child, every vertex has at most one 2' child edge, and in wired shapes
    the deepest level carries no 1'.
    """
    shape, s = sc.shape, sc.states
    d, n = shape.d, shape.depth
    out = []
    for level in range(1, n + 1):
        cur = s[level_slice(shape, level)]
        if level < n:
            nxt = s[level_slice(shape, level + 1)]
            two_children = (nxt.reshape(-1, d) == OPEN_SURVIVING).sum(axis=1)
            for i in np.nonzero((cur == OPEN_DEAD) & (two_children > 0))[0]:
                out.append(f"1' edge ({level},{i}) has a 2' child")
            for i in np.nonzero((cur == OPEN_SURVIVING) & (two_children != 1))[0]:
                out.append(
                    f"2' edge ({level},{i}) has {two_children[i]} 2' children"
                )
        if level > 1:
            per_vertex = (cur.reshape(-1, d) == OPEN_SURVIVING).sum(axis=1)
        else:
            per_vertex = np.array([(cur == OPEN_SURVIVING).sum()])
        for i in np.nonzero(per_vertex > 1)[0]:
            out.append(f"vertex ({level - 1},{i}) has {per_vertex[i]} 2' child edges")
    if shape.wired and n >= 1:
        deepest = s[level_slice(shape, n)]
        for i in np.nonzero(deepest == OPEN_DEAD)[0]:
            out.append(f"boundary edge ({n},{i}) is 1'")
    return out


def phi_inverse(sc: StateConfig) -> ForestConfig:
    """Local decoding: 0' -> closed, 1'/2' -> open.

    Raises ``ValueError`` if the configuration breaks the state invariants
    (for wired shapes those invariants are exactly what guarantees the
    decoded edge set is a forest).
    """
    bad = state_violations(sc)
    if bad:
        raise ValueError("invalid state configuration: " + "; ".join(bad[:3]))
    return ForestConfig((sc.states != CLOSED).astype(np.uint8), sc.shape)


def pack_states(states: np.ndarray) -> str:
    """2-bit pack (00=0', 01=1', 10=2') in flat order, then base64."""
    states = np.asarray(states, dtype=np.uint8)
    padded = np.zeros((states.size + 3) // 4 * 4, dtype=np.uint8)
    padded[: states.size] = states
    quads = padded.reshape(-1, 4)
    packed = (
        quads[:, 0] | (quads[:, 1] << 2) | (quads[:, 2] << 4) | (quads[:, 3] << 6)
    ).astype(np.uint8)
    return base64.b64encode(packed.tobytes()).decode("ascii")


def unpack_states(b64: str, n_edges: int) -> np.ndarray:
    raw = np.frombuffer(base64.b64decode(b64), dtype=np.uint8)
    states = np.empty(raw.size * 4, dtype=np.uint8)
    for j in range(4):
        states[j::4] = (raw >> (2 * j)) & 0b11
    if states.size < n_edges:
        raise ValueError(f"packed payload holds {states.size} states, need {n_edges}")
    states = states[:n_edges]
    if states.size and states.max() > 2:
        raise ValueError("packed payload contains the reserved state 11")
    return states
