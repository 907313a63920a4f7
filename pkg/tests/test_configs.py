import numpy as np
import pytest
from hypothesis import given, strategies as st

from arboreal_gas import (
    StateConfig,
    TreeShape,
    edge_count,
    pack_states,
    phi_inverse,
    unpack_states,
)
from arboreal_gas.configs import state_violations


def _sc(shape, states):
    return StateConfig(np.array(states, dtype=np.uint8), shape)


def test_phi_inverse_examples():
    shape = TreeShape(2, 1)
    assert phi_inverse(_sc(shape, [0, 0])).bits.tolist() == [0, 0]
    assert phi_inverse(_sc(shape, [2, 0])).bits.tolist() == [1, 0]


def test_phi_inverse_rejects_invalid():
    shape = TreeShape(2, 2)
    # 2' with interior head but no 2' child
    with pytest.raises(ValueError):
        phi_inverse(_sc(shape, [2, 0, 0, 0, 0, 0]))
    # 1' child of the boundary level in a wired shape
    with pytest.raises(ValueError):
        phi_inverse(_sc(shape, [0, 0, 1, 0, 0, 0]))
    # two 2' children of one vertex
    with pytest.raises(ValueError):
        phi_inverse(_sc(shape, [2, 2, 2, 0, 2, 0]))


def test_violation_messages():
    shape = TreeShape(2, 2)
    bad = state_violations(_sc(shape, [1, 0, 2, 0, 0, 0]))
    assert any("1' edge" in msg for msg in bad)
    assert state_violations(_sc(shape, [2, 0, 2, 0, 0, 0])) == []


@given(st.integers(0, 40), st.data())
def test_pack_roundtrip(n, data):
    states = np.array(
        data.draw(st.lists(st.integers(0, 2), min_size=n, max_size=n)), dtype=np.uint8
    )
    assert unpack_states(pack_states(states), n).tolist() == states.tolist()


def test_unpack_rejects_garbage():
    with pytest.raises(ValueError):
        unpack_states(pack_states(np.zeros(2, dtype=np.uint8)), 50)
    import base64

    with pytest.raises(ValueError):
        unpack_states(base64.b64encode(b"\xff").decode(), 4)  # reserved 2-bit value


def test_length_checks():
    shape = TreeShape(2, 2)
    with pytest.raises(ValueError):
        StateConfig(np.zeros(5, dtype=np.uint8), shape)
    assert edge_count(shape) == 6
