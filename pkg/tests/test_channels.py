import json

import numpy as np
import pytest

from ia3 import (
    ChannelFileError,
    PreconditionError,
    SystemParams,
    construct,
    dual_solution,
    generate_channels,
    rank,
    read_channels,
    specialized_channels,
    transpose_dual,
    verify,
    write_channels,
)
from ia3.channels import channels_to_dict


def test_generation_is_deterministic():
    a = generate_channels(2, 3, 42)
    b = generate_channels(2, 3, 42)
    assert a == b
    assert a.H.tobytes() == b.H.tobytes()
    assert a.H.shape == (3, 3, 3, 2)
    assert generate_channels(2, 3, 43) != a


def test_streams_keyed_per_matrix():
    from ia3.channels import _stream, standard_complex_normal

    ch = generate_channels(2, 3, 5)
    alone = standard_complex_normal(_stream(5, 2, 1), (3, 2))
    assert np.array_equal(ch.h(2, 1), alone)
    assert not np.array_equal(ch.h(1, 2), ch.h(2, 1))


def test_generated_unit_variance():
    ch = generate_channels(20, 20, 0)
    assert np.mean(np.abs(ch.H) ** 2) == pytest.approx(1.0, rel=0.05)


def test_generic_cross_ranks():
    ch = generate_channels(3, 5, 1)
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            if i != j:
                assert rank(ch.h(i, j)) == 3
        assert rank(np.hstack([ch.plus(i), ch.minus(i)])) == 5  # min(N, 2M)


def test_specialized_2_3():
    ch = specialized_channels(2, 3)
    B = np.array([[1, 0], [0, 1], [0, 0]])
    C = np.array([[0, 0], [1, 0], [0, 1]])
    for i in (1, 2, 3):
        assert np.array_equal(ch.plus(i), B)
        assert np.array_equal(ch.minus(i), C)
        assert np.array_equal(ch.h(i, i), B)


def test_specialized_square_and_tall():
    ch = specialized_channels(2, 2)
    assert np.array_equal(ch.plus(1), np.eye(2)) and np.array_equal(ch.minus(1), np.eye(2))
    ch = specialized_channels(3, 5)
    assert np.array_equal(ch.plus(2)[:3], np.eye(3))
    assert not ch.plus(2)[3:].any()
    assert set(np.unique(ch.H.real)) <= {0.0, 1.0}
    with pytest.raises(PreconditionError):
        specialized_channels(3, 2)


def test_transpose_dual_involution():
    ch = generate_channels(2, 4, 9)
    du = transpose_dual(ch)
    assert (du.M, du.N) == (4, 2)
    assert np.array_equal(du.h(2, 1), ch.h(1, 2).T)
    assert transpose_dual(du) == ch


def test_dual_maps_solutions():
    ch = generate_channels(3, 5, 2)
    sol = construct(ch, 2)
    assert verify(ch, sol, 2).passed
    assert verify(transpose_dual(ch), dual_solution(sol), 2).passed


def test_file_round_trip(tmp_path):
    ch = generate_channels(3, 4, 11)
    path = tmp_path / "ch.json"
    write_channels(ch, path)
    back = read_channels(path)
    assert back == ch
    assert json.loads(path.read_text())["K"] == 3


def test_missing_key(tmp_path):
    doc = channels_to_dict(generate_channels(2, 2, 0))
    del doc["H"]["H_2_3"]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(ChannelFileError, match="H_2_3"):
        read_channels(path)


def test_hand_written_file(tmp_path):
    doc = {"M": 1, "N": 1, "K": 3, "H": {f"H_{i}_{j}": [[[0.5, -1.0]]] for i in (1, 2, 3) for j in (1, 2, 3)}}
    doc["H"]["H_1_2"] = [[[2.0, 0.0]]]
    path = tmp_path / "one.json"
    path.write_text(json.dumps(doc))
    ch = read_channels(path)
    assert ch.h(1, 2)[0, 0] == 2 + 0j
    assert ch.h(3, 3)[0, 0] == 0.5 - 1j


def test_wrong_shape_in_file(tmp_path):
    doc = channels_to_dict(generate_channels(2, 3, 0))
    doc["H"]["H_1_1"] = doc["H"]["H_1_1"][:2]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(ChannelFileError, match="H_1_1"):
        read_channels(path)


def test_system_params():
    SystemParams(3, 5, 2)
    with pytest.raises(PreconditionError):
        SystemParams(1, 5, 2)
    with pytest.raises(PreconditionError):
        SystemParams(0, 5, 1)
