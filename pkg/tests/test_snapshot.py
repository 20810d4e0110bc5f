import numpy as np
import pytest

from offpolicy_bench.nn import (
    SnapshotError,
    dump_mlp_bytes,
    load_mlp,
    load_mlp_bytes,
    mlp_init,
    save_mlp,
)


def test_round_trip_is_bit_exact(tmp_path):
    net = mlp_init([7, 32, 32, 3], "tanh", seed=123)
    path = tmp_path / "net.bin"
    save_mlp(net, path)
    loaded = load_mlp(path)
    assert loaded.layer_sizes == net.layer_sizes
    assert loaded.output_activation == net.output_activation
    assert loaded.hidden_activation == net.hidden_activation
    for a, b in zip(net.weights, loaded.weights):
        assert a.tobytes() == b.tobytes()
    for a, b in zip(net.biases, loaded.biases):
        assert a.tobytes() == b.tobytes()


def test_round_trip_bytes_stable(tmp_path):
    net = mlp_init([4, 8, 1], seed=5)
    blob = dump_mlp_bytes(net)
    assert dump_mlp_bytes(load_mlp_bytes(blob)) == blob


def test_magic_header_present():
    net = mlp_init([2, 3, 1], seed=0)
    blob = dump_mlp_bytes(net)
    assert blob[:8] == b"OPBNNET\0"


def test_bad_magic_rejected():
    net = mlp_init([2, 3, 1], seed=0)
    blob = b"XXXXXXXX" + dump_mlp_bytes(net)[8:]
    with pytest.raises(SnapshotError):
        load_mlp_bytes(blob)


def test_truncated_rejected():
    blob = dump_mlp_bytes(mlp_init([2, 3, 1], seed=0))
    with pytest.raises(SnapshotError):
        load_mlp_bytes(blob[:-4])


def test_trailing_bytes_rejected():
    blob = dump_mlp_bytes(mlp_init([2, 3, 1], seed=0))
    with pytest.raises(SnapshotError):
        load_mlp_bytes(blob + b"\0")
