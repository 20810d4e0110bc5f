"""Binary parameter snapshots with bit-exact round-trips.

Layout (little-endian):
    8-byte magic  b"OPBNNET\\0"
    uint32 format version (currently 1)
    uint32 layer count L (number of entries in layer_sizes)
    L * uint32 layer sizes
    uint8 hidden activation code, uint8 output activation code
    per weight layer: float64 entries, row-major
    per weight layer: float64 bias entries
"""

from __future__ import annotations

import io
import struct

import numpy as np

from .net import IDENTITY, RELU, TANH, Mlp

MAGIC = b"OPBNNET\0"
VERSION = 1

_ACT_CODES = {RELU: 0, IDENTITY: 1, TANH: 2}
_ACT_NAMES = {v: k for k, v in _ACT_CODES.items()}


class SnapshotError(ValueError):
    pass


def dump_mlp_bytes(net: Mlp) -> bytes:
    buf = io.BytesIO()
    buf.write(MAGIC)
    buf.write(struct.pack("<II", VERSION, len(net.layer_sizes)))
    buf.write(struct.pack(f"<{len(net.layer_sizes)}I", *net.layer_sizes))
    buf.write(struct.pack("<BB", _ACT_CODES[net.hidden_activation],
                          _ACT_CODES[net.output_activation]))
    for w, b in zip(net.weights, net.biases):
        buf.write(np.ascontiguousarray(w, dtype="<f8").tobytes())
        buf.write(np.ascontiguousarray(b, dtype="<f8").tobytes())
    return buf.getvalue()


def load_mlp_bytes(data: bytes) -> Mlp:
    buf = io.BytesIO(data)
    if buf.read(8) != MAGIC:
        raise SnapshotError("bad magic header")
    version, n_sizes = struct.unpack("<II", buf.read(8))
    if version != VERSION:
        raise SnapshotError(f"unsupported snapshot version {version}")
    sizes = struct.unpack(f"<{n_sizes}I", buf.read(4 * n_sizes))
    hidden_code, output_code = struct.unpack("<BB", buf.read(2))
    try:
        hidden = _ACT_NAMES[hidden_code]
        output = _ACT_NAMES[output_code]
    except KeyError as exc:
        raise SnapshotError(f"unknown activation code {exc}") from exc

    weights = []
    biases = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        w_raw = buf.read(8 * fan_in * fan_out)
        b_raw = buf.read(8 * fan_out)
        if len(w_raw) != 8 * fan_in * fan_out or len(b_raw) != 8 * fan_out:
            raise SnapshotError("truncated snapshot")
        weights.append(np.frombuffer(w_raw, dtype="<f8").reshape(fan_in, fan_out).copy())
        biases.append(np.frombuffer(b_raw, dtype="<f8").copy())
    if buf.read(1):
        raise SnapshotError("trailing bytes after snapshot payload")
    return Mlp(tuple(sizes), weights, biases, output, hidden)


def save_mlp(net: Mlp, path) -> None:
    with open(path, "wb") as fh:
        fh.write(dump_mlp_bytes(net))


def load_mlp(path) -> Mlp:
    with open(path, "rb") as fh:
        return load_mlp_bytes(fh.read())
