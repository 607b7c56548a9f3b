"""EEWB weight-bundle file format.

Layout: magic ``EEWB`` | u32 version | u32 header length | UTF-8 JSON
header | float32 little-endian payload. The header holds the model config
and the tensor table (name, shape, dtype, byte_offset into the payload).
Serialization is canonical, so identical parameters always produce
byte-identical files.
"""
from __future__ import annotations

import json
import struct

import numpy as np

from .errors import (
    BadMagicError,
    CorruptBundleError,
    ShapeMismatchError,
    TruncatedPayloadError,
)
from .model import ModelConfig, WeightBundle, expected_tensors

MAGIC = b"EEWB"
VERSION = 1


def save_bundle(bundle: WeightBundle, path) -> None:
    order = expected_tensors(bundle.config)
    table = []
    offset = 0
    chunks = []
    for name, shape in order:
        arr = np.ascontiguousarray(bundle.tensors[name], dtype="<f4")
        table.append(
            {"name": name, "shape": list(shape), "dtype": "f32", "byte_offset": offset}
        )
        chunks.append(arr.tobytes())
        offset += arr.nbytes
    header = {"config": bundle.config.to_dict(), "tensors": table}
    blob = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<II", bundle.version, len(blob)))
        fh.write(blob)
        for chunk in chunks:
            fh.write(chunk)


def load_bundle(path) -> WeightBundle:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != MAGIC:
            raise BadMagicError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
        head = fh.read(8)
        if len(head) < 8:
            raise TruncatedPayloadError(f"{path}: missing version/header length")
        version, hlen = struct.unpack("<II", head)
        if version != VERSION:
            raise CorruptBundleError(f"{path}: unsupported version {version}")
        raw_header = fh.read(hlen)
        if len(raw_header) < hlen:
            raise TruncatedPayloadError(f"{path}: truncated header")
        try:
            header = json.loads(raw_header.decode("utf-8"))
            config = ModelConfig.from_dict(header["config"])
            table = header["tensors"]
        except (ValueError, KeyError) as exc:
            raise CorruptBundleError(f"{path}: malformed header: {exc}") from None
        payload = fh.read()

    tensors = {}
    claimed = []
    for entry in table:
        name = entry["name"]
        shape = tuple(entry["shape"])
        if entry.get("dtype", "f32") != "f32":
            raise CorruptBundleError(f"{path}: tensor {name!r} has non-f32 dtype")
        offset = int(entry["byte_offset"])
        nbytes = int(np.prod(shape)) * 4 if shape else 4
        if offset < 0 or offset + nbytes > len(payload):
            raise TruncatedPayloadError(
                f"{path}: tensor {name!r} spans [{offset}, {offset + nbytes}) "
                f"but payload has {len(payload)} bytes"
            )
        claimed.append((offset, offset + nbytes, name))
        tensors[name] = np.frombuffer(
            payload, dtype="<f4", count=int(np.prod(shape)), offset=offset
        ).reshape(shape)
    claimed.sort()
    for (s0, e0, n0), (s1, e1, n1) in zip(claimed, claimed[1:]):
        if s1 < e0:
            raise CorruptBundleError(f"{path}: tensors {n0!r} and {n1!r} overlap")

    # WeightBundle itself validates names and shapes against the config.
    try:
        return WeightBundle(config, tensors, version=version)
    except ShapeMismatchError:
        raise
