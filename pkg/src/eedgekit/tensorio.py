"""Binary tensor container shared by feature matrices, window stacks, and
coefficient dumps.

Layout: magic ``EETN``, u32 little-endian header length, UTF-8 JSON header,
then the row-major little-endian payload. The header carries ``dtype``
(``f64``), ``shape``, and free-form metadata (feature names, labels, fs...).
"""
from __future__ import annotations

import json
import struct

import numpy as np

from .errors import BadMagicError, TruncatedPayloadError

MAGIC = b"EETN"
_DTYPES = {"f64": "<f8", "f32": "<f4"}


def save_tensor(path, array: np.ndarray, meta: dict | None = None, dtype: str = "f64") -> None:
    array = np.asarray(array)
    header = {"dtype": dtype, "shape": list(array.shape)}
    if meta:
        header.update(meta)
    blob = json.dumps(header).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(blob)))
        fh.write(blob)
        fh.write(np.ascontiguousarray(array, dtype=_DTYPES[dtype]).tobytes())


def load_tensor(path) -> tuple[np.ndarray, dict]:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != MAGIC:
            raise BadMagicError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
        (hlen,) = struct.unpack("<I", fh.read(4))
        header = json.loads(fh.read(hlen).decode("utf-8"))
        dtype = _DTYPES[header["dtype"]]
        shape = tuple(header["shape"])
        expected = int(np.prod(shape)) * np.dtype(dtype).itemsize
        payload = fh.read()
    if len(payload) < expected:
        raise TruncatedPayloadError(
            f"{path}: payload has {len(payload)} bytes, expected {expected}"
        )
    array = np.frombuffer(payload[:expected], dtype=dtype).reshape(shape)
    return array.astype(np.float64), header
