"""Binary weight blob codec.

Layout (all integers little-endian):
    magic "CAMW" | version u32 = 1 | tensor_count u32
    then per tensor, no padding:
    name_len u32 | name UTF-8 | rank u32 | dims u32 * rank | data float32 * prod(dims)
"""
from __future__ import annotations

import struct

import numpy as np

from .errors import WeightFormatError

MAGIC = b"CAMW"
VERSION = 1


def write_weight_blob(tensors: dict[str, np.ndarray]) -> bytes:
    parts = [MAGIC, struct.pack("<II", VERSION, len(tensors))]
    for name, arr in tensors.items():
        raw = name.encode("utf-8")
        a = np.ascontiguousarray(arr, dtype=np.float32)
        parts.append(struct.pack("<I", len(raw)))
        parts.append(raw)
        parts.append(struct.pack("<I", a.ndim))
        parts.append(struct.pack(f"<{a.ndim}I", *a.shape))
        parts.append(a.astype("<f4").tobytes())
    return b"".join(parts)


def read_weight_blob(blob: bytes) -> dict[str, np.ndarray]:
    if len(blob) < 12 or blob[:4] != MAGIC:
        raise WeightFormatError("bad weight blob header (missing CAMW magic)")
    version, count = struct.unpack_from("<II", blob, 4)
    if version != VERSION:
        raise WeightFormatError(f"unsupported weight blob version {version}")
    off = 12
    out: dict[str, np.ndarray] = {}
    try:
        for _ in range(count):
            (name_len,) = struct.unpack_from("<I", blob, off)
            off += 4
            name = blob[off : off + name_len].decode("utf-8")
            off += name_len
            (rank,) = struct.unpack_from("<I", blob, off)
            off += 4
            dims = struct.unpack_from(f"<{rank}I", blob, off)
            off += 4 * rank
            n = int(np.prod(dims, dtype=np.int64)) if rank else 1
            data = np.frombuffer(blob, dtype="<f4", count=n, offset=off)
            off += 4 * n
            out[name] = data.reshape(dims).astype(np.float32)
    except (struct.error, ValueError) as exc:
        raise WeightFormatError(f"truncated weight blob: {exc}") from exc
    if off != len(blob):
        raise WeightFormatError("trailing bytes after last weight record")
    return out
