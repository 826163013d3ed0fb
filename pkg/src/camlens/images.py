"""Image decode/encode and model input preprocessing.

Supported formats: PNG (via Pillow) and binary PPM (P6, maxval 255, own
codec). Alpha channels are dropped on decode.
"""
from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DecodeError, ShapeError
from .kernels import resize_bilinear

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


@dataclass(frozen=True)
class RgbImage:
    width: int
    height: int
    pixels: np.ndarray  # (height, width, 3) uint8


def decode_image(data: bytes) -> RgbImage:
    if data.startswith(PNG_MAGIC):
        return _decode_png(data)
    if data.startswith(b"P6"):
        return _decode_ppm(data)
    raise DecodeError("unsupported image format (expected PNG or binary PPM P6)")


def _decode_png(data: bytes) -> RgbImage:
    try:
        with Image.open(io.BytesIO(data)) as im:
            rgb = im.convert("RGB")
            arr = np.asarray(rgb, dtype=np.uint8)
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise DecodeError(f"corrupt PNG: {exc}") from exc
    return RgbImage(width=arr.shape[1], height=arr.shape[0], pixels=arr)


def _decode_ppm(data: bytes) -> RgbImage:
    # Header: "P6" then width, height, maxval as whitespace-separated tokens,
    # with '#' comments allowed, then a single whitespace byte before pixels.
    pos = 2
    fields: list[int] = []
    try:
        while len(fields) < 3:
            while pos < len(data) and data[pos : pos + 1].isspace():
                pos += 1
            if data[pos : pos + 1] == b"#":
                pos = data.index(b"\n", pos) + 1
                continue
            start = pos
            while pos < len(data) and not data[pos : pos + 1].isspace():
                pos += 1
            if pos == start:
                raise ValueError("unexpected end of header")
            fields.append(int(data[start:pos]))
        pos += 1  # the single whitespace after maxval
    except (ValueError, IndexError) as exc:
        raise DecodeError(f"corrupt PPM header: {exc}") from exc
    width, height, maxval = fields
    if maxval != 255:
        raise DecodeError(f"PPM maxval must be 255, got {maxval}")
    if width <= 0 or height <= 0:
        raise DecodeError(f"PPM dimensions must be positive, got {width}x{height}")
    need = width * height * 3
    body = data[pos : pos + need]
    if len(body) < need:
        raise DecodeError(f"truncated PPM: expected {need} pixel bytes, got {len(body)}")
    arr = np.frombuffer(body, dtype=np.uint8).reshape(height, width, 3).copy()
    return RgbImage(width=width, height=height, pixels=arr)


def encode_ppm(image: RgbImage) -> bytes:
    header = f"P6\n{image.width} {image.height}\n255\n".encode("ascii")
    return header + image.pixels.astype(np.uint8).tobytes()


def encode_png(image: RgbImage) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(image.pixels.astype(np.uint8), mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


def preprocess(image: RgbImage, target_h: int, target_w: int) -> np.ndarray:
    """Resize then map pixel values affinely into [-1, 1]."""
    if target_h <= 0 or target_w <= 0:
        raise ShapeError(f"target dims must be positive, got {target_h}x{target_w}")
    resized = resize_bilinear(image.pixels.astype(np.float32), target_h, target_w)
    return (resized / np.float32(127.5) - np.float32(1.0)).astype(np.float32)
