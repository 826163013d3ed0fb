import struct
import zlib

import numpy as np
import pytest

from camlens.errors import DecodeError, ShapeError
from camlens.images import RgbImage, decode_image, encode_png, encode_ppm, preprocess

import oracles


def reference_png_decode(data: bytes) -> np.ndarray:
    """Minimal standalone PNG decoder (8-bit RGB/RGBA, non-interlaced).

    Independent of Pillow: parses chunks and unfilters scanlines by hand, so
    it can serve as a cross-decoder oracle.
    """
    assert data[:8] == b"\x89PNG\r\n\x1a\n"
    pos = 8
    idat = b""
    width = height = channels = 0
    while pos < len(data):
        (length,) = struct.unpack(">I", data[pos : pos + 4])
        ctype = data[pos + 4 : pos + 8]
        chunk = data[pos + 8 : pos + 8 + length]
        if ctype == b"IHDR":
            width, height, bit_depth, color_type = struct.unpack(">IIBB", chunk[:10])
            assert bit_depth == 8 and color_type in (2, 6)
            channels = 3 if color_type == 2 else 4
        elif ctype == b"IDAT":
            idat += chunk
        pos += 12 + length
    raw = zlib.decompress(idat)
    stride = width * channels
    out = np.zeros((height, width, channels), np.uint8)
    prev = np.zeros(stride, np.int64)
    for y in range(height):
        ftype = raw[y * (stride + 1)]
        line = np.frombuffer(raw[y * (stride + 1) + 1 : (y + 1) * (stride + 1)], np.uint8).astype(np.int64)
        cur = np.zeros(stride, np.int64)
        for i in range(stride):
            a = cur[i - channels] if i >= channels else 0
            b = prev[i]
            c = prev[i - channels] if i >= channels else 0
            if ftype == 0:
                val = line[i]
            elif ftype == 1:
                val = line[i] + a
            elif ftype == 2:
                val = line[i] + b
            elif ftype == 3:
                val = line[i] + (a + b) // 2
            else:  # Paeth
                p = a + b - c
                pa, pb, pc = abs(p - a), abs(p - b), abs(p - c)
                pred = a if (pa <= pb and pa <= pc) else (b if pb <= pc else c)
                val = line[i] + pred
            cur[i] = val & 0xFF
        out[y] = cur.reshape(width, channels)
        prev = cur
    return out[:, :, :3]


class TestPpm:
    def test_minimal_white_pixel(self):
        img = decode_image(b"P6\n1 1\n255\n\xff\xff\xff")
        assert (img.width, img.height) == (1, 1)
        np.testing.assert_array_equal(img.pixels, [[[255, 255, 255]]])

    def test_comment_in_header(self):
        img = decode_image(b"P6\n# a comment\n2 1\n255\n" + bytes(6))
        assert (img.width, img.height) == (2, 1)

    def test_truncated_header(self):
        with pytest.raises(DecodeError):
            decode_image(b"P6\n2 2")

    def test_truncated_body(self):
        with pytest.raises(DecodeError):
            decode_image(b"P6\n2 2\n255\n\x00\x00")

    def test_bad_maxval(self):
        with pytest.raises(DecodeError):
            decode_image(b"P6\n1 1\n65535\n\x00\x00\x00\x00\x00\x00")

    def test_round_trip_byte_exact(self):
        rng = np.random.default_rng(0)
        pixels = rng.integers(0, 256, (5, 7, 3), dtype=np.uint8)
        img = RgbImage(width=7, height=5, pixels=pixels)
        data = encode_ppm(img)
        again = decode_image(data)
        np.testing.assert_array_equal(again.pixels, pixels)
        assert encode_ppm(again) == data


class TestPng:
    def test_cross_decoder_oracle(self):
        rng = np.random.default_rng(1)
        pixels = rng.integers(0, 256, (2, 2, 3), dtype=np.uint8)
        data = encode_png(RgbImage(width=2, height=2, pixels=pixels))
        decoded = decode_image(data)
        reference = reference_png_decode(data)
        np.testing.assert_array_equal(decoded.pixels, reference)
        np.testing.assert_array_equal(decoded.pixels, pixels)

    def test_larger_image_cross_decoder(self):
        rng = np.random.default_rng(2)
        pixels = rng.integers(0, 256, (9, 13, 3), dtype=np.uint8)
        data = encode_png(RgbImage(width=13, height=9, pixels=pixels))
        np.testing.assert_array_equal(decode_image(data).pixels, reference_png_decode(data))

    def test_corrupt_png(self):
        with pytest.raises(DecodeError):
            decode_image(b"\x89PNG\r\n\x1a\n" + b"\x00" * 20)

    def test_unknown_format(self):
        with pytest.raises(DecodeError, match="PNG or binary PPM"):
            decode_image(b"GIF89a....")


class TestPreprocess:
    def test_white_maps_to_one(self):
        img = RgbImage(1, 1, np.full((1, 1, 3), 255, np.uint8))
        out = preprocess(img, 1, 1)
        np.testing.assert_array_equal(out, np.ones((1, 1, 3), np.float32))

    def test_black_maps_to_minus_one(self):
        img = RgbImage(1, 1, np.zeros((1, 1, 3), np.uint8))
        np.testing.assert_array_equal(preprocess(img, 1, 1), -np.ones((1, 1, 3), np.float32))

    def test_gradient_resize_matches_oracle(self):
        y, x = np.mgrid[0:4, 0:4]
        pixels = np.stack([60 * y, 60 * x, 30 * (y + x)], axis=2).astype(np.uint8)
        img = RgbImage(4, 4, pixels)
        got = preprocess(img, 2, 2)
        want = oracles.resize_bilinear_naive(pixels.astype(np.float32), 2, 2) / 127.5 - 1
        np.testing.assert_allclose(got, want.astype(np.float32), atol=1e-6)

    def test_range_and_constancy(self):
        rng = np.random.default_rng(3)
        pixels = rng.integers(0, 256, (6, 6, 3), dtype=np.uint8)
        out = preprocess(RgbImage(6, 6, pixels), 10, 3)
        assert out.min() >= -1.0 and out.max() <= 1.0
        const = preprocess(RgbImage(2, 2, np.full((2, 2, 3), 90, np.uint8)), 5, 5)
        np.testing.assert_allclose(const, const[0, 0, 0], atol=1e-6)

    def test_bad_targets(self):
        img = RgbImage(1, 1, np.zeros((1, 1, 3), np.uint8))
        with pytest.raises(ShapeError):
            preprocess(img, 0, 3)
