"""Deterministic test models and images.

The desk-scale fixture is a tiny seeded network (8x8x3 input, 4 classes,
2x2 activation grid). Its classifier column for class 0 is all ones while
the other columns stay small, and the pre-pool activations are rectified,
so any input with nonzero activations ranks class 0 first. The
reference-scale builder produces a MobileNet-shaped 224x224x3 stack with a
7x7 grid for shape-conformance checks; its weights are random, not trained.
"""
from __future__ import annotations

import json

import numpy as np

from .images import RgbImage, encode_png
from .weights import write_weight_blob

FIXTURE_SEED = 1309


def build_fixture_model() -> tuple[bytes, bytes]:
    """Return (manifest_json, weight_blob) for the tiny deterministic model."""
    rng = np.random.default_rng(FIXTURE_SEED)
    tensors = {
        "c1.kernel": rng.normal(0, 0.4, (3, 3, 3, 8)).astype(np.float32),
        "c1.bias": rng.normal(0, 0.1, 8).astype(np.float32),
        "bn1.gamma": rng.uniform(0.5, 1.5, 8).astype(np.float32),
        "bn1.beta": rng.normal(0, 0.1, 8).astype(np.float32),
        "bn1.mean": rng.normal(0, 0.2, 8).astype(np.float32),
        "bn1.variance": rng.uniform(0.5, 1.5, 8).astype(np.float32),
        "dw1.kernel": rng.normal(0, 0.4, (3, 3, 8, 1)).astype(np.float32),
        "dw1.bias": np.zeros(8, np.float32),
        "p1.kernel": rng.normal(0, 0.4, (1, 1, 8, 8)).astype(np.float32),
        "p1.bias": rng.normal(0, 0.1, 8).astype(np.float32),
        "fc.weights": np.concatenate(
            [np.ones((8, 1), np.float32), rng.uniform(-0.1, 0.1, (8, 3)).astype(np.float32)],
            axis=1,
        ),
        "fc.bias": np.zeros(4, np.float32),
    }
    manifest = {
        "name": "fixture-tiny",
        "input": {"height": 8, "width": 8, "channels": 3},
        "labels": ["alpha", "beta", "gamma", "delta"],
        "layers": [
            {
                "kind": "conv",
                "params": {"stride": 2, "padding": "same"},
                "weights": {"kernel": "c1.kernel", "bias": "c1.bias"},
            },
            {
                "kind": "batch_norm",
                "params": {"epsilon": 0.001},
                "weights": {
                    "gamma": "bn1.gamma",
                    "beta": "bn1.beta",
                    "mean": "bn1.mean",
                    "variance": "bn1.variance",
                },
            },
            {"kind": "activation", "params": {"kind": "relu6"}},
            {
                "kind": "depthwise_conv",
                "params": {"stride": 2, "padding": "same"},
                "weights": {"kernel": "dw1.kernel", "bias": "dw1.bias"},
            },
            {
                "kind": "conv",
                "params": {"stride": 1, "padding": "same"},
                "weights": {"kernel": "p1.kernel", "bias": "p1.bias"},
            },
            {"kind": "activation", "params": {"kind": "relu"}},
            {"kind": "global_average_pool"},
            {"kind": "dense", "weights": {"weights": "fc.weights", "bias": "fc.bias"}},
            {"kind": "softmax"},
        ],
    }
    return json.dumps(manifest, indent=2).encode("utf-8"), write_weight_blob(tensors)


def build_fixture_image() -> RgbImage:
    """Deterministic 8x8 gradient image matched to the fixture model input."""
    y, x = np.mgrid[0:8, 0:8]
    pixels = np.stack([32 * y, 32 * x, 16 * (y + x)], axis=2).clip(0, 255).astype(np.uint8)
    return RgbImage(width=8, height=8, pixels=pixels)


def build_fixture_image_png() -> bytes:
    return encode_png(build_fixture_image())


def build_reference_scale_model(
    num_classes: int = 1000, seed: int = 7
) -> tuple[bytes, bytes]:
    """224x224x3 depthwise-separable stack ending in a 7x7 grid.

    Channel counts stay modest so random-weight forward passes finish in
    seconds; the spatial schedule (five stride-2 stages) matches the
    224 -> 7 reduction of MobileNet-class models.
    """
    rng = np.random.default_rng(seed)
    tensors: dict[str, np.ndarray] = {}
    layers: list[dict] = []

    def conv(name: str, kh: int, cin: int, cout: int, stride: int) -> None:
        tensors[f"{name}.kernel"] = rng.normal(0, 0.1, (kh, kh, cin, cout)).astype(np.float32)
        tensors[f"{name}.bias"] = np.zeros(cout, np.float32)
        layers.append(
            {
                "kind": "conv",
                "params": {"stride": stride, "padding": "same"},
                "weights": {"kernel": f"{name}.kernel", "bias": f"{name}.bias"},
            }
        )
        layers.append({"kind": "activation", "params": {"kind": "relu6"}})

    def dw_sep(name: str, cin: int, cout: int, stride: int) -> None:
        tensors[f"{name}.dw.kernel"] = rng.normal(0, 0.1, (3, 3, cin, 1)).astype(np.float32)
        tensors[f"{name}.dw.bias"] = np.zeros(cin, np.float32)
        layers.append(
            {
                "kind": "depthwise_conv",
                "params": {"stride": stride, "padding": "same"},
                "weights": {"kernel": f"{name}.dw.kernel", "bias": f"{name}.dw.bias"},
            }
        )
        layers.append({"kind": "activation", "params": {"kind": "relu6"}})
        conv(f"{name}.pw", 1, cin, cout, 1)

    conv("stem", 3, 3, 8, 2)  # 224 -> 112
    dw_sep("b1", 8, 16, 2)  # -> 56
    dw_sep("b2", 16, 32, 2)  # -> 28
    dw_sep("b3", 32, 32, 1)
    dw_sep("b4", 32, 64, 2)  # -> 14
    dw_sep("b5", 64, 64, 2)  # -> 7
    k = 64
    tensors["fc.weights"] = rng.normal(0, 0.05, (k, num_classes)).astype(np.float32)
    tensors["fc.bias"] = np.zeros(num_classes, np.float32)
    layers.append({"kind": "global_average_pool"})
    layers.append({"kind": "dense", "weights": {"weights": "fc.weights", "bias": "fc.bias"}})
    layers.append({"kind": "softmax"})

    manifest = {
        "name": "reference-scale-random",
        "input": {"height": 224, "width": 224, "channels": 3},
        "labels": [f"class_{i:04d}" for i in range(num_classes)],
        "layers": layers,
    }
    return json.dumps(manifest).encode("utf-8"), write_weight_blob(tensors)
