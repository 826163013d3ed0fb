"""Decode -> preprocess -> forward -> top-k -> CAM, as one call.

The CLI and the HTTP service both route through classify_image so their
numeric payloads are identical by construction.
"""
from __future__ import annotations

import numpy as np

from .cam import compute_cam, normalize_cam
from .images import RgbImage, preprocess
from .model import Model, forward, top_k

DEFAULT_TOP_K = 3


def classify_image(model: Model, image: RgbImage, k: int = DEFAULT_TOP_K) -> dict:
    """Classify one decoded image; returns a JSON-ready payload.

    k is clamped to the class count so tiny models still work with the
    default top-3.
    """
    k = min(k, model.num_classes)
    in_h, in_w, _ = model.manifest.input_shape
    tensor = preprocess(image, in_h, in_w)
    result = forward(model, tensor)
    predictions = top_k(result.probabilities, model.labels, k)
    cams = []
    for pred in predictions:
        cam = normalize_cam(
            compute_cam(result.last_conv_activations, model.classifier_weights, pred.index)
        )
        cams.append([[float(v) for v in row] for row in cam.normalized])
    gh, gw = model.grid_shape
    return {
        "grid": {"h": gh, "w": gw},
        "predictions": [
            {"index": p.index, "label": p.label, "probability": p.probability}
            for p in predictions
        ],
        "cams": cams,
    }
