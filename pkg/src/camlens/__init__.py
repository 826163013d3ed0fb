"""camlens: CNN classification with class-activation-map explainability."""

from .cam import ClassActivationMap, compute_cam, normalize_cam, render_overlay, threshold_mask
from .images import RgbImage, decode_image, preprocess
from .model import (
    ForwardResult,
    Model,
    ModelManifest,
    Prediction,
    forward,
    load_model,
    parse_manifest,
    top_k,
    validate_cam_compatible,
)
from .pipeline import classify_image

__version__ = "0.1.0"

__all__ = [
    "ClassActivationMap",
    "ForwardResult",
    "Model",
    "ModelManifest",
    "Prediction",
    "RgbImage",
    "classify_image",
    "compute_cam",
    "decode_image",
    "forward",
    "load_model",
    "normalize_cam",
    "parse_manifest",
    "preprocess",
    "render_overlay",
    "threshold_mask",
    "top_k",
    "validate_cam_compatible",
]
