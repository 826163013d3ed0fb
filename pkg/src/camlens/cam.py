"""Class activation maps: compute, normalize, threshold, render.

The raw map for class c is sum_k w[k, c] * activations[x, y, k] -- the
classifier weights applied per spatial cell instead of after pooling. The
bias is left out: it is spatially uniform and cannot localize anything.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError


@dataclass(frozen=True)
class ClassActivationMap:
    class_index: int
    raw: np.ndarray  # (H_f, W_f) float32
    normalized: np.ndarray | None = None  # (H_f, W_f) in [0, 1]


def compute_cam(
    activations: np.ndarray, classifier_weights: np.ndarray, class_index: int
) -> ClassActivationMap:
    if activations.ndim != 3:
        raise ShapeError(f"activations must be rank 3, got rank {activations.ndim}")
    k, c = classifier_weights.shape
    if activations.shape[2] != k:
        raise ShapeError(
            f"activation channels {activations.shape[2]} != classifier rows {k}"
        )
    if not 0 <= class_index < c:
        raise ShapeError(f"class index {class_index} out of range [0, {c})")
    raw = np.tensordot(
        activations.astype(np.float64), classifier_weights[:, class_index].astype(np.float64), axes=([2], [0])
    ).astype(np.float32)
    return ClassActivationMap(class_index=class_index, raw=raw)


def normalize_cam(cam: ClassActivationMap) -> ClassActivationMap:
    """Min-max rescale into [0, 1]; a constant grid maps to all zeros."""
    lo = float(cam.raw.min())
    hi = float(cam.raw.max())
    if hi == lo:
        norm = np.zeros_like(cam.raw)
    else:
        norm = ((cam.raw - lo) / (hi - lo)).astype(np.float32)
    return ClassActivationMap(class_index=cam.class_index, raw=cam.raw, normalized=norm)


def threshold_mask(cam: ClassActivationMap, t: float) -> np.ndarray:
    """Boolean grid: cell active iff normalized value >= t."""
    if cam.normalized is None:
        raise ShapeError("threshold_mask needs a normalized map; call normalize_cam first")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {t}")
    return cam.normalized >= t


def block_bounds(n_pixels: int, n_cells: int) -> list[int]:
    """Cell boundaries partitioning [0, n_pixels) into n_cells blocks exactly."""
    return [i * n_pixels // n_cells for i in range(n_cells + 1)]


def render_overlay(image: np.ndarray, mask: np.ndarray, alpha: float) -> np.ndarray:
    """Blend red into the blocks of active cells; untouched pixels are copied.

    Rounding is half-up (floor(x + 0.5)) so the browser client's Math.round
    produces identical bytes.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    if image.ndim != 3 or image.shape[2] != 3:
        raise ShapeError(f"overlay image must be (h, w, 3), got {image.shape}")
    h, w, _ = image.shape
    gh, gw = mask.shape
    rows = np.searchsorted(np.asarray(block_bounds(h, gh)[1:]), np.arange(h), side="right")
    cols = np.searchsorted(np.asarray(block_bounds(w, gw)[1:]), np.arange(w), side="right")
    full = mask[rows[:, None], cols[None, :]]
    out = image.copy()
    red = np.array([255.0, 0.0, 0.0])
    blended = np.floor((1.0 - alpha) * image[full].astype(np.float64) + alpha * red + 0.5)
    out[full] = blended.astype(np.uint8)
    return out
