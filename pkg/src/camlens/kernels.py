"""Numerical kernels for the CAM-compatible layer set.

All kernels are pure functions over float32 numpy arrays. Rank-3 arrays are
(height, width, channels) row-major; rank-1 arrays are flat vectors. Outputs
are float32; intermediates may accumulate in float64.

Conventions (fixed, tested):
  - "same" padding places the extra cell at the bottom/right when the total
    pad is odd.
  - bilinear resize uses half-pixel centers: src = (dst + 0.5) * scale - 0.5,
    clamped into the source range.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import ShapeError

PAD_VALID = "valid"
PAD_SAME = "same"

ACT_RELU = "relu"
ACT_RELU6 = "relu6"


@dataclass(frozen=True)
class ConvParams:
    """Filter bank for conv2d / depthwise_conv2d.

    kernel is (kh, kw, in_ch, out_ch) for a full convolution, or
    (kh, kw, ch, 1) for depthwise. bias has one entry per output channel.
    """

    kernel: np.ndarray
    bias: np.ndarray
    stride: int = 1
    padding: str = PAD_SAME


def _require_rank3(x: np.ndarray, op: str) -> None:
    if x.ndim != 3:
        raise ShapeError(f"{op}: expected rank-3 (h, w, c) input, got rank {x.ndim}")


def _pad_extent(size: int, k: int, stride: int, padding: str) -> tuple[int, int, int]:
    """Output size plus (before, after) zero-padding for one spatial axis."""
    if padding == PAD_VALID:
        out = (size - k) // stride + 1
        return out, 0, 0
    if padding == PAD_SAME:
        out = -(-size // stride)
        total = max((out - 1) * stride + k - size, 0)
        before = total // 2
        return out, before, total - before
    raise ShapeError(f"unknown padding {padding!r}")


def _windows(x: np.ndarray, kh: int, kw: int, stride: int, padding: str) -> np.ndarray:
    """Padded sliding windows of shape (out_h, out_w, c, kh, kw)."""
    h, w, _ = x.shape
    out_h, pt, pb = _pad_extent(h, kh, stride, padding)
    out_w, pl, pr = _pad_extent(w, kw, stride, padding)
    if out_h <= 0 or out_w <= 0:
        raise ShapeError(
            f"convolution output is empty: input {h}x{w}, kernel {kh}x{kw}, stride {stride}"
        )
    xp = np.pad(x, ((pt, pb), (pl, pr), (0, 0)))
    return sliding_window_view(xp, (kh, kw), axis=(0, 1))[::stride, ::stride]


def conv2d(x: np.ndarray, params: ConvParams) -> np.ndarray:
    """Cross-correlate x (h, w, c) with a (kh, kw, c, out_ch) kernel."""
    _require_rank3(x, "conv2d")
    k = params.kernel
    if k.ndim != 4:
        raise ShapeError(f"conv2d: kernel must be rank 4, got rank {k.ndim}")
    kh, kw, cin, cout = k.shape
    if x.shape[2] != cin:
        raise ShapeError(f"conv2d: input has {x.shape[2]} channels, kernel expects {cin}")
    if params.bias.shape != (cout,):
        raise ShapeError(f"conv2d: bias length {params.bias.shape} != out channels {cout}")
    if params.stride < 1:
        raise ShapeError("conv2d: stride must be >= 1")
    win = _windows(x, kh, kw, params.stride, params.padding)
    # win axes: (out_h, out_w, c, kh, kw); contract (kh, kw, c) against kernel.
    y = np.tensordot(win.astype(np.float64), k.astype(np.float64), axes=([3, 4, 2], [0, 1, 2]))
    return (y + params.bias.astype(np.float64)).astype(np.float32)


def depthwise_conv2d(x: np.ndarray, params: ConvParams) -> np.ndarray:
    """Convolve each channel of x independently with its own (kh, kw) filter."""
    _require_rank3(x, "depthwise_conv2d")
    k = params.kernel
    if k.ndim != 4 or k.shape[3] != 1:
        raise ShapeError("depthwise_conv2d: kernel must have shape (kh, kw, c, 1)")
    kh, kw, c, _ = k.shape
    if x.shape[2] != c:
        raise ShapeError(f"depthwise_conv2d: input has {x.shape[2]} channels, kernel expects {c}")
    if params.bias.shape != (c,):
        raise ShapeError(f"depthwise_conv2d: bias length {params.bias.shape} != channels {c}")
    if params.stride < 1:
        raise ShapeError("depthwise_conv2d: stride must be >= 1")
    win = _windows(x, kh, kw, params.stride, params.padding)
    y = np.einsum(
        "ijckl,klc->ijc", win.astype(np.float64), k[:, :, :, 0].astype(np.float64)
    )
    return (y + params.bias.astype(np.float64)).astype(np.float32)


def batch_norm(
    x: np.ndarray,
    gamma: np.ndarray,
    beta: np.ndarray,
    mean: np.ndarray,
    variance: np.ndarray,
    epsilon: float,
) -> np.ndarray:
    """Inference-mode normalization, applied per channel (last axis)."""
    if epsilon <= 0:
        raise ShapeError("batch_norm: epsilon must be positive")
    ch = x.shape[-1]
    for name, p in (("gamma", gamma), ("beta", beta), ("mean", mean), ("variance", variance)):
        if p.shape != (ch,):
            raise ShapeError(f"batch_norm: {name} length {p.shape} != channel count {ch}")
    scale = gamma.astype(np.float64) / np.sqrt(variance.astype(np.float64) + epsilon)
    y = (x.astype(np.float64) - mean.astype(np.float64)) * scale + beta.astype(np.float64)
    return y.astype(np.float32)


def activation(x: np.ndarray, kind: str) -> np.ndarray:
    if kind == ACT_RELU:
        return np.maximum(x, 0).astype(np.float32)
    if kind == ACT_RELU6:
        return np.clip(x, 0, 6).astype(np.float32)
    raise ShapeError(f"unknown activation {kind!r}")


def global_average_pool(x: np.ndarray) -> np.ndarray:
    """Spatial mean per channel: (h, w, c) -> (c,)."""
    _require_rank3(x, "global_average_pool")
    return x.mean(axis=(0, 1), dtype=np.float64).astype(np.float32)


def dense(x: np.ndarray, weights: np.ndarray, bias: np.ndarray) -> np.ndarray:
    """out[c] = sum_k weights[k, c] * x[k] + bias[c]."""
    if x.ndim != 1:
        raise ShapeError(f"dense: expected rank-1 input, got rank {x.ndim}")
    if weights.ndim != 2 or weights.shape[0] != x.shape[0]:
        raise ShapeError(
            f"dense: weights {weights.shape} incompatible with input length {x.shape[0]}"
        )
    if bias.shape != (weights.shape[1],):
        raise ShapeError(f"dense: bias length {bias.shape} != output width {weights.shape[1]}")
    y = weights.astype(np.float64).T @ x.astype(np.float64) + bias.astype(np.float64)
    return y.astype(np.float32)


def softmax(x: np.ndarray) -> np.ndarray:
    """Max-subtracted softmax over a rank-1 vector."""
    if x.ndim != 1 or x.shape[0] == 0:
        raise ShapeError("softmax: expected a non-empty rank-1 input")
    z = x.astype(np.float64)
    e = np.exp(z - z.max())
    return (e / e.sum()).astype(np.float32)


def resize_bilinear(x: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Bilinear resample (h, w, c) -> (out_h, out_w, c), half-pixel centers."""
    _require_rank3(x, "resize_bilinear")
    if out_h <= 0 or out_w <= 0:
        raise ShapeError(f"resize_bilinear: target {out_h}x{out_w} must be positive")
    h, w, _ = x.shape

    def axis_coords(n_src: int, n_dst: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        src = (np.arange(n_dst, dtype=np.float64) + 0.5) * (n_src / n_dst) - 0.5
        src = np.clip(src, 0.0, n_src - 1)
        lo = np.floor(src).astype(np.intp)
        hi = np.minimum(lo + 1, n_src - 1)
        return lo, hi, src - lo

    y0, y1, wy = axis_coords(h, out_h)
    x0, x1, wx = axis_coords(w, out_w)
    xf = x.astype(np.float64)
    wy = wy[:, None, None]
    wx = wx[None, :, None]
    top = xf[y0][:, x0] * (1 - wx) + xf[y0][:, x1] * wx
    bot = xf[y1][:, x0] * (1 - wx) + xf[y1][:, x1] * wx
    return (top * (1 - wy) + bot * wy).astype(np.float32)
