"""Independent naive reference implementations.

Everything here is straight loops over scalars, deliberately ignorant of
the vectorized code under test. Keep it slow and obvious.
"""
from __future__ import annotations

import math

import numpy as np


def pad_same(size: int, k: int, stride: int) -> tuple[int, int]:
    out = math.ceil(size / stride)
    total = max((out - 1) * stride + k - size, 0)
    return out, total // 2


def conv2d_naive(x, kernel, bias, stride, padding):
    h, w, cin = x.shape
    kh, kw, _, cout = kernel.shape
    if padding == "same":
        out_h, pad_t = pad_same(h, kh, stride)
        out_w, pad_l = pad_same(w, kw, stride)
    else:
        out_h = (h - kh) // stride + 1
        out_w = (w - kw) // stride + 1
        pad_t = pad_l = 0
    out = np.zeros((out_h, out_w, cout), dtype=np.float64)
    for oy in range(out_h):
        for ox in range(out_w):
            for oc in range(cout):
                acc = 0.0
                for ky in range(kh):
                    for kx in range(kw):
                        iy = oy * stride + ky - pad_t
                        ix = ox * stride + kx - pad_l
                        if 0 <= iy < h and 0 <= ix < w:
                            for ic in range(cin):
                                acc += float(x[iy, ix, ic]) * float(kernel[ky, kx, ic, oc])
                out[oy, ox, oc] = acc + float(bias[oc])
    return out.astype(np.float32)


def depthwise_conv2d_naive(x, kernel, bias, stride, padding):
    h, w, c = x.shape
    kh, kw, _, _ = kernel.shape
    if padding == "same":
        out_h, pad_t = pad_same(h, kh, stride)
        out_w, pad_l = pad_same(w, kw, stride)
    else:
        out_h = (h - kh) // stride + 1
        out_w = (w - kw) // stride + 1
        pad_t = pad_l = 0
    out = np.zeros((out_h, out_w, c), dtype=np.float64)
    for oy in range(out_h):
        for ox in range(out_w):
            for ch in range(c):
                acc = 0.0
                for ky in range(kh):
                    for kx in range(kw):
                        iy = oy * stride + ky - pad_t
                        ix = ox * stride + kx - pad_l
                        if 0 <= iy < h and 0 <= ix < w:
                            acc += float(x[iy, ix, ch]) * float(kernel[ky, kx, ch, 0])
                out[oy, ox, ch] = acc + float(bias[ch])
    return out.astype(np.float32)


def batch_norm_naive(x, gamma, beta, mean, variance, epsilon):
    out = np.zeros_like(x, dtype=np.float64)
    flat = x.reshape(-1, x.shape[-1])
    oflat = out.reshape(-1, x.shape[-1])
    for i in range(flat.shape[0]):
        for c in range(flat.shape[1]):
            oflat[i, c] = float(gamma[c]) * (float(flat[i, c]) - float(mean[c])) / math.sqrt(
                float(variance[c]) + epsilon
            ) + float(beta[c])
    return out.astype(np.float32)


def global_average_pool_naive(x):
    h, w, c = x.shape
    out = np.zeros(c, dtype=np.float64)
    for ch in range(c):
        s = 0.0
        for y in range(h):
            for xx in range(w):
                s += float(x[y, xx, ch])
        out[ch] = s / (h * w)
    return out.astype(np.float32)


def dense_naive(x, weights, bias):
    n, m = weights.shape
    out = np.zeros(m, dtype=np.float64)
    for c in range(m):
        acc = 0.0
        for k in range(n):
            acc += float(weights[k, c]) * float(x[k])
        out[c] = acc + float(bias[c])
    return out.astype(np.float32)


def softmax_naive(x):
    mx = max(float(v) for v in x)
    exps = [math.exp(float(v) - mx) for v in x]
    total = sum(exps)
    return np.array([e / total for e in exps], dtype=np.float32)


def resize_bilinear_naive(x, out_h, out_w):
    h, w, c = x.shape
    out = np.zeros((out_h, out_w, c), dtype=np.float64)
    for oy in range(out_h):
        for ox in range(out_w):
            sy = min(max((oy + 0.5) * h / out_h - 0.5, 0.0), h - 1)
            sx = min(max((ox + 0.5) * w / out_w - 0.5, 0.0), w - 1)
            y0, x0 = int(math.floor(sy)), int(math.floor(sx))
            y1, x1 = min(y0 + 1, h - 1), min(x0 + 1, w - 1)
            fy, fx = sy - y0, sx - x0
            for ch in range(c):
                top = float(x[y0, x0, ch]) * (1 - fx) + float(x[y0, x1, ch]) * fx
                bot = float(x[y1, x0, ch]) * (1 - fx) + float(x[y1, x1, ch]) * fx
                out[oy, ox, ch] = top * (1 - fy) + bot * fy
    return out.astype(np.float32)


def cam_naive(activations, weights, class_index):
    h, w, k = activations.shape
    out = np.zeros((h, w), dtype=np.float64)
    for y in range(h):
        for x in range(w):
            for ch in range(k):
                out[y, x] += float(activations[y, x, ch]) * float(weights[ch, class_index])
    return out.astype(np.float32)


def forward_naive(manifest_doc, tensors, image):
    """Straight-line interpretation of a manifest; returns (logits, probs, last_conv)."""
    x = np.asarray(image, dtype=np.float32)
    last_conv = None
    logits = None
    for layer in manifest_doc["layers"]:
        kind = layer["kind"]
        params = layer.get("params", {})
        names = layer.get("weights", {})
        if kind == "conv":
            x = conv2d_naive(
                x, tensors[names["kernel"]], tensors[names["bias"]],
                params.get("stride", 1), params.get("padding", "same"),
            )
        elif kind == "depthwise_conv":
            x = depthwise_conv2d_naive(
                x, tensors[names["kernel"]], tensors[names["bias"]],
                params.get("stride", 1), params.get("padding", "same"),
            )
        elif kind == "batch_norm":
            x = batch_norm_naive(
                x, tensors[names["gamma"]], tensors[names["beta"]],
                tensors[names["mean"]], tensors[names["variance"]],
                params.get("epsilon", 1e-3),
            )
        elif kind == "activation":
            k = params.get("kind", "relu")
            x = np.minimum(np.maximum(x, 0), 6 if k == "relu6" else np.inf).astype(np.float32)
        elif kind == "global_average_pool":
            last_conv = x
            x = global_average_pool_naive(x)
        elif kind == "dense":
            x = dense_naive(x, tensors[names["weights"]], tensors[names["bias"]])
            logits = x
        elif kind == "softmax":
            x = softmax_naive(x)
    return logits, x, last_conv
