"""Model loading, validation and forward execution.

A model is a JSON manifest (architecture + labels + weight tensor names)
plus a binary weight blob. The architecture must end global_average_pool ->
dense -> softmax so that the classifier weights double as CAM weights.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import CamCompatibilityError, ManifestError, ShapeError
from .kernels import ConvParams
from .weights import read_weight_blob

LAYER_KINDS = (
    "conv",
    "depthwise_conv",
    "batch_norm",
    "activation",
    "global_average_pool",
    "dense",
    "softmax",
)


@dataclass(frozen=True)
class LayerSpec:
    kind: str
    params: dict = field(default_factory=dict)
    weights: dict = field(default_factory=dict)  # role -> tensor name in the blob


@dataclass(frozen=True)
class ModelManifest:
    name: str
    input_shape: tuple[int, int, int]  # (height, width, channels)
    labels: list[str]
    layers: list[LayerSpec]


@dataclass(frozen=True)
class Prediction:
    index: int
    label: str
    probability: float


@dataclass(frozen=True)
class ForwardResult:
    logits: np.ndarray
    probabilities: np.ndarray
    last_conv_activations: np.ndarray  # (H_f, W_f, K), captured before pooling


@dataclass(frozen=True)
class Model:
    manifest: ModelManifest
    bound_layers: list[tuple[LayerSpec, dict]]  # spec + materialized arrays
    classifier_weights: np.ndarray  # (K, C)
    classifier_bias: np.ndarray  # (C,)
    grid_shape: tuple[int, int]  # spatial dims of the pre-pool activations

    @property
    def labels(self) -> list[str]:
        return self.manifest.labels

    @property
    def num_classes(self) -> int:
        return len(self.manifest.labels)

    @property
    def num_channels(self) -> int:
        return self.classifier_weights.shape[0]


def parse_manifest(text: bytes | str) -> ModelManifest:
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ManifestError(f"manifest is not valid JSON: {exc}") from exc
    try:
        inp = doc["input"]
        shape = (int(inp["height"]), int(inp["width"]), int(inp["channels"]))
        labels = [str(s) for s in doc["labels"]]
        layers = []
        for i, layer in enumerate(doc["layers"]):
            kind = layer["kind"]
            if kind not in LAYER_KINDS:
                raise ManifestError(f"layer {i}: unknown kind {kind!r}")
            layers.append(
                LayerSpec(
                    kind=kind,
                    params=dict(layer.get("params", {})),
                    weights=dict(layer.get("weights", {})),
                )
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise ManifestError(f"manifest missing or malformed field: {exc}") from exc
    if any(d <= 0 for d in shape):
        raise ManifestError(f"input shape must be positive, got {shape}")
    if not labels:
        raise ManifestError("manifest has no labels")
    return ModelManifest(name=str(doc.get("name", "")), input_shape=shape, labels=labels, layers=layers)


def validate_cam_compatible(manifest: ModelManifest) -> str | None:
    """Return None when the architecture supports CAM, else a violation string."""
    kinds = [layer.kind for layer in manifest.layers]
    dense_count = kinds.count("dense")
    if dense_count == 0:
        return "missing dense classifier"
    if dense_count > 1:
        return "multiple dense layers"
    dense_at = kinds.index("dense")
    if "global_average_pool" not in kinds[:dense_at]:
        return "missing global average pool before classifier"
    if kinds[-1] != "softmax":
        return "model must end with softmax"
    if kinds[-3:] != ["global_average_pool", "dense", "softmax"]:
        return "tail must be global_average_pool -> dense -> softmax"
    return None


def _bind_weight(tensors: dict, spec: LayerSpec, role: str, layer_index: int) -> np.ndarray:
    name = spec.weights.get(role)
    if name is None:
        raise ManifestError(f"layer {layer_index} ({spec.kind}): no weight name for {role!r}")
    if name not in tensors:
        raise ManifestError(f"missing weight tensor {name!r} (layer {layer_index}, {role})")
    return tensors[name]


def load_model(manifest_text: bytes | str, weights_blob: bytes) -> Model:
    manifest = parse_manifest(manifest_text)
    violation = validate_cam_compatible(manifest)
    if violation is not None:
        raise CamCompatibilityError(violation)
    tensors = read_weight_blob(weights_blob)

    bound: list[tuple[LayerSpec, dict]] = []
    shape: tuple[int, ...] = manifest.input_shape
    grid_shape: tuple[int, int] | None = None
    for i, spec in enumerate(manifest.layers):
        arrs: dict[str, np.ndarray] = {}
        if spec.kind in ("conv", "depthwise_conv"):
            kernel = _bind_weight(tensors, spec, "kernel", i)
            if kernel.ndim != 4:
                raise ManifestError(f"layer {i}: kernel must be rank 4, got {kernel.shape}")
            cout = kernel.shape[2] if spec.kind == "depthwise_conv" else kernel.shape[3]
            bias_name = spec.weights.get("bias")
            bias = _bind_weight(tensors, spec, "bias", i) if bias_name else np.zeros(cout, np.float32)
            stride = int(spec.params.get("stride", 1))
            padding = str(spec.params.get("padding", kernels.PAD_SAME))
            if kernel.shape[2] != shape[2] and spec.kind == "conv":
                raise ManifestError(
                    f"layer {i}: kernel expects {kernel.shape[2]} input channels, got {shape[2]}"
                )
            if spec.kind == "depthwise_conv" and kernel.shape[2] != shape[2]:
                raise ManifestError(
                    f"layer {i}: depthwise kernel has {kernel.shape[2]} channels, input has {shape[2]}"
                )
            out_h, _, _ = kernels._pad_extent(shape[0], kernel.shape[0], stride, padding)
            out_w, _, _ = kernels._pad_extent(shape[1], kernel.shape[1], stride, padding)
            if out_h <= 0 or out_w <= 0:
                raise ManifestError(f"layer {i}: output collapses to {out_h}x{out_w}")
            arrs = {"kernel": kernel, "bias": bias}
            shape = (out_h, out_w, cout)
        elif spec.kind == "batch_norm":
            for role in ("gamma", "beta", "mean", "variance"):
                arr = _bind_weight(tensors, spec, role, i)
                if arr.shape != (shape[2],):
                    raise ManifestError(
                        f"layer {i}: {role} has shape {arr.shape}, expected ({shape[2]},)"
                    )
                arrs[role] = arr
        elif spec.kind == "activation":
            if spec.params.get("kind", kernels.ACT_RELU) not in (kernels.ACT_RELU, kernels.ACT_RELU6):
                raise ManifestError(f"layer {i}: unknown activation {spec.params.get('kind')!r}")
        elif spec.kind == "global_average_pool":
            grid_shape = (shape[0], shape[1])
            shape = (shape[2],)
        elif spec.kind == "dense":
            w = _bind_weight(tensors, spec, "weights", i)
            if w.ndim != 2 or w.shape[0] != shape[0]:
                raise ManifestError(
                    f"layer {i}: dense weights {w.shape} incompatible with input length {shape[0]}"
                )
            bias_name = spec.weights.get("bias")
            bias = (
                _bind_weight(tensors, spec, "bias", i)
                if bias_name
                else np.zeros(w.shape[1], np.float32)
            )
            if bias.shape != (w.shape[1],):
                raise ManifestError(f"layer {i}: dense bias {bias.shape} != width {w.shape[1]}")
            arrs = {"weights": w, "bias": bias}
            shape = (w.shape[1],)
        bound.append((spec, arrs))

    assert grid_shape is not None  # guaranteed by validate_cam_compatible
    dense_arrs = next(arrs for spec, arrs in bound if spec.kind == "dense")
    w = dense_arrs["weights"]
    if w.shape[1] != len(manifest.labels):
        raise ManifestError(
            f"classifier width {w.shape[1]} does not match label count {len(manifest.labels)}"
        )
    return Model(
        manifest=manifest,
        bound_layers=bound,
        classifier_weights=w,
        classifier_bias=dense_arrs["bias"],
        grid_shape=grid_shape,
    )


def forward(model: Model, image: np.ndarray) -> ForwardResult:
    """Run the layer sequence, capturing the pre-pool activation volume."""
    expected = model.manifest.input_shape
    if tuple(image.shape) != expected:
        raise ShapeError(f"input shape {tuple(image.shape)} != model input {expected}")
    x = np.asarray(image, dtype=np.float32)
    last_conv: np.ndarray | None = None
    for spec, arrs in model.bound_layers:
        if spec.kind == "conv":
            x = kernels.conv2d(
                x,
                ConvParams(
                    kernel=arrs["kernel"],
                    bias=arrs["bias"],
                    stride=int(spec.params.get("stride", 1)),
                    padding=str(spec.params.get("padding", kernels.PAD_SAME)),
                ),
            )
        elif spec.kind == "depthwise_conv":
            x = kernels.depthwise_conv2d(
                x,
                ConvParams(
                    kernel=arrs["kernel"],
                    bias=arrs["bias"],
                    stride=int(spec.params.get("stride", 1)),
                    padding=str(spec.params.get("padding", kernels.PAD_SAME)),
                ),
            )
        elif spec.kind == "batch_norm":
            x = kernels.batch_norm(
                x,
                arrs["gamma"],
                arrs["beta"],
                arrs["mean"],
                arrs["variance"],
                float(spec.params.get("epsilon", 1e-3)),
            )
        elif spec.kind == "activation":
            x = kernels.activation(x, str(spec.params.get("kind", kernels.ACT_RELU)))
        elif spec.kind == "global_average_pool":
            last_conv = x
            x = kernels.global_average_pool(x)
        elif spec.kind == "dense":
            logits = kernels.dense(x, arrs["weights"], arrs["bias"])
            x = logits
        elif spec.kind == "softmax":
            x = kernels.softmax(x)
    assert last_conv is not None
    return ForwardResult(logits=logits, probabilities=x, last_conv_activations=last_conv)


def top_k(probabilities: np.ndarray, labels: list[str], k: int) -> list[Prediction]:
    """Top-k classes, descending probability, ties broken by lower index."""
    c = len(labels)
    if not 1 <= k <= c:
        raise ValueError(f"k must be in [1, {c}], got {k}")
    order = sorted(range(c), key=lambda i: (-float(probabilities[i]), i))
    return [Prediction(index=i, label=labels[i], probability=float(probabilities[i])) for i in order[:k]]
