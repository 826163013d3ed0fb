"""Command-line interface: classify, inspect, serve.

JSON goes to stdout, diagnostics to stderr. Exit codes: 0 success,
1 load/decode/inference failure, 2 bad flags.
"""
from __future__ import annotations

import json
import socket
import sys
from pathlib import Path

import click

from .cam import ClassActivationMap, render_overlay, threshold_mask
from .errors import CamlensError
from .images import RgbImage, decode_image, encode_png, encode_ppm
from .model import Model, load_model
from .pipeline import classify_image

DATA_DIR_ENV = "CAMLENS_DATA_DIR"


def _load(manifest_path: str, weights_path: str) -> Model:
    try:
        return load_model(Path(manifest_path).read_bytes(), Path(weights_path).read_bytes())
    except (CamlensError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


model_flags = [
    click.option("--model-manifest", required=True, type=click.Path(exists=True, dir_okay=False)),
    click.option("--model-weights", required=True, type=click.Path(exists=True, dir_okay=False)),
]


def with_model_flags(fn):
    for flag in reversed(model_flags):
        fn = flag(fn)
    return fn


@click.group()
def main() -> None:
    """Classify images with a CAM-capable CNN and inspect where it looked."""


@main.command()
@with_model_flags
@click.option("--image", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--top-k", default=3, type=click.IntRange(min=1), show_default=True)
@click.option("--overlay-out", type=click.Path(dir_okay=False), default=None,
              help="Write a red-block overlay image here.")
@click.option("--overlay-format", type=click.Choice(["png", "ppm"]), default="png", show_default=True)
@click.option("--cam-class", type=int, default=None,
              help="Class index for the overlay (default: top-1).")
@click.option("--threshold", default=0.6, type=click.FloatRange(0.0, 1.0), show_default=True)
@click.option("--alpha", default=0.45, type=click.FloatRange(0.0, 1.0), show_default=True)
def classify(model_manifest, model_weights, image, top_k, overlay_out, overlay_format,
             cam_class, threshold, alpha) -> None:
    """Classify an image and optionally render the CAM overlay."""
    model = _load(model_manifest, model_weights)
    try:
        decoded = decode_image(Path(image).read_bytes())
        payload = classify_image(model, decoded, k=top_k)
    except (CamlensError, OSError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)

    if overlay_out is not None:
        target = cam_class if cam_class is not None else payload["predictions"][0]["index"]
        grid = None
        for pred, g in zip(payload["predictions"], payload["cams"]):
            if pred["index"] == target:
                grid = g
        if grid is None:
            click.echo(f"error: class {target} not in the top-{top_k} results", err=True)
            sys.exit(1)
        import numpy as np

        cam = ClassActivationMap(
            class_index=target,
            raw=np.asarray(grid, np.float32),
            normalized=np.asarray(grid, np.float32),
        )
        mask = threshold_mask(cam, threshold)
        blended = render_overlay(decoded.pixels, mask, alpha)
        out_img = RgbImage(width=decoded.width, height=decoded.height, pixels=blended)
        data = encode_png(out_img) if overlay_format == "png" else encode_ppm(out_img)
        Path(overlay_out).write_bytes(data)
        click.echo(f"overlay written to {overlay_out}", err=True)

    click.echo(json.dumps({"predictions": payload["predictions"], "grid": payload["grid"]}))


@main.command()
@with_model_flags
def inspect(model_manifest, model_weights) -> None:
    """Print the layer table and CAM geometry of a model."""
    model = _load(model_manifest, model_weights)
    rows = []
    from . import kernels

    shape: tuple = model.manifest.input_shape
    for spec, arrs in model.bound_layers:
        params = 0
        if spec.kind in ("conv", "depthwise_conv"):
            k = arrs["kernel"]
            stride = int(spec.params.get("stride", 1))
            padding = str(spec.params.get("padding", "same"))
            oh, _, _ = kernels._pad_extent(shape[0], k.shape[0], stride, padding)
            ow, _, _ = kernels._pad_extent(shape[1], k.shape[1], stride, padding)
            cout = k.shape[2] if spec.kind == "depthwise_conv" else k.shape[3]
            shape = (oh, ow, cout)
            params = k.size + arrs["bias"].size
        elif spec.kind == "batch_norm":
            params = sum(a.size for a in arrs.values())
        elif spec.kind == "global_average_pool":
            shape = (shape[2],)
        elif spec.kind == "dense":
            params = arrs["weights"].size + arrs["bias"].size
            shape = (arrs["weights"].shape[1],)
        rows.append((spec.kind, "x".join(map(str, shape)), params))

    width = max(len(r[0]) for r in rows)
    click.echo(f"model: {model.manifest.name}", err=True)
    for kind, out_shape, params in rows:
        click.echo(f"  {kind:<{width}}  out {out_shape:<14} params {params}", err=True)
    gh, gw = model.grid_shape
    click.echo(
        json.dumps(
            {
                "name": model.manifest.name,
                "grid": {"h": gh, "w": gw},
                "channels": model.num_channels,
                "classes": model.num_classes,
            }
        )
    )


@main.command()
@with_model_flags
@click.option("--port", default=8080, type=int, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--data-dir", envvar=DATA_DIR_ENV, required=True,
              type=click.Path(file_okay=False))
@click.option("--static-dir", type=click.Path(file_okay=False), default=None,
              help="Webapp bundle to serve at / (default: frontend/dist if present).")
def serve(model_manifest, model_weights, port, host, data_dir, static_dir) -> None:
    """Start the HTTP service on the given port."""
    import uvicorn

    from .service import create_app
    from .store import CaptureStore

    model = _load(model_manifest, model_weights)
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
    except OSError as exc:
        click.echo(f"error: cannot bind {host}:{port}: {exc}", err=True)
        sys.exit(1)
    finally:
        probe.close()

    if static_dir is None:
        default_static = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        static_dir = default_static if default_static.is_dir() else None
    store = CaptureStore(data_dir)
    app = create_app(model, store, static_dir=static_dir)
    click.echo(f"serving {model.manifest.name} on http://{host}:{port}", err=True)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
