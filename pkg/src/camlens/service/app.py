"""HTTP service: classification + CAM + persistent capture gallery."""
from __future__ import annotations

import logging
import uuid
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from ..errors import DecodeError
from ..images import decode_image
from ..model import Model
from ..pipeline import classify_image
from ..store import TAGS, CaptureRecord, CaptureStore, UnknownCaptureError
from .schemas import (
    CaptureDetail,
    CaptureSummary,
    ClassDelta,
    ClassifyResponse,
    CompareResponse,
    GridDims,
    HealthResponse,
    LabelsResponse,
    PredictionOut,
    RankChange,
    TagRequest,
)

log = logging.getLogger("camlens.service")

DEFAULT_BODY_LIMIT = 8 * 1024 * 1024

MEDIA_TYPES = {"png": "image/png", "ppm": "image/x-portable-pixmap"}


def _detail(rec: CaptureRecord) -> CaptureDetail:
    return CaptureDetail(
        id=rec.id,
        created_at=rec.created_at,
        image_ref=rec.image_ref,
        grid=GridDims(h=rec.grid_h, w=rec.grid_w),
        predictions=[PredictionOut(**p) for p in rec.predictions],
        cams=rec.cam_grids,
        tag=rec.tag,
        note=rec.note,
    )


def create_app(
    model: Model,
    store: CaptureStore,
    static_dir: str | Path | None = None,
    body_limit: int = DEFAULT_BODY_LIMIT,
) -> FastAPI:
    app = FastAPI(title="camlens", docs_url=None, redoc_url=None)

    @app.exception_handler(Exception)
    async def internal_error(request: Request, exc: Exception):
        incident = uuid.uuid4().hex[:12]
        log.exception("internal error %s on %s", incident, request.url.path)
        return JSONResponse(status_code=500, content={"detail": "internal error", "incident": incident})

    @app.post("/api/classify", response_model=ClassifyResponse)
    async def classify(
        request: Request,
        threshold: float = Query(default=0.6, ge=0.0, le=1.0),
    ) -> ClassifyResponse:
        body = await request.body()
        if len(body) > body_limit:
            raise HTTPException(status_code=413, detail="image too large")
        try:
            image = decode_image(body)
        except DecodeError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        payload = classify_image(model, image)
        ext = "png" if body.startswith(b"\x89PNG") else "ppm"
        rec = store.add(
            image_bytes=body,
            image_ext=ext,
            grid_h=payload["grid"]["h"],
            grid_w=payload["grid"]["w"],
            predictions=payload["predictions"],
            cam_grids=payload["cams"],
        )
        return ClassifyResponse(capture_id=rec.id, **payload)

    @app.post("/api/captures/{cap_id}/tag", response_model=CaptureDetail)
    def tag_capture(cap_id: str, req: TagRequest) -> CaptureDetail:
        if req.tag not in TAGS:
            raise HTTPException(status_code=400, detail=f"unknown tag {req.tag!r}")
        try:
            rec = store.tag(cap_id, req.tag, req.note)
        except UnknownCaptureError:
            raise HTTPException(status_code=404, detail=f"no capture {cap_id!r}")
        return _detail(rec)

    @app.get("/api/captures", response_model=list[CaptureSummary])
    def list_captures(tag: str | None = Query(default=None)) -> list[CaptureSummary]:
        if tag is not None and tag not in TAGS:
            raise HTTPException(status_code=400, detail=f"unknown tag {tag!r}")
        out = []
        for rec in store.list(tag):
            top = rec.predictions[0]
            out.append(
                CaptureSummary(
                    id=rec.id,
                    created_at=rec.created_at,
                    tag=rec.tag,
                    note=rec.note,
                    top_label=top["label"],
                    top_probability=top["probability"],
                )
            )
        return out

    @app.get("/api/captures/{cap_id}", response_model=CaptureDetail)
    def get_capture(cap_id: str) -> CaptureDetail:
        try:
            return _detail(store.get(cap_id))
        except UnknownCaptureError:
            raise HTTPException(status_code=404, detail=f"no capture {cap_id!r}")

    @app.get("/api/captures/{cap_id}/image")
    def get_capture_image(cap_id: str):
        try:
            path = store.image_path(cap_id)
        except UnknownCaptureError:
            raise HTTPException(status_code=404, detail=f"no capture {cap_id!r}")
        ext = path.suffix.lstrip(".")
        return FileResponse(path, media_type=MEDIA_TYPES.get(ext, "application/octet-stream"))

    @app.get("/api/compare", response_model=CompareResponse)
    def compare(
        a: str = Query(...),
        b: str = Query(...),
        class_index: int = Query(..., alias="class"),
    ) -> CompareResponse:
        try:
            rec_a = store.get(a)
            rec_b = store.get(b)
        except UnknownCaptureError as exc:
            raise HTTPException(status_code=404, detail=f"no capture {exc.args[0]!r}")
        if not 0 <= class_index < model.num_classes:
            raise HTTPException(status_code=400, detail=f"class {class_index} out of range")

        def prob(rec: CaptureRecord, idx: int) -> float:
            for p in rec.predictions:
                if p["index"] == idx:
                    return p["probability"]
            return 0.0  # outside the stored top list

        def grid(rec: CaptureRecord, idx: int) -> list[list[float]]:
            for p, g in zip(rec.predictions, rec.cam_grids):
                if p["index"] == idx:
                    return g
            return [[0.0] * rec.grid_w for _ in range(rec.grid_h)]

        ga, gb = grid(rec_a, class_index), grid(rec_b, class_index)
        cam_diff = [
            [vb - va for va, vb in zip(row_a, row_b)] for row_a, row_b in zip(ga, gb)
        ]

        union = sorted(
            {p["index"] for p in rec_a.predictions} | {p["index"] for p in rec_b.predictions}
        )

        def rank(rec: CaptureRecord, idx: int) -> int | None:
            for i, p in enumerate(rec.predictions):
                if p["index"] == idx:
                    return i + 1
            return None

        rank_changes = [
            RankChange(index=i, label=model.labels[i], rank_a=rank(rec_a, i), rank_b=rank(rec_b, i))
            for i in union
            if rank(rec_a, i) != rank(rec_b, i)
        ]
        class_deltas = [
            ClassDelta(
                index=i,
                label=model.labels[i],
                probability_a=prob(rec_a, i),
                probability_b=prob(rec_b, i),
                delta=prob(rec_b, i) - prob(rec_a, i),
            )
            for i in sorted(set(union) | {class_index})
        ]
        return CompareResponse(
            a=a,
            b=b,
            class_index=class_index,
            label=model.labels[class_index],
            confidence_delta=prob(rec_b, class_index) - prob(rec_a, class_index),
            grid=GridDims(h=rec_a.grid_h, w=rec_a.grid_w),
            cam_diff=cam_diff,
            class_deltas=class_deltas,
            rank_changes=rank_changes,
        )

    @app.get("/api/labels", response_model=LabelsResponse)
    def labels() -> LabelsResponse:
        return LabelsResponse(labels=model.labels)

    @app.get("/api/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        gh, gw = model.grid_shape
        return HealthResponse(
            model=model.manifest.name, classes=model.num_classes, grid=GridDims(h=gh, w=gw)
        )

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="webapp")

    return app
