"""Pydantic request/response models for the HTTP API."""
from __future__ import annotations

from pydantic import BaseModel, Field


class GridDims(BaseModel):
    h: int
    w: int


class PredictionOut(BaseModel):
    index: int
    label: str
    probability: float


class ClassifyResponse(BaseModel):
    capture_id: str
    grid: GridDims
    predictions: list[PredictionOut]
    cams: list[list[list[float]]]


class TagRequest(BaseModel):
    tag: str
    note: str = ""


class CaptureSummary(BaseModel):
    id: str
    created_at: str
    tag: str
    note: str
    top_label: str
    top_probability: float


class CaptureDetail(BaseModel):
    id: str
    created_at: str
    image_ref: str
    grid: GridDims
    predictions: list[PredictionOut]
    cams: list[list[list[float]]]
    tag: str
    note: str


class RankChange(BaseModel):
    index: int
    label: str
    rank_a: int | None = None  # 1-based rank within the capture's top list
    rank_b: int | None = None


class ClassDelta(BaseModel):
    index: int
    label: str
    probability_a: float
    probability_b: float
    delta: float


class CompareResponse(BaseModel):
    a: str
    b: str
    class_index: int
    label: str
    confidence_delta: float
    grid: GridDims
    cam_diff: list[list[float]]
    class_deltas: list[ClassDelta]
    rank_changes: list[RankChange]


class LabelsResponse(BaseModel):
    labels: list[str]


class HealthResponse(BaseModel):
    status: str = Field(default="ok")
    model: str
    classes: int
    grid: GridDims
