"""Append-only capture store.

Every classification result is persisted as a newline-delimited JSON event
plus the original image file. State is rebuilt by replaying the log at
startup; tags are later events referencing the capture id, so a crash never
loses anything already flushed.
"""
from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field, asdict
from datetime import datetime, timezone
from pathlib import Path

TAGS = ("impressive", "funny", "puzzling", "none")

LOG_NAME = "captures.log"
IMAGE_DIR = "images"


@dataclass
class CaptureRecord:
    id: str
    created_at: str  # UTC ISO-8601
    image_ref: str  # file name under the store's image directory
    grid_h: int
    grid_w: int
    predictions: list[dict]  # [{index, label, probability}]
    cam_grids: list[list[list[float]]]  # one normalized grid per prediction
    tag: str = "none"
    note: str = ""


class UnknownCaptureError(KeyError):
    pass


class CaptureStore:
    """Single-writer store: mutations serialize through one lock, reads are
    snapshots of in-memory state rebuilt from the log."""

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.image_dir = self.data_dir / IMAGE_DIR
        self.image_dir.mkdir(parents=True, exist_ok=True)
        self.log_path = self.data_dir / LOG_NAME
        self._lock = threading.Lock()
        self._records: dict[str, CaptureRecord] = {}
        self._seq = 0
        self._replay()

    def _replay(self) -> None:
        if not self.log_path.exists():
            return
        with self.log_path.open("r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                event = json.loads(line)
                kind = event.pop("event")
                if kind == "capture":
                    rec = CaptureRecord(**event)
                    self._records[rec.id] = rec
                    num = int(rec.id.rsplit("-", 1)[-1])
                    self._seq = max(self._seq, num)
                elif kind == "tag":
                    rec = self._records.get(event["id"])
                    if rec is not None:
                        rec.tag = event["tag"]
                        rec.note = event.get("note", "")

    def _append(self, event: dict) -> None:
        with self.log_path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, separators=(",", ":")) + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def add(
        self,
        image_bytes: bytes,
        image_ext: str,
        grid_h: int,
        grid_w: int,
        predictions: list[dict],
        cam_grids: list[list[list[float]]],
    ) -> CaptureRecord:
        with self._lock:
            self._seq += 1
            cap_id = f"cap-{self._seq:06d}"
            image_ref = f"{cap_id}.{image_ext}"
            (self.image_dir / image_ref).write_bytes(image_bytes)
            rec = CaptureRecord(
                id=cap_id,
                created_at=datetime.now(timezone.utc).isoformat(),
                image_ref=image_ref,
                grid_h=grid_h,
                grid_w=grid_w,
                predictions=predictions,
                cam_grids=cam_grids,
            )
            self._append({"event": "capture", **asdict(rec)})
            self._records[cap_id] = rec
            return rec

    def tag(self, cap_id: str, tag: str, note: str = "") -> CaptureRecord:
        if tag not in TAGS:
            raise ValueError(f"unknown tag {tag!r}; expected one of {TAGS}")
        with self._lock:
            rec = self._records.get(cap_id)
            if rec is None:
                raise UnknownCaptureError(cap_id)
            self._append({"event": "tag", "id": cap_id, "tag": tag, "note": note})
            rec.tag = tag
            rec.note = note
            return rec

    def get(self, cap_id: str) -> CaptureRecord:
        rec = self._records.get(cap_id)
        if rec is None:
            raise UnknownCaptureError(cap_id)
        return rec

    def image_path(self, cap_id: str) -> Path:
        return self.image_dir / self.get(cap_id).image_ref

    def list(self, tag: str | None = None) -> list[CaptureRecord]:
        """All records, newest first (created_at desc, then id desc)."""
        recs = [r for r in self._records.values() if tag is None or r.tag == tag]
        return sorted(recs, key=lambda r: (r.created_at, r.id), reverse=True)

    def __len__(self) -> int:
        return len(self._records)
