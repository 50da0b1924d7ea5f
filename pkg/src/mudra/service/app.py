"""HTTP surface of the engine.

The service holds one gallery plus the reference anchors and serves
enrollment, single-frame classification, and windowed stream sessions.
Frame payloads use exactly the JSONL frame-record schema, so any
landmark extractor that writes the file format can talk to the API
unchanged.
"""

from __future__ import annotations

import math
import threading
import uuid
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware

from ..classify import ClassifierConfig, StreamState, classify, stream_step
from ..errors import AnchorDegenerate, EmptyGallery, SingularAnchors
from ..gallery import Gallery
from ..geometry import AnchorSet, default_reference_anchors, normalize
from .schemas import (
    ClassifyRequest,
    EnrollRequest,
    EnrollResponse,
    GalleryInfo,
    HealthResponse,
    PredictionResponse,
    SavePath,
    SessionRequest,
    SessionResponse,
)


class _Session:
    def __init__(self, config: ClassifierConfig):
        self.config = config
        self.state = StreamState.initial(config)
        self.lock = threading.Lock()


def _config(n: int, threshold: float | None, window: int = 10) -> ClassifierConfig:
    return ClassifierConfig(
        top_n=n,
        threshold=math.inf if threshold is None else threshold,
        window=window,
    )


def create_app(
    gallery: Gallery | None = None,
    reference: AnchorSet | None = None,
    gallery_path: str | Path | None = None,
) -> FastAPI:
    if gallery is None:
        gallery = Gallery.load(gallery_path) if gallery_path else Gallery(dim=63)
    if reference is None:
        reference = default_reference_anchors()

    app = FastAPI(title="mudra", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.gallery = gallery
    app.state.reference = reference
    sessions: dict[str, _Session] = {}

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(status="ok", gallery_size=len(gallery), dim=gallery.dim)

    @app.get("/gallery", response_model=GalleryInfo)
    def gallery_info():
        return GalleryInfo(dim=gallery.dim, size=len(gallery), labels=gallery.labels())

    @app.post("/gallery/entries", response_model=EnrollResponse, status_code=201)
    def enroll(request: EnrollRequest):
        frame = request.frame.to_landmarks()
        try:
            vector = normalize(frame, reference)
        except (AnchorDegenerate, SingularAnchors) as exc:
            raise HTTPException(status_code=422, detail=f"frame rejected: {exc}")
        meta = dict(request.meta)
        if frame.source_id:
            meta.setdefault("source_id", frame.source_id)
        entry_id = gallery.add(request.label, vector, meta)
        return EnrollResponse(id=entry_id, label=request.label)

    @app.post("/gallery/save")
    def save_gallery(request: SavePath):
        gallery.save(request.path)
        return {"saved": len(gallery), "path": request.path}

    @app.post("/classify", response_model=PredictionResponse)
    def classify_frame(request: ClassifyRequest):
        config = _config(request.n, request.threshold)
        try:
            prediction = classify(gallery, request.frame.to_landmarks(), reference, config)
        except EmptyGallery:
            raise HTTPException(status_code=409, detail="gallery is empty")
        return PredictionResponse.from_prediction(prediction)

    @app.post("/sessions", response_model=SessionResponse, status_code=201)
    def open_session(request: SessionRequest):
        config = _config(request.n, request.threshold, request.window)
        session_id = uuid.uuid4().hex
        sessions[session_id] = _Session(config)
        return SessionResponse(session_id=session_id, window=request.window, n=request.n)

    @app.post("/sessions/{session_id}/frames", response_model=PredictionResponse)
    def session_frame(session_id: str, request: ClassifyRequest):
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        frame = request.frame.to_landmarks()
        with session.lock:
            try:
                session.state, prediction = stream_step(
                    session.state, gallery, frame, reference, session.config
                )
            except EmptyGallery:
                raise HTTPException(status_code=409, detail="gallery is empty")
        return PredictionResponse.from_prediction(prediction)

    @app.delete("/sessions/{session_id}", status_code=204)
    def close_session(session_id: str):
        if sessions.pop(session_id, None) is None:
            raise HTTPException(status_code=404, detail="unknown session")

    return app


app = create_app()
