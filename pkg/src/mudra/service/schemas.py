"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator

from ..classify import Prediction
from ..dataset import parse_frame_record
from ..errors import FormatError
from ..geometry import HandLandmarks


class FrameModel(BaseModel):
    """One hand's landmarks, mirroring the JSONL frame record."""

    source_id: str = ""
    landmarks: list[list[float]]
    handedness: Literal["Left", "Right", "Unknown"] = "Unknown"
    timestamp_ms: Optional[float] = None

    @field_validator("landmarks")
    @classmethod
    def _shape(cls, v: list[list[float]]) -> list[list[float]]:
        if len(v) != 21 or any(len(p) != 3 for p in v):
            raise ValueError("landmarks must be 21 [x, y, z] points")
        return v

    def to_landmarks(self) -> HandLandmarks:
        try:
            return parse_frame_record(self.model_dump())
        except FormatError as exc:
            raise ValueError(str(exc)) from None


class EnrollRequest(BaseModel):
    label: str = Field(min_length=1)
    frame: FrameModel
    meta: dict = Field(default_factory=dict)


class EnrollResponse(BaseModel):
    id: int
    label: str


class ClassifyRequest(BaseModel):
    frame: FrameModel
    n: int = Field(default=1, ge=1)
    threshold: Optional[float] = Field(default=None, gt=0)


class RankedMatch(BaseModel):
    label: str
    distance: float


class PredictionResponse(BaseModel):
    source_id: str
    outcome: Literal["match", "no_match"]
    label: Optional[str]
    ranked: list[RankedMatch]
    rejected_reason: Optional[str] = None

    @classmethod
    def from_prediction(cls, prediction: Prediction) -> PredictionResponse:
        return cls(
            source_id=prediction.source_id,
            outcome=prediction.outcome,
            label=prediction.label,
            ranked=[RankedMatch(label=l, distance=d) for l, d in prediction.ranked],
            rejected_reason=prediction.rejected_reason,
        )


class GalleryInfo(BaseModel):
    dim: int
    size: int
    labels: dict[str, int]


class SessionRequest(BaseModel):
    window: int = Field(default=10, ge=1)
    n: int = Field(default=1, ge=1)
    threshold: Optional[float] = Field(default=None, gt=0)


class SessionResponse(BaseModel):
    session_id: str
    window: int
    n: int


class SavePath(BaseModel):
    path: str = Field(min_length=1)


class HealthResponse(BaseModel):
    status: str
    gallery_size: int
    dim: int
