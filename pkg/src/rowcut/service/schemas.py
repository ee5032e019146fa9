"""Request and response bodies for the HTTP service.

Binary payloads (pages, row crops, overlays) travel as base64-encoded PNM
bytes; everything else is plain JSON. Option defaults mirror Config so an
omitted options object behaves exactly like a run with no flags.
"""

from __future__ import annotations

import base64
from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator

from ..config import Config

MethodName = Literal["straight", "bottom-edge", "flexible"]


class AnalysisOptions(BaseModel):
    threshold: int = Field(default=128, ge=0, le=255)
    skew_range_deg: float = Field(default=10.0, gt=0.0, le=10.0)
    skew_step_deg: float = Field(default=0.25, gt=0.0)
    smooth_window: int = Field(default=9, ge=1)
    band_threshold: float = Field(default=0.2, gt=0.0, lt=1.0)
    epsilon: float = Field(default=2.0, ge=0.0)
    resume_lookahead: int = Field(default=3, ge=1)
    exterior_first: bool = True

    @field_validator("smooth_window")
    @classmethod
    def _odd(cls, value: int) -> int:
        if value % 2 == 0:
            raise ValueError("smooth_window must be odd")
        return value

    def to_config(self) -> Config:
        return Config(**self.model_dump())


def encode_bytes(data: bytes) -> str:
    return base64.b64encode(data).decode("ascii")


def decode_field(data: str, name: str) -> bytes:
    try:
        return base64.b64decode(data, validate=True)
    except Exception as exc:
        raise ValueError(f"{name} is not valid base64") from exc


class SegmentRequest(BaseModel):
    image_b64: str
    method: MethodName = "flexible"
    options: AnalysisOptions = Field(default_factory=AnalysisOptions)


class SegmentResponse(BaseModel):
    method: MethodName
    row_count: int
    event_count: int
    amputated_components: int
    borders_text: str
    rows_b64: list[str]


class RenderRequest(BaseModel):
    image_b64: str
    method: MethodName = "flexible"
    options: AnalysisOptions = Field(default_factory=AnalysisOptions)


class RenderResponse(BaseModel):
    method: MethodName
    overlay_b64: str


class GenerateRequest(BaseModel):
    rows: int = Field(default=4, ge=2)
    width: int = Field(default=400, ge=1)
    row_height: int = Field(default=75, ge=1)
    overlap: float = Field(default=0.6, ge=0.0, le=1.0)
    diacritic: float = Field(default=0.5, ge=0.0, le=1.0)
    unresolvable: float = Field(default=0.0, ge=0.0, le=1.0)
    seed: int = Field(default=0, ge=0)


class GenerateResponse(BaseModel):
    page_b64: str
    truth_text: str
    component_count: int


class CompareRequest(BaseModel):
    samples: int = Field(default=24, ge=1)
    seed: int = Field(default=42, ge=0)
    rows: int = Field(default=4, ge=2)
    width: int = Field(default=400, ge=1)
    row_height: int = Field(default=75, ge=1)
    overlap: float = Field(default=0.6, ge=0.0, le=1.0)
    diacritic: float = Field(default=0.5, ge=0.0, le=1.0)
    unresolvable: float = Field(default=0.0, ge=0.0, le=1.0)
    methods: Optional[list[MethodName]] = None
    options: AnalysisOptions = Field(default_factory=AnalysisOptions)


class MethodReportModel(BaseModel):
    method: str
    samples: int
    components: int
    amputations: int
    error_rate: float
    misassigned: int
    wall_time: float


class CompareResponse(BaseModel):
    reports: list[MethodReportModel]
    reductions: dict[str, Optional[float]]
    table: str
    csv: str


class HealthResponse(BaseModel):
    status: Literal["ok"]
    version: str
