"""HTTP layer: FastAPI application factory and request/response models."""

from .app import create_app
from .schemas import (
    AnalysisOptions,
    CompareRequest,
    CompareResponse,
    GenerateRequest,
    GenerateResponse,
    HealthResponse,
    MethodReportModel,
    RenderRequest,
    RenderResponse,
    SegmentRequest,
    SegmentResponse,
)

__all__ = [
    "create_app",
    "AnalysisOptions",
    "CompareRequest",
    "CompareResponse",
    "GenerateRequest",
    "GenerateResponse",
    "HealthResponse",
    "MethodReportModel",
    "RenderRequest",
    "RenderResponse",
    "SegmentRequest",
    "SegmentResponse",
]
