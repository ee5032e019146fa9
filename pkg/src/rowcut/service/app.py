"""HTTP service exposing segmentation, rendering, generation, and comparison.

The service is a thin veneer: each endpoint decodes its payload, calls the
library, and encodes the result. Domain failures surface as 400 responses
carrying the error class name so clients can map them to exit codes without
parsing prose.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..corpus import SynthSpec, compare, corpus_specs, format_report_table, generate, reports_to_csv
from ..errors import RowcutError
from ..formats import borders_to_text, truth_to_text
from ..pipeline import METHODS, analyze_page, build_borders, run_method
from ..raster import BinaryImage, GrayImage, binarize, read_pnm, render_overlay, write_pbm
from ..segment import extract_row_images
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
    decode_field,
    encode_bytes,
)


def _load_page(image_b64: str, options: AnalysisOptions):
    data = decode_field(image_b64, "image_b64")
    image = read_pnm(data)
    if isinstance(image, GrayImage):
        image = binarize(image, options.threshold)
    config = options.to_config()
    return analyze_page(image, config), config


def create_app() -> FastAPI:
    app = FastAPI(title="rowcut", version=__version__)

    @app.exception_handler(RowcutError)
    async def _domain_error(request: Request, exc: RowcutError) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(
            status_code=422,
            content={"error": "ValueError", "detail": str(exc)},
        )

    @app.get("/health", response_model=HealthResponse)
    async def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/segment", response_model=SegmentResponse)
    async def segment(req: SegmentRequest) -> SegmentResponse:
        page, config = _load_page(req.image_b64, req.options)
        run = run_method(page, req.method, config)
        rows_b64 = [
            encode_bytes(write_pbm(extract_row_images(page.image, run.segmentation, k)))
            for k in range(run.segmentation.row_count)
        ]
        text = borders_to_text(run.borders, req.method, [len(e) for e in run.events])
        return SegmentResponse(
            method=req.method,
            row_count=run.segmentation.row_count,
            event_count=run.event_count,
            amputated_components=run.amputations,
            borders_text=text,
            rows_b64=rows_b64,
        )

    @app.post("/render", response_model=RenderResponse)
    async def render(req: RenderRequest) -> RenderResponse:
        page, config = _load_page(req.image_b64, req.options)
        borders, _ = build_borders(page, req.method, config)
        overlay = render_overlay(page.image, borders)
        return RenderResponse(method=req.method, overlay_b64=encode_bytes(overlay))

    @app.post("/generate", response_model=GenerateResponse)
    async def generate_page(req: GenerateRequest) -> GenerateResponse:
        spec = SynthSpec(
            rows=req.rows,
            width=req.width,
            row_height=req.row_height,
            overlap_probability=req.overlap,
            diacritic_probability=req.diacritic,
            unresolvable_probability=req.unresolvable,
            seed=req.seed,
        )
        image, truth = generate(spec)
        return GenerateResponse(
            page_b64=encode_bytes(write_pbm(image)),
            truth_text=truth_to_text(truth),
            component_count=truth.component_count,
        )

    @app.post("/compare", response_model=CompareResponse)
    async def compare_methods(req: CompareRequest) -> CompareResponse:
        specs = corpus_specs(
            req.samples,
            req.seed,
            rows=req.rows,
            width=req.width,
            row_height=req.row_height,
            overlap=req.overlap,
            diacritic=req.diacritic,
            unresolvable=req.unresolvable,
        )
        methods = req.methods if req.methods else list(METHODS)
        result = compare(specs, methods, req.options.to_config())
        reports = [
            MethodReportModel(
                method=r.method,
                samples=r.samples,
                components=r.components,
                amputations=r.amputations,
                error_rate=r.error_rate,
                misassigned=r.misassigned,
                wall_time=r.wall_time,
            )
            for r in result.reports
        ]
        return CompareResponse(
            reports=reports,
            reductions=result.reductions,
            table=format_report_table(result),
            csv=reports_to_csv(result),
        )

    return app
