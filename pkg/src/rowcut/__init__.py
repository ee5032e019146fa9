"""Text-line segmentation with flexible inter-row frontiers.

Core flow: binarize a page, estimate its skew, detect row bands and
valleys, then separate rows with one of three border methods (straight,
bottom-edge following, flexible frontiers) and cut the page into per-row
images. A synthetic corpus generator and a comparison harness score the
methods by how many connected components each one splits in two.
"""

from .analysis import (
    Profile,
    RowBand,
    SkewAngle,
    Valley,
    detect_row_bands,
    estimate_skew,
    projection_profile,
)
from .borders import (
    BorderPolyline,
    BorderSegment,
    FlexParams,
    IntersectionEvent,
    Resolution,
    SegmentKind,
    bottom_edge_border,
    flexible_border,
    relax_polyline,
    straight_border,
)
from .config import Config
from .contour import DIRECTIONS, WallSense, boundary_oracle, trace_wall
from .corpus import (
    CompareResult,
    GroundTruth,
    MethodReport,
    SynthSpec,
    compare,
    corpus_specs,
    generate,
)
from .errors import RowcutError
from .pipeline import (
    METHOD_BOTTOM_EDGE,
    METHOD_FLEXIBLE,
    METHOD_STRAIGHT,
    METHODS,
    PageAnalysis,
    analyze_page,
    build_borders,
    run_method,
)
from .raster import BinaryImage, GrayImage, binarize, read_pnm, render_overlay, write_pbm
from .segment import (
    BARRIER,
    ComponentLabeling,
    Segmentation,
    connected_components,
    count_amputations,
    cut_rows,
    extract_row_images,
)

__all__ = [
    "BARRIER",
    "BinaryImage",
    "BorderPolyline",
    "BorderSegment",
    "CompareResult",
    "ComponentLabeling",
    "Config",
    "DIRECTIONS",
    "FlexParams",
    "GrayImage",
    "GroundTruth",
    "IntersectionEvent",
    "METHODS",
    "METHOD_BOTTOM_EDGE",
    "METHOD_FLEXIBLE",
    "METHOD_STRAIGHT",
    "MethodReport",
    "PageAnalysis",
    "Profile",
    "Resolution",
    "RowBand",
    "RowcutError",
    "SegmentKind",
    "Segmentation",
    "SkewAngle",
    "SynthSpec",
    "Valley",
    "WallSense",
    "analyze_page",
    "binarize",
    "bottom_edge_border",
    "boundary_oracle",
    "build_borders",
    "compare",
    "connected_components",
    "corpus_specs",
    "count_amputations",
    "cut_rows",
    "detect_row_bands",
    "estimate_skew",
    "extract_row_images",
    "flexible_border",
    "generate",
    "projection_profile",
    "read_pnm",
    "relax_polyline",
    "render_overlay",
    "run_method",
    "straight_border",
    "trace_wall",
    "write_pbm",
]

__version__ = "0.1.0"
