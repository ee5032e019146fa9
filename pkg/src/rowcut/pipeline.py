"""Page-level orchestration: one shared analysis, per-method borders.

Every border method consumes the same skew estimate, band detection, and
component labeling, so method timings differ only in border construction
and row cutting.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

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
    FlexParams,
    IntersectionEvent,
    bottom_edge_border,
    flexible_border,
    straight_border,
)
from .config import Config
from .errors import NoBands
from .raster import BinaryImage
from .segment import (
    ComponentLabeling,
    Segmentation,
    connected_components,
    count_amputations,
    cut_rows,
)

METHOD_STRAIGHT = "straight"
METHOD_BOTTOM_EDGE = "bottom-edge"
METHOD_FLEXIBLE = "flexible"
METHODS = (METHOD_STRAIGHT, METHOD_BOTTOM_EDGE, METHOD_FLEXIBLE)


@dataclass(frozen=True)
class PageAnalysis:
    image: BinaryImage
    angle: SkewAngle
    profile: Profile
    bands: list[RowBand]
    valleys: list[Valley]
    labeling: ComponentLabeling


def analyze_page(image: BinaryImage, config: Config | None = None) -> PageAnalysis:
    """Estimate skew, detect bands and valleys, label components."""
    config = config or Config()
    if image.ink_count == 0:
        raise NoBands("page has no ink")
    angle = estimate_skew(image, config.skew_range_deg, config.skew_step_deg)
    profile = projection_profile(image, angle)
    bands, valleys = detect_row_bands(profile, config.smooth_window, config.band_threshold)
    labeling = connected_components(image)
    return PageAnalysis(image, angle, profile, bands, valleys, labeling)


def build_borders(
    page: PageAnalysis, method: str, config: Config | None = None
) -> tuple[list[BorderPolyline], list[list[IntersectionEvent]]]:
    """All inter-row borders of the page under one method.

    Returns one event list per border; only the flexible method ever
    produces non-empty lists, the other methods never inspect obstacles.
    """
    config = config or Config()
    image = page.image
    borders: list[BorderPolyline] = []
    events: list[list[IntersectionEvent]] = []
    if method == METHOD_STRAIGHT:
        for valley in page.valleys:
            borders.append(
                straight_border(valley, page.angle, image.width, image.height)
            )
            events.append([])
    elif method == METHOD_BOTTOM_EDGE:
        for band in page.bands[:-1]:
            borders.append(
                bottom_edge_border(
                    image, band, page.labeling, config.epsilon, page.angle
                )
            )
            events.append([])
    elif method == METHOD_FLEXIBLE:
        params = FlexParams(
            resume_lookahead=config.resume_lookahead,
            exterior_first=config.exterior_first,
        )
        for valley in page.valleys:
            border, border_events = flexible_border(
                image,
                valley,
                page.angle,
                page.bands[valley.above],
                page.bands[valley.below],
                params,
                labeling=page.labeling,
            )
            borders.append(border)
            events.append(border_events)
    else:
        raise ValueError(f"unknown method {method!r}")
    return borders, events


@dataclass(frozen=True)
class MethodRun:
    method: str
    borders: list[BorderPolyline]
    events: list[list[IntersectionEvent]]
    segmentation: Segmentation
    amputations: int
    seconds: float

    @property
    def event_count(self) -> int:
        return sum(len(e) for e in self.events)


def run_method(page: PageAnalysis, method: str, config: Config | None = None) -> MethodRun:
    """Borders, segmentation, and amputation count for one method."""
    config = config or Config()
    t0 = time.perf_counter()
    borders, events = build_borders(page, method, config)
    segmentation = cut_rows(page.image, borders)
    seconds = time.perf_counter() - t0
    amputations = count_amputations(page.labeling, segmentation)
    return MethodRun(method, borders, events, segmentation, amputations, seconds)
