"""Inter-row border construction.

Three strategies build a full-width separating polyline per row gap:

* straight_border cuts along the global row angle at the valley scanline.
* bottom_edge_border follows the bottom edge of the components whose ink
  reaches the band's core zone, then relaxes the result.
* flexible_border advances straight at the row angle and, where the line
  would stab ink, detours around the obstacle with a wall trace; when
  neither side of the obstacle admits a detour, it cuts straight through and
  records the amputation.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .analysis import RowBand, SkewAngle, Valley, scanline_shift
from .contour import DIRECTIONS, WallSense, trace_wall
from .errors import (
    DegenerateBands,
    DetourAborted,
    EmptyBand,
    OutOfRaster,
    StepBudgetExceeded,
)
from .geometry import Point, chain_bresenham, douglas_peucker, iround, iround_array
from .raster import BinaryImage
from .segment import ComponentLabeling, connected_components

_DIR_INDEX = {step: i for i, step in enumerate(DIRECTIONS)}


class SegmentKind(Enum):
    STRAIGHT = "straight"
    TRACED = "traced"


class Resolution(Enum):
    EXTERIOR = "exterior"
    INTERIOR = "interior"
    AMPUTATED = "amputated"


@dataclass(frozen=True)
class BorderSegment:
    """Half-open run of polyline points sharing one construction kind."""

    start: int
    end: int  # inclusive index into the owning polyline's points
    kind: SegmentKind

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError("segment start must not exceed end")


@dataclass(frozen=True, eq=False)
class BorderPolyline:
    """8-connected pixel path spanning the image left to right.

    segments tile the point indices [0, len-1] without gaps so every pixel
    is attributable to a straight advance or a traced detour.
    """

    points: np.ndarray
    segments: tuple[BorderSegment, ...]

    def __post_init__(self):
        pts = np.ascontiguousarray(self.points, dtype=np.int64)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 1:
            raise ValueError("points must be a non-empty (n, 2) array")
        if pts.shape[0] > 1:
            diffs = np.abs(np.diff(pts, axis=0))
            if np.any(diffs.max(axis=1) != 1):
                raise ValueError("consecutive points must be distinct 8-neighbors")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)
        segs = tuple(self.segments)
        if not segs:
            raise ValueError("polyline needs at least one segment")
        if segs[0].start != 0 or segs[-1].end != pts.shape[0] - 1:
            raise ValueError("segments must tile the point range")
        for a, b in zip(segs, segs[1:]):
            if b.start != a.end + 1:
                raise ValueError("segments must be contiguous")
        object.__setattr__(self, "segments", segs)

    def __len__(self) -> int:
        return int(self.points.shape[0])

    def __eq__(self, other) -> bool:
        if not isinstance(other, BorderPolyline):
            return NotImplemented
        return (
            self.points.shape == other.points.shape
            and bool(np.array_equal(self.points, other.points))
            and self.segments == other.segments
        )


@dataclass(frozen=True)
class IntersectionEvent:
    """One collision between a straight advance and an ink component.

    at is the ink pixel the advance met; detour_len counts the steps of the
    wall trace that resolved it (zero when the border cut through).
    """

    at: Point
    resolution: Resolution
    detour_len: int


@dataclass(frozen=True)
class FlexParams:
    """Tuning for flexible_border.

    resume_lookahead is how many upcoming line pixels must be background
    before a detour rejoins the straight advance. max_detour_steps bounds a
    single wall trace; None sizes it from the image perimeter.
    exterior_first picks which side of an obstacle is tried first.
    """

    resume_lookahead: int = 3
    max_detour_steps: Optional[int] = None
    exterior_first: bool = True

    def __post_init__(self):
        if self.resume_lookahead < 1:
            raise ValueError("resume_lookahead must be at least 1")
        if self.max_detour_steps is not None and self.max_detour_steps < 1:
            raise ValueError("max_detour_steps must be positive when set")


def straight_border(
    valley: Valley, angle: SkewAngle, width: int, height: int
) -> BorderPolyline:
    """Discrete line through the valley scanline at the global row angle."""
    shift = scanline_shift(width, angle)
    r0 = valley.scanline + shift
    cols = np.arange(width, dtype=np.int64)
    rows = iround_array(r0 + cols * angle.tangent)
    if rows.min() < 0 or rows.max() >= height:
        raise OutOfRaster(f"valley {valley.scanline} leaves the raster at angle {angle.radians}")
    points = np.stack([rows, cols], axis=1)
    return BorderPolyline(points, (BorderSegment(0, width - 1, SegmentKind.STRAIGHT),))


def relax_polyline(points: list[Point], epsilon: float) -> list[Point]:
    """Simplify a pixel path, then re-discretize the kept vertices.

    Every input point stays within epsilon + 1 of the output path: epsilon
    from the simplification tolerance, one more pixel from re-rasterizing.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    if len(points) <= 2:
        return list(points)
    kept = douglas_peucker(points, epsilon)
    path, _ = chain_bresenham(kept)
    return path


def bottom_edge_border(
    image: BinaryImage,
    band: RowBand,
    labeling: ComponentLabeling,
    epsilon: float = 2.0,
    angle: SkewAngle = SkewAngle(0.0),
) -> BorderPolyline:
    """Follow the bottom edge of the band's core components, then relax.

    Only components with at least one pixel binned inside the band's core
    zone anchor the border; anything wholly below the core (detached marks,
    descending diacritics) is passed over. Columns without an anchor take
    the linear interpolation of their flanking anchors, edges continue the
    last level, and the chained path is simplified with a perpendicular
    tolerance of epsilon before re-rasterizing.
    """
    h, w = image.height, image.width
    shift = scanline_shift(w, angle)
    rows, cols = np.nonzero(image.pixels)
    if rows.size == 0:
        raise EmptyBand("image has no ink")
    bins = iround_array(rows - cols * angle.tangent) - shift
    at_ink = labeling.labels[rows, cols]
    in_core = (bins >= band.core_top) & (bins <= band.core_bottom)
    qualifying = np.unique(at_ink[in_core])
    qualifying = qualifying[qualifying > 0]
    if qualifying.size == 0:
        raise EmptyBand("no component reaches the band core")
    picked = np.isin(at_ink, qualifying)

    bottom = np.full(w, -1, dtype=np.int64)
    np.maximum.at(bottom, cols[picked], rows[picked])
    anchored = np.nonzero(bottom >= 0)[0]
    level = np.empty(w, dtype=np.int64)
    level[anchored] = np.minimum(bottom[anchored] + 1, h - 1)
    first, last = int(anchored[0]), int(anchored[-1])
    level[:first] = level[first]
    level[last + 1 :] = level[last]
    for c1, c2 in zip(anchored, anchored[1:]):
        if c2 > c1 + 1:
            v1, v2 = int(level[c1]), int(level[c2])
            for c in range(c1 + 1, c2):
                level[c] = iround(v1 + (v2 - v1) * (c - c1) / (c2 - c1))

    vertices = [(int(level[c]), c) for c in range(w)]
    raw, _ = chain_bresenham(vertices)
    if len(raw) <= 2:
        pts = np.asarray(raw, dtype=np.int64)
        return BorderPolyline(pts, (BorderSegment(0, len(raw) - 1, SegmentKind.STRAIGHT),))
    kept = douglas_peucker(raw, epsilon)
    path, stops = chain_bresenham(kept)
    segments = []
    start = 0
    for stop in stops:
        segments.append(BorderSegment(start, stop, SegmentKind.STRAIGHT))
        start = stop + 1
    points = np.asarray(path, dtype=np.int64)
    return BorderPolyline(points, tuple(segments))


def flexible_border(
    image: BinaryImage,
    valley: Valley,
    angle: SkewAngle,
    band_above: RowBand,
    band_below: RowBand,
    params: Optional[FlexParams] = None,
    *,
    labeling: Optional[ComponentLabeling] = None,
) -> tuple[BorderPolyline, list[IntersectionEvent]]:
    """Straight advance along the row angle with wall-trace detours.

    The border runs at the valley scanline. Where the line would enter ink,
    a detour walks around the obstacle: first along its exterior (the side
    away from band_above), then, if that attempt enters band_below's median
    zone or exhausts its budget, along the interior under band_above's
    median zone. The detour rejoins the line at the first point past the
    collision column whose next resume_lookahead line pixels are clear.
    When both attempts fail the border cuts straight through the ink and
    the event is recorded as amputated. With exterior_first unset the
    interior side is tried first.

    Returns the polyline and the chronological list of events; with no
    events the polyline equals straight_border's output exactly.
    """
    if params is None:
        params = FlexParams()
    h, w = image.height, image.width
    pixels = image.pixels
    tangent = angle.tangent
    shift = scanline_shift(w, angle)
    if not band_above.core_bottom < valley.scanline < band_below.core_top:
        raise DegenerateBands(
            f"valley {valley.scanline} not strictly between core zones "
            f"[{band_above.core_top}, {band_above.core_bottom}] and "
            f"[{band_below.core_top}, {band_below.core_bottom}]"
        )
    r0 = valley.scanline + shift
    if not 0 <= r0 < h:
        raise OutOfRaster(f"valley {valley.scanline} anchors outside the raster")
    max_detour = params.max_detour_steps or 4 * (h + w)
    lookahead = params.resume_lookahead

    holder = [labeling]

    def lab() -> ComponentLabeling:
        if holder[0] is None:
            holder[0] = connected_components(image)
        return holder[0]

    def bin_of(r: int, c: int) -> int:
        return iround(r - c * tangent) - shift

    def median_abort(band: RowBand):
        def inside(pt: Point) -> bool:
            return band.median_top <= bin_of(pt[0], pt[1]) <= band.median_bottom

        return inside

    def resume_at(collision_col: int):
        def ok(pt: Point) -> bool:
            r, c = pt
            if c <= collision_col:
                return False
            for j in range(1, lookahead + 1):
                cc = c + j
                if cc >= w:
                    return False
                rr = iround(r + j * tangent)
                if not 0 <= rr < h or pixels[rr, cc]:
                    return False
            return True

        return ok

    pts: list[Point] = []
    segments: list[BorderSegment] = []
    events: list[IntersectionEvent] = []
    seg_start = 0

    def close_straight() -> None:
        if len(pts) - 1 >= seg_start:
            segments.append(BorderSegment(seg_start, len(pts) - 1, SegmentKind.STRAIGHT))

    anchor_r, anchor_c = r0, 0
    cursor = 0
    while cursor < w:
        cols = np.arange(cursor, w, dtype=np.int64)
        rows = iround_array(anchor_r + (cols - anchor_c) * tangent)
        if rows.min() < 0 or rows.max() >= h:
            raise OutOfRaster("straight advance leaves the raster")
        on_ink = pixels[rows, cols] != 0
        hits = np.nonzero(on_ink)[0]
        take = int(hits[0]) if hits.size else len(cols)
        pts.extend(zip(rows[:take].tolist(), cols[:take].tolist()))
        if not hits.size:
            break
        hit = (int(rows[take]), int(cols[take]))

        resolved = None
        if pts:
            q0 = pts[-1]
            contact = (hit[0] - q0[0], hit[1] - q0[1])
            d = _DIR_INDEX[contact]
            component = int(lab().labels[hit])
            attempts = [
                (
                    Resolution.EXTERIOR,
                    WallSense.KEEP_INK_ON_LEFT,
                    DIRECTIONS[(d + 2) % 8],
                    band_below,
                ),
                (
                    Resolution.INTERIOR,
                    WallSense.KEEP_INK_ON_RIGHT,
                    DIRECTIONS[(d - 2) % 8],
                    band_above,
                ),
            ]
            if not params.exterior_first:
                attempts.reverse()
            for resolution, sense, heading, zone in attempts:
                try:
                    walk = trace_wall(
                        image,
                        q0,
                        heading,
                        sense,
                        stop=resume_at(hit[1]),
                        max_steps=max_detour,
                        labeling=lab(),
                        component=component,
                        abort=median_abort(zone),
                    )
                except (DetourAborted, StepBudgetExceeded):
                    continue
                resolved = (resolution, walk)
                break

        if resolved is not None:
            resolution, walk = resolved
            events.append(IntersectionEvent(hit, resolution, len(walk) - 1))
            close_straight()
            traced_start = len(pts)
            pts.extend(walk[1:])
            segments.append(
                BorderSegment(traced_start, len(pts) - 1, SegmentKind.TRACED)
            )
            seg_start = len(pts)
            anchor_r, anchor_c = pts[-1]
            cursor = anchor_c + 1
        else:
            events.append(IntersectionEvent(hit, Resolution.AMPUTATED, 0))
            run_end = take
            while run_end < len(cols) and on_ink[run_end]:
                run_end += 1
            pts.extend(zip(rows[take:run_end].tolist(), cols[take:run_end].tolist()))
            cursor = int(cols[run_end - 1]) + 1

    close_straight()
    points = np.asarray(pts, dtype=np.int64)
    return BorderPolyline(points, tuple(segments)), events
