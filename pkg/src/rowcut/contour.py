"""Hand-on-the-wall contour walking over background pixels.

The walker keeps one hand on a single ink component (the wall) and steps
through background pixels that stay 8-adjacent to it. Candidate steps are
scanned starting from the hand side and rotating toward the heading, so the
walker hugs the wall and turns into openings as soon as they appear; the
reverse direction is scanned last, making backtracking a dead-end-only move.
"""

from __future__ import annotations

from collections import deque
from enum import Enum
from typing import Callable, Optional

import numpy as np

from .errors import DetachedStart, DetourAborted, StepBudgetExceeded, UnknownLabel
from .geometry import Point
from .raster import BinaryImage

# eight unit steps, clockwise in screen coordinates (rows grow downward):
# E, SE, S, SW, W, NW, N, NE
DIRECTIONS: tuple[Point, ...] = (
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
    (0, -1),
    (-1, -1),
    (-1, 0),
    (-1, 1),
)
_DIR_INDEX = {step: i for i, step in enumerate(DIRECTIONS)}

# offsets from the current heading, scanned in order; +2 is the right hand,
# -2 the left hand, +4 the reverse
_SCAN_RIGHT = (2, 1, 0, -1, -2, -3, 4)
_SCAN_LEFT = (-2, -1, 0, 1, 2, 3, 4)


class WallSense(Enum):
    KEEP_INK_ON_RIGHT = "right"
    KEEP_INK_ON_LEFT = "left"


def _dilate3x3(mask: np.ndarray) -> np.ndarray:
    """Binary dilation by the 3x3 structuring element."""
    padded = np.pad(mask, 1)
    out = np.zeros_like(mask)
    h, w = mask.shape
    for dr in (0, 1, 2):
        for dc in (0, 1, 2):
            out |= padded[dr : dr + h, dc : dc + w]
    return out


def _flood_component(pixels: np.ndarray, seed: Point) -> np.ndarray:
    """8-connected ink component containing seed, as a boolean mask."""
    h, w = pixels.shape
    mask = np.zeros((h, w), dtype=bool)
    mask[seed] = True
    queue = deque([seed])
    while queue:
        r, c = queue.popleft()
        for dr, dc in DIRECTIONS:
            rr, cc = r + dr, c + dc
            if 0 <= rr < h and 0 <= cc < w and pixels[rr, cc] and not mask[rr, cc]:
                mask[rr, cc] = True
                queue.append((rr, cc))
    return mask


def trace_wall(
    image: BinaryImage,
    start: Point,
    initial_heading: Point,
    sense: WallSense,
    stop: Callable[[Point], bool],
    max_steps: int,
    *,
    labeling=None,
    component: Optional[int] = None,
    abort: Optional[Callable[[Point], bool]] = None,
) -> list[Point]:
    """Walk background pixels around one ink component.

    Returns the path walked, start included, ending at the first point where
    stop holds. The wall is the component containing the first ink neighbor
    of start (scan order E, SE, S, SW, W, NW, N, NE), or the one named by
    component when given alongside a labeling. Every step lands on an
    in-raster background pixel 8-adjacent to the wall component; foreign ink
    merely blocks movement.

    Raises DetachedStart when start is not a background pixel adjacent to
    the wall, StepBudgetExceeded when max_steps points were walked (or no
    legal move exists) before stop held, and DetourAborted as soon as abort
    holds at a reached point.
    """
    if initial_heading not in _DIR_INDEX:
        raise ValueError(f"initial_heading must be one of eight unit steps, got {initial_heading!r}")
    if max_steps < 1:
        raise ValueError("max_steps must be positive")
    pixels = image.pixels
    h, w = pixels.shape
    r0, c0 = start
    if not (0 <= r0 < h and 0 <= c0 < w) or pixels[r0, c0]:
        raise DetachedStart(f"start {start} is not an in-raster background pixel")

    if component is not None:
        if labeling is None:
            raise ValueError("component requires a labeling")
        if not 1 <= component <= labeling.count:
            raise UnknownLabel(f"label {component} outside [1, {labeling.count}]")
        comp_mask = labeling.labels == component
    else:
        seed = None
        for dr, dc in DIRECTIONS:
            rr, cc = r0 + dr, c0 + dc
            if 0 <= rr < h and 0 <= cc < w and pixels[rr, cc]:
                seed = (rr, cc)
                break
        if seed is None:
            raise DetachedStart(f"start {start} has no ink neighbor")
        if labeling is not None:
            comp_mask = labeling.labels == labeling.labels[seed]
        else:
            comp_mask = _flood_component(pixels, seed)

    comp_rows, comp_cols = np.nonzero(comp_mask)
    # window the walk to the component's bounding box plus slack; any pixel
    # 8-adjacent to the component lies strictly inside it
    top = max(0, int(comp_rows.min()) - 2)
    bottom = min(h, int(comp_rows.max()) + 3)
    left = max(0, int(comp_cols.min()) - 2)
    right = min(w, int(comp_cols.max()) + 3)
    ink_local = pixels[top:bottom, left:right] != 0
    near_local = _dilate3x3(comp_mask[top:bottom, left:right])

    def near(r: int, c: int) -> bool:
        if not (top <= r < bottom and left <= c < right):
            return False
        return bool(near_local[r - top, c - left])

    def blocked(r: int, c: int) -> bool:
        return bool(ink_local[r - top, c - left])

    if not near(r0, c0):
        raise DetachedStart(f"start {start} is not adjacent to the wall component")

    scan = _SCAN_RIGHT if sense is WallSense.KEEP_INK_ON_RIGHT else _SCAN_LEFT
    heading = _DIR_INDEX[initial_heading]
    path: list[Point] = [start]
    if abort is not None and abort(start):
        raise DetourAborted(f"abort holds at start {start}", path)
    if stop(start):
        return path

    r, c = r0, c0
    while len(path) < max_steps:
        moved = False
        for off in scan:
            d = (heading + off) % 8
            dr, dc = DIRECTIONS[d]
            rr, cc = r + dr, c + dc
            if not (0 <= rr < h and 0 <= cc < w):
                continue
            if not near(rr, cc) or blocked(rr, cc):
                continue
            r, c, heading = rr, cc, d
            moved = True
            break
        if not moved:
            raise StepBudgetExceeded(f"walker stuck at {(r, c)}", path)
        point = (r, c)
        path.append(point)
        if abort is not None and abort(point):
            raise DetourAborted(f"abort holds at {point}", path)
        if stop(point):
            return path
    raise StepBudgetExceeded(f"no stop within {max_steps} points", path)


def boundary_oracle(image: BinaryImage, labeling, label: int) -> set[Point]:
    """Every in-raster background pixel 8-adjacent to the labeled component.

    Exhaustive by construction; any correct wall trace around the component
    must stay inside this set.
    """
    if not 1 <= label <= labeling.count:
        raise UnknownLabel(f"label {label} outside [1, {labeling.count}]")
    mask = labeling.labels == label
    ring = _dilate3x3(mask) & (image.pixels == 0)
    rows, cols = np.nonzero(ring)
    return {(int(r), int(c)) for r, c in zip(rows, cols)}
