"""Connected components and border-driven row segmentation.

cut_rows turns a stack of borders into a per-pixel row assignment: border
pixels form a barrier, the rest of the raster is flood-filled with
4-connectivity, and each region takes the row index implied by how many
borders pass above it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import BadRowIndex, BordersCross, SizeMismatch
from .raster import BinaryImage

BARRIER = -1

_FOUR_CONN = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=np.uint8)
_EIGHT_CONN = np.ones((3, 3), dtype=np.uint8)


@dataclass(frozen=True, eq=False)
class ComponentLabeling:
    """Ink component labels, 0 for background, 1..count in raster-scan order
    of each component's first pixel."""

    labels: np.ndarray
    count: int

    def __post_init__(self):
        arr = np.ascontiguousarray(self.labels, dtype=np.int32)
        arr.flags.writeable = False
        object.__setattr__(self, "labels", arr)


@dataclass(frozen=True, eq=False)
class Segmentation:
    """Per-pixel row assignment; BARRIER marks pixels consumed by borders."""

    assignment: np.ndarray
    row_count: int

    def __post_init__(self):
        arr = np.ascontiguousarray(self.assignment, dtype=np.int32)
        arr.flags.writeable = False
        object.__setattr__(self, "assignment", arr)
        if self.row_count < 1:
            raise ValueError("row_count must be positive")


def connected_components(image: BinaryImage) -> ComponentLabeling:
    """8-connected ink components, numbered by first appearance in raster order."""
    raw, n = ndimage.label(image.pixels, structure=_EIGHT_CONN)
    if n == 0:
        return ComponentLabeling(raw.astype(np.int32), 0)
    flat = raw.ravel()
    values, first = np.unique(flat, return_index=True)
    nonzero = values != 0
    values, first = values[nonzero], first[nonzero]
    order = np.argsort(first, kind="stable")
    remap = np.zeros(n + 1, dtype=np.int32)
    remap[values[order]] = np.arange(1, n + 1, dtype=np.int32)
    return ComponentLabeling(remap[raw], int(n))


def _column_spans(borders, width: int):
    """Per-border topmost and bottommost barrier row in every column."""
    tops = np.full((len(borders), width), np.iinfo(np.int32).max, dtype=np.int64)
    bots = np.full((len(borders), width), -1, dtype=np.int64)
    for k, border in enumerate(borders):
        pts = np.asarray(border.points, dtype=np.int64)
        np.minimum.at(tops[k], pts[:, 1], pts[:, 0])
        np.maximum.at(bots[k], pts[:, 1], pts[:, 0])
    return tops, bots


def _check_crossings(borders, tops, bots, shape) -> None:
    h, w = shape
    canvas = np.full((h, w), -1, dtype=np.int32)
    for k, border in enumerate(borders):
        pts = np.asarray(border.points, dtype=np.int64)
        owners = canvas[pts[:, 0], pts[:, 1]]
        clash = np.nonzero((owners >= 0) & (owners != k))[0]
        for i in clash:
            point = (int(pts[i, 0]), int(pts[i, 1]))
            other = borders[owners[i]]
            other_pts = other.points
            own_ends = (tuple(border.points[0]), tuple(border.points[-1]))
            other_ends = (tuple(other_pts[0]), tuple(other_pts[-1]))
            if point in own_ends and point in other_ends:
                continue
            raise BordersCross(f"borders {owners[i]} and {k} share pixel {point}")
        canvas[pts[:, 0], pts[:, 1]] = k
    for k in range(len(borders) - 1):
        both = (bots[k] >= 0) & (bots[k + 1] >= 0)
        if np.any(tops[k][both] > bots[k + 1][both]):
            raise BordersCross(f"borders {k} and {k + 1} swap vertical order")


def cut_rows(image: BinaryImage, borders) -> Segmentation:
    """Assign every pixel to a row given top-to-bottom border polylines.

    Regions not crossed by any border take the count of borders strictly
    above them. Pockets sealed off by detours inherit the row of the nearest
    region reachable through the barrier (4-connected, breadth-first, so the
    choice is deterministic). Raises BordersCross when borders share a
    non-endpoint pixel or swap vertical order in some column.
    """
    h, w = image.height, image.width
    for border in borders:
        pts = border.points
        if pts[0][1] != 0 or pts[-1][1] != w - 1:
            raise ValueError("border must span the full image width")
    starts = [border.points[0][0] for border in borders]
    if any(a > b for a, b in zip(starts, starts[1:])):
        raise ValueError("borders must be ordered top to bottom")

    tops, bots = _column_spans(borders, w)
    _check_crossings(borders, tops, bots, (h, w))

    barrier = np.zeros((h, w), dtype=bool)
    for border in borders:
        pts = np.asarray(border.points, dtype=np.int64)
        barrier[pts[:, 0], pts[:, 1]] = True

    regions, n_regions = ndimage.label(~barrier, structure=_FOUR_CONN)
    row_count = len(borders) + 1
    if n_regions == 0:
        # barrier covers everything; resolve all of it below
        assignment = np.full((h, w), BARRIER, dtype=np.int32)
        return Segmentation(assignment, row_count)

    flat = regions.ravel()
    values, first = np.unique(flat, return_index=True)
    nonzero = values != 0
    values, first = values[nonzero], first[nonzero]

    region_row = np.full(n_regions + 1, -2, dtype=np.int32)
    pockets = []
    for value, flat_idx in zip(values, first):
        r, c = divmod(int(flat_idx), w)
        above = int(np.sum(bots[:, c] < r)) if borders else 0
        inside = bool(np.any((tops[:, c] <= r) & (r <= bots[:, c]))) if borders else False
        if inside:
            pockets.append((int(value), r, c))
        else:
            region_row[value] = above

    for value, r, c in pockets:
        row = _resolve_pocket(regions, region_row, (r, c))
        if row is None:
            # nothing resolved anywhere reachable; fall back to the count rule
            row = int(np.sum(bots[:, c] < r))
        region_row[value] = row

    assignment = np.where(barrier, np.int32(BARRIER), region_row[regions])
    return Segmentation(assignment.astype(np.int32), row_count)


def _resolve_pocket(regions, region_row, seed):
    """Breadth-first search through barrier and unresolved pixels for the
    nearest pixel whose region already has a row."""
    h, w = regions.shape
    seen = {seed}
    queue = deque([seed])
    while queue:
        r, c = queue.popleft()
        for dr, dc in ((-1, 0), (0, -1), (0, 1), (1, 0)):
            rr, cc = r + dr, c + dc
            if not (0 <= rr < h and 0 <= cc < w) or (rr, cc) in seen:
                continue
            value = regions[rr, cc]
            if value > 0 and region_row[value] >= 0:
                return int(region_row[value])
            seen.add((rr, cc))
            queue.append((rr, cc))
    return None


def count_amputations(labeling: ComponentLabeling, segmentation: Segmentation) -> int:
    """Number of ink components whose pixels land in two or more rows.

    Barrier pixels carry no vote, and a component wholly assigned to a
    single row counts as intact even if that row is the wrong one.
    """
    if labeling.labels.shape != segmentation.assignment.shape:
        raise SizeMismatch(
            f"labeling {labeling.labels.shape} vs segmentation {segmentation.assignment.shape}"
        )
    mask = (labeling.labels > 0) & (segmentation.assignment != BARRIER)
    if not np.any(mask):
        return 0
    labs = labeling.labels[mask].astype(np.int64)
    rows = segmentation.assignment[mask].astype(np.int64)
    pairs = np.unique(labs * segmentation.row_count + rows)
    owners = pairs // segmentation.row_count
    _, counts = np.unique(owners, return_counts=True)
    return int(np.sum(counts >= 2))


def extract_row_images(
    image: BinaryImage, segmentation: Segmentation, row: int
) -> BinaryImage:
    """Tight crop of the ink assigned to one row.

    Rows that received no ink come back as a single background pixel so the
    result is always a valid image.
    """
    if image.pixels.shape != segmentation.assignment.shape:
        raise SizeMismatch(
            f"image {image.pixels.shape} vs segmentation {segmentation.assignment.shape}"
        )
    if not 0 <= row < segmentation.row_count:
        raise BadRowIndex(f"row {row} outside [0, {segmentation.row_count})")
    mask = (segmentation.assignment == row) & (image.pixels == 1)
    rows, cols = np.nonzero(mask)
    if rows.size == 0:
        return BinaryImage(np.zeros((1, 1), dtype=np.uint8))
    crop = mask[rows.min() : rows.max() + 1, cols.min() : cols.max() + 1]
    return BinaryImage(crop.astype(np.uint8))
