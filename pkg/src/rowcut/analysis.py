"""Global skew estimation and projection-profile row analysis.

Scanlines are binned along a shared skew direction: pixel (r, c) falls in bin
iround(r - c*tan(angle)), shifted so bins start at zero. All border
construction reuses the same binning so band coordinates stay comparable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyImage, NoBands
from .geometry import iround, iround_array
from .raster import BinaryImage

MAX_SKEW_RADIANS = 0.1745


@dataclass(frozen=True)
class SkewAngle:
    """Dominant row direction in radians, clamped to roughly +/-10 degrees."""

    radians: float

    def __post_init__(self):
        clamped = min(MAX_SKEW_RADIANS, max(-MAX_SKEW_RADIANS, self.radians))
        object.__setattr__(self, "radians", float(clamped))

    @property
    def tangent(self) -> float:
        return math.tan(self.radians)


def scanline_shift(width: int, angle: SkewAngle) -> int:
    """Offset subtracted from raw bins so the topmost bin is zero.

    Derivable from the image width alone, so any consumer of a profile can
    map between raster scanlines and bin indices without extra state.
    """
    return min(0, iround(-(width - 1) * angle.tangent))


@dataclass(frozen=True, eq=False)
class Profile:
    """Ink counts per skew-aligned scanline bin."""

    counts: np.ndarray
    angle: SkewAngle
    width: int

    def __post_init__(self):
        arr = np.ascontiguousarray(self.counts, dtype=np.int64)
        if arr.ndim != 1:
            raise ValueError("profile counts must be 1-d")
        arr.flags.writeable = False
        object.__setattr__(self, "counts", arr)

    def __len__(self) -> int:
        return len(self.counts)

    def bin_of(self, r: int, c: int) -> int:
        """Bin index of raster pixel (r, c) under this profile's angle."""
        return iround(r - c * self.angle.tangent) - scanline_shift(self.width, self.angle)


def _bin_count(height: int, width: int, angle: SkewAngle) -> int:
    shift = iround(-(width - 1) * angle.tangent)
    return (height - 1 + max(0, shift)) - min(0, shift) + 1


def projection_profile(image: BinaryImage, angle: SkewAngle) -> Profile:
    """Histogram of ink over skew-aligned scanline bins.

    The counts vector covers every bin the raster can reach at this angle,
    so it sums to the total ink count.
    """
    h, w = image.height, image.width
    length = _bin_count(h, w, angle)
    rows, cols = np.nonzero(image.pixels)
    if rows.size == 0:
        counts = np.zeros(length, dtype=np.int64)
    else:
        bins = iround_array(rows - cols * angle.tangent) - scanline_shift(w, angle)
        counts = np.bincount(bins, minlength=length).astype(np.int64)
    return Profile(counts, angle, w)


def estimate_skew(
    image: BinaryImage,
    range_deg: float = 10.0,
    step_deg: float = 0.25,
) -> SkewAngle:
    """Exhaustive grid search for the angle maximizing profile variance.

    Sharp row alignment concentrates ink into few bins, which maximizes the
    variance of the bin counts. Ties prefer the smallest magnitude, then the
    negative candidate.
    """
    if range_deg <= 0 or step_deg <= 0:
        raise ValueError("range and step must be positive")
    rows, cols = np.nonzero(image.pixels)
    if rows.size == 0:
        raise EmptyImage("cannot estimate skew without ink")
    h, w = image.height, image.width
    rows = rows.astype(np.float64)
    cols = cols.astype(np.float64)

    steps = int(round(2 * range_deg / step_deg))
    best_key = None
    best_angle = None
    for k in range(steps + 1):
        deg = -range_deg + k * step_deg
        angle = SkewAngle(math.radians(deg))
        length = _bin_count(h, w, angle)
        bins = iround_array(rows - cols * angle.tangent) - scanline_shift(w, angle)
        counts = np.bincount(bins, minlength=length)
        variance = float(np.var(counts))
        # maximize variance; ties favor (|angle|, angle) ascending
        key = (-variance, abs(angle.radians), angle.radians)
        if best_key is None or key < best_key:
            best_key = key
            best_angle = angle
    return best_angle


@dataclass(frozen=True)
class RowBand:
    """One text row's vertical extent in profile bins.

    top/bottom delimit the thresholded run, core the half-peak run inside
    it, and the median zone the central part of the core.
    """

    top: int
    bottom: int
    core_top: int
    core_bottom: int
    median_top: int
    median_bottom: int

    def __post_init__(self):
        ordered = (
            self.top
            <= self.core_top
            <= self.median_top
            <= self.median_bottom
            <= self.core_bottom
            <= self.bottom
        )
        if not ordered:
            raise ValueError(f"band bounds out of order: {self}")


@dataclass(frozen=True)
class Valley:
    """Separating scanline bin between two consecutive bands."""

    scanline: int
    above: int
    below: int

    def __post_init__(self):
        if self.below != self.above + 1:
            raise ValueError("valley must separate consecutive bands")


def _runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """Maximal [start, stop] index runs where mask is true."""
    idx = np.nonzero(mask)[0]
    if idx.size == 0:
        return []
    breaks = np.nonzero(np.diff(idx) > 1)[0]
    starts = np.concatenate(([0], breaks + 1))
    stops = np.concatenate((breaks, [idx.size - 1]))
    return [(int(idx[a]), int(idx[b])) for a, b in zip(starts, stops)]


def _median_zone(core_top: int, core_bottom: int) -> tuple[int, int]:
    # central 40% of the core, offsets rounded inward; degenerate cores
    # collapse to the single center scanline
    h = core_bottom - core_top + 1
    off = math.ceil(0.3 * h)
    mt, mb = core_top + off, core_bottom - off
    if mt > mb:
        center = (core_top + core_bottom) // 2
        return center, center
    return mt, mb


def detect_row_bands(
    profile: Profile,
    smooth_window: int = 9,
    band_threshold: float = 0.2,
) -> tuple[list[RowBand], list[Valley]]:
    """Find text rows as profile runs above a fraction of the global peak.

    The profile is smoothed with a centered moving average (zero padding at
    the edges). Each band's core is the half-peak run containing its peak.
    Valleys sit at the minimum strictly between consecutive bands, topmost
    on ties; when two bands touch, the upper band's bottom stands in.
    """
    if smooth_window < 1 or smooth_window % 2 == 0:
        raise ValueError("smooth_window must be odd and positive")
    if not 0.0 < band_threshold < 1.0:
        raise ValueError("band_threshold must sit strictly between 0 and 1")

    counts = profile.counts.astype(np.float64)
    if smooth_window == 1:
        smoothed = counts
    else:
        # centered slice of the full convolution; numpy's "same" mode would
        # return the kernel's length when the profile is shorter than it
        kernel = np.full(smooth_window, 1.0 / smooth_window)
        full = np.convolve(counts, kernel, mode="full")
        start = (smooth_window - 1) // 2
        smoothed = full[start : start + len(counts)]

    peak = smoothed.max() if smoothed.size else 0.0
    if peak <= 0.0:
        raise NoBands("profile has no ink")
    band_runs = _runs(smoothed > band_threshold * peak)
    if not band_runs:
        raise NoBands("no run clears the band threshold")

    bands = []
    for top, bottom in band_runs:
        local = smoothed[top : bottom + 1]
        peak_at = top + int(np.argmax(local))
        half = 0.5 * smoothed[peak_at]
        core_top = peak_at
        while core_top > top and smoothed[core_top - 1] > half:
            core_top -= 1
        core_bottom = peak_at
        while core_bottom < bottom and smoothed[core_bottom + 1] > half:
            core_bottom += 1
        mt, mb = _median_zone(core_top, core_bottom)
        bands.append(RowBand(top, bottom, core_top, core_bottom, mt, mb))

    valleys = []
    for k in range(len(bands) - 1):
        lo = bands[k].bottom + 1
        hi = bands[k + 1].top - 1
        if lo > hi:
            scanline = bands[k].bottom
        else:
            between = smoothed[lo : hi + 1]
            scanline = lo + int(np.argmin(between))
        valleys.append(Valley(scanline, k, k + 1))
    return bands, valleys
