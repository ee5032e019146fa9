"""Synthetic multi-row pages with ground truth, and the method harness.

Pages are built from a seeded splitmix64 stream so a spec reproduces
bit-identically anywhere. Each row gets 5-10 word blobs confined to its
core zone; optional features grow from them:

* overlap: an ascender or descender bar crossing the inter-row valley by
  one or two pixels, placed so bars and marks from both rows interleave
  without touching.
* diacritic: a detached 2x2-3x3 mark above or below the core. When a word
  carries a left-edge descender, the mark may instead sit in the word gap
  straddling the bottom-edge border's interpolated link, reproducing the
  classic low-mark amputation.
* unresolvable: a bar from one word reaching into the middle of the next
  row's core through a word gap, leaving no detour path on either side.

Geometry keeps everything that is not meant to collide at least two pixels
apart, and keeps marks several scanlines clear of valleys so straight
advances at any plausibly estimated angle never meet them.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .config import Config
from .errors import RowcutError, SpecTooTight
from .geometry import iround
from .pipeline import (
    METHOD_BOTTOM_EDGE,
    METHOD_FLEXIBLE,
    METHOD_STRAIGHT,
    METHODS,
    analyze_page,
    build_borders,
)
from .raster import BinaryImage
from .segment import (
    BARRIER,
    ComponentLabeling,
    Segmentation,
    connected_components,
    count_amputations,
    cut_rows,
)

MIN_ROW_HEIGHT = 12
MIN_WIDTH = 90
MARGIN = 10

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """The splitmix64 generator; small, portable, and good enough for layout."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return (z ^ (z >> 31)) & _MASK64

    def random(self) -> float:
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform-ish integer in [lo, hi]; modulo bias is irrelevant here."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        return lo + self.next_u64() % (hi - lo + 1)

    def chance(self, p: float) -> bool:
        return self.random() < p

    def choice(self, seq):
        return seq[self.randint(0, len(seq) - 1)]


@dataclass(frozen=True)
class SynthSpec:
    rows: int = 4
    width: int = 400
    row_height: int = 75
    overlap_probability: float = 0.6
    diacritic_probability: float = 0.5
    unresolvable_probability: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.rows < 2:
            raise ValueError("rows must be at least 2")
        for name in ("overlap_probability", "diacritic_probability", "unresolvable_probability"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.width < 1 or self.row_height < 1:
            raise ValueError("width and row_height must be positive")


@dataclass(frozen=True)
class GroundTruth:
    """Intended row for every labeled component of the generated page.

    Component ids refer to raster-scan discovery order, the same numbering
    connected_components produces.
    """

    component_row: dict[int, int]
    component_count: int

    def __post_init__(self):
        if len(self.component_row) != self.component_count:
            raise ValueError("every component needs exactly one intended row")


@dataclass(frozen=True)
class MethodReport:
    method: str
    samples: int
    components: int
    amputations: int
    error_rate: float
    wall_time: float
    misassigned: int = 0  # informational; not part of error_rate

    def __post_init__(self):
        if not 0.0 <= self.error_rate <= 1.0:
            raise ValueError("error_rate must lie in [0, 1]")
        if self.amputations > self.components:
            raise ValueError("amputations cannot exceed components")


@dataclass(frozen=True)
class CompareResult:
    reports: tuple[MethodReport, ...]
    reductions: dict[str, Optional[float]]


class _Geometry:
    """Derived page geometry shared by the word layout and all features."""

    def __init__(self, spec: SynthSpec):
        if spec.row_height < MIN_ROW_HEIGHT:
            raise SpecTooTight(f"row_height {spec.row_height} below minimum {MIN_ROW_HEIGHT}")
        if spec.width < MIN_WIDTH:
            raise SpecTooTight(f"width {spec.width} below minimum {MIN_WIDTH}")
        self.height = spec.rows * spec.row_height
        self.width = spec.width
        self.core_h = max(4, int(round(0.45 * spec.row_height)))
        lead = (spec.row_height - self.core_h) // 2
        self.core_top = [k * spec.row_height + lead for k in range(spec.rows)]
        self.core_bottom = [t + self.core_h - 1 for t in self.core_top]
        self.valley = [
            (self.core_bottom[k] + self.core_top[k + 1]) // 2 for k in range(spec.rows - 1)
        ]
        # marks keep this many scanlines clear of valleys so a straight
        # advance misses them even when the estimated angle drifts a little
        drift = iround(spec.width * math.tan(math.radians(0.75)))
        self.valley_clearance = max(3, drift + 2)


@dataclass
class _Word:
    x0: int
    x1: int
    row: int
    descender: Optional[tuple[int, int, int]] = None  # (bx, bw, tip)


class _Page:
    def __init__(self, geo: _Geometry, rows: int):
        self.geo = geo
        self.canvas = np.zeros((geo.height, geo.width), dtype=np.uint8)
        self.owner = np.full((geo.height, geo.width), -1, dtype=np.int16)
        # reserved column intervals per inter-row gap; -1 is the top margin,
        # rows-1 the bottom margin
        self.reserved: dict[int, list[tuple[int, int]]] = {g: [] for g in range(-1, rows)}
        # bar count per (gap, kind); capped so the projection profile
        # between rows stays well under the band threshold
        self.bars: dict[tuple[int, str], int] = {}

    def paint(self, r0: int, r1: int, c0: int, c1: int, row: int) -> None:
        self.canvas[r0 : r1 + 1, c0 : c1 + 1] = 1
        self.owner[r0 : r1 + 1, c0 : c1 + 1] = row

    def paint_dome(self, r0: int, r1: int, c0: int, c1: int, row: int) -> None:
        """Half-ellipse blob: curved top, flat full-width bottom.

        Flat bottoms matter: the bottom-edge border anchors one pixel below
        the ink, and relaxing a curved bottom would let the simplified
        border slice slivers off every round word, drowning the method's
        real failure mode in shape artifacts.
        """
        cx = (c0 + c1) / 2.0
        ry = max(r1 - r0, 1)
        rx = max((c1 - c0) / 2.0, 0.5)
        rr, cc = np.mgrid[r0 : r1 + 1, c0 : c1 + 1]
        mask = ((rr - r1) / ry) ** 2 + ((cc - cx) / rx) ** 2 <= 1.0
        self.canvas[r0 : r1 + 1, c0 : c1 + 1][mask] = 1
        self.owner[r0 : r1 + 1, c0 : c1 + 1][mask] = row

    def reserve(self, gap: int, lo: int, hi: int) -> bool:
        for a, b in self.reserved[gap]:
            if lo <= b and a <= hi:
                return False
        self.reserved[gap].append((lo, hi))
        return True


def _layout_row(rng: SplitMix64, geo: _Geometry, k: int, page: _Page) -> list[_Word]:
    usable = geo.width - 2 * MARGIN
    n = rng.randint(5, 10)
    while n > 5 and usable // n < 14:
        n -= 1
    slot = usable // n
    if slot < 14:
        raise SpecTooTight(f"width {geo.width} cannot host {n} words")
    words = []
    for i in range(n):
        wid = rng.randint(6, slot - 8)
        jitter = rng.randint(0, slot - 6 - wid)
        x0 = MARGIN + i * slot + 3 + jitter
        x1 = x0 + wid - 1
        if rng.chance(0.5):
            page.paint(geo.core_top[k], geo.core_bottom[k], x0, x1, k)
        else:
            page.paint_dome(geo.core_top[k], geo.core_bottom[k], x0, x1, k)
        words.append(_Word(x0, x1, k))
    return words


def _place_bar(
    rng: SplitMix64, geo: _Geometry, page: _Page, word: _Word, k: int, down: bool
) -> Optional[tuple[int, int, int]]:
    """Ascender or descender bar crossing the inter-row valley.

    Bars are drawn from inside the core so they attach to dome-shaped words
    too. Interior bars run nearly the full gap, so a straight cut at any
    plausible valley scanline severs them; descenders at the word's left
    edge stay shallow, which keeps the bottom-edge link flat enough for a
    diacritic to straddle it later. One bar of each kind per gap keeps the
    projection profile between rows well under the band threshold.
    """
    at_edge = down and rng.chance(0.5)
    if down:
        gap_idx = k
        depth_cap = geo.core_top[k + 1] - 2 - geo.valley[gap_idx]
    else:
        gap_idx = k - 1
        depth_cap = geo.valley[gap_idx] - geo.core_bottom[k - 1] - 2
    if depth_cap < 1:
        return None
    kind = "edge" if at_edge else ("down" if down else "up")
    if page.bars.get((gap_idx, kind), 0) >= 1:
        return None
    # bars must be wide: relaxing a border with tolerance 2 collapses any
    # notch narrower than about 4 columns and would slice the bar's flank
    if at_edge:
        bw = min(rng.randint(4, 6), word.x1 - word.x0 + 1)
        d = rng.randint(1, min(2, depth_cap))
    else:
        bw = 4
        d = max(2, depth_cap - rng.randint(0, 2))
    if not at_edge and word.x1 - bw - 1 < word.x0 + 2:
        return None
    attempts = 1 if at_edge else 8
    for _ in range(attempts):
        bx = word.x0 if at_edge else rng.randint(word.x0 + 2, word.x1 - bw - 1)
        if not page.reserve(gap_idx, bx - 4, bx + bw + 3):
            continue
        if down:
            tip = geo.valley[gap_idx] + d
            page.paint(geo.core_top[k], tip, bx, bx + bw - 1, k)
        else:
            tip = geo.valley[gap_idx] - d
            page.paint(tip, geo.core_bottom[k], bx, bx + bw - 1, k)
        page.bars[(gap_idx, kind)] = 1
        return (bx, bw, tip)
    return None


def _link_level(v1: int, v2: int, c1: int, c2: int, c: int) -> int:
    # mirrors the bottom-edge border's per-column gap interpolation
    return iround(v1 + (v2 - v1) * (c - c1) / (c2 - c1))


def _place_straddle_mark(
    rng: SplitMix64, geo: _Geometry, page: _Page, left_word: _Word, word: _Word, k: int
) -> bool:
    """Detached mark in the word gap, sitting on the bottom-edge link.

    The link runs from the left word's bottom anchor down to the descender
    tip at this word's left edge; a 3x3 mark centered on the link level
    gets crossed by the relaxed border, so the bottom-edge method splits it
    between two rows while straight and flexible leave it whole.
    """
    bx, _, tip = word.descender
    ax = left_word.x1
    v1, v2 = geo.core_bottom[k] + 1, tip + 1
    if bx - ax < 7:
        return False
    size = 3
    lo_row = geo.core_bottom[k] + 3
    hi_row = geo.valley[k] - geo.valley_clearance - 1
    feasible = []
    for mc in range(ax + 2, bx - size - 1):
        levels = [_link_level(v1, v2, ax, bx, c) for c in range(mc, mc + size)]
        center = levels[size // 2]
        if max(levels) - min(levels) > 2:
            continue
        if center - 1 >= lo_row and center + 1 <= hi_row:
            feasible.append((mc, center))
    for _ in range(min(4, len(feasible))):
        mc, center = rng.choice(feasible)
        if page.reserve(k, mc - 2, mc + size + 1):
            page.paint(center - 1, center + 1, mc, mc + size - 1, k)
            return True
    return False


def _place_plain_mark(
    rng: SplitMix64, geo: _Geometry, page: _Page, word: _Word, k: int, rows: int
) -> bool:
    """Detached square mark above or below the word's core."""
    size = rng.randint(2, 3)
    offset = rng.randint(2, 3)
    prefer_below = rng.chance(0.5)
    if word.x1 - size + 1 < word.x0:
        return False
    for attempt_below in (prefer_below, not prefer_below):
        if attempt_below:
            gap_idx = k
            top = geo.core_bottom[k] + offset
            bottom = top + size - 1
            limit = geo.valley[k] - geo.valley_clearance if k < rows - 1 else geo.height - 2
            if bottom > limit:
                continue
        else:
            gap_idx = k - 1
            bottom = geo.core_top[k] - offset
            top = bottom - size + 1
            floor = geo.valley[k - 1] + geo.valley_clearance if k > 0 else 1
            if top < floor:
                continue
        for _ in range(6):
            mx = rng.randint(word.x0, word.x1 - size + 1)
            if page.reserve(gap_idx, mx - 2, mx + size + 1):
                page.paint(top, bottom, mx, mx + size - 1, k)
                return True
    return False


def _place_unresolvable(
    rng: SplitMix64,
    geo: _Geometry,
    page: _Page,
    word: _Word,
    k: int,
    next_words: list[_Word],
) -> bool:
    """Bar from this word reaching the middle of the next row's core.

    Lands in a word gap of the row below with clearance on both sides, so
    an exterior detour runs into that row's median zone and an interior
    detour climbs into this row's, leaving amputation as the only outcome.
    """
    bw = rng.randint(2, 3)
    tip = geo.core_top[k + 1] + int(0.45 * geo.core_h)
    if word.x1 - bw < word.x0 + 1:
        return False
    for _ in range(8):
        bx = rng.randint(word.x0 + 1, word.x1 - bw)
        clear = all(bx + bw + 2 < w2.x0 or w2.x1 < bx - 3 for w2 in next_words)
        if not clear:
            continue
        if page.reserve(k, bx - 6, bx + bw + 5):
            page.paint(geo.core_top[k], tip, bx, bx + bw - 1, k)
            return True
    return False


def generate(spec: SynthSpec) -> tuple[BinaryImage, GroundTruth]:
    """Deterministic synthetic page plus the intended row of each component."""
    geo = _Geometry(spec)
    rng = SplitMix64(spec.seed)
    page = _Page(geo, spec.rows)

    words_by_row = [_layout_row(rng, geo, k, page) for k in range(spec.rows)]

    for k in range(spec.rows):
        words = words_by_row[k]
        for i, word in enumerate(words):
            if rng.chance(spec.overlap_probability):
                directions = []
                if k < spec.rows - 1:
                    directions.append(True)
                if k > 0:
                    directions.append(False)
                down = rng.choice(directions)
                placed = _place_bar(rng, geo, page, word, k, down)
                if placed and down:
                    word.descender = placed
            if k < spec.rows - 1 and rng.chance(spec.unresolvable_probability):
                _place_unresolvable(rng, geo, page, word, k, words_by_row[k + 1])
            if rng.chance(spec.diacritic_probability):
                done = False
                if i > 0 and word.descender is not None and word.descender[0] == word.x0:
                    done = _place_straddle_mark(rng, geo, page, words[i - 1], word, k)
                if not done:
                    _place_plain_mark(rng, geo, page, word, k, spec.rows)

    image = BinaryImage(page.canvas)
    labeling = connected_components(image)
    component_row = _ownership(labeling, page.owner)
    return image, GroundTruth(component_row, labeling.count)


def _ownership(labeling: ComponentLabeling, owner: np.ndarray) -> dict[int, int]:
    ink = labeling.labels > 0
    labs = labeling.labels[ink].astype(np.int64)
    rows = owner[ink].astype(np.int64)
    if rows.size == 0:
        return {}
    if rows.min() < 0:
        raise RuntimeError("generator painted ink without an owner")
    span = int(rows.max()) + 1
    pairs = np.unique(labs * span + rows)
    owners_of = pairs // span
    _, counts = np.unique(owners_of, return_counts=True)
    if np.any(counts != 1):
        raise RuntimeError("generator merged ink from different rows")
    return {int(lab): int(row) for lab, row in zip(owners_of, pairs % span)}


def corpus_specs(
    samples: int,
    seed: int,
    rows: int = 4,
    width: int = 400,
    row_height: int = 75,
    overlap: float = 0.6,
    diacritic: float = 0.5,
    unresolvable: float = 0.0,
) -> list[SynthSpec]:
    """Per-sample specs with seeds drawn from one master stream."""
    if samples < 1:
        raise ValueError("samples must be at least 1")
    stream = SplitMix64(seed)
    return [
        SynthSpec(
            rows=rows,
            width=width,
            row_height=row_height,
            overlap_probability=overlap,
            diacritic_probability=diacritic,
            unresolvable_probability=unresolvable,
            seed=stream.next_u64(),
        )
        for _ in range(samples)
    ]


def _count_misassigned(
    labeling: ComponentLabeling, seg: Segmentation, truth: GroundTruth
) -> int:
    """Components wholly on one row that is not their intended row."""
    ink = (labeling.labels > 0) & (seg.assignment != BARRIER)
    if not np.any(ink):
        return 0
    labs = labeling.labels[ink].astype(np.int64)
    rows = seg.assignment[ink].astype(np.int64)
    pairs = np.unique(labs * seg.row_count + rows)
    owners_of = pairs // seg.row_count
    uniq, counts = np.unique(owners_of, return_counts=True)
    single = set(int(u) for u in uniq[counts == 1])
    wrong = 0
    for pair in pairs:
        label = int(pair // seg.row_count)
        if label in single and truth.component_row.get(label) != int(pair % seg.row_count):
            wrong += 1
    return wrong


def compare(
    specs: Sequence[SynthSpec],
    methods: Sequence[str] = METHODS,
    config: Optional[Config] = None,
) -> CompareResult:
    """Run each method over each generated page under one shared analysis.

    Wall time covers border construction and row cutting only; generation,
    skew/band analysis, and metric evaluation are shared across methods and
    excluded. A sample that fails analysis or any method is dropped for all
    methods so the aggregates stay comparable.
    """
    methods = list(methods)
    if not specs:
        raise ValueError("compare needs at least one spec")
    if not methods:
        raise ValueError("compare needs at least one method")
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}")
    config = config or Config()

    totals = {
        m: {"components": 0, "amputations": 0, "wall": 0.0, "misassigned": 0}
        for m in methods
    }
    used = 0
    for spec in specs:
        image, truth = generate(spec)
        try:
            page = analyze_page(image, config)
            runs = {}
            for m in methods:
                t0 = time.perf_counter()
                borders, _events = build_borders(page, m, config)
                seg = cut_rows(image, borders)
                elapsed = time.perf_counter() - t0
                runs[m] = (seg, elapsed)
        except RowcutError:
            continue
        used += 1
        for m, (seg, elapsed) in runs.items():
            t = totals[m]
            t["components"] += page.labeling.count
            t["amputations"] += count_amputations(page.labeling, seg)
            t["misassigned"] += _count_misassigned(page.labeling, seg, truth)
            t["wall"] += elapsed

    reports = tuple(
        MethodReport(
            method=m,
            samples=used,
            components=totals[m]["components"],
            amputations=totals[m]["amputations"],
            error_rate=(
                totals[m]["amputations"] / totals[m]["components"]
                if totals[m]["components"]
                else 0.0
            ),
            wall_time=totals[m]["wall"],
            misassigned=totals[m]["misassigned"],
        )
        for m in methods
    )
    reductions: dict[str, Optional[float]] = {}
    by_name = {r.method: r for r in reports}
    if METHOD_FLEXIBLE in by_name:
        flex_rate = by_name[METHOD_FLEXIBLE].error_rate
        for m in methods:
            if m == METHOD_FLEXIBLE:
                continue
            base = by_name[m].error_rate
            reductions[m] = None if base == 0 else (1.0 - flex_rate / base) * 100.0
    return CompareResult(reports, reductions)


def format_report_table(result: CompareResult) -> str:
    """Aligned plain-text table plus reduction lines."""
    headers = (
        "method",
        "samples",
        "components",
        "amputations",
        "error_rate",
        "misassigned",
        "wall_time_s",
    )
    rows = [headers]
    for r in result.reports:
        rows.append(
            (
                r.method,
                str(r.samples),
                str(r.components),
                str(r.amputations),
                f"{r.error_rate:.6f}",
                str(r.misassigned),
                f"{r.wall_time:.3f}",
            )
        )
    widths = [max(len(row[i]) for row in rows) for i in range(len(headers))]
    lines = [
        "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
        for row in rows
    ]
    for base, value in result.reductions.items():
        shown = "undefined" if value is None else f"{value:.1f}%"
        lines.append(f"reduction vs {base}: {shown}")
    return "\n".join(lines) + "\n"


def reports_to_csv(result: CompareResult) -> str:
    lines = ["method,samples,components,amputations,error_rate,wall_time_s"]
    for r in result.reports:
        lines.append(
            f"{r.method},{r.samples},{r.components},{r.amputations},"
            f"{r.error_rate:.6f},{r.wall_time:.6f}"
        )
    return "\n".join(lines) + "\n"
