"""Plain-text serialization of borders and ground truth.

borders.txt, one border per stanza:

    border <index> method=<name> events=<n>
    seg STRAIGHT (r,c) (r,c) ...
    seg TRACED (r,c) ...

truth.txt, one component per line after a provenance comment:

    # component labels follow raster-scan discovery order
    component <id> row <k>
"""

from __future__ import annotations

import re

import numpy as np

from .borders import BorderPolyline, BorderSegment, SegmentKind
from .corpus import GroundTruth
from .errors import MalformedHeader

_POINT = re.compile(r"\((-?\d+),(-?\d+)\)")


def borders_to_text(borders, method: str, events_per_border) -> str:
    """Serialize borders; events_per_border lists each border's event count."""
    lines = []
    for index, (border, n_events) in enumerate(zip(borders, events_per_border)):
        lines.append(f"border {index} method={method} events={n_events}")
        for seg in border.segments:
            pts = border.points[seg.start : seg.end + 1]
            coords = " ".join(f"({r},{c})" for r, c in pts)
            lines.append(f"seg {seg.kind.name} {coords}")
    return "\n".join(lines) + "\n"


def parse_borders(text: str) -> list[tuple[int, str, int, BorderPolyline]]:
    """Inverse of borders_to_text: (index, method, events, polyline) tuples."""
    entries = []
    current = None
    points: list[tuple[int, int]] = []
    segments: list[BorderSegment] = []

    def flush():
        if current is None:
            return
        index, method, events = current
        polyline = BorderPolyline(np.asarray(points, dtype=np.int64), tuple(segments))
        entries.append((index, method, events, polyline))

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("border "):
            flush()
            m = re.fullmatch(r"border (\d+) method=(\S+) events=(\d+)", line)
            if not m:
                raise MalformedHeader(f"bad border line {lineno}: {raw!r}")
            current = (int(m.group(1)), m.group(2), int(m.group(3)))
            points, segments = [], []
        elif line.startswith("seg "):
            if current is None:
                raise MalformedHeader(f"seg before any border at line {lineno}")
            parts = line.split(maxsplit=2)
            if len(parts) < 3 or parts[1] not in SegmentKind.__members__:
                raise MalformedHeader(f"bad seg line {lineno}: {raw!r}")
            kind = SegmentKind[parts[1]]
            coords = _POINT.findall(parts[2])
            if not coords:
                raise MalformedHeader(f"seg without points at line {lineno}")
            start = len(points)
            points.extend((int(r), int(c)) for r, c in coords)
            segments.append(BorderSegment(start, len(points) - 1, kind))
        else:
            raise MalformedHeader(f"unrecognized line {lineno}: {raw!r}")
    flush()
    return entries


def truth_to_text(truth: GroundTruth) -> str:
    lines = ["# component labels follow raster-scan discovery order"]
    for label in sorted(truth.component_row):
        lines.append(f"component {label} row {truth.component_row[label]}")
    return "\n".join(lines) + "\n"


def parse_truth(text: str) -> GroundTruth:
    mapping: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = re.fullmatch(r"component (\d+) row (\d+)", line)
        if not m:
            raise MalformedHeader(f"bad truth line {lineno}: {raw!r}")
        mapping[int(m.group(1))] = int(m.group(2))
    return GroundTruth(mapping, len(mapping))
