"""Integer raster geometry: rounding, discrete lines, polyline distance."""

from __future__ import annotations

import math

import numpy as np

Point = tuple[int, int]  # (scanline, column)


def iround(x: float) -> int:
    """Round half up: floor(x + 0.5). Stable for negative x, unlike round()."""
    return math.floor(x + 0.5)


def iround_array(x: np.ndarray) -> np.ndarray:
    # same convention as iround, element-wise
    return np.floor(x + 0.5).astype(np.int64)


def bresenham(p: Point, q: Point) -> list[Point]:
    """All-octant Bresenham segment from p to q, both endpoints included."""
    r0, c0 = p
    r1, c1 = q
    dr = abs(r1 - r0)
    dc = abs(c1 - c0)
    sr = 1 if r1 >= r0 else -1
    sc = 1 if c1 >= c0 else -1
    err = dc - dr
    out = [(r0, c0)]
    r, c = r0, c0
    while (r, c) != (r1, c1):
        e2 = 2 * err
        if e2 > -dr:
            err -= dr
            c += sc
        if e2 < dc:
            err += dc
            r += sr
        out.append((r, c))
    return out


def chain_bresenham(vertices: list[Point]) -> tuple[list[Point], list[int]]:
    """Pixel path through all vertices in order.

    Returns (path, stops) where stops[i] is the path index of vertices[i+1];
    consecutive segments share their joint vertex exactly once.
    """
    if not vertices:
        return [], []
    path = [vertices[0]]
    stops = []
    for a, b in zip(vertices, vertices[1:]):
        path.extend(bresenham(a, b)[1:])
        stops.append(len(path) - 1)
    return path, stops


def perpendicular_distances(points: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distance from each point to the infinite line through a and b.

    Falls back to euclidean distance from a when a == b.
    """
    ab = (b - a).astype(float)
    norm = math.hypot(ab[0], ab[1])
    rel = points - a
    if norm == 0.0:
        return np.hypot(rel[:, 0], rel[:, 1])
    cross = rel[:, 0] * ab[1] - rel[:, 1] * ab[0]
    return np.abs(cross) / norm


def douglas_peucker(points: list[Point], epsilon: float) -> list[Point]:
    """Classic polyline simplification with a perpendicular-distance tolerance.

    Keeps both endpoints; iterative so deep recursion on long paths is not
    an issue.
    """
    n = len(points)
    if n <= 2:
        return list(points)
    pts = np.asarray(points, dtype=np.int64)
    keep = np.zeros(n, dtype=bool)
    keep[0] = keep[n - 1] = True
    stack = [(0, n - 1)]
    while stack:
        i0, i1 = stack.pop()
        if i1 - i0 < 2:
            continue
        inner = pts[i0 + 1 : i1]
        dists = perpendicular_distances(inner, pts[i0], pts[i1])
        j = int(np.argmax(dists))
        if dists[j] > epsilon:
            mid = i0 + 1 + j
            keep[mid] = True
            stack.append((i0, mid))
            stack.append((mid, i1))
    return [tuple(p) for p in pts[keep]]
