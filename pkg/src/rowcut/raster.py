"""Bitonal and grayscale rasters with netpbm I/O.

Images are numpy-backed and immutable after construction. Binary pixels use
1 for ink and 0 for background, matching PBM's black=1 convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MalformedHeader, OutOfBounds, TruncatedPayload
from .geometry import Point


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class BinaryImage:
    """Bitonal raster; pixels[r, c] == 1 means ink."""

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pixels, dtype=np.uint8)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("binary image must be a non-empty 2-d array")
        if arr.size and int(arr.max()) > 1:
            raise ValueError("binary pixels must be 0 or 1")
        object.__setattr__(self, "pixels", _freeze(arr))

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def ink_count(self) -> int:
        return int(self.pixels.sum())

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryImage):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and bool(
            np.array_equal(self.pixels, other.pixels)
        )


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit grayscale raster; 0 is black, 255 is white."""

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pixels, dtype=np.uint8)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("gray image must be a non-empty 2-d array")
        object.__setattr__(self, "pixels", _freeze(arr))

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and bool(
            np.array_equal(self.pixels, other.pixels)
        )


_WHITESPACE = b" \t\r\n\v\f"


class _HeaderScanner:
    """Tokenizer for netpbm headers; comments run from '#' to end of line."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def skip_separators(self) -> None:
        data, n = self.data, len(self.data)
        while self.pos < n:
            b = self.data[self.pos : self.pos + 1]
            if b in b"#":
                nl = data.find(b"\n", self.pos)
                self.pos = n if nl < 0 else nl + 1
            elif b in _WHITESPACE:
                self.pos += 1
            else:
                return

    def token(self) -> bytes:
        self.skip_separators()
        start = self.pos
        n = len(self.data)
        while self.pos < n and self.data[self.pos : self.pos + 1] not in _WHITESPACE + b"#":
            self.pos += 1
        if self.pos == start:
            raise MalformedHeader("unexpected end of header")
        return self.data[start : self.pos]

    def integer(self) -> int:
        tok = self.token()
        if not tok.isdigit():
            raise MalformedHeader(f"expected integer, got {tok!r}")
        return int(tok)

    def binary_payload(self) -> bytes:
        # exactly one whitespace byte separates the header from binary raster
        if self.pos >= len(self.data) or self.data[self.pos : self.pos + 1] not in _WHITESPACE:
            raise MalformedHeader("missing separator before raster data")
        return self.data[self.pos + 1 :]


def read_pnm(data: bytes) -> BinaryImage | GrayImage:
    """Parse P1/P4 bitmaps into BinaryImage, P2/P5 graymaps into GrayImage.

    Raises MalformedHeader on bad magic, dimensions, or maxval, and
    TruncatedPayload when the raster holds fewer samples than promised.
    """
    scanner = _HeaderScanner(data)
    magic = scanner.token()
    if magic not in (b"P1", b"P2", b"P4", b"P5"):
        raise MalformedHeader(f"unsupported magic {magic!r}")
    width = scanner.integer()
    height = scanner.integer()
    if width < 1 or height < 1:
        raise MalformedHeader("dimensions must be positive")

    if magic == b"P1":
        bits = []
        pos = scanner.pos
        n = len(data)
        need = width * height
        while pos < n and len(bits) < need:
            ch = data[pos : pos + 1]
            if ch == b"#":
                nl = data.find(b"\n", pos)
                pos = n if nl < 0 else nl + 1
            elif ch in _WHITESPACE:
                pos += 1
            elif ch in (b"0", b"1"):
                bits.append(ch == b"1")
                pos += 1
            else:
                raise MalformedHeader(f"bad bitmap character {ch!r}")
        if len(bits) < need:
            raise TruncatedPayload(f"expected {need} bits, found {len(bits)}")
        arr = np.array(bits, dtype=np.uint8).reshape(height, width)
        return BinaryImage(arr)

    if magic == b"P4":
        row_bytes = (width + 7) // 8
        payload = scanner.binary_payload()
        need = row_bytes * height
        if len(payload) < need:
            raise TruncatedPayload(f"expected {need} raster bytes, found {len(payload)}")
        raw = np.frombuffer(payload[:need], dtype=np.uint8).reshape(height, row_bytes)
        bits = np.unpackbits(raw, axis=1)[:, :width]
        return BinaryImage(bits)

    maxval = scanner.integer()
    if not 1 <= maxval <= 255:
        raise MalformedHeader(f"maxval {maxval} outside 8-bit range")

    if magic == b"P2":
        samples = []
        need = width * height
        while len(samples) < need:
            try:
                samples.append(scanner.integer())
            except MalformedHeader as exc:
                if "end of header" in str(exc):
                    raise TruncatedPayload(
                        f"expected {need} samples, found {len(samples)}"
                    ) from None
                raise
        if any(s > maxval for s in samples):
            raise MalformedHeader("sample exceeds maxval")
        arr = np.array(samples, dtype=np.uint8).reshape(height, width)
        return GrayImage(arr)

    # P5
    payload = scanner.binary_payload()
    need = width * height
    if len(payload) < need:
        raise TruncatedPayload(f"expected {need} raster bytes, found {len(payload)}")
    arr = np.frombuffer(payload[:need], dtype=np.uint8).reshape(height, width)
    return GrayImage(arr)


def write_pbm(image: BinaryImage) -> bytes:
    """Serialize to binary PBM (P4), rows padded to byte boundaries."""
    packed = np.packbits(image.pixels, axis=1)
    header = f"P4\n{image.width} {image.height}\n".encode("ascii")
    return header + packed.tobytes()


def binarize(image: GrayImage, threshold: int = 128) -> BinaryImage:
    """Ink wherever the gray sample is strictly darker than the threshold."""
    if not 0 <= threshold <= 255:
        raise ValueError("threshold must be within [0, 255]")
    return BinaryImage((image.pixels < threshold).astype(np.uint8))


def render_overlay(image: BinaryImage, borders) -> bytes:
    """Render ink in black on white with border polylines in red, as P6.

    Border pixels win over ink. Raises OutOfBounds if any border point falls
    outside the raster.
    """
    h, w = image.height, image.width
    rgb = np.empty((h, w, 3), dtype=np.uint8)
    rgb[:] = 255
    rgb[image.pixels == 1] = 0
    for border in borders:
        pts = np.asarray(border.points, dtype=np.int64)
        if pts.size == 0:
            continue
        rs, cs = pts[:, 0], pts[:, 1]
        if rs.min() < 0 or rs.max() >= h or cs.min() < 0 or cs.max() >= w:
            raise OutOfBounds("border point outside the raster")
        rgb[rs, cs] = (255, 0, 0)
    header = f"P6\n{w} {h}\n255\n".encode("ascii")
    return header + rgb.tobytes()


def blank_page(height: int, width: int) -> BinaryImage:
    return BinaryImage(np.zeros((height, width), dtype=np.uint8))


def draw_points(image: BinaryImage, points: list[Point]) -> BinaryImage:
    """Copy of image with the given pixels set to ink."""
    arr = image.pixels.copy()
    for r, c in points:
        if not (0 <= r < arr.shape[0] and 0 <= c < arr.shape[1]):
            raise OutOfBounds(f"point ({r}, {c}) outside the raster")
        arr[r, c] = 1
    return BinaryImage(arr)
