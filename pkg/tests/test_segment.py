"""Component labeling, border-driven row cutting, amputation counting."""

from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from rowcut.errors import BadRowIndex, BordersCross, SizeMismatch
from rowcut.raster import BinaryImage, blank_page, draw_points
from rowcut.segment import (
    BARRIER,
    ComponentLabeling,
    Segmentation,
    connected_components,
    count_amputations,
    cut_rows,
    extract_row_images,
)


def _ccl_oracle(pixels):
    """Two-pass union-find 8-connected labeling, numbered in raster order of
    each component's first pixel. Shares no code with the implementation."""
    h, w = pixels.shape
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for r in range(h):
        for c in range(w):
            if not pixels[r, c]:
                continue
            parent.setdefault((r, c), (r, c))
            for dr, dc in ((-1, -1), (-1, 0), (-1, 1), (0, -1)):
                rr, cc = r + dr, c + dc
                if 0 <= rr < h and 0 <= cc < w and pixels[rr, cc]:
                    ra, rb = find((rr, cc)), find((r, c))
                    if ra != rb:
                        parent[rb] = ra
    labels = np.zeros((h, w), dtype=np.int32)
    numbered = {}
    for r in range(h):
        for c in range(w):
            if pixels[r, c]:
                root = find((r, c))
                if root not in numbered:
                    numbered[root] = len(numbered) + 1
                labels[r, c] = numbered[root]
    return labels, len(numbered)


class TestConnectedComponents:
    def test_frozen_grid(self):
        img = BinaryImage(
            np.array(
                [
                    [1, 1, 0, 0],
                    [0, 0, 0, 1],
                    [1, 0, 0, 1],
                ]
            )
        )
        got = connected_components(img)
        assert got.count == 3
        assert got.labels.tolist() == [
            [1, 1, 0, 0],
            [0, 0, 0, 2],
            [3, 0, 0, 2],
        ]

    def test_diagonal_touch_is_one_component(self):
        img = BinaryImage(np.array([[1, 0], [0, 1]]))
        got = connected_components(img)
        assert got.count == 1
        assert got.labels.tolist() == [[1, 0], [0, 1]]

    def test_blank(self):
        got = connected_components(blank_page(3, 3))
        assert got.count == 0
        assert not got.labels.any()

    @given(arrays(np.uint8, (8, 10), elements=st.integers(0, 1)))
    @settings(max_examples=120)
    def test_matches_union_find_oracle(self, arr):
        got = connected_components(BinaryImage(arr))
        want_labels, want_count = _ccl_oracle(arr)
        assert got.count == want_count
        assert np.array_equal(got.labels, want_labels)

    def test_labels_are_immutable(self):
        got = connected_components(blank_page(2, 2))
        with pytest.raises(ValueError):
            got.labels[0, 0] = 5


def _border(points):
    return SimpleNamespace(points=list(points))


def _row_border(row, width):
    return _border((row, c) for c in range(width))


class TestCutRows:
    def test_two_straight_borders(self):
        img = blank_page(12, 12)
        seg = cut_rows(img, [_row_border(3, 12), _row_border(8, 12)])
        assert seg.row_count == 3
        a = seg.assignment
        assert (a[:3] == 0).all()
        assert (a[3] == BARRIER).all()
        assert (a[4:8] == 1).all()
        assert (a[8] == BARRIER).all()
        assert (a[9:] == 2).all()

    def test_no_borders_single_row(self):
        seg = cut_rows(blank_page(4, 4), [])
        assert seg.row_count == 1
        assert (seg.assignment == 0).all()

    def test_pocket_inherits_nearest_resolved_row(self):
        # barrier seals cell (3,0) against the left edge;
        # breadth-first through the lid reaches row 0 first
        width = 12
        points = [(2, 0), (3, 1), (4, 0)] + [(4, c) for c in range(1, width)]
        seg = cut_rows(blank_page(6, width), [_border(points)])
        assert seg.assignment[3, 0] == 0
        assert seg.assignment[0, 0] == 0
        assert seg.assignment[5, 5] == 1

    def test_barrier_covering_everything(self):
        seg = cut_rows(blank_page(1, 3), [_row_border(0, 3)])
        assert (seg.assignment == BARRIER).all()
        assert seg.row_count == 2

    def test_shared_pixel_raises(self):
        b0 = _row_border(3, 12)
        b1 = _border(
            [(5, c) for c in range(6)] + [(4, 6), (3, 7), (4, 8)] + [(5, c) for c in range(9, 12)]
        )
        with pytest.raises(BordersCross, match=r"share pixel \(3, 7\)"):
            cut_rows(blank_page(10, 12), [b0, b1])

    def test_shared_endpoints_are_tolerated(self):
        # both borders may pinch together at the raster's edge columns
        b0 = _border([(3, 0)] + [(2, c) for c in range(1, 12)])
        b1 = _border([(3, 0)] + [(5, c) for c in range(1, 12)])
        seg = cut_rows(blank_page(8, 12), [b0, b1])
        assert seg.row_count == 3

    def test_span_inversion_raises(self):
        b0 = _border([(2, c) for c in range(11)] + [(6, 11), (7, 11), (8, 11)])
        b1 = _row_border(5, 12)
        with pytest.raises(BordersCross, match="swap vertical order"):
            cut_rows(blank_page(10, 12), [b0, b1])

    def test_partial_width_rejected(self):
        with pytest.raises(ValueError, match="full image width"):
            cut_rows(blank_page(6, 8), [_border((2, c) for c in range(1, 8))])
        with pytest.raises(ValueError, match="full image width"):
            cut_rows(blank_page(6, 8), [_border((2, c) for c in range(7))])

    def test_unordered_borders_rejected(self):
        with pytest.raises(ValueError, match="top to bottom"):
            cut_rows(blank_page(12, 6), [_row_border(8, 6), _row_border(3, 6)])

    def test_assignment_immutable_and_validated(self):
        seg = cut_rows(blank_page(4, 4), [])
        with pytest.raises(ValueError):
            seg.assignment[0, 0] = 7
        with pytest.raises(ValueError, match="row_count"):
            Segmentation(np.zeros((2, 2), dtype=np.int32), 0)

    @given(
        st.integers(1, 3),
        arrays(np.uint8, (10, 8), elements=st.integers(0, 1)),
    )
    @settings(max_examples=40)
    def test_every_pixel_assigned_or_barrier(self, n_borders, arr):
        rows = sorted({2 + 3 * k for k in range(n_borders)})
        borders = [_row_border(r, 8) for r in rows]
        seg = cut_rows(BinaryImage(arr), borders)
        assert seg.row_count == len(borders) + 1
        a = seg.assignment
        assert ((a == BARRIER) | ((0 <= a) & (a < seg.row_count))).all()


def _amputation_oracle(labels, assignment):
    rows_of = {}
    h, w = labels.shape
    for r in range(h):
        for c in range(w):
            lab = int(labels[r, c])
            if lab > 0 and assignment[r, c] != BARRIER:
                rows_of.setdefault(lab, set()).add(int(assignment[r, c]))
    return sum(1 for s in rows_of.values() if len(s) >= 2)


class TestCountAmputations:
    def test_component_split_by_border(self):
        img = draw_points(blank_page(7, 5), [(r, 2) for r in range(1, 6)])
        labeling = connected_components(img)
        seg = cut_rows(img, [_row_border(3, 5)])
        assert count_amputations(labeling, seg) == 1

    def test_intact_components(self):
        img = draw_points(blank_page(7, 5), [(1, 1), (5, 3)])
        labeling = connected_components(img)
        seg = cut_rows(img, [_row_border(3, 5)])
        assert count_amputations(labeling, seg) == 0

    def test_barrier_pixels_carry_no_vote(self):
        # the single-pixel component is wholly consumed by the border
        img = draw_points(blank_page(5, 5), [(2, 2)])
        labeling = connected_components(img)
        seg = cut_rows(img, [_row_border(2, 5)])
        assert count_amputations(labeling, seg) == 0

    def test_size_mismatch(self):
        labeling = connected_components(blank_page(4, 4))
        seg = cut_rows(blank_page(5, 5), [])
        with pytest.raises(SizeMismatch):
            count_amputations(labeling, seg)

    @given(
        arrays(np.uint8, (8, 8), elements=st.integers(0, 1)),
        arrays(np.int32, (8, 8), elements=st.integers(-1, 2)),
    )
    @settings(max_examples=120)
    def test_matches_naive_oracle(self, ink, assignment):
        labeling = connected_components(BinaryImage(ink))
        seg = Segmentation(assignment, 3)
        assert count_amputations(labeling, seg) == _amputation_oracle(
            labeling.labels, seg.assignment
        )


class TestExtractRowImages:
    def test_tight_crop(self):
        img = draw_points(blank_page(10, 10), [(1, 2), (2, 4), (6, 6)])
        seg = cut_rows(img, [_row_border(4, 10)])
        top = extract_row_images(img, seg, 0)
        assert (top.height, top.width) == (2, 3)
        assert top.pixels.tolist() == [[1, 0, 0], [0, 0, 1]]
        bottom = extract_row_images(img, seg, 1)
        assert (bottom.height, bottom.width) == (1, 1)
        assert bottom.ink_count == 1

    def test_empty_row_is_single_background_pixel(self):
        img = draw_points(blank_page(10, 10), [(1, 1)])
        seg = cut_rows(img, [_row_border(4, 10)])
        empty = extract_row_images(img, seg, 1)
        assert (empty.height, empty.width, empty.ink_count) == (1, 1, 0)

    def test_bad_row_index(self):
        img = blank_page(4, 4)
        seg = cut_rows(img, [])
        with pytest.raises(BadRowIndex):
            extract_row_images(img, seg, 1)
        with pytest.raises(BadRowIndex):
            extract_row_images(img, seg, -1)

    def test_size_mismatch(self):
        seg = cut_rows(blank_page(4, 4), [])
        with pytest.raises(SizeMismatch):
            extract_row_images(blank_page(5, 5), seg, 0)
