"""Plain-text border and ground-truth round trips."""

import pytest

from rowcut.analysis import RowBand, SkewAngle, Valley
from rowcut.borders import SegmentKind, flexible_border, straight_border
from rowcut.corpus import GroundTruth
from rowcut.errors import MalformedHeader
from rowcut.formats import borders_to_text, parse_borders, parse_truth, truth_to_text
from rowcut.raster import blank_page, draw_points


def _detour_border():
    above = RowBand(top=1, bottom=5, core_top=2, core_bottom=4, median_top=3, median_bottom=3)
    below = RowBand(top=13, bottom=17, core_top=14, core_bottom=16, median_top=15, median_bottom=15)
    img = draw_points(blank_page(20, 20), [(r, 10) for r in range(6, 13)])
    return flexible_border(img, Valley(9, 0, 1), SkewAngle(0.0), above, below)


class TestBordersText:
    def test_round_trip_straight(self):
        border = straight_border(Valley(4, 0, 1), SkewAngle(0.0), 12, 10)
        text = borders_to_text([border], "straight", [0])
        entries = parse_borders(text)
        assert len(entries) == 1
        index, method, events, polyline = entries[0]
        assert (index, method, events) == (0, "straight", 0)
        assert polyline == border

    def test_round_trip_with_traced_segments(self):
        border, events = _detour_border()
        text = borders_to_text([border], "flexible", [len(events)])
        (_, method, n_events, polyline), = parse_borders(text)
        assert method == "flexible"
        assert n_events == len(events) == 1
        assert polyline == border
        kinds = [seg.kind for seg in polyline.segments]
        assert SegmentKind.TRACED in kinds

    def test_stanza_grammar(self):
        border = straight_border(Valley(2, 0, 1), SkewAngle(0.0), 3, 5)
        text = borders_to_text([border, border], "straight", [0, 2])
        lines = text.splitlines()
        assert lines[0] == "border 0 method=straight events=0"
        assert lines[1] == "seg STRAIGHT (2,0) (2,1) (2,2)"
        assert lines[2] == "border 1 method=straight events=2"

    def test_bad_border_line(self):
        with pytest.raises(MalformedHeader, match="bad border line"):
            parse_borders("border zero method=straight events=0\n")

    def test_seg_before_border(self):
        with pytest.raises(MalformedHeader, match="seg before"):
            parse_borders("seg STRAIGHT (0,0)\n")

    def test_bad_seg_kind(self):
        with pytest.raises(MalformedHeader, match="bad seg line"):
            parse_borders("border 0 method=x events=0\nseg WOBBLY (0,0)\n")

    def test_seg_without_points(self):
        with pytest.raises(MalformedHeader, match="without points"):
            parse_borders("border 0 method=x events=0\nseg STRAIGHT nothing\n")

    def test_unrecognized_line(self):
        with pytest.raises(MalformedHeader, match="unrecognized"):
            parse_borders("hello\n")

    def test_blank_lines_ignored(self):
        border = straight_border(Valley(2, 0, 1), SkewAngle(0.0), 3, 5)
        text = borders_to_text([border], "straight", [0])
        assert parse_borders("\n" + text + "\n\n") == parse_borders(text)


class TestTruthText:
    def test_round_trip(self):
        truth = GroundTruth({1: 0, 2: 1, 3: 0}, 3)
        assert parse_truth(truth_to_text(truth)) == truth

    def test_sorted_output_with_comment(self):
        truth = GroundTruth({2: 1, 1: 0}, 2)
        lines = truth_to_text(truth).splitlines()
        assert lines[0].startswith("#")
        assert lines[1:] == ["component 1 row 0", "component 2 row 1"]

    def test_comments_and_blanks_ignored(self):
        text = "# note\n\ncomponent 1 row 0\n# tail\n"
        assert parse_truth(text) == GroundTruth({1: 0}, 1)

    def test_bad_line(self):
        with pytest.raises(MalformedHeader, match="bad truth line"):
            parse_truth("component one row 0\n")

    def test_empty_truth(self):
        assert parse_truth("# only a comment\n") == GroundTruth({}, 0)
