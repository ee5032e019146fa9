"""Command-line interface, exercised as a subprocess."""

import re
import subprocess
import sys

import numpy as np
import pytest

from rowcut.raster import BinaryImage, write_pbm


def run_cli(args, cwd):
    return subprocess.run(
        [sys.executable, "-m", "rowcut", *args],
        cwd=cwd,
        capture_output=True,
        text=True,
        timeout=180,
    )


def _gen(tmp_path, out="page", **flags):
    args = ["gen", "--rows", "2", "--width", "200", "--row-height", "60",
            "--seed", "5", "--out", out]
    for key, value in flags.items():
        args += [f"--{key.replace('_', '-')}", str(value)]
    proc = run_cli(args, tmp_path)
    assert proc.returncode == 0, proc.stderr
    return tmp_path / out / "page.pbm"


def _crossing_page(tmp_path):
    """Three text bands plus a deep descender dropping through the middle
    band's word gap; the bottom-edge border anchored to it must cross the
    next border down."""
    arr = np.zeros((60, 120), dtype=np.uint8)
    arr[2:11, 5:116] = 1  # top band
    arr[2:41, 30:34] = 1  # deep descender attached to it
    arr[14:23, 5:26] = 1  # middle band, split around the descender
    arr[14:23, 45:116] = 1
    arr[44:53, 5:116] = 1  # bottom band
    path = tmp_path / "crossing.pbm"
    path.write_bytes(write_pbm(BinaryImage(arr)))
    return path


class TestGen:
    def test_writes_page_and_truth(self, tmp_path):
        proc = run_cli(
            ["gen", "--rows", "2", "--width", "200", "--row-height", "60",
             "--seed", "5", "--out", "corpus"],
            tmp_path,
        )
        assert proc.returncode == 0, proc.stderr
        assert re.fullmatch(r"components=\d+\n", proc.stdout)
        assert (tmp_path / "corpus" / "page.pbm").exists()
        assert (tmp_path / "corpus" / "truth.txt").read_text().startswith("#")

    def test_deterministic_artifacts(self, tmp_path):
        a = _gen(tmp_path, out="a")
        b = _gen(tmp_path, out="b")
        assert a.read_bytes() == b.read_bytes()
        assert (a.parent / "truth.txt").read_text() == (b.parent / "truth.txt").read_text()

    def test_row_height_too_small(self, tmp_path):
        proc = run_cli(["gen", "--row-height", "5"], tmp_path)
        assert proc.returncode == 2
        assert "SpecTooTight" in proc.stderr


class TestSegment:
    def test_writes_rows_and_borders(self, tmp_path):
        page = _gen(tmp_path)
        proc = run_cli(
            ["segment", str(page), "--out-dir", "rows"],
            tmp_path,
        )
        assert proc.returncode == 0, proc.stderr
        assert re.fullmatch(r"rows=2 events=\d+ amputated=\d+\n", proc.stdout)
        out = tmp_path / "rows"
        assert (out / "row_000.pbm").exists()
        assert (out / "row_001.pbm").exists()
        assert (out / "borders.txt").read_text().startswith("border 0 method=flexible")

    def test_unknown_method_is_usage_error(self, tmp_path):
        page = _gen(tmp_path)
        proc = run_cli(["segment", str(page), "--method", "zigzag"], tmp_path)
        assert proc.returncode == 64
        assert "unknown method 'zigzag'" in proc.stderr
        assert "usage:" in proc.stderr

    def test_white_page_has_no_rows(self, tmp_path):
        page = tmp_path / "white.pbm"
        page.write_bytes(write_pbm(BinaryImage(np.zeros((40, 60), dtype=np.uint8))))
        proc = run_cli(["segment", str(page)], tmp_path)
        assert proc.returncode == 3
        assert "NoBands" in proc.stderr

    def test_junk_input(self, tmp_path):
        page = tmp_path / "junk.pbm"
        page.write_bytes(b"this is not an image")
        proc = run_cli(["segment", str(page)], tmp_path)
        assert proc.returncode == 2
        assert "MalformedHeader" in proc.stderr

    def test_missing_input(self, tmp_path):
        proc = run_cli(["segment", "nope.pbm"], tmp_path)
        assert proc.returncode == 2
        assert "cannot read" in proc.stderr

    def test_even_smooth_window(self, tmp_path):
        page = _gen(tmp_path)
        proc = run_cli(["segment", str(page), "--smooth-window", "4"], tmp_path)
        assert proc.returncode == 2

    def test_crossing_borders_exit_code(self, tmp_path):
        page = _crossing_page(tmp_path)
        proc = run_cli(
            ["segment", str(page), "--method", "bottom-edge", "--smooth-window", "1"],
            tmp_path,
        )
        assert proc.returncode == 4
        assert "BordersCross" in proc.stderr


class TestRender:
    def test_writes_overlay(self, tmp_path):
        page = _gen(tmp_path)
        proc = run_cli(
            ["render", str(page), "--out", "overlay.ppm"],
            tmp_path,
        )
        assert proc.returncode == 0, proc.stderr
        assert proc.stdout.strip() == "overlay.ppm"
        assert (tmp_path / "overlay.ppm").read_bytes().startswith(b"P6")

    def test_unknown_method(self, tmp_path):
        page = _gen(tmp_path)
        proc = run_cli(["render", str(page), "--method", "wavy"], tmp_path)
        assert proc.returncode == 64


class TestCompare:
    CORPUS = ["--samples", "2", "--seed", "7", "--rows", "2",
              "--width", "120", "--row-height", "40"]

    def test_table_and_csv(self, tmp_path):
        proc = run_cli(["compare", *self.CORPUS, "--csv", "out.csv"], tmp_path)
        assert proc.returncode == 0, proc.stderr
        lines = proc.stdout.splitlines()
        assert lines[0].split() == [
            "method", "samples", "components", "amputations",
            "error_rate", "misassigned", "wall_time_s",
        ]
        assert [l.split()[0] for l in lines[1:4]] == ["straight", "bottom-edge", "flexible"]
        csv = (tmp_path / "out.csv").read_text()
        assert csv.splitlines()[0] == "method,samples,components,amputations,error_rate,wall_time_s"
        assert len(csv.strip().splitlines()) == 4

    def test_single_method_drops_reductions(self, tmp_path):
        proc = run_cli(
            ["compare", *self.CORPUS, "--methods", "flexible"], tmp_path
        )
        assert proc.returncode == 0, proc.stderr
        assert "reduction vs" not in proc.stdout
        assert proc.stdout.splitlines()[1].split()[0] == "flexible"

    def test_zero_samples(self, tmp_path):
        proc = run_cli(["compare", "--samples", "0"], tmp_path)
        assert proc.returncode == 2
        assert "--samples" in proc.stderr

    def test_unknown_methods(self, tmp_path):
        proc = run_cli(["compare", *self.CORPUS, "--methods", "zigzag"], tmp_path)
        assert proc.returncode == 2
        assert "unknown methods" in proc.stderr
