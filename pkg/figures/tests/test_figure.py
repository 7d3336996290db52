"""Acceptance checks for the eight-panel figure renderer.

A real input bundle comes from the producer CLI (see conftest); the
tests then verify the rendered figure against the file contents: exact
bar heights, mass balance, analytic overlay normalization, proxy
labeling, panel order, byte-stable output, and error reporting that
names the offending file and line.
"""

import csv
import filecmp
import json
import shutil

import matplotlib.pyplot as plt
import numpy as np
import pytest

from levyfig import FigureError, build_figure, load_manifest, render

EXPECTED_ALPHAS = [0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0]


def csv_densities(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [float(r["density"]) for r in rows]


class TestRendering:
    def test_renders_eight_panels_ascending(self, bundle, tmp_path):
        out = tmp_path / "fig.png"
        panels = render(bundle / "figure1_manifest.json", out)
        assert [p.alpha for p in panels] == EXPECTED_ALPHAS
        assert out.exists() and out.stat().st_size > 10_000

    def test_bar_heights_equal_csv_densities_exactly(self, bundle):
        panels = load_manifest(bundle / "figure1_manifest.json")
        fig = build_figure(panels)
        try:
            for ax, panel in zip(fig.axes, panels):
                heights = [patch.get_height() for patch in ax.patches]
                assert heights == csv_densities(panel.csv_path)
        finally:
            plt.close(fig)

    def test_histogram_mass_matches_kept_fraction(self, bundle):
        # Trimming drops edge eigenvalues, so each panel integrates to
        # kept/total rather than 1; within 1% here, exactly in the files.
        for panel in load_manifest(bundle / "figure1_manifest.json"):
            integral = float(np.sum(panel.density * (panel.bin_right - panel.bin_left)))
            assert integral == pytest.approx(panel.kept / panel.total, rel=0.01)

    def test_semicircle_overlay_integrates_to_one(self, bundle):
        panels = load_manifest(bundle / "figure1_manifest.json")
        assert panels[-1].overlay["kind"] == "semicircle"
        fig = build_figure(panels)
        try:
            lines = fig.axes[-1].get_lines()
            assert len(lines) == 1
            x, y = lines[0].get_xdata(), lines[0].get_ydata()
            assert float(np.trapezoid(y, x)) == pytest.approx(1.0, rel=0.01)
        finally:
            plt.close(fig)

    def test_proxy_overlays_are_labeled_as_proxy(self, bundle):
        panels = load_manifest(bundle / "figure1_manifest.json")
        fig = build_figure(panels)
        try:
            for ax, panel in zip(fig.axes, panels):
                if panel.overlay["kind"] != "rde_proxy":
                    continue
                labels = [line.get_label() for line in ax.get_lines()]
                assert any("proxy" in lab for lab in labels), labels
        finally:
            plt.close(fig)

    def test_proxy_overlay_covers_histogram_support(self, bundle):
        for panel in load_manifest(bundle / "figure1_manifest.json"):
            if panel.overlay["kind"] != "rde_proxy":
                continue
            assert min(panel.overlay["x"]) <= panel.xlim[0]
            assert max(panel.overlay["x"]) >= panel.xlim[1]

    def test_caption_lists_alphas_in_panel_order(self, bundle):
        panels = load_manifest(bundle / "figure1_manifest.json")
        fig = build_figure(panels)
        try:
            caption = fig._suptitle.get_text()
        finally:
            plt.close(fig)
        assert "alpha = 0.25, 0.5, 0.75, 1, 1.25, 1.5, 1.75, 2" in caption

    def test_rerender_is_byte_identical(self, bundle, tmp_path):
        a, b = tmp_path / "a.png", tmp_path / "b.png"
        render(bundle / "figure1_manifest.json", a)
        render(bundle / "figure1_manifest.json", b)
        assert filecmp.cmp(a, b, shallow=False)


class TestErrorReporting:
    def broken_copy(self, bundle, tmp_path):
        work = tmp_path / "bundle"
        shutil.copytree(bundle, work)
        return work

    def test_missing_csv_names_the_file(self, bundle, tmp_path):
        work = self.broken_copy(bundle, tmp_path)
        (work / "figure1_alpha0.50.csv").unlink()
        with pytest.raises(FigureError, match="figure1_alpha0.50.csv"):
            load_manifest(work / "figure1_manifest.json")

    def test_malformed_row_names_file_and_line(self, bundle, tmp_path):
        work = self.broken_copy(bundle, tmp_path)
        target = work / "figure1_alpha0.75.csv"
        lines = target.read_text().splitlines()
        lines[2] = "0.1,0.2,not-a-count,0.4"
        target.write_text("\n".join(lines) + "\n")
        with pytest.raises(FigureError, match=r"figure1_alpha0\.75\.csv:3"):
            load_manifest(work / "figure1_manifest.json")

    def test_inverted_bin_edges_are_rejected(self, bundle, tmp_path):
        work = self.broken_copy(bundle, tmp_path)
        target = work / "figure1_alpha1.00.csv"
        lines = target.read_text().splitlines()
        first = lines[1].split(",")
        first[0], first[1] = first[1], first[0]
        lines[1] = ",".join(first)
        target.write_text("\n".join(lines) + "\n")
        with pytest.raises(FigureError, match=r"figure1_alpha1\.00\.csv:2"):
            load_manifest(work / "figure1_manifest.json")

    def test_invalid_json_reports_line(self, tmp_path):
        bad = tmp_path / "figure1_manifest.json"
        bad.write_text('{\n "schema": "levyspec-figure1/1",\n broken\n}\n')
        with pytest.raises(FigureError, match=r"figure1_manifest\.json:3"):
            load_manifest(bad)

    def test_unknown_schema_is_rejected(self, tmp_path):
        bad = tmp_path / "figure1_manifest.json"
        bad.write_text(json.dumps({"schema": "something-else/9", "panels": [{}]}))
        with pytest.raises(FigureError, match="schema"):
            load_manifest(bad)

    def test_wrong_panel_count_is_rejected(self, bundle, tmp_path):
        work = self.broken_copy(bundle, tmp_path)
        mpath = work / "figure1_manifest.json"
        manifest = json.loads(mpath.read_text())
        manifest["panels"] = manifest["panels"][:7]
        mpath.write_text(json.dumps(manifest))
        with pytest.raises(FigureError, match="need exactly 8 panels, got 7"):
            build_figure(load_manifest(mpath))

    def test_proxy_not_covering_support_is_rejected(self, bundle, tmp_path):
        work = self.broken_copy(bundle, tmp_path)
        mpath = work / "figure1_manifest.json"
        manifest = json.loads(mpath.read_text())
        for meta in manifest["panels"]:
            if meta["overlay"]["kind"] == "rde_proxy":
                meta["overlay"]["x"] = [0.0, 0.1]
                meta["overlay"]["density"] = [0.3, 0.3]
                break
        mpath.write_text(json.dumps(manifest))
        with pytest.raises(FigureError, match="does not cover"):
            load_manifest(mpath)
