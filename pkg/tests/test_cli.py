import json
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from formsense.cli import main
from formsense.core.fixtures import fixture_dir


@pytest.fixture()
def fixture_files():
    base = fixture_dir()
    return base / "dissim.csv", base / "appeal.csv", base / "rules.csv"


def run_cli(*args):
    return main([str(a) for a in args])


class TestValidateCommand:
    def test_fixture_files_pass(self, fixture_files, capsys):
        dissim, appeal, rules = fixture_files
        assert run_cli("validate", dissim, "--appeal", appeal, "--rules", rules) == 0
        assert "61 observed pairs" in capsys.readouterr().out

    def test_under_covered_product_named(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text(
            "id,1,2,3,4\n"
            "1,0,1,2,1\n"
            "2,1,0,1,2\n"
            "3,2,1,0,*\n"
            "4,1,2,*,0\n"
        )
        assert run_cli("validate", bad) == 1
        assert "coverage(4)=2" in capsys.readouterr().err

    def test_asymmetric_file_fails(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("id,1,2\n1,0,2\n2,1,0\n")
        assert run_cli("validate", bad) == 1
        assert "disagree" in capsys.readouterr().err


class TestMdsCommand:
    def test_same_seed_byte_identical(self, fixture_files, tmp_path):
        dissim, _, _ = fixture_files
        first = tmp_path / "a.csv"
        second = tmp_path / "b.csv"
        assert run_cli("mds", dissim, "--seed", "3", "--restarts", "5", "--out", first) == 0
        assert run_cli("mds", dissim, "--seed", "3", "--restarts", "5", "--out", second) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_writes_header_and_n_rows(self, fixture_files, tmp_path):
        dissim, _, _ = fixture_files
        out = tmp_path / "config.csv"
        run_cli("mds", dissim, "--restarts", "3", "--out", out)
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "id,x1,x2"
        assert len(lines) == 19


class TestRenderCommand:
    def test_profile_svg_written(self, tmp_path):
        out = tmp_path / "glass.svg"
        assert run_cli("render", "--dims", "8", "5", "8", "--out", out) == 0
        ET.parse(out)

    def test_rule_preview_changes_output(self, tmp_path):
        plain = tmp_path / "plain.svg"
        ruled = tmp_path / "ruled.svg"
        run_cli("render", "--dims", "8", "5", "8", "--out", plain)
        run_cli("render", "--dims", "8", "5", "8", "--rule", "R2", "--out", ruled)
        assert plain.read_text() != ruled.read_text()

    def test_degenerate_dims_fail_cleanly(self, tmp_path, capsys):
        out = tmp_path / "x.svg"
        code = run_cli("render", "--dims", "8", "5", "0.15", "--out", out)
        assert code == 2
        assert "DegenerateShape" in capsys.readouterr().err


class TestReportCommand:
    def test_full_pipeline_on_fixtures(self, tmp_path, capsys):
        out_dir = tmp_path / "report"
        assert run_cli("report", "--out-dir", out_dir) == 0
        report = json.loads((out_dir / "report.json").read_text())
        for name in report["artifacts"].values():
            assert (out_dir / name).exists()
        for figure in ("perceptual_map.svg", "appeal_vector.svg",
                       "surface_colormap.svg", "iso_lines.svg"):
            ET.parse(out_dir / figure)
        assert report["prefmap"]["significant_at"]["0.01"] is True
        assert "75.83" in report["prefmap_notes"][0]

    def test_seeded_reruns_byte_identical(self, tmp_path):
        first = tmp_path / "r1"
        second = tmp_path / "r2"
        assert run_cli("report", "--out-dir", first, "--seed", "0") == 0
        assert run_cli("report", "--out-dir", second, "--seed", "0") == 0
        for path in sorted(first.iterdir()):
            assert path.read_bytes() == (second / path.name).read_bytes()

    def test_session_file_equivalent_to_csvs(self, tmp_path):
        csv_run = tmp_path / "csvs"
        assert run_cli("report", "--out-dir", csv_run) == 0
        session_run = tmp_path / "session"
        assert run_cli("report", "--session", csv_run / "session.json",
                       "--out-dir", session_run) == 0
        assert ((csv_run / "report.json").read_bytes()
                == (session_run / "report.json").read_bytes())

    def test_missing_file_is_runtime_error(self, tmp_path, capsys):
        code = run_cli("report", "--session", tmp_path / "nope.json")
        assert code == 2
