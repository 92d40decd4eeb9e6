import json
from pathlib import Path

import pytest

from polopt_render import EmptyInput, SchemaMismatch, render
from polopt_render.cli import main

FIXTURES = Path(__file__).resolve().parent / "fixtures"

HIST = FIXTURES / "hist.json"
CURVE = FIXTURES / "search_age.json"
BOUNDARY = FIXTURES / "boundary.json"
BIVARIATE = FIXTURES / "search_age_education.json"
MENU = FIXTURES / "menu.json"


def load(path):
    return json.loads(path.read_text())


def test_histogram_counts_match_fixture(tmp_path):
    out = tmp_path / "hist.svg"
    count = render("histogram", [HIST], out)
    doc = load(HIST)
    assert count == len(doc["tau_counts"]) + len(doc["tau_treated_counts"])
    assert out.stat().st_size > 0


def test_curve_point_count_matches_fixture(tmp_path):
    out = tmp_path / "curve.svg"
    count = render("curve", [CURVE], out)
    assert count == len(load(CURVE)["curve"])
    assert out.stat().st_size > 0


def test_quadrant_point_count_matches_fixture(tmp_path):
    out = tmp_path / "quadrant.svg"
    count = render("quadrant", [BOUNDARY, BIVARIATE], out)
    assert count == len(load(BOUNDARY)["scatter"]["x"])
    assert out.stat().st_size > 0


def test_quadrant_without_search_document(tmp_path):
    assert render("quadrant", [BOUNDARY], tmp_path / "q.svg") == 445


def test_menu_point_count_matches_fixture(tmp_path):
    out = tmp_path / "menu.svg"
    count = render("menu", [MENU], out)
    assert count == len(load(MENU)["rows"])
    assert out.stat().st_size > 0


def test_rerender_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    render("curve", [CURVE], a)
    render("curve", [CURVE], b)
    assert a.read_bytes() == b.read_bytes()


def test_render_does_not_mutate_input(tmp_path):
    before = HIST.read_bytes()
    render("histogram", [HIST], tmp_path / "h.svg")
    assert HIST.read_bytes() == before


def test_curve_with_null_best_annotated(tmp_path):
    doc = load(CURVE)
    doc["best"] = None
    path = tmp_path / "nobest.json"
    path.write_text(json.dumps(doc))
    out = tmp_path / "nobest.svg"
    render("curve", [path], out)
    assert b"no feasible optimum" in out.read_bytes()


def test_wrong_schema_version_rejected(tmp_path):
    doc = load(HIST)
    doc["schema_version"] = "999"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(SchemaMismatch):
        render("histogram", [path], tmp_path / "bad.svg")


def test_missing_key_rejected(tmp_path):
    doc = load(MENU)
    del doc["rows"]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(SchemaMismatch):
        render("menu", [path], tmp_path / "bad.svg")


def test_bivariate_document_rejected_for_curve(tmp_path):
    with pytest.raises(SchemaMismatch):
        render("curve", [BIVARIATE], tmp_path / "bad.svg")


def test_empty_menu_rejected(tmp_path):
    doc = load(MENU)
    doc["rows"] = []
    path = tmp_path / "empty.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(EmptyInput):
        render("menu", [path], tmp_path / "empty.svg")


def test_cli_success_and_error_codes(tmp_path, capsys):
    out = tmp_path / "h.svg"
    assert main(["histogram", "--in", str(HIST), "--out", str(out)]) == 0
    assert "data points" in capsys.readouterr().out
    assert main(["histogram", "--in", str(tmp_path / "absent.json"),
                 "--out", str(out)]) == 2
    assert "render:" in capsys.readouterr().err
