import json
import math
import random

import pytest

from conftest import families
from vtplanar.builder import build_ball
from vtplanar.cli_catalog import main as cli_main
from vtplanar.cli_catalog.catalog import (
    CatalogRecord,
    dumps,
    family_id,
    find_record,
    loads,
    read_catalog,
    record_matches,
    write_catalog,
)
from vtplanar.cli_catalog.svg import render_svg
from vtplanar.enumerator import schemes_of_pair
from vtplanar.scheme_core import SchemeError, canonical_pair, scheme_key

EX5_ID = "d5-abeed1aa7f97"


@pytest.fixture(scope="module")
def ex5_record(ex5):
    key = scheme_key(ex5)
    (fam,) = [f for f in schemes_of_pair(canonical_pair(ex5.pair)) if f.key == key]
    return CatalogRecord.from_family(fam)


@pytest.fixture
def ex5_file(tmp_path, ex5_record):
    p = tmp_path / "ex5.json"
    p.write_text(dumps([ex5_record]))
    return p


def run(capsys, *args):
    code = cli_main.main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_example5_record(ex5_record):
    assert ex5_record.id == EX5_ID
    assert ex5_record.periodicity == "A"
    assert ex5_record.connectivity == "1-separable"
    # stored for the canonical rotation of the star
    assert ex5_record.ptv == "[3n,inf,3n,2m,inf]"
    assert record_matches(ex5_record)
    inf = [b for b in ex5_record.borders if b["face"] == "inf"]
    assert len(inf) == 1 and inf[0]["period"] is None


def test_catalog_round_trip_is_byte_identical(tmp_path):
    path = tmp_path / "d3.json"
    text = write_catalog(path, families(3), 3)
    header, records = loads(text)
    assert header["counts"] == {"P": 15, "A": 0}
    assert dumps(records, degree=3, totals=(15, 0)) == text
    assert read_catalog(path) == records
    assert all(record_matches(r) for r in records)


def test_find_record_by_prefix():
    records = [CatalogRecord.from_family(f) for f in families(3)]
    r = records[0]
    assert find_record(records, r.id[:8]) == r
    with pytest.raises(SchemeError):
        find_record(records, "d3-")
    with pytest.raises(SchemeError):
        find_record(records, "d9-0")


def test_malformed_records_are_rejected():
    with pytest.raises(SchemeError):
        loads('{"format": "other", "version": 1, "records": []}')
    with pytest.raises(SchemeError):
        CatalogRecord.from_dict({"id": "d3-0"})


def test_family_id_is_stable():
    assert family_id(3, (1, 2)) == family_id(3, (1, 2))
    assert family_id(3, (1, 2)).startswith("d3-")


def test_enumerate_command(capsys, tmp_path):
    out = tmp_path / "cat.json"
    code, text, _ = run(capsys, "enumerate", "--degree", "3", "--out", str(out))
    assert code == 0
    assert "degree=3 P=15 A=0" in text
    assert len(read_catalog(out)) == 15


def test_long_degree_needs_opt_in(capsys):
    code, _, err = run(capsys, "enumerate", "--degree", "6")
    assert code == 1
    assert "--allow-long" in err


def test_user_errors_exit_with_one(capsys, tmp_path):
    assert run(capsys, "enumerate", "--degree", "1")[0] == 1
    assert run(capsys, "info", "--scheme", "d3-ffffffffffff")[0] == 1
    assert run(capsys, "build", "--scheme", "nonsense", "-t", "4,4,4")[0] == 1
    assert run(capsys, "no-such-command")[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "info", "--scheme", str(bad))[0] == 1


def test_invariant_violation_exits_with_two(capsys, monkeypatch, ex5_file):
    monkeypatch.setattr(cli_main, "check_rotation_systems", lambda ball: [0])
    code, _, err = run(capsys, "build", "-s", str(ex5_file), "-t", "3,inf,3,4,inf", "-r", "2")
    assert code == 2
    assert "invariant" in err


def test_info_example5(capsys, ex5_file):
    code, text, _ = run(capsys, "info", "-s", str(ex5_file), "-t", "3,inf,3,4,inf")
    assert code == 0
    assert EX5_ID in text
    assert "1-separable" in text
    assert "NotCayley" in text


def test_info_lists_validating_families(capsys):
    code, text, _ = run(capsys, "info", "-t", "5,5,5")
    assert code == 0
    assert "1 families" in text


def test_build_writes_ball_json(capsys, tmp_path, ex5_file):
    out = tmp_path / "ball.json"
    code, text, _ = run(capsys, "build", "-s", str(ex5_file), "-t", "3,inf,3,4,inf", "-r", "2", "-o", str(out))
    assert code == 0 and "geometry=hyperbolic" in text
    data = json.loads(out.read_text())
    assert data["format"] == "vtplanar-ball"
    assert data["scheme"] == EX5_ID


def test_check_cayley_command(capsys, ex5_file):
    code, text, _ = run(capsys, "check-cayley", "-s", str(ex5_file), "-t", "3,inf,3,4,inf")
    assert code == 0
    assert text.startswith("verdict: NotCayley")


def test_render_is_deterministic(capsys, tmp_path, ex5_file):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    for p in (a, b):
        assert run(capsys, "render", "-s", str(ex5_file), "-t", "3,inf,3,4,inf", "-r", "2", "-o", str(p))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().startswith("<svg")


def test_report_writes_files(capsys, tmp_path):
    code, _, _ = run(capsys, "report", "--max-degree", "3", "-o", str(tmp_path / "rep"))
    assert code == 0
    names = {p.name for p in (tmp_path / "rep").iterdir()}
    assert names == {"counts.csv", "counts.png", "stabilizers.png"}
    assert "3,15,0" in (tmp_path / "rep" / "counts.csv").read_text()


def _svg_center(x1, y1, x2, y2, r, fa, fs):
    # centre of an SVG arc segment, from the SVG implementation notes
    x1p, y1p = (x1 - x2) / 2, (y1 - y2) / 2
    co = math.sqrt(max(r**4 - r * r * y1p * y1p - r * r * x1p * x1p, 0) / (r * r * y1p * y1p + r * r * x1p * x1p))
    if fa == fs:
        co = -co
    return co * y1p + (x1 + x2) / 2, -co * x1p + (y1 + y2) / 2


def test_svg_arcs_are_geodesics(ex4):
    import re

    svg = render_svg(build_ball(ex4, (3, 4, 3, 3, 5), 2))
    # in screen units the unit circle is centred at (400, 400) with radius 400 / 1.02
    scale = 400 / 1.02
    arcs = re.findall(r"M ([-\d.]+) ([-\d.]+) A ([-\d.]+) [-\d.]+ 0 (\d) (\d) ([-\d.]+) ([-\d.]+)", svg)
    assert arcs
    for x1, y1, r, fa, fs, x2, y2 in random.Random(0).sample(arcs, min(200, len(arcs))):
        x1, y1, r, x2, y2 = map(float, (x1, y1, r, x2, y2))
        cx, cy = _svg_center(x1, y1, x2, y2, r, int(fa), int(fs))
        # geodesic circles meet the boundary circle at right angles
        d2 = (cx - 400) ** 2 + (cy - 400) ** 2
        assert d2 == pytest.approx(scale * scale + r * r, rel=1e-4)
