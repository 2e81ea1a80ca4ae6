import json
import math
from pathlib import Path

import pytest

from loxodromic.cli import run_command
from loxodromic.errors import InvariantViolation, SpecParseError
from loxodromic.specs import dumps_map, load_map, parse_map_spec, serialize_map

MAPS = Path(__file__).resolve().parent.parent / "scripts" / "maps"
SAMPLES = sorted(p for p in MAPS.glob("*.json") if not p.name.startswith("variety"))


def m(name):
    return str(MAPS / f"{name}.json")


def test_parse_examples():
    f = parse_map_spec('{"type":"torus","matrix":[[2,1],[1,1]],"translation":["2","3"]}')
    assert f.matrix.rows() == [[2, 1], [1, 1]]
    with pytest.raises(InvariantViolation):
        parse_map_spec('{"type":"torus","matrix":[[2,1],[2,1]],"translation":["2","3"]}')
    with pytest.raises(InvariantViolation):
        parse_map_spec('{"type":"plane","word":[{"henon":{"poly":["0","1"],"delta":"1"}}]}')


@pytest.mark.parametrize("text, field", [
    ("{not json", "invalid JSON"),
    ('{"matrix":[[2,1],[1,1]]}', "type"),
    ('{"type":"torus","translation":["2","3"]}', "matrix"),
    ('{"type":"torus","matrix":[[2,1],[1,1]],"translation":["2","x"]}', ""),
    ('{"type":"frobenius","word":[]}', "frobenius"),
])
def test_parse_errors_name_the_field(text, field):
    with pytest.raises(SpecParseError) as exc:
        parse_map_spec(text)
    assert field in str(exc.value)


def test_zero_translation_rejected():
    with pytest.raises(InvariantViolation):
        parse_map_spec('{"type":"torus","matrix":[[2,1],[1,1]],"translation":["0","3"]}')


@pytest.mark.parametrize("path", SAMPLES, ids=lambda p: p.stem)
def test_sample_round_trip(path):
    f = load_map(str(path))
    assert serialize_map(f) == json.loads(path.read_text())
    assert dumps_map(parse_map_spec(dumps_map(f))) == dumps_map(f)


def test_analyze_torus():
    report, code = run_command(["analyze", m("torus_f")])
    assert code == 0
    r = report["results"]
    assert r["lambda"]["decimal"] == pytest.approx(2.618034, abs=1e-6)
    assert r["loxodromic"] is True
    assert "mobius" in r and "eigenweight" in r


def test_height_command():
    report, code = run_command(["height", "--point", "2/3,5"])
    assert code == 0
    r = report["results"]
    assert r["height"] == pytest.approx(math.log(15)) and r["exact"] == "15"


def test_intersect_command():
    report, code = run_command(["intersect", m("torus_f"), m("torus_f2"), "--p", "1,1", "--q", "1,1",
                                "--window", "0:40", "--g-window", "0:20", "--bound", "12"])
    assert code == 0
    r = report["results"]
    assert len(r["pairs"]) == 21
    assert r["certificate"]["N"] == 2 and r["certificate"]["M"] == 1
    assert r["decomposition"] == {"progressions": [[2, 0]], "sporadic": []}


def test_common_iterate_and_dml_commands():
    report, code = run_command(["common-iterate", m("torus_f"), m("torus_f3"), "--bound", "12"])
    assert code == 0 and report["results"]["certificate"]["N"] == 3
    report, code = run_command(["dml", m("torus_f"), m("torus_f"), "--variety", m("variety_diagonal"),
                                "--start", "1,1;1,1", "--window", "0:500"])
    assert code == 0
    assert report["results"]["decomposition"]["progressions"] == [[1, 0]]


def test_report_is_deterministic():
    argv = ["orbit", m("henon"), "--point", "1,0", "--range", "0:8"]
    a, _ = run_command(argv)
    b, _ = run_command(argv)
    a.pop("timestamp"), b.pop("timestamp")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert set(a) == {"command", "inputs_digest", "results", "warnings", "version"}


def test_exit_codes(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"type":"torus","matrix":[[2,1],[2,1]],"translation":["2","3"]}')
    assert run_command(["analyze", str(bad)])[1] == 2
    assert run_command(["analyze", str(tmp_path / "missing.json")])[1] == 2
    assert run_command(["no-such-command"])[1] == 2
    assert run_command(["height", "--point", "1,2", "--max-digits", "0"])[1] == 2
    report, code = run_command(["orbit", m("henon"), "--point", "1,0", "--range", "0:40",
                                "--max-digits", "100"])
    assert code == 3
    assert report["results"]["rows"] and report["warnings"]


def test_max_window_budget():
    _, code = run_command(["intersect", m("torus_f"), m("torus_f"), "--p", "1,1", "--q", "1,1",
                           "--window", "0:400", "--max-window", "100"])
    assert code == 3


def test_report_file(tmp_path):
    out = tmp_path / "r.json"
    _, code = run_command(["height", "--point", "1/2,3", "--report", str(out)])
    assert code == 0
    # [1 : 1/2 : 3] = [2 : 1 : 6]
    assert json.loads(out.read_text())["results"]["height"] == pytest.approx(math.log(6))


def test_limits_config():
    from loxodromic.config import Limits
    lim = Limits()
    assert lim.max_digits == 200_000 and lim.max_degree == 10_000
    with pytest.raises(ValueError):
        Limits(max_window=0)
    assert Limits(max_digits=50).as_kwargs() == {"max_digits": 50, "max_degree": 10_000}
