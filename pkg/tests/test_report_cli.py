import json

import pytest

from hlcert.certify import prove_case
from hlcert.cli import bounds_inventory, main
from hlcert.report import dumps, loads, revalidate, to_dict


@pytest.fixture(scope="module")
def reports():
    return {k: prove_case(k) for k in (0, 1, 2)}


def test_reports_round_trip_and_revalidate(reports):
    for r in reports.values():
        data = loads(dumps(r))
        assert data == json.loads(json.dumps(to_dict(r), sort_keys=True))
        assert revalidate(data) == {}


def test_revalidate_catches_tampering(reports):
    data = loads(dumps(reports[1]))
    for f in data["facts"]:
        if "rows" in f["evidence"]:
            f["evidence"]["rows"][0]["N_j"] = 20
    assert revalidate(data)
    data = loads(dumps(reports[2]))
    for f in data["facts"]:
        if "dbar" in f["evidence"]:
            f["evidence"]["total_delta"] = "79/100"
    problems = revalidate(data)
    assert "total_delta" in problems and any("sign" in name or "<" in name for name in problems)
    data = loads(dumps(reports[0]))
    data["facts"][0]["holds"] = False
    assert "verdict" in revalidate(data)


def test_loads_rejects_foreign_json():
    with pytest.raises(ValueError):
        loads('{"schema": "other"}')
    with pytest.raises(ValueError):
        loads('{"schema": "hlcert.proof-report", "schema_version": 99}')


@pytest.mark.parametrize("k", [0, 1, 2])
def test_prove_exit_codes(k, tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["prove", "--k", str(k), "--out", str(out)]) == 0
    data = loads(out.read_text())
    assert data["verdict"] == "proven" and revalidate(data) == {}


def test_prove_unsupported(capsys):
    assert main(["prove", "--k", "5"]) == 2
    assert "tabulate" in capsys.readouterr().err
    assert main(["prove", "--k", "-1"]) == 2


def test_tabulate_csv_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["tabulate", "--k", "1", "--step", "0.01", "--density", "0.1"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == "t,d,error_bound,bound_kind,unreliable" and len(lines) == 12


def test_tabulate_svg_points(tmp_path):
    out = tmp_path / "d.svg"
    assert main(["tabulate", "--k", "2", "--step", "0.01", "--density", "0.25", "--format", "svg",
                 "--out", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("<svg") and text.count("<circle") == 5


def test_tabulate_json(capsys):
    assert main(["tabulate", "--k", "1", "--t-min", "1.5", "--t-max", "1.5", "--step", "0.01",
                 "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert len(rows) == 1 and rows[0]["bound_kind"] == "certified" and rows[0]["d"] > 0


def test_bad_arguments(capsys):
    assert main(["tabulate", "--k", "1", "--step", "0"]) == 2
    assert main(["tabulate", "--k", "1", "--t-min", "0.5"]) == 2
    assert main(["shape", "--k", "0"]) == 2
    assert main(["shape"]) == 2
    assert main(["bounds", "--k", "3"]) == 2


def test_shape_cli(capsys):
    assert main(["shape", "--k-list", "1", "2", "--step", "0.01", "--density", "0.1", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert [c["k"] for c in data] == [1, 2]
    assert all(max(c["f"]) == 1.0 for c in data)


def test_bounds_inventory():
    inv = bounds_inventory(1)
    assert all(r["agrees"] for r in inv["h_xx"])
    names = {r["name"]: r for r in inv["constants"]}
    assert names["C1+ (G'^2 <= C1 G)"]["agrees"]
    inv2 = bounds_inventory(2)
    assert all(r["agrees"] for r in inv2["h_xx"])
    assert not {r["name"]: r for r in inv2["constants"]}["G''G- max"]["agrees"]


def test_bounds_cli(capsys):
    assert main(["bounds", "--k", "1"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "quantity,certified,published,relation,agrees" and len(out) == 1 + 6 + 8
