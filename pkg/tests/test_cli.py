import csv
import io
import json

import pytest

from reference_data import R_E_1000, R_J_1000
from punctured.cli import main, parse_int
from punctured.registry import (
    CurveRegistry,
    curve_from_json,
    curve_to_json,
    dump_curve,
    load_curve,
)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_int():
    assert parse_int("10^6") == parse_int("1e6") == parse_int("10**6") == 10**6
    assert parse_int("2_500") == 2500
    with pytest.raises(Exception):
        parse_int("1.5e0")


def test_ra_scan_json(capsys):
    code, out, _ = run(capsys, "ra-scan", "67a1", 1000)
    assert code == 0
    d = json.loads(out)
    assert list(d)[:6] == ["curve", "limit", "count", "pi", "ratio", "members"]
    assert d["members"] == R_E_1000
    code, out, _ = run(capsys, "ra-scan", "8969.a.8969.1", 1000)
    assert json.loads(out)["members"] == R_J_1000


def test_ra_scan_csv(capsys):
    code, out, _ = run(capsys, "ra-scan", "67a1", 100, "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows == [["limit", "count", "pi", "ratio"], ["10", "1", "4", "0.2500"], ["100", "7", "25", "0.2800"]]


def test_ra_scan_threads_byte_identical(capsys):
    outs = {run(capsys, "ra-scan", "67a1", 30000, "--threads", t)[1] for t in (1, 2, 5)}
    assert len(outs) == 1


def test_unknown_label_exit_2(capsys):
    code, _, err = run(capsys, "ra-scan", "11a1", 100)
    assert code == 2 and "unknown" in err


def test_resource_exit_3(capsys):
    assert run(capsys, "ra-scan", "67a1", "10^10")[0] == 3
    assert run(capsys, "census", 3, "10^10", "--all-primes")[0] == 3


def test_certify(capsys):
    code, out, _ = run(capsys, "certify", "67a1", "--cyclotomic", 19, 2)
    assert code == 0
    assert list(json.loads(out)) == ["curve", "field", "witness", "excluded", "checks", "attestations"]
    code, out, _ = run(capsys, "certify", "67a1", "--cyclotomic", 5, 1)
    assert code == 1 and json.loads(out)["result"] == "no-witness"
    code, out, _ = run(capsys, "certify", "8969.a.8969.1", "--cyclic", 3, 7)
    assert code == 0 and json.loads(out)["witness"] == {"prime": 7, "group_order": 32}
    code, out, _ = run(capsys, "certify", "8969.a.8969.1", "--cyclic", 3, 7, "--exclude", 7)
    assert code == 1
    assert run(capsys, "certify", "67a1", "--cyclic", 3, 12)[0] == 2


def test_certify_missing_attestation(capsys, tmp_path, E):
    obj = curve_to_json(E)
    obj.update(label="67a1-bare", attested_trivial_mw=False)
    path = tmp_path / "bare.json"
    path.write_text(json.dumps(obj))
    code, _, err = run(capsys, "certify", "67a1-bare", "--cyclotomic", 19, 1, "--registry", path)
    assert code == 2 and "attested" in err


def test_census(capsys):
    code, out, err = run(capsys, "census", 2, 100, "--all-primes")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["X", "count", "normalized"] and rows[-1][:2] == ["100", "61"]
    assert "warning" in err
    code, out, _ = run(capsys, "census", 3, 10, "--all-primes")
    assert out.splitlines()[-1].startswith("10,2,")


def test_census_curve(capsys):
    code, out, err = run(capsys, "census", 2, "10^5", "--curve", "67a1")
    rows = list(csv.DictReader(io.StringIO(out)))
    ratios = [float(r["ratio"]) for r in rows]
    assert code == 0 and ratios == sorted(ratios, reverse=True)
    assert "beta=0.6667" in err
    # no attested surjectivity at l = 3 for the genus-2 curve: auto beta is refused
    assert run(capsys, "census", 3, 1000, "--curve", "8969.a.8969.1")[0] == 2
    assert run(capsys, "census", 3, 1000, "--curve", "8969.a.8969.1", "--beta", "1/2")[0] == 0


def test_density(capsys):
    code, out, _ = run(capsys, "density", 2, "--dim", 1)
    assert code == 0 and json.loads(out)["gamma"] == [1, 3]
    code, out, _ = run(capsys, "density", 3, "--dim", 1)
    assert json.loads(out)["beta_plus_gamma"] == [1, 1]
    code, _, err = run(capsys, "density", 5, "--dim", 2)
    assert code == 2 and "--empirical" in err
    code, out, _ = run(capsys, "density", 2, "--empirical", "67a1", "1e5")
    emp = json.loads(out)["empirical"][0]
    assert code == 0 and abs(emp["fraction"] - 1 / 3) < 0.02


def load_curve_text(c):
    return curve_from_json(json.loads(json.dumps(curve_to_json(c))))


def test_builtin_files_roundtrip_exactly():
    from importlib import resources

    for entry in resources.files("punctured.data").iterdir():
        if entry.name.endswith(".json"):
            obj = json.loads(entry.read_text())
            assert curve_to_json(curve_from_json(obj)) == obj


def test_registry_roundtrip(tmp_path, capsys):
    reg = CurveRegistry.builtin()
    for label in reg.labels():
        c = reg[label]
        assert c.provenance
        assert curve_to_json(load_curve_text(c)) == curve_to_json(c)
        assert curve_from_json(json.loads(json.dumps(curve_to_json(c)))) == c
        dump_curve(c, tmp_path / "c.json")
        assert load_curve(tmp_path / "c.json") == c
    code, out, _ = run(capsys, "curves", "--export", tmp_path / "out")
    again = CurveRegistry()
    again.load(tmp_path / "out")
    assert again.labels() == reg.labels()
    assert all(again[l] == reg[l] for l in reg.labels())


def test_builtin_coefficients():
    reg = CurveRegistry.builtin()
    assert reg["67a1"].ainvs == (0, 1, 1, -12, -21)
    J = reg["8969.a.8969.1"]
    assert J.f == (-2, -16, -54, -87, -55, 1) and J.h == (1, 1)
    with pytest.raises(ValueError):
        reg.add(J)


def test_bad_registry_path(capsys, tmp_path):
    assert run(capsys, "curves", "--registry", tmp_path / "missing.json")[0] == 2
