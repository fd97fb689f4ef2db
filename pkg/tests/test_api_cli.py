import csv
import io
import json
import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from rcaforms.api import app
from rcaforms.cli import main

client = TestClient(app)


def test_group_endpoint():
    r = client.post("/group", json={"type": "B2"})
    assert r.status_code == 200
    body = r.json()
    assert body["order"] == 8 and body["degrees"] == [2, 4] and len(body["roots"]) == 4


def test_errors_are_client_errors():
    assert client.post("/group", json={"type": "E8"}).status_code == 422
    assert client.post("/gram", json={"type": "A2", "irrep": "nope", "c": "0.1", "maxdeg": 1}).status_code == 422
    assert client.post("/gram", json={"type": "B2", "irrep": "triv", "c": "0.1,0.2,0.3",
                                      "maxdeg": 1}).status_code == 422


def test_gram_endpoint_exact_strings():
    body = client.post("/gram", json={"type": "A1", "irrep": "triv", "c": "1/3", "maxdeg": 2}).json()
    assert body["degrees"][1]["matrix"] == [["1/3"]]
    assert body["degrees"][2]["matrix"] == [["2/3"]]


def test_c_accepts_list():
    a = client.post("/sch", json={"type": "B2", "irrep": "triv", "c": ["0.1", "0.2"], "maxdeg": 3}).json()
    b = client.post("/sch", json={"type": "B2", "irrep": "triv", "c": "0.1,0.2", "maxdeg": 3}).json()
    assert a["s"] == b["s"]


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_cli_group_and_irreps(capsys):
    code, out = run(capsys, "group", "--type", "B2", "--json")
    assert code == 0 and json.loads(out)["order"] == 8
    code, out = run(capsys, "irreps", "--type", "A2")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][:2] == ["name", "dim"] and sorted(int(r[1]) for r in rows[1:]) == [1, 1, 2]


def test_cli_dunkl_gram(capsys, tmp_path):
    code, out = run(capsys, "dunkl", "--type", "A2", "--irrep", "triv", "--deg", "3", "--c", "0.25")
    assert code == 0 and len(json.loads(out)["operators"]) == 2
    dest = tmp_path / "gram.json"
    code, _ = run(capsys, "gram", "--type", "A2", "--irrep", "std", "--c", "0.3", "--maxdeg", "4", "--out", str(dest))
    assert code == 0 and len(json.loads(dest.read_text())["degrees"]) == 5


def test_cli_sch_csv(capsys):
    code, out = run(capsys, "sch", "--type", "A1", "--irrep", "triv", "--c", "1", "--maxdeg", "20", "--fit",
                    "--target", "Delta")
    lines = out.splitlines()
    assert lines[0] == "n,s_n,dim_n" and lines[2] == "1,-1,1"
    assert "# a=-1 method=rational-fit error=0.0" in lines


def test_cli_jantzen_monodromy(capsys):
    code, out = run(capsys, "jantzen", "--type", "A1", "--irrep", "triv", "--c0", "0.5", "--c1", "1", "--maxdeg", "6")
    body = json.loads(out)
    assert code == 0 and body["wall_crossing"]["ok"] and body["degrees"][3]["ord_det"] == 1
    code, out = run(capsys, "monodromy", "--type", "B2", "--irrep", "refl", "--c", "0.15,0.3", "--tol", "1e-10")
    body = json.loads(out)
    assert max(body["hecke_residuals"]) < 1e-8 and body["B_residual"] < 1e-8


def test_cli_weight_quadrature(capsys, tmp_path):
    dest = tmp_path / "weight.csv"
    code, _ = run(capsys, "weight", "--type", "I2_4", "--irrep", "refl", "--c", "0.12,0.2", "--grid", "chamber:5",
                  "--out", str(dest))
    rows = list(csv.reader(dest.open()))
    assert code == 0 and rows[0] == ["x1", "x2", "K0", "K1", "K2", "K3", "accuracy"] and len(rows) == 6
    code, out = run(capsys, "quadrature", "--type", "A1", "--irrep", "triv", "--c", "0.2", "--maxdeg", "2")
    assert json.loads(out)["max_relative_error"] < 1e-6


def test_cli_verify_exit_codes(capsys, tmp_path):
    code, out = run(capsys, "verify-thm51", "--type", "A1", "--irrep", "triv", "--c", "1", "--maxdeg", "24")
    assert code == 0 and json.loads(out)["abs_match"] is True
    code, out = run(capsys, "verify-c415", "--type", "A1", "--c", "0.25")
    assert code == 0 and json.loads(out)["ok"]
    cfg = tmp_path / "bad.toml"
    cfg.write_text('[[cells]]\ntype = "A1"\nc = ["0.2+0.1j"]\n')
    code, _ = run(capsys, "sweep", "--config", str(cfg))
    assert code == 1


def test_cli_sweep_csv(capsys, tmp_path):
    cfg = tmp_path / "ok.toml"
    cfg.write_text('[[cells]]\ntype = "A1"\nirreps = ["triv"]\nc = ["0.2", "0.8"]\nmaxdeg = 20\n')
    out_csv = tmp_path / "out.csv"
    code, _ = run(capsys, "sweep", "--config", str(cfg), "--csv", str(out_csv))
    rows = list(csv.DictReader(out_csv.open()))
    assert code == 0 and [r["a"] for r in rows] == ["1", "-1"]


def test_cli_request_error(capsys):
    code = main(["group", "--type", "Z9"])
    assert code == 2
    assert "error" in capsys.readouterr().err
