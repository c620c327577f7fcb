import csv
import io
import json

import pytest

from spatialgraph.cli import main
from spatialgraph.corpus import clasp_handcuff, example_witnesses, standard
from spatialgraph.diagram import parse, serialize
from spatialgraph.drawing import k6_standard
from spatialgraph.graphcore import petersen_graph, serialize_graph


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, d in {"trefoil": standard("trefoil"), "hopf": standard("hopf"), "clasp": clasp_handcuff(2).diagram,
                    "k6": k6_standard(), "g": example_witnesses()["g"]}.items():
        p = tmp_path / f"{name}.sgd"
        p.write_text(serialize(d))
        out[name] = str(p)
    p = tmp_path / "petersen.graph"
    p.write_text(serialize_graph(petersen_graph()))
    out["petersen"] = str(p)
    bad = tmp_path / "bad.sgd"
    bad.write_text("sgd 1\nx 1 1 2\n")
    out["bad"] = str(bad)
    return out


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def js(out):
    data = json.loads(out)
    assert data["schema"] == 1
    return data


def test_invariants_of_files(capsys, files):
    code, out, _ = run(capsys, "a2", files["trefoil"])
    assert code == 0 and js(out)["value"] == 1
    code, out, _ = run(capsys, "a2", "--method", "gauss", files["trefoil"])
    assert js(out)["value"] == 1
    assert js(run(capsys, "conway", files["trefoil"])[1])["value"] == [1, 0, 1]
    assert js(run(capsys, "lk", files["hopf"])[1])["value"] == 1
    assert js(run(capsys, "lk", "--a", "a", "--b", "b", files["hopf"])[1])["value"] == 1
    res = js(run(capsys, "nhandcuff", files["clasp"])[1])
    assert (res["n"], res["modulus"], res["reduced"]) == (3, 2, 1)


def test_parse_round_trip(capsys, files):
    res = js(run(capsys, "parse", files["trefoil"])[1])
    assert res["crossings"] == 3
    assert parse(res["sgd"]) == standard("trefoil")
    assert js(run(capsys, "validate", files["k6"])[1])["valid"] is True


def test_dsum_output_is_a_knot(capsys, files):
    res = js(run(capsys, "dsum", files["clasp"])[1])
    k = parse(res["sgd"])
    assert len(k.crossings) == res["record"]["crossings"]


def test_generator_pipes_into_stdin(capsys, monkeypatch):
    code, text, _ = run(capsys, "gen", "frs", "--r", "1", "--s", "1")
    assert code == 0 and text.startswith("sgd 1")
    code, out, _ = run(capsys, "nhandcuff", "-", stdin=text, monkeypatch=monkeypatch)
    assert code == 0 and js(out)["n"] == 2
    text = run(capsys, "gen", "hrs", "--r", "2", "--s", "3")[1]
    assert js(run(capsys, "xi", "-", stdin=text, monkeypatch=monkeypatch)[1])["value"] == 12


def test_graph_commands(capsys, files):
    res = js(run(capsys, "conway-gordon", files["k6"])[1])
    assert res["parity"] == 1 and len(res["pairs"]) == 10
    res = js(run(capsys, "certify-main", files["g"])[1])
    assert res["certificate"]["status"] == "IrreducibleHandcuff" and res["verified"] is True
    res = js(run(capsys, "minor", "--graph", files["petersen"], "--target", "k6")[1])
    assert res["found"] is False
    assert js(run(capsys, "petersen-family")[1])["classes"] == 7


def test_petersen_family_emit(capsys, tmp_path):
    code, _, _ = run(capsys, "petersen-family", "--emit-dir", str(tmp_path / "fam"))
    assert code == 0 and len(list((tmp_path / "fam").iterdir())) == 7


def test_moves_table(capsys, files):
    res = js(run(capsys, "moves", files["trefoil"], "--kind", "r2", "--kind", "r3", "--random", "5")[1])
    rows = {r["key"]: r for r in res["table"]}
    assert rows["a2"]["before"] == rows["a2"]["after"] == 1
    assert parse(res["sgd"]).crossings


def test_exit_codes(capsys, files):
    code, out, err = run(capsys, "conway-gordon", files["trefoil"])
    assert code == 1 and "not K6" in js(out)["error"] and err
    code, out, _ = run(capsys, "a2", files["bad"])
    assert code == 1 and "line 2" in js(out)["error"]
    assert run(capsys, "lk", files["trefoil"])[0] == 2
    assert run(capsys, "nosuchcommand")[0] == 2
    assert run(capsys, "gen", "frs", "--r", "1")[0] == 2
    assert run(capsys, "a2", files["hopf"])[0] == 1


def test_determinism(capsys, files):
    a = run(capsys, "--seed", "3", "moves", files["trefoil"], "--random", "8")[1]
    b = run(capsys, "--seed", "3", "moves", files["trefoil"], "--random", "8")[1]
    assert a == b


def test_csv(capsys, files):
    code, out, _ = run(capsys, "--csv", "conway-gordon", files["k6"])
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 10
    assert sorted(int(r["lk"]) for r in rows) == [-1] + [0] * 9


def test_report(capsys, files, tmp_path):
    rep = tmp_path / "run.json"
    code, out, _ = run(capsys, "--report", str(rep), "a2", files["trefoil"])
    data = json.loads(rep.read_text())
    assert code == 0 and data["seed"] == 7
    assert list(data["inputs"]) == [files["trefoil"]]
    import hashlib
    assert data["outputs"] == hashlib.sha256(out.encode()).hexdigest()


def test_suite_subset(capsys):
    code, out, err = run(capsys, "suite", "--check", "8", "--check", "3")
    res = js(out)
    assert code == 0 and res["failures"] == 0
    assert [c["number"] for c in res["checks"]] == [8, 3]
    assert "[PASS]" in err


def test_budget_from_environment(capsys, files, monkeypatch):
    monkeypatch.setenv("SG_BUDGET", "1")
    code, out, _ = run(capsys, "conway", files["trefoil"])
    assert code == 1 and "budget" in js(out)["error"]


def test_jobs_do_not_change_output(capsys):
    one = js(run(capsys, "suite", "--check", "8", "--check", "3")[1])
    two = js(run(capsys, "--jobs", "2", "suite", "--check", "8", "--check", "3")[1])
    strip = lambda res: [{k: v for k, v in c.items() if k != "seconds"} for c in res["checks"]]
    assert strip(one) == strip(two)
