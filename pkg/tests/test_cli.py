import json

import networkx as nx
import pytest

from hamsym.cli import main
from hamsym.config import ENV_VAR, RunConfig, load_config
from hamsym.errors import ConfigError
from hamsym.graph import Graph, write_graph
from hamsym.repro import CSV_COLUMNS, reproduce


def nxfile(path, nxg):
    nxg = nx.convert_node_labels_to_integers(nxg)
    return write_graph(Graph.from_edges(nxg.number_of_nodes(), list(nxg.edges())), path)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_config_precedence(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"seed": 5, "node_budget": 10, "output_format": "csv"}))
    cfg = load_config({"node_budget": 99, "seed": None}, env={ENV_VAR: str(path)})
    assert (cfg.seed, cfg.node_budget, cfg.output_format) == (5, 99, "csv")
    assert load_config(env={}) == RunConfig()


@pytest.mark.parametrize("doc", [{"time_budget_ms": 0}, {"output_format": "xml"},
                                 {"seed": -1}, {"colour": "red"}])
def test_config_rejects_bad_values(tmp_path, doc):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(ConfigError):
        load_config(env={ENV_VAR: str(path)})


def test_bad_config_file_exits_4(tmp_path, capsys, monkeypatch):
    path = tmp_path / "cfg.json"
    path.write_text("{not json")
    monkeypatch.setenv(ENV_VAR, str(path))
    code, _, err = run(capsys, "check", tmp_path / "x.g6")
    assert code == 4 and "line 1" in err


def test_construct_table1_row7(tmp_path, capsys):
    out = tmp_path / "g.g6"
    code, text, _ = run(capsys, "construct", "--table", 1, "--row", 7, "--valency", 3,
                        "--out", out)
    assert code == 0
    doc = json.loads(text)
    assert doc["order"] == 110 and doc["degrees"] == [3] and out.exists()


def test_construct_table2_row2(tmp_path, capsys):
    code, text, _ = run(capsys, "construct", "--table", 2, "--row", 2, "--p", 5,
                        "--out-dir", tmp_path)
    assert code == 0
    doc = json.loads(text)
    assert doc["order"] == 20 and doc["derived"]


def test_construct_heavy_row_is_gated(tmp_path, capsys):
    code, _, err = run(capsys, "construct", "--table", 1, "--row", 13, "--out-dir", tmp_path)
    assert code == 4 and "allow_heavy" in err


def test_construct_unknown_valency_exits_1(tmp_path, capsys):
    code, _, err = run(capsys, "construct", "--table", 1, "--row", 7, "--valency", 5,
                       "--out-dir", tmp_path)
    assert code == 1 and "achievable" in err


def test_check_verdicts(tmp_path, capsys):
    c6 = nxfile(tmp_path / "c6.g6", nx.cycle_graph(6))
    code, text, _ = run(capsys, "check", c6)
    doc = json.loads(text)
    assert code == 0 and doc["semisymmetric"] == "no" and doc["reason"] == "vertex-transitive"
    # the witness swaps the two colour classes of the 6-cycle
    assert doc["witness"][0] % 2 == 1
    cubic = tmp_path / "cubic110.g6"
    run(capsys, "construct", "--table", 1, "--row", 7, "--valency", 3, "--out", cubic)
    code, text, _ = run(capsys, "check", cubic, "--format", "text")
    assert "semisymmetric: yes" in text


def test_check_size_gate(tmp_path, capsys):
    path = nxfile(tmp_path / "big.g6", nx.cycle_graph(40))
    code, text, _ = run(capsys, "check", path, "--max-auto-vertices", 20)
    doc = json.loads(text)
    assert code == 0 and doc["semisymmetric"] == "assumed-from-paper"
    assert "exceeds max_auto_vertices" in doc["reason"]


def test_hamilton_and_verify(tmp_path, capsys):
    code, text, _ = run(capsys, "hamilton", "--table", 1, "--row", 7, "--valency", 3,
                        "--out-dir", tmp_path)
    assert code == 0
    doc = json.loads(text)
    cert, graph = doc["certificate_path"], doc["graph_path"]
    assert run(capsys, "verify", cert, graph)[0] == 0
    tampered = json.loads(open(cert).read())
    tampered["cycle"][0], tampered["cycle"][5] = tampered["cycle"][5], tampered["cycle"][0]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(tampered))
    assert run(capsys, "verify", bad, graph)[0] == 1
    other = nxfile(tmp_path / "other.g6", nx.cycle_graph(110))
    assert run(capsys, "verify", cert, other)[0] == 2


def test_hamilton_petersen_exits_3(tmp_path, capsys):
    pet = nxfile(tmp_path / "petersen.g6", nx.petersen_graph())
    with pytest.warns(UserWarning):
        code, text, _ = run(capsys, "hamilton", pet, "--out-dir", tmp_path)
    doc = json.loads(text)
    assert code == 3 and doc["status"] == "exhausted"
    assert "non-Hamiltonian" in doc["reason"]


def test_hamilton_without_solver_on_a_cover_case(tmp_path, capsys):
    code, text, _ = run(capsys, "hamilton", "--table", 1, "--row", 12, "--valency", 3,
                        "--no-solver", "--out-dir", tmp_path)
    assert code == 3 and json.loads(text)["status"] == "unknown"


def test_reproduce_is_deterministic(tmp_path):
    a = reproduce("cubic-census", RunConfig(out_dir=str(tmp_path / "a")), max_order=130)
    b = reproduce("cubic-census", RunConfig(out_dir=str(tmp_path / "b")), max_order=130)
    assert json.dumps(a.deterministic_json()) == json.dumps(b.deterministic_json())
    for row in a.rows:
        assert (tmp_path / "a" / row.certificate_path).read_bytes() == \
            (tmp_path / "b" / row.certificate_path).read_bytes()
    assert a.check(tmp_path / "a") == []
    t = a.totals
    assert t["instances"] == 4 and t["hamiltonian_yes"] == 4


def test_report_check_catches_a_bad_certificate(tmp_path):
    rep = reproduce("cubic-census", RunConfig(out_dir=str(tmp_path)), max_order=60)
    path = tmp_path / rep.rows[0].certificate_path
    doc = json.loads(path.read_text())
    doc["cycle"] = doc["cycle"][::2] * 2
    path.write_text(json.dumps(doc))
    assert rep.check(tmp_path)


def test_reproduce_cli_csv(tmp_path, capsys):
    code, text, _ = run(capsys, "reproduce", "cubic-census", "--max-order", 60, "--format",
                        "csv", "--out-dir", tmp_path)
    lines = text.strip().splitlines()
    assert code == 0
    assert lines[0].split(",") == list(CSV_COLUMNS)
    assert lines[1].startswith("census:ss-54-1,54,3,True,yes,yes,solver")
    assert (tmp_path / "report-cubic-census.csv").exists()


def test_hamilton_reproduce_flag(tmp_path, capsys):
    code, text, _ = run(capsys, "hamilton", "--reproduce", "cubic-census", "--max-order", 60,
                        "--out-dir", tmp_path)
    assert code == 0 and json.loads(text)["totals"]["hamiltonian_yes"] == 1
