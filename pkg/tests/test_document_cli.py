import io
import json
from fractions import Fraction

import pytest

from planemono.cli import EXIT_INTERNAL, EXIT_INVALID, EXIT_OK, run
from planemono.document import (
    GraphDocument,
    document_hash,
    parse_graph,
    parse_rational,
    serialize_graph,
)
from planemono.exceptions import GraphValidationError, SchemaError
from planemono.germs import corpus, cusp

CUSP_DOC = """{
  "schema_version": "1",
  "vertices": [
    {"id": "D1", "self_intersection": -3},
    {"id": "D2", "self_intersection": -2},
    {"id": "D3", "self_intersection": -1}
  ],
  "edges": [["D1", "D3"], ["D2", "D3"]],
  "arrows": [{"attached_to": "D3"}],
  "ample": {"D1": "-13/3", "D2": "-13/2", "D3": -12},
  "tags": {"first_blowup": "D1"}
}"""


def cli(*argv, stdin=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


# -- documents ------------------------------------------------------------------

def test_parse_cusp_document():
    doc = parse_graph(CUSP_DOC)
    assert doc.ample == {"D1": Fraction(-13, 3), "D2": Fraction(-13, 2), "D3": -12}
    assert doc.tags == {"first_blowup": "D1"}
    assert doc.graph.ids == ["D1", "D2", "D3"]


@pytest.mark.parametrize("label,g", corpus())
def test_round_trip(label, g):
    doc = GraphDocument(g)
    text = serialize_graph(doc)
    back = parse_graph(text)
    assert back == doc
    assert serialize_graph(back) == text
    assert document_hash(back) == document_hash(doc)


def test_round_trip_keeps_rational_ample():
    doc = parse_graph(CUSP_DOC)
    assert parse_graph(serialize_graph(doc)) == doc


def test_missing_arrows_is_a_validation_error():
    raw = json.loads(CUSP_DOC)
    raw["arrows"] = []
    del raw["ample"]
    with pytest.raises(GraphValidationError, match="at least one arrow"):
        parse_graph(json.dumps(raw))


def test_indefinite_graph_is_a_validation_error():
    raw = {"schema_version": "1",
           "vertices": [{"id": "A", "self_intersection": 0},
                        {"id": "B", "self_intersection": -2}],
           "edges": [["A", "B"]], "arrows": [{"attached_to": "A"}]}
    with pytest.raises(GraphValidationError, match="negative definite"):
        parse_graph(json.dumps(raw))


@pytest.mark.parametrize("mutate,message", [
    (lambda d: d.update(colour="red"), "unknown field"),
    (lambda d: d["vertices"][0].update(weight=1), r"vertices\[0\]: unknown field"),
    (lambda d: d["vertices"][1].pop("id"), r"vertices\[1\]: missing field"),
    (lambda d: d["vertices"][0].update(self_intersection="x"), "self_intersection"),
    (lambda d: d.update(schema_version="2"), "unsupported version"),
    (lambda d: d["edges"].append(["D1"]), r"edges\[2\]"),
    (lambda d: d["ample"].update(D1="one"), "ample.D1"),
    (lambda d: d["ample"].pop("D2"), "every vertex"),
    (lambda d: d["tags"].update(first_blowup="Z"), "unknown vertex"),
    (lambda d: d["tags"].update(root="D3"), "tags: unknown field"),
])
def test_schema_errors(mutate, message):
    raw = json.loads(CUSP_DOC)
    mutate(raw)
    with pytest.raises(SchemaError, match=message):
        parse_graph(json.dumps(raw))


def test_syntax_error_reports_position():
    with pytest.raises(SchemaError, match=r"line 2, column"):
        parse_graph('{\n  "vertices": [,]\n}')


def test_parse_rational():
    assert parse_rational("-13/6") == Fraction(-13, 6)
    assert parse_rational(4) == 4
    for bad in (True, 1.5, "1/0", None):
        with pytest.raises(SchemaError):
            parse_rational(bad)


# -- command line -----------------------------------------------------------------

def test_page_example():
    code, out, _ = cli("page", "--germ", "cusp", "--m", "6",
                       "--ample", "-13,-13,-12", "--scale", "6", "--json")
    assert code == EXIT_OK
    data = json.loads(out)
    ranks = {(e["p"], e["q"]): e["rank"] for e in data["page"]["entries"]}
    assert ranks == {(-13, 14): 5, (-12, 14): 7, (-12, 15): 1}
    assert data["page"]["cz"] == {"D1": 0, "D2": 0, "D3": -2, "arrow0": 0}
    assert data["forbidden"] == [[-13, -12]]
    assert len(data["provenance"]["input_sha256"]) == 64


def test_page_from_file_and_stdin(tmp_path, monkeypatch):
    path = tmp_path / "cusp.json"
    path.write_text(CUSP_DOC)
    code, out, _ = cli("page", "--graph", str(path), "--m", "6", "--json")
    assert code == EXIT_OK
    from_file = json.loads(out)
    code, out, _ = cli("page", "--graph", "-", "--m", "6", "--json",
                       stdin=CUSP_DOC, monkeypatch=monkeypatch)
    assert json.loads(out) == from_file
    assert {(e["p"], e["q"]): e["rank"] for e in from_file["page"]["entries"]}[(-13, 14)] == 5


def test_invariants_command():
    code, out, _ = cli("invariants", "--germ", "cusp", "--json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["milnor"] == 2 and data["multiplicity"] == 2
    assert len(data["zeta_coeffs"]) == 21
    assert data["lefschetz"]["6"] == -1


def test_dynamics_command_is_deterministic():
    argv = ("dynamics", "--germ", "cusp", "--m", "6", "--samples", "10000", "--seed", "42",
            "--json")
    first, second = cli(*argv), cli(*argv)
    assert first[0] == EXIT_OK
    assert first[1] == second[1]
    data = json.loads(first[1])
    assert data["separation"]["ok"] and data["provenance"]["seed"] == 42


@pytest.mark.parametrize("argv", [
    ("validate", "--germ", "xp-yq 2,5"),
    ("decorate", "--germ", "xk-yk:4"),
    ("ample", "--suggest", "--germ", "cusp"),
    ("ample", "--check", "--germ", "cusp", "--ample", "-13,-13,-12", "--scale", "6"),
    ("separate", "--germ", "cusp", "--m", "12"),
    ("feasibility", "--germ", "cusp", "--m", "6", "--target", "2:2,3:1",
     "--ample", "-13,-13,-12", "--scale", "6"),
    ("germ", "xp-yq", "3", "4"),
])
def test_commands_succeed_and_are_byte_stable(argv):
    first = cli(*argv, "--json") if argv[0] != "germ" else cli(*argv)
    second = cli(*argv, "--json") if argv[0] != "germ" else cli(*argv)
    assert first[0] == EXIT_OK, first[2]
    assert first[1] == second[1]
    json.loads(first[1])
    text = cli(*argv)
    assert text[0] == EXIT_OK and text[1].strip()


def test_germ_output_parses_back():
    _, out, _ = cli("germ", "cusp")
    assert parse_graph(out).graph == cusp()


def test_output_file(tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = cli("invariants", "--germ", "smooth", "--json", "--output", str(target))
    assert code == EXIT_OK and out == ""
    assert json.loads(target.read_text())["milnor"] == 0


def test_exit_codes_for_bad_input(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema_version": "1", "vertices": [], "edges": [], "arrows": []}')
    assert cli("validate", "--graph", str(bad))[0] == EXIT_INVALID
    assert cli("page", "--germ", "cusp", "--m", "8")[0] == EXIT_INVALID        # not separated
    assert cli("page", "--germ", "cusp", "--m", "6", "--ample", "1,2")[0] == EXIT_INVALID
    assert cli("decorate", "--germ", "xp-yq 2 4")[0] == EXIT_INVALID
    assert cli("decorate", "--graph", str(tmp_path / "missing.json"))[0] == EXIT_INVALID
    code, _, err = cli("dynamics", "--germ", "xk-yk 2", "--m", "3", "--samples", "10")
    assert code == EXIT_INVALID and "stratum" in err


def test_exit_code_for_internal_failure(monkeypatch):
    def boom(*args, **kwargs):
        raise AssertionError("identity failed")
    monkeypatch.setattr("planemono.cli.invariant_report", boom)
    code, _, err = cli("invariants", "--germ", "cusp")
    assert code == EXIT_INTERNAL and "internal" in err


def test_page_with_separation_flag():
    code, out, _ = cli("page", "--germ", "cusp", "--m", "12", "--separate", "--json")
    assert code == EXIT_OK
    assert json.loads(out)["page"]["euler_characteristic"] == 1
