import io
import json

import pytest

from bitangents.cli import COMMANDS, HANDLERS, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(scope="module")
def klein_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "klein.dat"
    code, out, _ = call("klein", "--output", str(path))
    assert code == 0 and path.exists()
    return str(path)


def test_every_command_has_a_handler():
    assert set(COMMANDS) == set(HANDLERS)


def test_gram_from_file(klein_file):
    code, out, _ = call("gram", "--input", klein_file, "--indices", "1,2,3")
    assert code == 0
    assert out.strip() == "[[3, -1, -1], [-1, 3, -1], [-1, -1, 3]]"


def test_invariants_from_file(klein_file):
    code, out, _ = call("invariants", "--input", klein_file, "--indices", "1,2,4,7")
    assert code == 0
    assert out.strip() == "(4,0)"
    code, out, _ = call("invariants", "--input", klein_file, "--indices", "L1,L2,L3,L6")
    assert out.strip() == "(2,2)"


def test_classify_from_file(klein_file, tmp_path):
    report = tmp_path / "classify.json"
    code, out, _ = call("classify", "--input", klein_file, "--indices", "1,2,3,4,5,6,7", "--size", "4", "--output", str(report))
    assert code == 0
    doc = json.loads(report.read_text())
    assert sorted(doc["results"]["classes"]) == ["(0,4)", "(2,2)", "(4,0)"]
    assert ["L1", "L2", "L4", "L7"] in doc["results"]["classes"]["(4,0)"]


def test_structured_output_is_deterministic():
    runs = [call("connected", "--indices", "1,2,3", "--format", "structured")[1] for _ in range(2)]
    assert runs[0] == runs[1]
    doc = json.loads(runs[0])
    assert doc["format"] == "bitangent-report/1"
    assert doc["results"]["connected_number"] == {"liftgraph": 2, "parity": 2, "det": 2}


def test_connected_with_oracle():
    code, out, _ = call("connected", "--indices", "1,2,4", "--oracle", "--format", "structured")
    assert code == 0
    doc = json.loads(out)
    assert doc["oracle"]["connected_number"] == 1 == doc["results"]["connected_number"]["parity"]


def test_derived_sections_are_used_for_unprinted_lines():
    code, out, _ = call("gram", "--indices", "L0.1,L0.2,L1.3")
    assert code == 0 and out.startswith("[[3,")


def test_parity_and_oracle_connected():
    assert call("parity", "--indices", "1,2,3,4,5")[0] == 0
    code, out, _ = call("oracle-connected", "--indices", "1,2,3")
    assert (code, out.strip()) == (0, "c = 2")


def test_verify_and_derive(tmp_path):
    code, out, _ = call("verify", "--indices", "1,2,3")
    assert code == 0 and "L1: bitangent, section ok" in out
    path = tmp_path / "with_sections.dat"
    code, out, _ = call("derive-sections", "--indices", "1,L0.1", "--output", str(path))
    assert code == 0
    assert "same" in out or "up to sign" in out
    doc = json.loads(path.read_text())
    assert "section" in next(b for b in doc["bitangents"] if b["name"] == "L0.1")


def test_find_bitangents_structured():
    code, out, _ = call("find-bitangents", "--seeds", "200", "--format", "structured")
    assert code == 0
    doc = json.loads(out)
    assert doc["results"]["count"] == 28
    assert max(entry["distance"] for entry in doc["results"]["lines"]) < 1e-8


def test_usage_errors():
    assert call("gram", "--bogus")[0] == 2
    assert call("nonsense")[0] == 2
    assert call("gram")[0] == 2  # needs --indices
    assert call("gram", "--indices", "1,99")[0] == 2
    assert call("gram", "--indices", "1,1,2")[0] == 2
    assert call("classify")[0] == 2  # needs --size
    assert call("classify", "--size", "14")[0] == 2  # over the --limit default
    assert call("gram", "--input", "/nonexistent/file", "--indices", "1,2")[0] == 2


def test_schema_error_exit_code(tmp_path):
    bad = tmp_path / "bad.dat"
    bad.write_text('{"field_order": 4, "curve": {}, "bitangents": [{"name": "A", "a": ["1"], "b": ["0", "0"]}]}')
    code, _, err = call("verify", "--input", str(bad))
    assert code == 2 and "bitangents[0].a" in err


def test_domain_error_exit_code(tmp_path):
    # x^3 + t over Q(i): the line x = 0 is not a bitangent
    doc = {
        "field_order": 4,
        "curve": {"p": [], "q": [], "r": [["0", "0"], ["1", "0"]]},
        "bitangents": [{"name": "A", "a": ["0", "0"], "b": ["0", "0"]}, {"name": "B", "a": ["1", "0"], "b": ["0", "0"]}],
    }
    path = tmp_path / "deg.dat"
    path.write_text(json.dumps(doc))
    report = tmp_path / "report.json"
    code, _, err = call("gram", "--input", str(path), "--indices", "A,B", "--output", str(report))
    assert code == 1 and "NotABitangent" in err
    assert "error" in json.loads(report.read_text())["diagnostics"]
    assert call("verify", "--input", str(path))[0] == 1
