import json
import subprocess
import sys
from pathlib import Path

import pytest

from crossalg import cli
from crossalg.fixtures import FIXTURES, get_fixture
from crossalg.workspace import (
    ParseError,
    ValidationError,
    dump_document,
    fixture_workspace,
    load_document,
    parse_inputs,
)

WS_DIR = Path(__file__).resolve().parent.parent / "workspaces"
WORKSPACES = sorted(WS_DIR.glob("*.json"))


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc, indent=2), encoding="utf-8")
    return p


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("path", WORKSPACES, ids=lambda p: p.stem)
def test_workspace_files_are_canonical(path):
    ws = parse_inputs(path)
    assert dump_document(ws.document) == path.read_text(encoding="utf-8")
    again = load_document(json.loads(dump_document(ws.document)))
    assert again.same_as(ws)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_documents_round_trip(name):
    ws = fixture_workspace(get_fixture(name))
    back = load_document(json.loads(dump_document(ws.document)))
    assert back.same_as(ws)
    assert back.ps.same_as(get_fixture(name).ps)


def test_split_files_merge(tmp_path):
    doc = json.loads((WS_DIR / "two_cycle.json").read_text())
    keys = ["format", "composition", "field", "quiver"]
    a = write(tmp_path, "a.json", {k: doc[k] for k in keys})
    b = write(tmp_path, "b.json", {k: v for k, v in doc.items() if k not in keys[2:]})
    assert parse_inputs([a, b]).same_as(parse_inputs(WS_DIR / "two_cycle.json"))


def test_characteristic_mismatch_across_files(tmp_path):
    doc = json.loads((WS_DIR / "two_cycle.json").read_text())
    a = write(tmp_path, "a.json", doc)
    b = write(tmp_path, "b.json", {"field": {"characteristic": 3}})
    with pytest.raises(ValidationError, match="characteristic mismatch") as info:
        parse_inputs([a, b])
    assert info.value.source == str(b)


def test_characteristic_mismatch_inside_section():
    doc = json.loads((WS_DIR / "two_cycle.json").read_text())
    doc["group"]["characteristic"] = 3
    with pytest.raises(ValidationError, match="characteristic mismatch"):
        load_document(doc)


def test_bad_json_reports_line(tmp_path):
    p = write(tmp_path, "bad.json", '{\n  "format": "crossed-product-workspace/1",\n  "field": {\n}}}\n')
    with pytest.raises(ParseError) as info:
        parse_inputs(p)
    assert info.value.line == 4
    assert f"{p}:4" in str(info.value)


def test_missing_file():
    with pytest.raises(ParseError):
        parse_inputs("/nonexistent/workspace.json")


def test_corrupted_cayley_table_reports_location(tmp_path):
    doc = json.loads((WS_DIR / "two_cycle.json").read_text())
    # a Latin square with identity 0 that is not associative
    table = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    doc["group"] = {"table": table}
    doc["sigma"] = {"generators": {}}
    doc["modules"] = {}
    p = write(tmp_path, "table.json", doc)
    with pytest.raises(ValidationError, match="NotAssociative") as info:
        parse_inputs(p)
    assert info.value.where == "group"
    assert info.value.line is not None
    assert str(p) in str(info.value)


@pytest.mark.parametrize(
    "mutate, exc",
    [
        (lambda d: d.pop("group"), ParseError),
        (lambda d: d.update(extra=1), ParseError),
        (lambda d: d.update(composition="left-to-right"), ValidationError),
        (lambda d: d["field"].update(characteristic=4), ValidationError),
        (lambda d: d["modules"]["S0"].update(kind="weird"), ParseError),
        (lambda d: d["modules"]["trivial"].update(over="base"), ValidationError),
    ],
    ids=["no-group", "unknown-key", "composition", "non-prime", "module-kind", "trivial-over-base"],
)
def test_document_errors(mutate, exc):
    doc = json.loads((WS_DIR / "two_cycle.json").read_text())
    mutate(doc)
    with pytest.raises(exc):
        load_document(doc)


def test_exit_code_ok_and_input_error(tmp_path, capsys):
    assert run(["validate", str(WS_DIR / "two_cycle.json")], capsys)[0] == cli.EXIT_OK
    bad = write(tmp_path, "bad.json", "[1, 2")
    code, _, err = run(["validate", str(bad)], capsys)
    assert code == cli.EXIT_INPUT
    assert err.startswith("error: ")


def test_exit_code_failed_check(monkeypatch, capsys):
    real = cli.trivial_is_projective

    def flipped(cp):
        cert = real(cp)
        cert.projective = not cert.projective
        return cert

    monkeypatch.setattr(cli, "trivial_is_projective", flipped)
    code, out, _ = run(["trace-check", str(WS_DIR / "two_cycle.json"), "--json"], capsys)
    assert code == cli.EXIT_ASSERTION
    assert not json.loads(out)["checks"][0]["pass"]


def test_unknown_module_is_input_error(capsys):
    code, _, err = run(["pd", str(WS_DIR / "two_cycle.json"), "--module", "nope"], capsys)
    assert code == cli.EXIT_INPUT
    assert "nope" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["validate"],
        ["build"],
        ["gldim"],
        ["pd", "--module", "S0"],
        ["trace-check"],
        ["separability"],
        ["separability", "--subgroup", "whole"],
        ["normalize"],
        ["identities"],
    ],
    ids=lambda a: "-".join(a),
)
def test_commands_on_two_cycle(argv, capsys):
    code, out, _ = run([argv[0], str(WS_DIR / "two_cycle.json"), "--json", *argv[1:]], capsys)
    assert code == cli.EXIT_OK
    doc = json.loads(out)
    assert all(c["pass"] for c in doc.get("checks", []))


def test_build_output(capsys):
    code, out, _ = run(["build", str(WS_DIR / "two_cycle.json"), "--json"], capsys)
    doc = json.loads(out)
    assert doc["dim"] == 8
    assert doc["basis"][0] == "b0*sigma[1]"
    assert doc["one"] == [1, 1, 0, 0, 0, 0, 0, 0]


def test_canonical_command(capsys):
    path = WS_DIR / "cospan.json"
    code, out, _ = run(["canonical", str(path)], capsys)
    assert code == cli.EXIT_OK
    assert out == path.read_text(encoding="utf-8")


def test_text_and_json_agree(capsys):
    path = str(WS_DIR / "two_cycle.json")
    _, text, _ = run(["pd", path, "--module", "S0"], capsys)
    _, js, _ = run(["pd", path, "--module", "S0", "--json"], capsys)
    assert f'pd: "{json.loads(js)["pd"]}"' in text


def test_report_two_cycle(capsys):
    code, out, _ = run(["report", str(WS_DIR / "two_cycle.json"), "--json"], capsys)
    doc = json.loads(out)
    assert code == cli.EXIT_OK and doc["status"] == "pass"
    assert doc["trivial_representation"]["pd"] == "Finite(0)"
    assert doc["trivial_representation"]["trace_projective"] is True
    assert doc["global_dimension"]["A"].startswith("Infinite")
    assert doc["global_dimension"]["crossed_product"].startswith("Infinite")


def test_report_cospan(capsys):
    code, out, _ = run(["report", str(WS_DIR / "cospan.json"), "--json"], capsys)
    doc = json.loads(out)
    assert code == cli.EXIT_OK
    assert doc["global_dimension"]["A"] == "Finite(1)"
    assert doc["global_dimension"]["crossed_product"].startswith("Infinite")
    assert doc["action"]["free"] is False
    assert doc["action"]["fixed_pairs"] == [["g", 1]]


def test_report_skips_non_split_sections(capsys):
    code, out, _ = run(["report", str(WS_DIR / "gf4_c2.json"), "--json"], capsys)
    doc = json.loads(out)
    assert code == cli.EXIT_OK
    assert "NotSplit" in doc["action"]["skipped"]


def test_console_entry_point_is_deterministic():
    cmd = [sys.executable, "-m", "crossalg.cli", "gldim", str(WS_DIR / "cospan.json"), "--json", "--seed", "3"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second
