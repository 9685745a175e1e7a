import json
import subprocess
import sys

import pytest

from omlsym.catalog import format_lattice, mo
from omlsym.cli import EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("argv, code", [
    (["validate", "--lattice", "mo2"], EXIT_OK),
    (["validate", "--lattice", "benzene"], EXIT_NEGATIVE),
    (["validate", "--lattice", "file:missing"], EXIT_INPUT),
    (["identity", "--lattice", "free2", "(x <+l> y) <+l> y = x"], EXIT_OK),
    (["identity", "--lattice", "mo2", "x <+l> y = y <+l> x"], EXIT_NEGATIVE),
    (["identity", "--lattice", "bool3", "x <d> y = x <n> y"], EXIT_OK),
    (["table", "--lattice", "mo2", "x <d> y"], EXIT_OK),
    (["relations", "--lattice", "bool2"], EXIT_OK),
    (["free"], EXIT_OK),
    (["congruences", "--lattice", "mo2"], EXIT_OK),
])
def test_documented_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_validate_messages(capsys):
    assert run(capsys, "validate", "--lattice", "mo2")[1] == "valid OML, 6 elements\n"
    assert "NotOrthomodular witness (a,b)" in run(capsys, "validate", "--lattice", "benzene")[1]
    code, out, err = run(capsys, "validate", "--lattice", "file:missing")
    assert out == "" and err.startswith("error:")


def test_identity_messages(capsys):
    assert run(capsys, "identity", "--lattice", "free2", "(x <+l> y) <+l> y = x")[1] == "holds (9216 assignments)\n"
    out = run(capsys, "identity", "--lattice", "mo2", "x <+l> y = y <+l> x")[1]
    assert out == "counterexample: x=a, y=b (lhs=a, rhs=b)\n"


@pytest.mark.parametrize("argv", [
    ["identity", "x <+l> y <+l> z = x"],
    ["identity", "x = "],
    ["table", "x & "],
    ["table", "x & y & z"],
    ["relations", "--lattice", "mo0"],
    ["relations", "--lattice", "prod:bool1"],
    ["congruences", "--lattice", "free2", "--max-size", "50"],
])
def test_input_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == EXIT_INPUT and "error" in err


def test_unknown_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["validate", "--nope"])
    assert info.value.code == 2


def test_invalid_lattice_in_other_commands_is_negative(capsys):
    code, _, err = run(capsys, "identity", "--lattice", "benzene", "x = x")
    assert code == EXIT_NEGATIVE and "NotOrthomodular" in err


def test_size_guard(capsys):
    assert run(capsys, "validate", "--lattice", "free2", "--max-size", "50")[0] == EXIT_INPUT


def test_table_contents(capsys):
    doc = json.loads(run(capsys, "table", "--lattice", "mo2", "--format", "json", "x <d> y")[1])
    assert doc["elements"] == ["0", "a", "b", "a'", "b'", "1"]
    assert doc["table"][1][2] == "1" and doc["table"][1][1] == "0"
    text = run(capsys, "table", "--lattice", "mo2", "x <d> y")[1].splitlines()
    assert len(text) == 7


def test_relations_contents(capsys):
    doc = json.loads(run(capsys, "relations", "--lattice", "bool2", "--format", "json")[1])
    assert all(all(row) for row in doc["commutes"])
    doc = json.loads(run(capsys, "relations", "--lattice", "mo2", "--format", "json")[1])
    assert not doc["commutes"][1][2] and doc["perspective"][1][2]


def test_free_lists_six_preimages(capsys):
    doc = json.loads(run(capsys, "free", "--format", "json")[1])
    assert doc["size"] == 96 and len(doc["elements"]) == 96
    assert sorted(e["kind"] for e in doc["sym_diff_preimage"]) == sorted(
        ["NABLA", "DELTA", "PLUS_L", "PLUS_R", "PLUS_LP", "PLUS_RP"])
    text = run(capsys, "free")[1]
    assert text.count("\n") == 2 + 96 + 1 + 6


def test_congruences_output(capsys):
    lines = run(capsys, "congruences", "--lattice", "mo2")[1].splitlines()
    assert len(lines) == 3 and lines[-1] == "regular=true uniform=true permutable=true"
    doc = json.loads(run(capsys, "congruences", "--lattice", "prod:bool1,mo2", "--format", "json")[1])
    assert len(doc["congruences"]) == 4
    assert list(doc) == ["lattice", "congruences", "regular", "uniform", "permutable"]


def test_file_lattice(capsys, tmp_path):
    path = tmp_path / "mo2.oml"
    path.write_text(format_lattice(mo(2)))
    assert run(capsys, "validate", "--lattice", f"file:{path}")[0] == EXIT_OK
    path.write_text("oml v1\nelements: 2\ncovers 0 1\n")
    code, _, err = run(capsys, "validate", "--lattice", f"file:{path}")
    assert code == EXIT_INPUT and "line 3" in err


def test_unnamed_elements_use_index_names(capsys, tmp_path):
    path = tmp_path / "b1.oml"
    path.write_text("oml v1\nelements: 2\ncovers: 0 1\northo: 1 0\n")
    doc = json.loads(run(capsys, "relations", "--lattice", f"file:{path}", "--format", "json")[1])
    assert doc["elements"] == ["e0", "e1"]


JSON_COMMANDS = [
    ["validate", "--lattice", "benzene"],
    ["identity", "--lattice", "mo2", "x <+l> y = y <+l> x"],
    ["table", "--lattice", "mo3", "x <+r'> y"],
    ["relations", "--lattice", "mo2"],
    ["free"],
    ["congruences", "--lattice", "prod:bool2,mo2"],
]


@pytest.mark.parametrize("argv", JSON_COMMANDS, ids=lambda a: a[0])
def test_json_byte_stable_across_processes(argv):
    cmd = [sys.executable, "-m", "omlsym", *argv, "--format", "json"]
    first = subprocess.run(cmd, capture_output=True)
    second = subprocess.run(cmd, capture_output=True)
    assert first.stdout == second.stdout and first.returncode == second.returncode
    json.loads(first.stdout)
