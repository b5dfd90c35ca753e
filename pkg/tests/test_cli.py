import json

import pytest

from dynamic_gb import cli
from dynamic_gb.cli import InputError, main, parse_order
from dynamic_gb.engine import is_groebner_oracle
from dynamic_gb.polycore import TermOrdering
from dynamic_gb.systems import parse_system


def rows(out):
    lines = out.strip().splitlines()
    header = lines[0].split("\t")
    return [dict(zip(header, line.split("\t"))) for line in lines[1:]]


def test_static_cyclic4(capsys):
    assert main(["--system", "cyclic-4", "--static", "--verify"]) == 0
    (row,) = rows(capsys.readouterr().out)
    assert (row["pols"], row["terms"], row["verified"], row["mode"]) == ("7", "24", "true", "static")


def test_static_lex_order(capsys):
    assert main(["--system", "cyclic-4", "--static", "--order", "lex"]) == 0
    (row,) = rows(capsys.readouterr().out)
    assert (row["pols"], row["terms"], row["verified"]) == ("6", "18", "-")


def test_dynamic_cyclic5_uses_the_corners(capsys):
    assert main(["--system", "cyclic-5", "--strategy", "sugar", "--verify"]) == 0
    (row,) = rows(capsys.readouterr().out)
    assert row["verified"] == "true" and int(row["rejected_corners"]) > 0


def test_tsv_and_json_agree(capsys):
    args = ["--system", "katsura-3", "--strategy", "sugar"]
    main(args)
    (row,) = rows(capsys.readouterr().out)
    main(args + ["--output", "json"])
    (rep,) = json.loads(capsys.readouterr().out)
    assert int(row["pols"]) == rep["basis_size_pols"]
    assert int(row["terms"]) == rep["basis_size_terms"]
    assert int(row["lps_solved"]) == rep["stats"]["lps_solved"]
    assert int(row["constraints_final"]) == rep["stats"]["constraint_count"]
    assert len(rep["final_order"]["weight"]) == 4


def test_several_systems_one_row_each(capsys):
    assert main(["--system", "cyclic-3", "--system", "katsura-2", "--static"]) == 0
    assert [r["system"] for r in rows(capsys.readouterr().out)] == ["Cyclic-3", "Katsura-2"]


def test_out_basis_is_a_groebner_basis(tmp_path, capsys):
    out = tmp_path / "basis.txt"
    assert main(["--system", "cyclic-4", "--strategy", "sugar", "--out-basis", str(out), "--output", "json"]) == 0
    (rep,) = json.loads(capsys.readouterr().out)
    sf = parse_system(out.read_text(encoding="utf-8"))
    order = TermOrdering(tuple(rep["final_order"]["weight"]))
    assert len(sf.polynomials) == rep["basis_size_pols"]
    assert is_groebner_oracle(sf.polynomials, order)


def test_out_basis_numbered_for_several_systems(tmp_path, capsys):
    out = tmp_path / "b.txt"
    main(["--system", "cyclic-3", "--system", "katsura-2", "--static", "--out-basis", str(out)])
    assert (tmp_path / "b.0.txt").exists() and (tmp_path / "b.1.txt").exists()


def test_system_file_with_homogenization(tmp_path, capsys):
    f = tmp_path / "s.txt"
    f.write_text("vars: x y\nx^2 + y^2 - 4\nx*y - 1\n", encoding="utf-8")
    assert main(["--system", str(f), "--homogenize", "--verify", "--output", "json"]) == 0
    (rep,) = json.loads(capsys.readouterr().out)
    assert rep["variables"] == ["x", "y", "h"] and rep["verified"] is True


def test_criteria_and_candidate_switches(capsys):
    args = ["--system", "cyclic-4", "--strategy", "sugar", "--verify",
            "--no-boundary-vectors", "--no-disjoint-cones", "--ungraded-candidates", "--weighted-sugar"]
    assert main(args) == 0
    (row,) = rows(capsys.readouterr().out)
    assert row["rejected_corners"] == "0" and row["rejected_disjoint"] == "0"


def test_missing_file_exits_2(tmp_path, capsys):
    assert main(["--system", str(tmp_path / "nope.txt")]) == 2
    assert "error" in capsys.readouterr().err


def test_parse_error_exits_2(tmp_path, capsys):
    f = tmp_path / "bad.txt"
    f.write_text("vars: x\nz + 1\n", encoding="utf-8")
    assert main(["--system", str(f)]) == 2
    assert "unknown variable z" in capsys.readouterr().err


def test_bad_order_exits_2(capsys):
    assert main(["--system", "cyclic-3", "--static", "--order", "1,2;x"]) == 2


def test_unknown_option_exits_2(capsys):
    assert main(["--system", "cyclic-3", "--frobnicate"]) == 2


def test_failed_verification_exits_1(monkeypatch, capsys):
    monkeypatch.setattr(cli, "is_groebner_oracle", lambda basis, order: False)
    assert main(["--system", "cyclic-3", "--static", "--verify"]) == 1
    (row,) = rows(capsys.readouterr().out)
    assert row["verified"] == "false"


@pytest.mark.parametrize(
    "text, weight",
    [("grevlex", (1, 1, 1)), ("lex", None), ("1,1,1;0,0,-1;0,-1,0", (1, 1, 1)), ("2,1,1", (2, 1, 1))],
)
def test_parse_order(text, weight):
    o = parse_order(text, 3)
    if weight is not None:
        assert o.weight == weight


@pytest.mark.parametrize("text", ["1,1", "a,b,c", "1,-1,0;0,1,0;0,0,1", ""])
def test_parse_order_rejects(text):
    with pytest.raises(InputError):
        parse_order(text, 3)
