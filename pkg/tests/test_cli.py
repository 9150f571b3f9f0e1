import json
import subprocess
import sys
from io import StringIO

import pytest

from polyauto.automorphism import PolyMap
from polyauto.cli import main, parse_spec
from polyauto.reproduce import NAGATA_PRINTED

EX5 = "C=(t+1)*X^2; D=t*X; a=t; b=t+1"


def run(*argv):
    out = StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_compose_text_and_json():
    code, text = run("compose", "(X + Y^2, Y)", "(X, Y + X)")
    assert code == 0 and PolyMap.parse(text.strip()) == PolyMap.parse("(X + (X + Y)^2, X + Y)")
    code, text = run("--format", "json", "compose", "(X + Y^2, Y)", "(X, Y + X)")
    assert code == 0 and json.loads(text)["variables"] == ["X", "Y"]


def test_format_flag_after_verb():
    code, text = run("compose", "--format", "json", "(X, Y)")
    assert code == 0 and "map" in json.loads(text)


def test_invert_plane_map():
    code, text = run("invert", "(X + Y^2, Y)")
    assert code == 0 and PolyMap.parse(text.strip()) == PolyMap.parse("(X - Y^2, Y)")


def test_invert_factor_list_in_three_variables():
    code, text = run("invert", "(X + Y*Z, Y, Z)", "(X, Y + Z^2, Z)")
    assert code == 0
    code2, back = run("compose", "(X + Y*Z, Y, Z)", "(X, Y + Z^2, Z)", text.strip())
    assert PolyMap.parse(back.strip()) == PolyMap.parse("(X, Y, Z)")


def test_tame_check_exit_codes():
    code, text = run("tame-check", NAGATA_PRINTED)
    assert code == 2 and "NOT TAME" in text
    code, text = run("tame-check", "--field", NAGATA_PRINTED)
    assert code == 0 and text.startswith("TAME over K")
    code, text = run("--format", "json", "tame-check", NAGATA_PRINTED)
    assert code == 2 and json.loads(text)["kind"] == "not-tame"


def test_ring_mode_non_automorphism_is_a_witness():
    code, text = run("tame-check", "(X^2, Y)")
    assert code == 2 and "step 6" in text


def test_tame_check_errors(capsys):
    assert run("tame-check", "(X, Y, Z)")[0] == 1
    assert run("tame-check", "--field", "(X^2, Y)")[0] == 1
    assert run("tame-check", "(X + , Y)")[0] == 1
    assert "line 1" in capsys.readouterr().err


def test_length():
    code, text = run("length", NAGATA_PRINTED)
    assert code == 0 and text.startswith("length 3")
    code, text = run("--format", "json", "length", "(X + Y^2, Y); (X, Y + X^2)")
    assert code == 0 and json.loads(text)["length"] == 2


def test_commutator():
    code, text = run("commutator", "--C", "(t+1)*X^2", "--D", "t*X", "--a", "t", "--b", "t+1")
    assert code == 0 and "Jacobian determinant: 1" in text


def test_commutator_rejects_bad_spec():
    assert run("commutator", "--C", "X", "--D", "X", "--a", "t", "--b", "t")[0] == 1


def test_negative_polynomial_flag_value():
    code, text = run("commutator", "--C=-t*X^2", "--D", "(t+1)*X", "--a", "t+1", "--b", "t")
    assert code == 0


def test_stable_tame_spec_string_and_flags():
    code, text = run("stable-tame", EX5)
    assert code == 0 and "residual length over R[X]: 3" in text
    code2, text2 = run("stable-tame", "--C", "(t+1)*X^2", "--D", "t*X", "--a", "t", "--b", "t+1")
    assert (code2, text2) == (code, text)
    code, text = run("--format", "json", "stable-tame", EX5)
    assert json.loads(text)["kind"] == "stable-tame"


def test_stable_tame_usage_errors():
    assert run("stable-tame")[0] == 1
    assert run("stable-tame", "C=X; D=X")[0] == 1
    with pytest.raises(Exception):
        parse_spec("C X")


def test_verify_paper_report(tmp_path):
    report = tmp_path / "report.txt"
    code, text = run("verify-paper", "--report", str(report))
    assert report.read_text().strip() == text.strip()
    assert code == (0 if "FAIL" not in text else 1)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "polyauto.cli", "tame-check", "(X + Y^2, Y)"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("TAME")
