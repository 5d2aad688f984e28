import json
import os
import subprocess
import sys

import pytest

from jaclat.cli import main
from jaclat.expr import (ExprSyntaxError, UnknownLattice, evaluate, parse_lattice_expr,
                         to_text)


def test_parse_examples():
    assert evaluate("A2").gram == ((2, 1), (1, 2))
    assert evaluate("Z(3)+Z2").gram == ((3, 0, 0), (0, 1, 0), (0, 0, 1))
    assert evaluate(" gram:[[2, 1],[1,2]] ").gram == ((2, 1), (1, 2))
    with pytest.raises(UnknownLattice):
        evaluate("E9")


@pytest.mark.parametrize("text", ["Z", "Z3", "A2(2)+D4", "E8+E7+E6", "gram:[[2,1],[1,3]]+Z(5)"])
def test_canonical_roundtrip(text):
    e = parse_lattice_expr(text)
    assert to_text(e) == text
    assert parse_lattice_expr(to_text(e)) == e


@pytest.mark.parametrize("text,pos", [("", 0), ("A", 1), ("A2+", 3), ("Q3", 0), ("Z(3", 3),
                                      ("A2)", 2), ("gram:[[1,2]", 11)])
def test_syntax_errors(text, pos):
    with pytest.raises(ExprSyntaxError) as exc:
        parse_lattice_expr(text)
    assert exc.value.position == pos


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_info(capsys):
    code, out, _ = run(capsys, "info", "A2", "--json")
    data = json.loads(out)
    assert code == 0 and data["det"] == 3 and data["level"] == 3 and len(data["shadow"]) == 3


def test_dim(capsys):
    code, out, _ = run(capsys, "dim", "A2", "--k", "4", "--h", "0")
    assert code == 0 and "= 1" in out and "Exact" in out
    code, out, _ = run(capsys, "dim", "Z", "--k", "1/2", "--h", "3", "--json")
    assert json.loads(out)["value"] == "1"


def test_hp(capsys):
    code, out, _ = run(capsys, "hp", "A3", "--h", "0", "--parity", "even")
    assert code == 0 and "t^4 + t^6 + t^8" in out


def test_singular(capsys):
    code, out, _ = run(capsys, "singular", "A2", "--h", "8", "--basis", "--json")
    data = json.loads(out)
    assert code == 0 and data["rows"][0]["dim"] == 1 and len(data["rows"][0]["basis"]) == 1


def test_qexp(capsys):
    code, out, _ = run(capsys, "qexp", "theta", "--prec", "3", "--json")
    assert code == 0 and json.loads(out)["gram"] == [[1]]
    code, out, _ = run(capsys, "qexp", "theta:A2", "--lam", "1,0,0", "--prec", "2")
    assert code == 0 and "A2" in out


def test_json_is_stable(capsys):
    _, a, _ = run(capsys, "qexp", "distjac_A2", "--prec", "4", "--json")
    _, b, _ = run(capsys, "qexp", "distjac_A2", "--prec", "4", "--json")
    assert a == b


@pytest.mark.parametrize("argv,code", [
    (["info", "E9"], 1),
    (["info", "A2+"], 1),
    (["dim", "A2"], 1),
    (["qexp", "nope"], 1),
    (["verify", "--suite", "bogus"], 1),
    (["info", "gram:[[1,2],[2,1]]"], 2),
    (["info", "gram:[[1,1],[1,1]]"], 2),
    (["dim", "A2", "--k", "1/3", "--h", "0"], 2),
])
def test_exit_codes(capsys, argv, code):
    try:
        got = main(argv)
    except SystemExit as exc:
        got = exc.code
    assert got == code


def test_prec_env(capsys, monkeypatch):
    monkeypatch.setenv("JACLAT_PREC", "2")
    _, out, _ = run(capsys, "qexp", "theta", "--json")
    assert str(json.loads(out)["N"]) == "2"


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "jaclat.cli", "info", "Z"], capture_output=True,
                         text=True, env=dict(os.environ))
    assert out.returncode == 0 and "level 8" in out.stdout
