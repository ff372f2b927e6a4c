import json
import random
from pathlib import Path

import pytest

from dfan.cli import main
from dfan.parse import parse_operator
from dfan.weyl import RingSignature, format_op

from conftest import random_op

INPUTS = Path(__file__).resolve().parent.parent / "demos" / "inputs"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    assert code == 0, err
    return json.loads(out)


def test_fan_normal_crossing(capsys):
    data = run_json(capsys, "fan", INPUTS / "normal_crossing.dfan")
    assert data["schema"] == 1 and data["command"] == "fan"
    assert data["skeleton"] == [[1, 0], [0, 1]]
    assert sum(1 for c in data["cells"] if c["dim"] == 2) == 1


def test_fan_diagonal_with_check(capsys):
    data = run_json(capsys, "fan", INPUTS / "diagonal.dfan", "--check")
    assert data["skeleton"] == [[1, 0], [1, 1], [0, 1]]
    assert data["check"]["ok"] is True


def test_kappa(capsys):
    assert run_json(capsys, "kappa", INPUTS / "normal_crossing.dfan")["kappa1"] == 0
    assert run_json(capsys, "kappa", INPUTS / "diagonal.dfan")["kappa1"] == 1


def test_gb_text_output(capsys):
    code, out, _ = run(capsys, "gb", INPUTS / "diagonal.dfan", "--order", "V:1,1")
    assert code == 0
    assert "t1 - t2" in out or "-t2 + t1" in out


def test_divide(capsys):
    data = run_json(capsys, "divide", INPUTS / "line.dfan", "x1*dt1", "--order", "V:1")
    assert data["remainder"] is not None


def test_reduce_from_cert_file(tmp_path, capsys):
    certs = tmp_path / "certs.txt"
    certs.write_text("V:1 = t1*dt1 + 1\n")
    data = run_json(capsys, "reduce", INPUTS / "line.dfan", "x1*dt1", "--w", "0", "--certs", certs)
    assert data["result"] in ("t1*dt1 + 1", "-t1*dx1 + 1")
    assert len(data["trace"]["steps"]) == 1


def test_normalize_asks_the_oracle(capsys):
    data = run_json(capsys, "normalize", INPUTS / "normal_crossing.dfan", "t1*dt2", "--w=-1,1")
    v1, v2 = data["orders"]
    assert v1 <= -1 + data["kappa1"] and v2 <= 1


def test_oracle_member(capsys):
    data = run_json(capsys, "oracle", "member", INPUTS / "line.dfan", "x1*dt1 - t1*dt1 - 1")
    assert data["status"] == "yes"


@pytest.mark.parametrize(
    "argv, code",
    [
        (["fan", "missing.dfan"], 2),
        (["gb", INPUTS / "line.dfan", "--order", "W:1"], 1),
        (["divide", INPUTS / "line.dfan", "x1 +"], 2),
        (["fan", INPUTS / "normal_crossing.dfan", "--pair-budget", "1"], 3),
    ],
)
def test_exit_codes(argv, code, capsys):
    assert run(capsys, *argv)[0] == code


def test_fan_rejects_three_parameters(tmp_path, capsys):
    f = tmp_path / "three.dfan"
    f.write_text("n=1 p=3\nf1 = x1\nf2 = x1\nf3 = x1\n")
    code, _, err = run(capsys, "fan", f)
    assert code == 2 and "p <= 2" in err


@pytest.mark.parametrize("name", sorted(p.name for p in INPUTS.glob("*.dfan")))
def test_runs_are_byte_identical(name, capsys):
    outs = [run(capsys, "fan", INPUTS / name, "--json")[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_print_parse_round_trip():
    rng = random.Random(11)
    sig = RingSignature(2, 2)
    for _ in range(100):
        A = random_op(rng, sig, terms=5)
        assert parse_operator(format_op(A), sig) == A
