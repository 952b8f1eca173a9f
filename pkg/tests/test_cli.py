import io
import json
from fractions import Fraction

import pytest

from conftest import EX1, EX3, mats
from mumford import cli
from test_curve import KNOWN_POINT_17, KNOWN_Q, KNOWN_QUARTIC, digits_match


def job(tmp_path, name="job.json", **fields):
    path = tmp_path / name
    path.write_text(json.dumps(fields))
    return str(path)


def gens_json(ms):
    return [m.to_json() for m in ms]


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_schottky_test_good_position(tmp_path, capsys):
    code, out, _ = run(capsys, "schottky-test", job(tmp_path, p=3, generators=EX1))
    assert code == 0
    assert json.loads(out)["verdict"] == "GoodPosition"


def test_relation_exit_code(tmp_path, capsys):
    g1, _ = mats(EX1)
    code, out, _ = run(capsys, "schottky-test", job(tmp_path, p=3, generators=gens_json([g1, g1 * g1])))
    assert code == 2
    assert json.loads(out)["verdict"] == "Relation"


def test_nonhyperbolic_exit_code(tmp_path, capsys):
    s0 = [["-9", "0"], ["-2", "9"]]
    code, out, _ = run(capsys, "schottky-test", job(tmp_path, p=3, generators=[EX1[0], s0]))
    assert code == 3
    assert json.loads(out)["verdict"] == "NonHyperbolic"


def test_inconclusive_exit_code(tmp_path, capsys):
    g1, g2 = mats(EX1)
    path = job(tmp_path, p=3, generators=gens_json([g1, (g1**100) * g2]))
    code, out, _ = run(capsys, "schottky-test", path, "--max-m", "4")
    assert code == 4
    assert json.loads(out)["verdict"] == "Inconclusive"


def test_period_matrix_digits(tmp_path, capsys):
    code, out, _ = run(capsys, "period-matrix", job(tmp_path, p=3, n=10, generators=EX1))
    assert code == 0
    obj = json.loads(out)
    assert obj["Q"] == KNOWN_Q["ex1"]
    assert obj["m"] == 5


def test_period_matrix_valuations_only_at_m0(tmp_path, capsys):
    code, out, _ = run(capsys, "period-matrix", job(tmp_path, p=3, generators=EX1), "--m", "0")
    obj = json.loads(out)
    assert code == 0 and "Q" not in obj
    assert obj["val"] == [["2", "0"], ["0", "2"]]


def test_unsafe_mode(tmp_path, capsys):
    path = job(tmp_path, p=3, n=10, generators=EX1, a="7", z="10")
    code, out, _ = run(capsys, "period-matrix", path, "--unsafe-no-good-position", "--m", "4")
    obj = json.loads(out)
    assert code == 0 and obj["unsafe"] is True
    assert obj["val"] == [["2", "0"], ["0", "2"]]


def test_unsafe_mode_needs_m(tmp_path, capsys):
    code, _, err = run(capsys, "period-matrix", job(tmp_path, p=3, generators=EX1), "--unsafe-no-good-position")
    assert code == 64 and "--m" in err


def test_skeleton_json_and_dot(tmp_path, capsys):
    path = job(tmp_path, p=3, generators=EX1)
    code, out, _ = run(capsys, "skeleton", path)
    obj = json.loads(out)
    assert code == 0
    assert sorted(Fraction(e["length"]) for e in obj["edges"]) == [2, 2, 2]
    code, out, _ = run(capsys, "skeleton", path, "--format", "dot")
    assert code == 0
    assert out.startswith("graph skeleton {")
    assert out.count(" -- ") == 3


def test_canonical_point(tmp_path, capsys):
    code, out, _ = run(capsys, "canonical", job(tmp_path, p=3, n=10, generators=EX3), "--z", "17")
    obj = json.loads(out)
    assert code == 0
    assert obj["points"]["17"] == KNOWN_POINT_17


def test_canonical_quartic_needs_genus_three(tmp_path, capsys):
    code, _, err = run(capsys, "canonical", job(tmp_path, p=3, generators=EX1), "--quartic")
    assert code == 64 and "genus 3" in err


def test_canonical_quartic(tmp_path, capsys):
    code, out, _ = run(capsys, "canonical", job(tmp_path, p=3, n=10, generators=EX3), "--quartic", "--z", "17")
    obj = json.loads(out)
    assert code == 0
    assert len(obj["quartic"]) == 15 and obj["quartic"][0] == "(1)_3"
    assert digits_match(obj["quartic"][1], KNOWN_QUARTIC[1])
    assert obj["points"][0] == KNOWN_POINT_17


def test_whittaker_forward_and_inverse(tmp_path, capsys):
    pairs = [["0", "9"], ["1", "10"], ["2", "11"]]
    code, out, _ = run(capsys, "whittaker", job(tmp_path, p=3, n=10, fixed_points=pairs))
    assert code == 0
    obj = json.loads(out)
    values = obj["normalized"]["ramification"]["values"]
    assert values[0] == "(0)_3" and values[4:] == ["inf", "1"]
    code, out, _ = run(capsys, "whittaker", job(tmp_path, "inv.json", p=3, n=10, ramification=values[1:4]), "-d", "4")
    assert code == 0
    assert json.loads(out)["fixed_points_mod_p^d"] == [0, 45, 45]


def test_not_valid_exit_code(tmp_path, capsys):
    code, out, _ = run(capsys, "whittaker", job(tmp_path, p=3, ramification=["9", "18", "3"]))
    assert code == 5
    assert json.loads(out) == {"result": "NOT VALID"}


def test_exhausted_search_exit_code(tmp_path, capsys):
    code, out, _ = run(capsys, "whittaker", job(tmp_path, p=3, ramification=["9", "3", "6"]))
    assert code == 4
    assert json.loads(out)["t"] == 3


def test_runtime_error_exit_code(tmp_path, capsys):
    code, _, err = run(capsys, "whittaker", job(tmp_path, p=3, ramification=["1", "2", "3"]))
    assert code == 1 and "error" in err


@pytest.mark.parametrize(
    "fields",
    [
        {"p": 4, "generators": EX1},
        {"p": 3},
        {"p": 3, "generators": [[["a", "b"], ["c", "d"]]]},
        {"p": 3, "generators": EX1, "n": 0},
    ],
    ids=["composite-p", "no-generators", "bad-entry", "bad-precision"],
)
def test_malformed_input_is_usage_error(tmp_path, capsys, fields):
    code, _, err = run(capsys, "period-matrix", job(tmp_path, **fields))
    assert code == 64
    assert err.startswith("mumford:")


def test_unreadable_input(tmp_path, capsys):
    code, _, _ = run(capsys, "schottky-test", str(tmp_path / "missing.json"))
    assert code == 64
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "schottky-test", str(bad))[0] == 64


def test_argument_errors(capsys):
    assert run(capsys)[0] == 64
    assert run(capsys, "frobnicate", "x.json")[0] == 64
    assert run(capsys, "--version")[0] == 0


def test_stdin_input(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps({"p": 3, "generators": EX1})))
    code, out, _ = run(capsys, "schottky-test", "-")
    assert code == 0 and json.loads(out)["verdict"] == "GoodPosition"
