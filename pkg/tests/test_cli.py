"""Command-line interface: documents, verdicts, exit codes, determinism."""

import json
import random
from fractions import Fraction

import pytest

from _helpers import random_game, rps_game, symmetric_222, symmetric_33
from gamedecomp.cli import main
from gamedecomp.games import Game, GameSpace, serialize_game


def write_game(tmp_path, game, name="game.json"):
    path = tmp_path / name
    path.write_text(serialize_game(game), encoding="utf-8")
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_decompose_rps(tmp_path, capsys):
    path = write_game(tmp_path, rps_game())
    code, out, err = run_cli(capsys, "decompose", path)
    assert code == 0
    doc = json.loads(out)
    assert doc["components_sum_to_input"] is True
    assert doc["arithmetic"] == "exact-rational"
    rps_rows = [[int(x) for x in row] for row in rps_game().payoff_rows]
    assert doc["components"]["pure_harmonic"]["payoffs"] == rps_rows
    zero_rows = [[0] * 9, [0] * 9]
    assert doc["components"]["pure_potential"]["payoffs"] == zero_rows
    assert doc["components"]["nonstrategic"]["payoffs"] == zero_rows


def test_decompose_zero_game(tmp_path, capsys):
    path = write_game(tmp_path, Game.zero(GameSpace((2, 2))))
    code, out, _ = run_cli(capsys, "decompose", path)
    doc = json.loads(out)
    assert code == 0
    for component in doc["components"].values():
        assert component["payoffs"] == [[0] * 4, [0] * 4]


def test_classify_rps(tmp_path, capsys):
    path = write_game(tmp_path, rps_game())
    code, out, _ = run_cli(capsys, "classify", path)
    assert code == 0
    doc = json.loads(out)
    assert doc["memberships"] == {
        "pure-potential": False,
        "nonstrategic": False,
        "pure-harmonic": True,
        "potential": False,
        "harmonic": True,
    }
    assert all(doc["checks_agree_with_memberships"].values())


def test_classify_nonstrategic(tmp_path, capsys):
    game = Game(GameSpace((2, 2)), ((3, 5, 3, 5), (2, 2, 7, 7)))
    path = write_game(tmp_path, game)
    _, out, _ = run_cli(capsys, "classify", path)
    doc = json.loads(out)
    assert doc["memberships"]["nonstrategic"] is True
    assert doc["memberships"]["potential"] is True
    assert doc["memberships"]["harmonic"] is True
    assert doc["memberships"]["pure-potential"] is False
    assert doc["memberships"]["pure-harmonic"] is False


def test_classify_symmetric_33_not_potential(tmp_path, capsys):
    game = symmetric_33(1, 2, 3, 4, 5, 6, 7, 9, 9)
    assert (3 - 2 + 4 - 6 - 7 + 9) != 0
    path = write_game(tmp_path, game)
    _, out, _ = run_cli(capsys, "classify", path)
    assert json.loads(out)["memberships"]["potential"] is False


def test_potential_with_shift(tmp_path, capsys):
    path = write_game(tmp_path, symmetric_222(1, 1, 2, -1, 1, -1))
    code, out, _ = run_cli(capsys, "potential", path, "--shift=-9/8")
    assert code == 0
    doc = json.loads(out)
    assert doc["potential"] is True
    assert doc["values"] == [-2, -1, -1, -1, -1, -1, -1, -1]
    assert doc["shift"] == "-9/8"
    assert doc["routes_agree_up_to_constant"] is True


def test_potential_not_potential_is_success(tmp_path, capsys):
    path = write_game(tmp_path, rps_game())
    code, out, _ = run_cli(capsys, "potential", path)
    assert code == 0
    doc = json.loads(out)
    assert doc["potential"] is False
    assert doc["routes_agree"] is True
    assert "values" not in doc


def test_potential_experimental_raw_vector(tmp_path, capsys):
    path = write_game(tmp_path, rps_game())
    code, out, _ = run_cli(
        capsys, "potential", path, "--experimental-raw-vector"
    )
    assert code == 0
    doc = json.loads(out)
    assert len(doc["experimental_raw_vector"]) == 9
    assert doc["experimental_raw_vector_semantics"] == "unspecified"


def test_potential_csv(tmp_path, capsys):
    path = write_game(tmp_path, symmetric_222(1, 1, 2, -1, 1, -1))
    code, out, _ = run_cli(
        capsys, "potential", path, "--format", "csv", "--shift=-9/8"
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "profile_index,value"
    assert lines[1] == "1,-2"
    assert len(lines) == 9


def test_project_reproduces_regression_matrix(tmp_path, capsys):
    code, out, _ = run_cli(
        capsys, "project", "--space", "3:2,2,2", "--kind", "potential"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["sum_identity_verified"] is True
    assert doc["dimension"] == 19  # k + sum(k/k_i) - 1 = 8 + 12 - 1
    rows = doc["rows"]
    assert len(rows) == 24 and len(rows[0]) == 24
    assert Fraction(str(rows[0][0])) == Fraction(38, 48)
    assert Fraction(str(rows[0][3])) == Fraction(2, 48)


def test_project_csv_and_decimal(tmp_path, capsys):
    code, out, _ = run_cli(
        capsys, "project", "--space", "2:2,2", "--kind", "nonstrategic",
        "--format", "csv", "--decimal", "3",
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0].startswith("# approximate")
    assert lines[1].split(",")[0] == "0.500"


def test_project_requires_space(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["project", "--kind", "potential"])
    assert excinfo.value.code == 2


def test_nash_report(tmp_path, capsys):
    path = write_game(tmp_path, rps_game())
    code, out, _ = run_cli(capsys, "nash", path)
    assert code == 0
    doc = json.loads(out)
    assert doc["pure_equilibria"] == []
    assert doc["uniform_mixed_is_nash"] is True


def test_verify_runs_all_checks(tmp_path, capsys):
    rng = random.Random(460)
    path = write_game(tmp_path, random_game(rng, GameSpace((2, 3))))
    code, out, _ = run_cli(capsys, "verify", path)
    assert code == 0
    doc = json.loads(out)
    assert doc["all_passed"] is True
    names = [c["name"] for c in doc["checks"]]
    assert "pseudoinverse_oracles_match" in names
    assert "potential_routes_agree" in names
    assert all(c["passed"] for c in doc["checks"])


def test_decimal_output_is_labeled(tmp_path, capsys):
    game = Game(GameSpace((2,)), ((Fraction(1, 2), Fraction(-9, 8)),))
    path = write_game(tmp_path, game)
    code, out, _ = run_cli(capsys, "decompose", path, "--decimal", "4")
    assert code == 0
    doc = json.loads(out)
    assert doc["approximate"] is True
    assert doc["decimal_digits"] == 4
    # input 1/2 splits into 13/16 pure-potential and -5/16 nonstrategic
    assert doc["components"]["pure_potential"]["payoffs"][0][0] == "0.8125"
    assert doc["components"]["nonstrategic"]["payoffs"][0][0] == "-0.3125"


def test_malformed_file_fails_cleanly(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    code, out, err = run_cli(capsys, "classify", str(path))
    assert code == 1
    assert out == ""
    assert "error:" in err and "malformed" in err


def test_missing_file_fails_cleanly(tmp_path, capsys):
    code, _, err = run_cli(capsys, "classify", str(tmp_path / "absent.json"))
    assert code == 1
    assert "error:" in err


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["classify", "x.json", "--frobnicate"])
    assert excinfo.value.code == 2


def test_csv_rejected_where_not_tabular(tmp_path, capsys):
    path = write_game(tmp_path, rps_game())
    code, _, err = run_cli(capsys, "classify", path, "--format", "csv")
    assert code == 2
    assert "csv" in err


def test_single_strategy_player_warns(tmp_path, capsys):
    game = Game(GameSpace((1, 2)), ((4, 4), (1, 2)))
    path = write_game(tmp_path, game)
    code, out, err = run_cli(capsys, "classify", path)
    assert code == 0
    assert "warning" in err
    assert json.loads(out)["memberships"]["potential"] is True


def test_space_override(tmp_path, capsys):
    game = Game.zero(GameSpace((2, 2)))
    path = write_game(tmp_path, game)
    code, out, _ = run_cli(capsys, "classify", path, "--space", "1:8")
    assert code == 0
    assert json.loads(out)["space"] == {"players": 1, "strategies": [8]}
    code, _, err = run_cli(capsys, "classify", path, "--space", "2:3,3")
    assert code == 1
    assert "override" in err


def test_space_flag_format_validated(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["project", "--space", "2:2", "--kind", "potential"])
    assert excinfo.value.code == 2


def test_output_is_deterministic(tmp_path, capsys):
    rng = random.Random(461)
    path = write_game(tmp_path, random_game(rng, GameSpace((2, 2, 2))))
    _, first, _ = run_cli(capsys, "decompose", path)
    _, second, _ = run_cli(capsys, "decompose", path)
    assert first == second
