import json

import pytest

from smg.cli import main
from smg.fixtures import CIRCLE, FR, HOPF
from smg.quandles import FOUR_QUANDLE, serialize_quandle


@pytest.fixture
def files(tmp_path):
    fr = tmp_path / "fr.smg"
    fr.write_text(FR)
    circle = tmp_path / "circle.smg"
    circle.write_text(CIRCLE)
    hopf = tmp_path / "hopf.smg"
    hopf.write_text(HOPF)
    q = tmp_path / "four.q"
    q.write_text(serialize_quandle(FOUR_QUANDLE))
    return {"fr": str(fr), "circle": str(circle), "hopf": str(hopf),
            "q": str(q), "dir": tmp_path}


def test_color_fr_prints_sixteen(files, capsys):
    rc = main(["color", files["fr"], files["q"]])
    assert rc == 0
    assert capsys.readouterr().out.strip() == "16"


def test_admissible_circle_yes(files, capsys):
    rc = main(["admissible", files["circle"]])
    assert rc == 0
    assert capsys.readouterr().out.startswith("YES")


def test_admissible_hopf_no(files, capsys):
    rc = main(["admissible", files["hopf"]])
    assert rc == 1
    assert capsys.readouterr().out.startswith("NO")


def test_search_zero_budget_unknown(files, capsys):
    rc = main(["search", files["circle"], "--target", files["fr"], "--depth", "0"])
    assert rc == 4
    assert "UNKNOWN" in capsys.readouterr().out


def test_usage_error():
    assert main([]) == 2


def test_input_error_missing_file(capsys):
    assert main(["validate", "/nonexistent.smg"]) == 3


def test_validate_and_json_stability(files, capsys):
    rc = main(["--json", "validate", files["fr"]])
    assert rc == 0
    out1 = capsys.readouterr().out
    main(["--json", "validate", files["fr"]])
    assert capsys.readouterr().out == out1
    assert json.loads(out1)["ok"] is True


def test_move_list_counts(capsys):
    assert main(["--json", "move", "list"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert sum(1 for m in data["moves"] if not m["derived"]) == 17
    assert main(["--json", "move", "list", "--oriented"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert len(data["moves"]) == 22


def test_move_sites_and_apply(files, capsys):
    rc = main(["--json", "move", "sites", files["circle"], "--move", "O1"])
    assert rc == 0
    n = json.loads(capsys.readouterr().out)["count"]
    assert n >= 2
    rc = main(["move", "apply", files["circle"], "--move", "O1", "--site", "0"])
    assert rc == 0
    assert "node" in capsys.readouterr().out


def test_search_certificate_replays(files, tmp_path, capsys):
    main(["move", "apply", files["circle"], "--move", "O1"])
    moved = tmp_path / "moved.smg"
    moved.write_text(capsys.readouterr().out + "\n")
    rc = main(["--json", "search", files["circle"], "--target", str(moved),
               "--depth", "2", "--allow", "O1"])
    assert rc == 0
    steps = json.loads(capsys.readouterr().out)["steps"]

    from smg.catalog import catalog_map
    from smg.diagram import parse_smg
    from smg.moves import MoveSequence, verify_sequence

    seq = MoveSequence.parse(steps)
    final = verify_sequence(parse_smg(CIRCLE), seq, catalog_map("unoriented"))
    assert final.canonical_code() == parse_smg(moved.read_text()).canonical_code()


def test_group_and_abelian(files, capsys):
    assert main(["--json", "group", files["fr"]]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["generators"] == 4
    assert main(["abelian", files["fr"]]) == 0
    assert capsys.readouterr().out.strip() == "Z + Z"


def test_homs_cli(files, tmp_path, capsys):
    # Z/3 written in the shared 1-indexed table layout
    t = tmp_path / "z3.g"
    t.write_text("3\n1 2 3\n2 3 1\n3 1 2\n")
    assert main(["homs", files["circle"], "--table", str(t)]) == 0
    assert capsys.readouterr().out.strip() == "3"


def test_quandle_cli(files, capsys):
    assert main(["quandle", "check", files["q"]]) == 0
    assert main(["quandle", "involutory", files["q"]]) == 0


def test_semiinv_profile_export(files, capsys):
    assert main(["semiinv", files["fr"], "--kind", "M5"]) == 0
    capsys.readouterr()
    assert main(["profile", files["hopf"]]) == 0
    assert "linking [1]" in capsys.readouterr().out
    assert main(["--json", "export-kirby", files["fr"]]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["dotted"] == 2 and data["framed"] == 2
