import json
import subprocess
import sys

import pytest

from _support import G2_WORD, P, g2_seed, load_golden
from gencluster.cli import dump_seed, main, parse_seed_file, poly_json, read_seed
from gencluster.errors import DimensionMismatch, ParseError

WORD = ",".join(map(str, G2_WORD))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, doc, name="seed.json"):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(path)


# -- seed files ------------------------------------------------------------------


def test_bundled_seed_is_the_g2_seed():
    assert read_seed("g2") == g2_seed()


@pytest.mark.parametrize(
    "doc, where",
    [
        ({"n": 2, "B": [[0, -1], [1, 0]]}, "document"),
        ({"n": 2, "B": [[0, -1], [1, 0]], "Z": [{"d": 1}]}, "Z"),
        ({"n": 2, "B": [[0, "a"], [1, 0]], "Z": [{"d": 1}, {"d": 1}]}, "B[0][1]"),
        ({"n": 1, "B": [[0]], "Z": [{"d": 2, "coeffs": [1, 1]}]}, "Z[0].coeffs"),
        ({"n": 1, "B": [[0]], "Z": [{"d": 2, "coeffs": [1, "y1 +", 1]}]}, "Z[0].coeffs[1]"),
        ({"n": 1, "B": [[0]], "Z": [{}]}, "Z[0]"),
        ({"n": 1, "B": [[0]], "Z": [{"d": 1}], "semifield": "boolean"}, "semifield"),
        ({"n": 1, "B": [[0]], "Z": [{"d": 1}], "y": ["y1", "y2"]}, "y"),
    ],
)
def test_parse_errors_name_the_field(doc, where):
    with pytest.raises(ParseError) as info:
        parse_seed_file(json.dumps(doc))
    assert info.value.where == where


def test_json_syntax_error_reports_the_line():
    with pytest.raises(ParseError) as info:
        parse_seed_file('{\n "n": 2,\n "B": [}')
    assert info.value.where.startswith("line 3")


def test_validation_errors_pass_through():
    with pytest.raises(DimensionMismatch):
        parse_seed_file(json.dumps({"n": 2, "B": [[0, 1, 0], [-1, 0, 0]], "Z": [{"d": 1}, {"d": 1}]}))


@pytest.mark.parametrize(
    "doc",
    [
        {"n": 2, "B": [[0, -1], [1, 0]], "Z": [{"d": 3, "coeffs": "formal"}, {"d": 1}]},
        {"n": 2, "B": [[0, -2], [1, 0]], "Z": [{"d": 2, "coeffs": [1, 0, 1]}, {"d": 1}], "semifield": "tropical"},
        {"n": 1, "B": [[0]], "Z": [{"d": 2, "coeffs": [1, "z1_1^2 + 3", 1]}], "y": ["(1 + y1)/(y1^2)"]},
    ],
)
def test_dump_round_trip(doc):
    seed = parse_seed_file(json.dumps(doc))
    text = dump_seed(seed)
    assert parse_seed_file(text) == seed
    assert dump_seed(parse_seed_file(text)) == text


# -- run --------------------------------------------------------------------------


def test_run_json_matches_golden_tables(capsys):
    for name, extra in (("g2_table2.json", []), ("g2_table3.json", ["--companion", "left"]), ("g2_table4.json", ["--companion", "right"])):
        code, out, _ = run(capsys, "run", "g2", "--word", WORD, "--format", "json", *extra)
        assert code == 0
        states = json.loads(out)["states"]
        for row, st in zip(load_golden(name)["rows"], states, strict=True):
            assert st["C"] == row["C"] and st["G"] == row["G"]
            assert st["F"] == [poly_json(P(f)) for f in row["F"]]


def test_run_text_blocks(capsys):
    code, out, _ = run(capsys, "run", "g2", "--word", WORD)
    assert code == 0
    assert out.count("t=") == 9
    assert "  C = [[1, -3], [0, -1]]" in out
    code, out, _ = run(capsys, "run", "g2")
    assert out == "t=1 word=[]\n  C = [[1, 0], [0, 1]]\n  G = [[1, 0], [0, 1]]\n  F1 = 1\n  F2 = 1\n"


def test_run_xy_and_seeds_tables(capsys):
    _, out, _ = run(capsys, "run", "g2", "--word", "1", "--table", "xy")
    assert "y2 = y2 * (1 ⊕ y1*z1_1 ⊕ y1^2*z1_2 ⊕ y1^3)" in out
    _, out, _ = run(capsys, "run", "g2", "--word", WORD, "--table", "seeds")
    blocks = out.split("t=")
    assert blocks[1].split("\n", 1)[1] == blocks[9].split("\n", 1)[1]
    _, out, _ = run(capsys, "run", "g2", "--word", "1,2", "--table", "seeds", "--format", "json")
    assert json.loads(out)["states"][1]["Z"][0][0] == {"num": poly_json(P("1")), "den": poly_json(P("1"))}


def test_output_is_deterministic():
    cmd = [sys.executable, "-m", "gencluster", "run", "g2", "--word", WORD, "--table", "xy", "--format", "json"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first


# -- verify and oracle ---------------------------------------------------------------


def test_verify_g2(capsys):
    code, out, _ = run(capsys, "verify", "g2", "--word", WORD)
    assert code == 0
    assert out.splitlines() == [
        f"left companion, word {list(G2_WORD)}: 54 checks, pass",
        f"right companion, word {list(G2_WORD)}: 45 checks, pass",
    ]
    code, out, _ = run(capsys, "verify", "g2", "--depth", "4", "--side", "left", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["passed"] and len(doc["reports"]) == 2


def test_verify_random_words_are_reproducible(capsys):
    _, first, _ = run(capsys, "verify", "g2", "--depth", "5", "--samples", "3", "--rng-seed", "7")
    _, second, _ = run(capsys, "verify", "g2", "--depth", "5", "--samples", "3", "--rng-seed", "7")
    assert first == second and first.count("\n") == 6


def test_oracle(capsys, tmp_path):
    code, out, _ = run(capsys, "oracle", "g2", "--word", "1,2,1")
    assert code == 0
    assert out.splitlines()[-1] == "t=4 word=[1, 2, 1] C=ok G=ok F=ok"
    path = write(tmp_path, {"n": 3, "B": [[0, 1, 0], [-2, 0, 2], [0, -1, 0]], "Z": [{"d": 2}, {"d": 1}, {"d": 3}]})
    code, out, _ = run(capsys, "oracle", path, "--word", "1,2,3,2", "--format", "json")
    assert code == 0 and json.loads(out)["passed"]


# -- exit codes ------------------------------------------------------------------------


def test_bad_input_exits_2(capsys, tmp_path):
    code, _, err = run(capsys, "run", write(tmp_path, {"n": 2, "B": [[0, 1]], "Z": [{"d": 1}, {"d": 1}]}))
    assert code == 2 and "DimensionMismatch" in err
    code, _, err = run(capsys, "run", write(tmp_path, {"n": 2, "B": [[0, 1], [-1, 0]]}))
    assert code == 2 and "missing field 'Z'" in err
    code, _, err = run(capsys, "run", "g2", "--word", "1,3")
    assert code == 2 and "--word" in err
    code, _, err = run(capsys, "dump", str(tmp_path / "absent.json"))
    assert code == 2


def test_bad_word_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["run", "g2", "--word", "1,x"])
    assert info.value.code == 2
    assert "bad mutation word" in capsys.readouterr().err


def test_size_cap_exits_3(monkeypatch, capsys):
    monkeypatch.setenv("GCA_MAX_TERMS", "5")
    code, _, err = run(capsys, "run", "g2", "--word", WORD)
    assert code == 3 and "size limit" in err


def test_dump(capsys):
    code, out, _ = run(capsys, "dump", "g2")
    assert code == 0 and parse_seed_file(out) == g2_seed()
