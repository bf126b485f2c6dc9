"""Command line: exit codes, output shapes, JSON mode."""

import json

import pytest

from coherekit.cli import main

MP_DOC = """\
atoms A C H
assess P(A given H) = 1/2
assess P(C given (A given H)) = 1/2
query extend C
"""

OVERCOMMITTED_DOC = MP_DOC.replace("query extend C", "assess P(C) = 9/10")

NESTED_TRIPLE_DOC = """\
atoms A C H
assess P(A given H) = 1/2
assess P(C given (A given H)) = 1/2
assess P(C given (!A given H)) = 1/2
"""


@pytest.fixture
def write(tmp_path):
    def _write(text, name="assessment.cohere"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write


def test_check_coherent(write, capsys):
    code = main(["check", write(NESTED_TRIPLE_DOC)])
    out = capsys.readouterr().out
    assert code == 0
    assert out.strip() == "coherent"


def test_check_incoherent_with_witness(write, capsys):
    code = main(["check", write(OVERCOMMITTED_DOC)])
    out = capsys.readouterr().out
    assert code == 1
    assert "incoherent" in out
    assert "P(C)" in out


def test_check_json(write, capsys):
    code = main(["check", write(OVERCOMMITTED_DOC), "--json"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 1
    assert payload["coherent"] is False
    assert payload["witness"]["subset"] == [0, 1, 2]


def test_extend_uses_query_target(write, capsys):
    code = main(["extend", write(MP_DOC)])
    out = capsys.readouterr().out
    assert code == 0
    assert "lower 1/4" in out
    assert "upper 3/4" in out
    assert "certified-by-LP" in out


def test_extend_explicit_target_json(write, capsys):
    code = main(["extend", write(MP_DOC), "--target", "C", "--json"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload == {
        "target": "P(C)",
        "lower": "1/4",
        "upper": "3/4",
        "exactness": "certified-by-LP",
    }


def test_extend_without_target_fails(write, capsys):
    doc = MP_DOC.replace("query extend C\n", "")
    code = main(["extend", write(doc)])
    assert code == 2
    assert "target" in capsys.readouterr().err


def test_mp_command(capsys):
    code = main(["mp", "--x", "1/2", "--y", "1/2"])
    out = capsys.readouterr().out
    assert code == 0
    assert "[1/4, 3/4]" in out
    assert "agreed" in out


def test_mp_classical_json(capsys):
    code = main(["mp", "--x", "3/4", "--y", "1/3", "--classical", "--json"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["lower"] == "1/4"
    assert payload["upper"] == "1/2"
    assert payload["engine_cross_check"] == "agreed"


def test_mp_rejects_out_of_range(capsys):
    code = main(["mp", "--x", "3/2", "--y", "1/2"])
    assert code == 2
    assert "outside" in capsys.readouterr().err


def test_dutchbook_none(write, capsys):
    code = main(["dutchbook", write(NESTED_TRIPLE_DOC)])
    assert code == 0
    assert "none" in capsys.readouterr().out


def test_dutchbook_found_json(write, capsys):
    code = main(["dutchbook", write(OVERCOMMITTED_DOC), "--json"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 1
    book = payload["dutch_book"]
    assert book["subset"] == [0, 1, 2]
    assert len(book["stakes"]) == 3
    assert book["epsilon"] != "0"


def test_table_target_five_rows(write, capsys):
    code = main(
        ["table", write(MP_DOC), "--target", "(C given (A given H))", "--json"]
    )
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert len(payload["rows"]) == 5
    regions = {row["region"] for row in payload["rows"]}
    assert "A & H & C" in regions
    assert "!A & H" in regions


def test_table_target_seven_rows_for_nested_pair(write, capsys):
    doc = "atoms A B H K\n"
    code = main(
        [
            "table",
            write(doc),
            "--target",
            "((B given K) given (A given H))",
            "--json",
        ]
    )
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert len(payload["rows"]) == 7


def test_table_family_matrix(write, capsys):
    code = main(["table", write(MP_DOC)])
    out = capsys.readouterr().out
    assert code == 0
    assert "x1 = P(A given H)" in out
    assert "called off" in out
    assert "A C H" in out


def test_parse_error_exit_code(write, capsys):
    code = main(["check", write("atoms A\nassess P(A = 1\n")])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_impossible_conditioning_exit_code(write, capsys):
    code = main(["check", write("atoms A\nassess P(A given BOT) = 1\n")])
    assert code == 2


def test_missing_file(capsys):
    code = main(["check", "/nonexistent/path.cohere"])
    assert code == 2


def test_cap_exit_code(write, capsys, monkeypatch):
    monkeypatch.setenv("COHERE_SUBSET_CAP", "2")
    code = main(["check", write(NESTED_TRIPLE_DOC)])
    assert code == 3
    monkeypatch.setenv("COHERE_SUBSET_CAP", "12")
    assert main(["check", write(NESTED_TRIPLE_DOC)]) == 0
