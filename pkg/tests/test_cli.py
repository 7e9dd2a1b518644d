"""Text formats and the ``extshift`` command line."""

from __future__ import annotations

import io
import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from extshift.cli import Report, run
from extshift.extremal import certify_hm, sample_nontrivial_selfann
from extshift.formats import ParseError, format_subspace, format_tmatrix, parse_subspace, parse_tmatrix
from extshift.setfam import SetFamily, parse_family
from extshift.shifting import TMatrix, limit_action, m_matrix, n_matrix, o_matrix, slow_shift, stabilize
from extshift.subspace import Subspace
from extshift.tfield import QQ, TPoly, get_field

from conftest import fields, random_subspace, seeds

EXAMPLE = "n 4\nk 3\ne{1,2,3} - e{1,2,4}\n"
TRIANGLE = "field Q\nn 4\nk 2\ne{1,2}\ne{1,3}\ne{2,3}\n"


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], stdout=out, stderr=err)
    report = json.loads(out.getvalue()) if out.getvalue() else None
    return code, report, err.getvalue()


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path


# -- formats ----------------------------------------------------------------

def test_parse_subspace_defaults_to_rationals():
    L = parse_subspace("# example\nn 4\nk 3\ne{1,2,3} - e{1,2,4}  # one form\n")
    assert L.field == QQ and L.dim == 1 and (L.n, L.k) == (4, 3)


def test_parse_subspace_field_override():
    text = "field GF(3)\nn 3\nk 1\ne{1} + 4*e{2}\n"
    L = parse_subspace(text)
    assert L.field == get_field("GF(3)")
    assert L.basis()[0].terms == {(1,): 1, (2,): 1}
    with pytest.raises(ParseError, match="GF\\(3\\)"):
        parse_subspace(text, QQ)
    assert parse_subspace("n 3\nk 1\ne{1}\n", get_field("GF(5)")).field == get_field("GF(5)")


@pytest.mark.parametrize("text, line, column", [
    ("n 4\nk 2\ne{1,2}\ne{2,1}\n", 4, 3),
    ("n 4\nk 2\ne{1,2} + e{3}\n", 3, 12),
    ("n 4\nk x\n", 2, 1),
    ("k 2\ne{1,2}\n", 1, 1),
    ("field GF(4)\nn 4\nk 2\n", 1, 1),
    ("n 4\nk 2\n  e{1,2} ? e{3,4}\n", 3, 10),
])
def test_parse_subspace_diagnostics(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_subspace(text)
    assert (info.value.line, info.value.column) == (line, column)
    assert str(info.value).startswith(f"line {line}, column {column}:")


@settings(max_examples=60)
@given(fields, seeds, st.sampled_from([(3, 1), (4, 2), (5, 2), (5, 3)]))
def test_subspace_text_round_trip(F, seed, nk):
    n, k = nk
    L = random_subspace(F, n, k, random.Random(seed))
    assert parse_subspace(format_subspace(L)) == L


def test_parse_tmatrix_forms():
    N = parse_tmatrix("1 1 / 0 t")
    assert N.entries == n_matrix(2, 1, 2).entries
    N2 = parse_tmatrix("field GF(2)\nt 0\n0 1\n")
    assert N2.field == get_field("GF(2)") and N2.entries == m_matrix(1, 2, get_field("GF(2)")).entries


@pytest.mark.parametrize("text, line, column", [
    ("1 1\n0", 2, 1),
    ("1 t^\n0 1", 1, 3),
    ("t t\n1 1", 2, 1),
    ("", 1, 1),
])
def test_parse_tmatrix_diagnostics(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_tmatrix(text)
    assert (info.value.line, info.value.column) == (line, column)


@pytest.mark.parametrize("N", [n_matrix(3, 1, 3), m_matrix(2, 3), o_matrix(2, 1, 4),
                               TMatrix(QQ, [[TPoly.parse(QQ, "t^2-1/2"), TPoly.parse(QQ, "3")],
                                            [TPoly.parse(QQ, "0"), TPoly.parse(QQ, "-t")]])])
def test_tmatrix_text_round_trip(N):
    again = parse_tmatrix(format_tmatrix(N))
    assert again.entries == N.entries and again.field == N.field


def test_family_round_trip():
    F = SetFamily(6, 3, [(1, 2, 3), (1, 4, 5), (2, 4, 6)])
    assert parse_family(F.to_text()) == F


def test_report_json_round_trip():
    rep = Report(command="bounds", inputs={"n": 6, "k": 3}, field=None,
                 outputs={"ekr": 10, "basis": ["3/4*e{1,2}"]}, verified=True,
                 timing={"elapsed_us": 12}, seed=7)
    assert Report.from_json(rep.to_json()) == rep


# -- commands ---------------------------------------------------------------

def test_bounds_command():
    code, rep, _ = cli("bounds", 6, 3)
    assert code == 0
    assert rep["outputs"] == {"ekr": 10, "hm": 10, "cross": 20}
    assert isinstance(rep["timing"]["elapsed_us"], int)


def test_bounds_out_of_range():
    code, rep, err = cli("bounds", 5, 3)
    assert code == 2 and rep is None and "n/2" in err


def test_stabilize_given_sequence(tmp_path):
    path = write(tmp_path, "example.sub", EXAMPLE)
    code, rep, _ = cli("stabilize", path, "--indices", "3,4", "--strategy", "given-sequence",
                       "--sequence", "4,3", "4,3")
    assert code == 0
    assert rep["outputs"]["subspace"]["basis"] == ["e{1,2,3}"]
    assert len(rep["outputs"]["log"]["steps"]) == 2


def test_stabilize_lex_last_matches_library(tmp_path):
    L = random_subspace(QQ, 5, 2, random.Random(4), dim=3)
    path = write(tmp_path, "l.sub", L.to_text())
    code, rep, _ = cli("stabilize", path, "--indices", "1..5")
    S, log = stabilize(L, range(1, 6))
    assert code == 0 and rep["verified"] is True
    assert rep["outputs"] == {"subspace": S.to_dict(), "log": log.to_dict()}


def test_shift_family(tmp_path):
    path = write(tmp_path, "fam.txt", "n 3\nk 2\n2,3\n")
    code, rep, _ = cli("shift-family", path, "--pairs", "2,1")
    assert code == 0 and rep["outputs"]["family"] == [[1, 3]]
    code, rep, _ = cli("shift-family", write(tmp_path, "f2.txt", "n 4\nk 2\n3,4\n2,4\n"), "--until-shifted")
    assert rep["outputs"]["family"] == [[1, 2], [1, 3]]


def test_slow_shift_matches_library(tmp_path):
    path = write(tmp_path, "example.sub", EXAMPLE)
    code, rep, _ = cli("slow-shift", path, "--pair", "4,3")
    L = parse_subspace(EXAMPLE)
    assert code == 0
    assert rep["outputs"] == {"subspace": slow_shift(L, 4, 3).to_dict(), "fixing": False}
    code, rep, _ = cli("slow-shift", path, "--pair", "4,3", "--field", "GF(2)")
    assert rep["field"] == "GF(2)"


def test_limit_command(tmp_path):
    sub = write(tmp_path, "full.sub", "n 2\nk 1\ne{1}\ne{2}\n")
    mat = write(tmp_path, "n.mat", "1 1 / 0 t\n")
    code, rep, _ = cli("limit", sub, "--matrix", mat)
    assert code == 0
    assert rep["outputs"]["subspace"]["dim"] == 2 and rep["outputs"]["determinant"] == "t"
    sub = write(tmp_path, "line.sub", "n 2\nk 1\ne{1} + e{2}\n")
    code, rep, _ = cli("limit", sub, "--matrix", write(tmp_path, "m.mat", "t 0\n0 1\n"))
    expected = limit_action(m_matrix(1, 2), parse_subspace("n 2\nk 1\ne{1} + e{2}\n"))
    assert rep["outputs"]["subspace"] == expected.to_dict() and expected.basis()[0].terms == {(2,): 1}


def test_limit_size_mismatch(tmp_path):
    sub = write(tmp_path, "s.sub", "n 3\nk 1\ne{1}\n")
    code, _, err = cli("limit", sub, "--matrix", write(tmp_path, "m.mat", "1 1 / 0 t"))
    assert code == 2 and "2 x 2" in err


def test_certify_and_replay(tmp_path):
    sub = write(tmp_path, "tri.sub", TRIANGLE)
    out = tmp_path / "cert.json"
    code, rep, _ = cli("certify-hm", sub, "--out", out)
    assert code == 0 and rep["verified"] is True
    assert rep["outputs"]["certificate"] == certify_hm(parse_subspace(TRIANGLE)).to_dict()
    code, rep, _ = cli("replay-cert", out)
    assert code == 0 and rep["outputs"]["ok"] is True


def test_certify_trivial_input_exits_one(tmp_path):
    sub = write(tmp_path, "triv.sub", "n 6\nk 3\ne{1,2,3} + e{1,2,4}\n")
    code, rep, _ = cli("certify-hm", sub)
    assert code == 1 and rep["verified"] is False
    assert rep["outputs"]["certificate"]["failure"]


def test_replay_tampered_certificate(tmp_path):
    data = certify_hm(parse_subspace(TRIANGLE)).to_dict()
    data["input"]["basis"] = ["e{1,2}", "e{1,3}", "e{1,4}"]
    code, rep, _ = cli("replay-cert", write(tmp_path, "bad.json", json.dumps(data)))
    assert code == 1 and rep["outputs"]["failures"]


def test_replay_malformed_json(tmp_path):
    code, _, err = cli("replay-cert", write(tmp_path, "bad.json", '{"n": 4,\n  oops}'))
    assert code == 2 and "line 2" in err


def test_verify_cross(tmp_path):
    K = write(tmp_path, "k.sub", "n 4\nk 2\ne{1,3} + e{2,3}\n")
    L = write(tmp_path, "l.sub", "n 4\nk 2\ne{1,4} + e{2,4}\n")
    code, rep, _ = cli("verify-cross", K, L)
    assert code == 0 and rep["verified"] is True
    M = write(tmp_path, "m.sub", "n 4\nk 2\ne{3,4}\n")
    code, rep, _ = cli("verify-cross", write(tmp_path, "k2.sub", "n 4\nk 2\ne{1,2}\n"), M)
    assert code == 1


@pytest.mark.parametrize("argv, maximum", [
    (["family", "--n", 5, "--k", 2, "--nontrivial"], 3),
    (["family", "--n", 6, "--k", 3, "--jobs", 2], 10),
    (["selfann", "--n", 4, "--k", 2, "--nontrivial"], 3),
    (["crossann", "--n", 4, "--k", 2], 6),
])
def test_search_max(argv, maximum):
    code, rep, _ = cli("search-max", *argv)
    assert code == 0 and rep["outputs"]["maximum"] == maximum == rep["outputs"]["bound"]


def test_search_budget_is_usage_error():
    code, _, err = cli("search-max", "selfann", "--n", 5, "--k", 2, "--field", "GF(3)")
    assert code == 2 and "budget" in err


def test_sample_requires_seed_and_matches_library(tmp_path):
    code, _, _ = cli("sample", "--n", 6, "--k", 3)
    assert code == 2
    out = tmp_path / "s.sub"
    code, rep, _ = cli("sample", "--n", 6, "--k", 3, "--field", "GF(3)", "--seed", 11, "--out", out)
    L = sample_nontrivial_selfann(6, 3, get_field("GF(3)"), 11)
    assert code == 0 and rep["seed"] == 11
    assert rep["outputs"]["subspace"] == L.to_dict()
    assert parse_subspace(out.read_text()) == L


def test_parse_errors_exit_two_with_position(tmp_path):
    bad = write(tmp_path, "bad.sub", "n 4\nk 2\ne{1,2}\ne{2,1}\n")
    code, rep, err = cli("slow-shift", bad, "--pair", "2,1")
    assert code == 2 and rep is None
    assert "line 4, column 3" in err and err.count("line 4") == 1


def test_missing_file_and_bad_arguments(tmp_path):
    code, _, err = cli("slow-shift", tmp_path / "nope.sub", "--pair", "2,1")
    assert code == 2 and "nope.sub" in err
    sub = write(tmp_path, "e.sub", EXAMPLE)
    assert cli("slow-shift", sub, "--pair", "x")[0] == 2
    assert cli("stabilize", sub, "--strategy", "given-sequence")[0] == 2
    assert cli("stabilize", sub, "--indices", "3..9")[0] == 2
    assert cli("frobnicate")[0] == 2


def test_outputs_contain_no_floats(tmp_path):
    sub = write(tmp_path, "q.sub", "n 4\nk 2\ne{1,2} + 1/3*e{1,3}\ne{2,3}\n")
    code, rep, _ = cli("stabilize", sub)

    def walk(x):
        if isinstance(x, float):
            raise AssertionError(f"float in report: {x}")
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        elif isinstance(x, list):
            for v in x:
                walk(v)

    walk(rep)
    assert "e{1,2} + 1/3*e{1,3}" in rep["inputs"]["subspace"]["basis"]


def test_zero_subspace_file():
    L = parse_subspace("n 4\nk 2\n")
    assert L == Subspace(QQ, 4, 2)
