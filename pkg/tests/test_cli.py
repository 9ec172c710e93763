"""Command-line front end: the program/test grammar, workspace round-trips,
every exit code, and the printed report formats."""

import json
import random
import subprocess
import sys

import pytest

from kadlib.algebra import TestAlgebra
from kadlib.cli import (
    _ASSIGN_MSG,
    CliParseError,
    _load_algebra,
    load_workspace,
    main,
    parse_program,
    parse_test,
    semiring_to_doc,
)
from kadlib.hoare import Cond, Prim, Seq, TAnd, TFalse, TNot, TOr, TRef, TStates, TTrue, While
from kadlib.models import conway_model, conway_names, rel_semiring, rel_tests


def write_ws(tmp_path, doc, name="ws.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


CHAIN = {
    "n": 3,
    "relations": {"R": [[1, 2], [2, 3]], "Loop": [[1, 1]]},
    "sets": {"atEnd": [3]},
    "programs": {"main": "while not atEnd do step od"},
    "env": {"step": "R"},
    "triples": {
        "good": {"pre": "true", "prog": "main", "post": "atEnd"},
        "bad": {"pre": "true", "prog": "step", "post": "atEnd"},
    },
    "proofs": {
        "pf": {
            "rule": "while",
            "conclusion": {"pre": "true", "prog": "main", "post": "not (not atEnd) and true"},
            "premises": [
                {
                    "rule": "axiom",
                    "conclusion": {"pre": "not atEnd and true", "prog": "step", "post": "true"},
                }
            ],
        },
        "pfbad": {
            "rule": "axiom",
            "conclusion": "bad",
        },
    },
}


# -- the grammar ---------------------------------------------------------------


def test_program_grammar():
    assert parse_program("a; b; c") == Seq(Seq(Prim("a"), Prim("b")), Prim("c"))
    assert parse_program("a; (b; c)") == Seq(Prim("a"), Seq(Prim("b"), Prim("c")))
    assert parse_program("if p then a else skip fi") == Cond(
        TRef("p"), Prim("a"), Prim("skip")
    )
    assert parse_program("while p do a; b od") == While(
        TRef("p"), Seq(Prim("a"), Prim("b"))
    )
    assert parse_program("skip") == Prim("skip")
    assert parse_program("abort") == Prim("abort")


def test_test_grammar_precedence():
    # or is weakest, then and, then not
    assert parse_test("not p and q or r") == TOr(
        TAnd(TNot(TRef("p")), TRef("q")), TRef("r")
    )
    assert parse_test("p or q and r") == TOr(TRef("p"), TAnd(TRef("q"), TRef("r")))
    assert parse_test("not (p or q)") == TNot(TOr(TRef("p"), TRef("q")))
    assert parse_test("{1,2}") == TStates((1, 2))
    assert parse_test("{}") == TStates(())
    assert parse_test("true and false") == TAnd(TTrue(), TFalse())


def test_parse_errors():
    with pytest.raises(CliParseError, match="assignment is not part"):
        parse_program("x := 1")
    with pytest.raises(CliParseError, match="unexpected character"):
        parse_program("a $ b")
    with pytest.raises(CliParseError, match="unexpected keyword"):
        parse_program("a; od")
    with pytest.raises(CliParseError, match="unexpected end of input"):
        parse_program("if p then a")
    with pytest.raises(CliParseError, match="trailing input"):
        parse_program("a b")
    with pytest.raises(CliParseError, match="expected a state number"):
        parse_test("{x}")
    with pytest.raises(CliParseError, match="unexpected keyword"):
        parse_test("p and od")


# -- workspace round-trips ----------------------------------------------------------


def test_builtins_round_trip_through_files(tmp_path):
    for nm in conway_names():
        S = conway_model(nm)
        T = TestAlgebra.discrete(S)
        path = write_ws(tmp_path, semiring_to_doc(S, T), f"{nm}.json")
        S2, T2 = _load_algebra(path)
        assert S2 == S
        assert T2.members == T.members and T2.compl == T.compl


def test_relation_semiring_round_trips_with_converse(tmp_path):
    S = rel_semiring(2)
    T = rel_tests(2)
    path = write_ws(tmp_path, semiring_to_doc(S, T))
    S2, T2 = _load_algebra(path)
    assert S2 == S
    assert T2.members == T.members and T2.compl == T.compl


def test_workspace_requires_n_for_relational_keys(tmp_path):
    path = write_ws(tmp_path, {"relations": {"R": [[1, 1]]}})
    with pytest.raises(CliParseError, match='declares no "n"'):
        load_workspace(path)


def test_workspace_validates_edges_and_sets(tmp_path):
    path = write_ws(tmp_path, {"n": 2, "relations": {"R": [[1, 3]]}})
    with pytest.raises(CliParseError, match="outside 1..2"):
        load_workspace(path)
    path = write_ws(tmp_path, {"n": 2, "sets": {"p": [5]}})
    with pytest.raises(CliParseError, match="set 'p'"):
        load_workspace(path)
    path = write_ws(tmp_path, {"n": 2, "relations": {}, "env": {"a": "missing"}})
    with pytest.raises(CliParseError, match="unknown relation"):
        load_workspace(path)


# -- check command -------------------------------------------------------------------


def test_check_builtin_all_green(capsys):
    assert main(["check", "builtin:A2"]) == 0
    out, err = capsys.readouterr()
    assert "FAILS" not in out
    assert "add-commutative holds" in out
    assert "star-left-induction holds" in out
    assert "d1 holds" in out
    assert "skipping converse laws: no converse table" in err


def test_check_reports_locality_failure(capsys):
    assert main(["check", "builtin:A3_2", "--laws", "domain"]) == 1
    out, _ = capsys.readouterr()
    assert "dloc FAILS with witness (a, a)" in out
    assert "cdloc FAILS with witness (a, a)" in out
    assert "d1 holds" in out and "d2 holds" in out
    assert "[not applicable: no locality]" in out


def test_check_relational_model_with_converse(capsys):
    assert main(["check", "rel:2"]) == 0
    out, _ = capsys.readouterr()
    assert "conv-involutive holds" in out
    assert "dom-of-converse holds" in out
    assert "FAILS" not in out


def test_check_catches_broken_tables(tmp_path, capsys):
    doc = semiring_to_doc(conway_model("A3_1"))
    doc["semiring"]["mul"][0][0] = "1"
    path = write_ws(tmp_path, doc)
    assert main(["check", path, "--laws", "isemiring"]) == 1
    out, _ = capsys.readouterr()
    assert "mul-associative FAILS with witness" in out


def test_check_exit_codes_for_bad_input(tmp_path, capsys):
    garbage = tmp_path / "garbage.json"
    garbage.write_text("{ not json")
    assert main(["check", str(garbage)]) == 2
    assert main(["check", "builtin:A9"]) == 2
    assert main(["check", "rel:4"]) == 3
    assert main(["check", "builtin:A2", "--laws", "converse"]) == 3
    _, err = capsys.readouterr()
    assert "error:" in err


def test_check_missing_star_is_a_capability_error(tmp_path, capsys):
    doc = semiring_to_doc(conway_model("A2"))
    del doc["semiring"]["star"]
    path = write_ws(tmp_path, doc)
    assert main(["check", path, "--laws", "kleene"]) == 3
    _, err = capsys.readouterr()
    assert "no star table declared" in err
    # under --laws all the same model just skips the section
    assert main(["check", path]) == 0
    _, err = capsys.readouterr()
    assert "skipping kleene laws" in err


def test_assignment_is_rejected_at_load_time(tmp_path, capsys):
    doc = {"n": 2, "programs": {"p": "x := 1"}}
    assert main(["check", write_ws(tmp_path, doc)]) == 2
    _, err = capsys.readouterr()
    assert _ASSIGN_MSG in err


# -- reach command ----------------------------------------------------------------------


def test_reach_chain_output(tmp_path, capsys):
    path = write_ws(tmp_path, CHAIN)
    assert main(["reach", path, "--relation", "R", "--targets", "3"]) == 0
    out, _ = capsys.readouterr()
    assert out.splitlines() == [
        "naive: {1,2,3} (iterations=3, preimage-evals=6)",
        "efficient: {1,2,3} (iterations=2, preimage-evals=3)",
        "agree",
    ]


def test_reach_accepts_braced_targets_and_single_algo(tmp_path, capsys):
    path = write_ws(tmp_path, CHAIN)
    assert main(["reach", path, "--relation", "R", "--targets", "{2,3}", "--algo", "naive"]) == 0
    out, _ = capsys.readouterr()
    assert out.splitlines() == ["naive: {1,2,3} (iterations=2, preimage-evals=5)"]


def test_reach_empty_targets(tmp_path, capsys):
    path = write_ws(tmp_path, CHAIN)
    assert main(["reach", path, "--relation", "R", "--targets", ""]) == 0
    out, _ = capsys.readouterr()
    assert out.splitlines() == [
        "naive: {} (iterations=1, preimage-evals=0)",
        "efficient: {} (iterations=0, preimage-evals=0)",
        "agree",
    ]


def test_reach_on_a_large_random_graph(tmp_path, capsys):
    rng = random.Random(50)
    n = 100
    edges = [[rng.randrange(1, n + 1), rng.randrange(1, n + 1)] for _ in range(300)]
    doc = {"n": n, "relations": {"G": edges}}
    path = write_ws(tmp_path, doc)
    assert main(["reach", path, "--relation", "G", "--targets", "7"]) == 0
    out, _ = capsys.readouterr()
    assert out.splitlines()[-1] == "agree"


def test_reach_error_paths(tmp_path, capsys):
    path = write_ws(tmp_path, CHAIN)
    assert main(["reach", path, "--relation", "missing", "--targets", "1"]) == 2
    assert main(["reach", path, "--relation", "R", "--targets", "1,x"]) == 2
    assert main(["reach", path, "--relation", "R", "--targets", "9"]) == 2
    only_semiring = write_ws(tmp_path, semiring_to_doc(conway_model("A2")), "s.json")
    assert main(["reach", only_semiring, "--relation", "R"]) == 3
    capsys.readouterr()


# -- termination command -------------------------------------------------------------------


def test_termination_acyclic_chain(tmp_path, capsys):
    path = write_ws(tmp_path, CHAIN)
    assert main(["termination", path, "--relation", "R"]) == 0
    out, _ = capsys.readouterr()
    lines = out.splitlines()
    assert lines[0].startswith("R: noetherian=true well_founded=true loebian=false")
    assert "a:p not below a:(p - a:p) at p = {2,3}" in lines[0]
    assert lines[1] == "oracle-agree"


def test_termination_self_loop(tmp_path, capsys):
    path = write_ws(tmp_path, CHAIN)
    assert main(["termination", path, "--relation", "Loop"]) == 0
    out, _ = capsys.readouterr()
    lines = out.splitlines()
    assert lines[0].startswith("Loop: noetherian=false (witness p <= a:p at p = {1})")
    assert lines[1] == "oracle-agree"


def test_termination_unknown_relation(tmp_path, capsys):
    path = write_ws(tmp_path, CHAIN)
    assert main(["termination", path, "--relation", "zzz"]) == 2
    capsys.readouterr()


# -- hoare command ------------------------------------------------------------------------------


def test_hoare_triples(tmp_path, capsys):
    path = write_ws(tmp_path, CHAIN)
    assert main(["hoare", path, "--triple", "good"]) == 0
    out, _ = capsys.readouterr()
    assert out.strip() == "triple good holds"

    assert main(["hoare", path, "--triple", "bad"]) == 1
    out, _ = capsys.readouterr()
    assert out.strip() == "triple bad FAILS: reachable state {2} escapes the postcondition"


def test_hoare_proofs(tmp_path, capsys):
    path = write_ws(tmp_path, CHAIN)
    assert main(["hoare", path, "--proof", "pf"]) == 0
    out, _ = capsys.readouterr()
    assert out.strip() == "proof pf is valid"

    assert main(["hoare", path, "--proof", "pfbad"]) == 1
    out, _ = capsys.readouterr()
    assert out.strip().startswith("proof pfbad INVALID: root: axiom triple does not hold")


def test_hoare_unknown_names(tmp_path, capsys):
    path = write_ws(tmp_path, CHAIN)
    assert main(["hoare", path, "--triple", "zzz"]) == 2
    assert main(["hoare", path, "--proof", "zzz"]) == 2
    capsys.readouterr()


# -- installed entry point -----------------------------------------------------------------------


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "kadlib.cli", "check", "builtin:A2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "add-commutative holds" in proc.stdout
