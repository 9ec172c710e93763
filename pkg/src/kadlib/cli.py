"""Command-line front end: load models and programs, run checks, print reports.

Workspace files are JSON with top-level keys:

  semiring   carrier: list of names; add/mul: nested arrays of names;
             zero/one: names; star/conv: optional arrays of names
  tests      members: list of names; compl: map name -> name
  n          number of states for the relational part
  relations  name -> edge list over 1..n, e.g. {"R": [[1, 2], [2, 3]]}
  sets       name -> state list, e.g. {"p": [1, 3]}
  programs   name -> program text
  env        primitive name -> relation name
  triples    name -> {"pre": test text, "prog": program name or text,
                      "post": test text}
  proofs     name -> {"rule": ..., "conclusion": triple name or inline
                      triple, "premises": [...]}

Element names, never indices, appear in files.  Builtin models are
addressable as builtin:NAME and the exhaustive relation models as rel:N.

Program text:  prog ::= atom (';' atom)*
               atom ::= NAME | skip | abort | '(' prog ')'
                      | if test then prog else prog fi
                      | while test do prog od
Test text:     or / and / not / true / false / NAME / '{' states '}' / parens.
There is no assignment statement; ':=' is rejected at parse time.

Exit codes: 0 all checks pass, 1 law or triple failure, 2 parse error,
3 capability missing.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .algebra import (
    FiniteSemiring,
    TestAlgebra,
    check_isemiring,
    check_kleene,
    check_test_algebra,
)
from .domain import (
    check_converse,
    check_domain_axioms,
    check_domain_calculus,
    compute_predomain,
    converse_duality_check,
)
from .hoare import (
    Cond,
    HoareTriple,
    Prim,
    ProofTree,
    Seq,
    TAnd,
    TFalse,
    TNot,
    TOr,
    TRef,
    TStates,
    TTrue,
    While,
    check_triple,
    validate_proof,
)
from .models import Relation, conway_model, conway_names, rel_model, rel_semiring, rel_tests
from .reach import reach_efficient, reach_naive
from .termination import TerminationReport, termination_report

__all__ = [
    "CliParseError",
    "MissingCapability",
    "Workspace",
    "parse_program",
    "parse_test",
    "semiring_to_doc",
    "semiring_from_doc",
    "load_workspace",
    "workspace_from_doc",
    "cmd_check",
    "cmd_reach",
    "cmd_hoare",
    "cmd_termination",
    "main",
]


class CliParseError(Exception):
    """Bad input file or bad program/test text (exit 2)."""


class MissingCapability(Exception):
    """The loaded model lacks a table the command needs (exit 3)."""


# -- program and test parsing -------------------------------------------------

_KEYWORDS = {
    "skip",
    "abort",
    "if",
    "then",
    "else",
    "fi",
    "while",
    "do",
    "od",
    "and",
    "or",
    "not",
    "true",
    "false",
}

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<num>\d+)|(?P<assign>:=)|(?P<sym>[;(){},])|(?P<bad>\S))"
)

_ASSIGN_MSG = (
    "assignment is not part of propositional Hoare logic; "
    "model state change as a primitive action"
)


def _tokenize(text: str) -> list[tuple[str, str]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            break
        pos = m.end()
        if m.lastgroup is None:
            continue
        val = m.group(m.lastgroup)
        if m.lastgroup == "assign":
            raise CliParseError(_ASSIGN_MSG)
        if m.lastgroup == "bad":
            raise CliParseError(f"unexpected character {val!r}")
        out.append((m.lastgroup, val))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0
        self.text = text

    def peek(self) -> Optional[str]:
        return self.toks[self.pos][1] if self.pos < len(self.toks) else None

    def next(self) -> str:
        if self.pos >= len(self.toks):
            raise CliParseError(f"unexpected end of input in {self.text!r}")
        tok = self.toks[self.pos]
        self.pos += 1
        return tok[1]

    def expect(self, want: str):
        got = self.next()
        if got != want:
            raise CliParseError(f"expected {want!r}, got {got!r} in {self.text!r}")

    def done(self):
        if self.pos < len(self.toks):
            raise CliParseError(f"trailing input from {self.peek()!r} in {self.text!r}")

    # programs

    def program(self):
        node = self.atom()
        while self.peek() == ";":
            self.next()
            node = Seq(node, self.atom())
        return node

    def atom(self):
        tok = self.peek()
        if tok is None:
            raise CliParseError(f"unexpected end of input in {self.text!r}")
        if tok == "(":
            self.next()
            node = self.program()
            self.expect(")")
            return node
        if tok == "if":
            self.next()
            test = self.test()
            self.expect("then")
            then = self.program()
            self.expect("else")
            orelse = self.program()
            self.expect("fi")
            return Cond(test, then, orelse)
        if tok == "while":
            self.next()
            test = self.test()
            self.expect("do")
            body = self.program()
            self.expect("od")
            return While(test, body)
        self.next()
        if tok in _KEYWORDS and tok not in ("skip", "abort"):
            raise CliParseError(f"unexpected keyword {tok!r} in {self.text!r}")
        if not tok[0].isalpha() and tok[0] != "_":
            raise CliParseError(f"expected an action name, got {tok!r}")
        return Prim(tok)

    # tests

    def test(self):
        node = self.test_conj()
        while self.peek() == "or":
            self.next()
            node = TOr(node, self.test_conj())
        return node

    def test_conj(self):
        node = self.test_neg()
        while self.peek() == "and":
            self.next()
            node = TAnd(node, self.test_neg())
        return node

    def test_neg(self):
        if self.peek() == "not":
            self.next()
            return TNot(self.test_neg())
        return self.test_prim()

    def test_prim(self):
        tok = self.next()
        if tok == "true":
            return TTrue()
        if tok == "false":
            return TFalse()
        if tok == "(":
            node = self.test()
            self.expect(")")
            return node
        if tok == "{":
            states = []
            if self.peek() != "}":
                states.append(self._state())
                while self.peek() == ",":
                    self.next()
                    states.append(self._state())
            self.expect("}")
            return TStates(states)
        if tok in _KEYWORDS:
            raise CliParseError(f"unexpected keyword {tok!r} in test {self.text!r}")
        if tok[0].isalpha() or tok[0] == "_":
            return TRef(tok)
        raise CliParseError(f"expected a test, got {tok!r} in {self.text!r}")

    def _state(self) -> int:
        tok = self.next()
        if not tok.isdigit():
            raise CliParseError(f"expected a state number, got {tok!r}")
        return int(tok)


def parse_program(text: str):
    p = _Parser(text)
    node = p.program()
    p.done()
    return node


def parse_test(text: str):
    p = _Parser(text)
    node = p.test()
    p.done()
    return node


# -- workspace files ----------------------------------------------------------


@dataclass
class Workspace:
    semiring: Optional[FiniteSemiring] = None
    tests: Optional[TestAlgebra] = None
    n: Optional[int] = None
    relations: dict = field(default_factory=dict)
    sets: dict = field(default_factory=dict)
    programs: dict = field(default_factory=dict)
    env: dict = field(default_factory=dict)
    triples: dict = field(default_factory=dict)
    proofs: dict = field(default_factory=dict)


def semiring_to_doc(S: FiniteSemiring, T: Optional[TestAlgebra] = None) -> dict:
    """Workspace JSON document for a finite semiring, tables as name arrays."""
    nm = S.element_name
    doc = {
        "semiring": {
            "name": S.name,
            "carrier": [nm(i) for i in range(S.n)],
            "add": [[nm(int(v)) for v in row] for row in S.add],
            "mul": [[nm(int(v)) for v in row] for row in S.mul],
            "zero": nm(S.zero),
            "one": nm(S.one),
        }
    }
    if S.star is not None:
        doc["semiring"]["star"] = [nm(int(v)) for v in S.star]
    if S.conv is not None:
        doc["semiring"]["conv"] = [nm(int(v)) for v in S.conv]
    if T is not None:
        doc["tests"] = {
            "members": [nm(p) for p in T.members],
            "compl": {nm(p): nm(q) for p, q in T.compl.items()},
        }
    return doc


def semiring_from_doc(doc: dict) -> tuple[FiniteSemiring, TestAlgebra]:
    spec = doc.get("semiring")
    if spec is None:
        raise CliParseError("workspace declares no semiring")
    try:
        carrier = list(spec["carrier"])
        idx = {nm: i for i, nm in enumerate(carrier)}
        if len(idx) != len(carrier):
            raise CliParseError("carrier names are not distinct")

        def row(names):
            return [idx[x] for x in names]

        S = FiniteSemiring(
            carrier,
            [row(r) for r in spec["add"]],
            [row(r) for r in spec["mul"]],
            idx[spec["zero"]],
            idx[spec["one"]],
            star=row(spec["star"]) if spec.get("star") is not None else None,
            conv=row(spec["conv"]) if spec.get("conv") is not None else None,
            name=spec.get("name", ""),
        )
    except KeyError as e:
        raise CliParseError(f"semiring table references unknown name {e.args[0]!r}") from e
    except (TypeError, ValueError) as e:
        raise CliParseError(f"bad semiring tables: {e}") from e
    tdoc = doc.get("tests")
    if tdoc is None:
        T = TestAlgebra.discrete(S)
    else:
        try:
            members = [idx[x] for x in tdoc["members"]]
            compl = {idx[k]: idx[v] for k, v in tdoc["compl"].items()}
            T = TestAlgebra(S, members, compl)
        except KeyError as e:
            raise CliParseError(f"tests reference unknown name {e.args[0]!r}") from e
        except (TypeError, ValueError) as e:
            raise CliParseError(f"bad test algebra: {e}") from e
    return S, T


def _relation_from_doc(n: int, name: str, edges) -> Relation:
    try:
        pairs = [(int(i), int(j)) for i, j in edges]
    except (TypeError, ValueError) as e:
        raise CliParseError(f"relation {name!r} is not an edge list: {e}") from e
    for i, j in pairs:
        if not (1 <= i <= n and 1 <= j <= n):
            raise CliParseError(f"relation {name!r} has edge ({i}, {j}) outside 1..{n}")
    return Relation.from_pairs(n, pairs)


def workspace_from_doc(doc: dict) -> Workspace:
    if not isinstance(doc, dict):
        raise CliParseError("workspace must be a JSON object")
    ws = Workspace()
    if "semiring" in doc:
        ws.semiring, ws.tests = semiring_from_doc(doc)
    relational_keys = [k for k in ("relations", "sets", "programs", "env", "triples", "proofs") if k in doc]
    if "n" in doc:
        if not isinstance(doc["n"], int) or doc["n"] < 1:
            raise CliParseError('"n" must be a positive state count')
        ws.n = doc["n"]
    elif relational_keys:
        raise CliParseError(f'workspace uses {relational_keys[0]!r} but declares no "n"')
    if ws.n is None:
        return ws

    D = rel_model(ws.n)
    for name, edges in doc.get("relations", {}).items():
        ws.relations[name] = _relation_from_doc(ws.n, name, edges)
    for name, states in doc.get("sets", {}).items():
        try:
            ws.sets[name] = D.test_from_states(states)
        except (TypeError, ValueError) as e:
            raise CliParseError(f"set {name!r}: {e}") from e
    for name, text in doc.get("programs", {}).items():
        ws.programs[name] = parse_program(text)
    for prim, rel in doc.get("env", {}).items():
        if rel not in ws.relations:
            raise CliParseError(f"env binds {prim!r} to unknown relation {rel!r}")
        ws.env[prim] = ws.relations[rel]
    for name, tdoc in doc.get("triples", {}).items():
        ws.triples[name] = _triple_from_doc(tdoc, ws, name)
    for name, pdoc in doc.get("proofs", {}).items():
        ws.proofs[name] = _proof_from_doc(pdoc, ws, name)
    return ws


def _triple_from_doc(tdoc, ws: Workspace, where: str) -> HoareTriple:
    if isinstance(tdoc, str):
        if tdoc not in ws.triples:
            raise CliParseError(f"{where}: unknown triple {tdoc!r}")
        return ws.triples[tdoc]
    try:
        pre, prog, post = tdoc["pre"], tdoc["prog"], tdoc["post"]
    except (KeyError, TypeError) as e:
        raise CliParseError(f"{where}: a triple needs pre, prog and post") from e
    program = ws.programs[prog] if prog in ws.programs else parse_program(prog)
    return HoareTriple(parse_test(pre), program, parse_test(post))


def _proof_from_doc(pdoc, ws: Workspace, where: str) -> ProofTree:
    try:
        rule = pdoc["rule"].lower()
        conclusion = _triple_from_doc(pdoc["conclusion"], ws, where)
    except (KeyError, TypeError, AttributeError) as e:
        raise CliParseError(f"{where}: a proof node needs rule and conclusion") from e
    premises = tuple(
        _proof_from_doc(sub, ws, f"{where}.premise[{i}]")
        for i, sub in enumerate(pdoc.get("premises", []))
    )
    return ProofTree(rule, conclusion, premises)


def load_workspace(path: str) -> Workspace:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as e:
        raise CliParseError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise CliParseError(f"{path} is not valid JSON: {e}") from e
    return workspace_from_doc(doc)


def _load_algebra(path: str) -> tuple[FiniteSemiring, TestAlgebra]:
    """Resolve builtin:NAME, rel:N, or a workspace file to tables."""
    if path.startswith("builtin:"):
        name = path[len("builtin:") :]
        try:
            S = conway_model(name)
        except ValueError as e:
            raise CliParseError(str(e)) from e
        return S, TestAlgebra.discrete(S)
    if path.startswith("rel:"):
        try:
            n = int(path[len("rel:") :])
        except ValueError as e:
            raise CliParseError(f"bad relation model spec {path!r}") from e
        try:
            return rel_semiring(n), rel_tests(n)
        except ValueError as e:
            raise MissingCapability(str(e)) from e
    ws = load_workspace(path)
    if ws.semiring is not None:
        return ws.semiring, ws.tests
    if ws.n is not None:
        try:
            return rel_semiring(ws.n), rel_tests(ws.n)
        except ValueError as e:
            raise MissingCapability(str(e)) from e
    raise CliParseError("workspace declares neither a semiring nor a relational state space")


# -- reports ------------------------------------------------------------------


def _witness_str(S: FiniteSemiring, witness) -> str:
    if witness is None:
        return "()"
    if not isinstance(witness, dict):
        return f"({witness})"
    parts = []
    for k, v in witness.items():
        if isinstance(v, (int, np.integer)) and k not in ("power", "i") and 0 <= int(v) < S.n:
            parts.append(S.element_name(int(v)))
        else:
            parts.append(str(v))
    return "(" + ", ".join(parts) + ")"


def _print_reports(S: FiniteSemiring, reports) -> bool:
    ok = True
    for r in reports:
        if r.holds:
            suffix = f"  [{r.note}]" if r.note else ""
            print(f"{r.name} holds{suffix}")
        else:
            ok = False
            print(f"{r.name} FAILS with witness {_witness_str(S, r.witness)}")
    return ok


_LAW_CHOICES = ("isemiring", "kleene", "tests", "domain", "converse", "all")


def cmd_check(path: str, laws: str = "all") -> int:
    S, T = _load_algebra(path)
    explicit = laws != "all"
    wanted = [laws] if explicit else ["isemiring", "kleene", "tests", "domain", "converse"]
    ok = True
    for kind in wanted:
        if kind == "isemiring":
            ok &= _print_reports(S, check_isemiring(S))
        elif kind == "kleene":
            if S.star is None:
                if explicit:
                    raise MissingCapability("no star table declared")
                print("skipping kleene laws: no star table", file=sys.stderr)
                continue
            ok &= _print_reports(S, check_kleene(S))
        elif kind == "tests":
            ok &= _print_reports(S, check_test_algebra(T))
        elif kind == "domain":
            try:
                D = compute_predomain(S, T)
            except ValueError as e:
                if explicit:
                    raise MissingCapability(str(e)) from e
                print(f"skipping domain laws: {e}", file=sys.stderr)
                continue
            ok &= _print_reports(S, check_domain_axioms(D))
            ok &= _print_reports(S, check_domain_calculus(D))
        elif kind == "converse":
            if S.conv is None:
                if explicit:
                    raise MissingCapability("no converse table declared")
                print("skipping converse laws: no converse table", file=sys.stderr)
                continue
            ok &= _print_reports(S, check_converse(S))
            try:
                D = compute_predomain(S, T)
            except ValueError:
                D = None
            if D is not None:
                ok &= _print_reports(S, converse_duality_check(D))
    return 0 if ok else 1


def _parse_targets(D, text: str) -> int:
    body = text.strip()
    if body.startswith("{") and body.endswith("}"):
        body = body[1:-1]
    if not body.strip():
        return D.test_zero
    try:
        states = [int(s) for s in body.split(",")]
    except ValueError as e:
        raise CliParseError(f"bad target list {text!r}: {e}") from e
    try:
        return D.test_from_states(states)
    except ValueError as e:
        raise CliParseError(str(e)) from e


def cmd_reach(path: str, relation: str, targets: str = "", algo: str = "both") -> int:
    ws = load_workspace(path)
    if ws.n is None:
        raise MissingCapability("workspace declares no relational state space")
    if relation not in ws.relations:
        raise CliParseError(f"unknown relation {relation!r}")
    D = rel_model(ws.n)
    a = ws.relations[relation]
    p = _parse_targets(D, targets)
    results = {}
    for kind in ("naive", "efficient"):
        if algo not in (kind, "both"):
            continue
        run = reach_naive if kind == "naive" else reach_efficient
        r = run(D, a, p)
        results[kind] = r
        print(
            f"{kind}: {D.test_name(r.result)} "
            f"(iterations={r.iterations}, preimage-evals={r.preimage_evals})"
        )
    if algo == "both":
        if results["naive"].result == results["efficient"].result:
            print("agree")
        else:
            print("DISAGREE: the two algorithms returned different sets")
            return 1
    return 0


def cmd_hoare(path: str, triple: Optional[str] = None, proof: Optional[str] = None) -> int:
    ws = load_workspace(path)
    if ws.n is None:
        raise MissingCapability("workspace declares no relational state space")
    D = rel_model(ws.n)
    if triple is not None:
        if triple not in ws.triples:
            raise CliParseError(f"unknown triple {triple!r}")
        v = check_triple(ws.triples[triple], ws.env, D, ws.sets)
        if v:
            print(f"triple {triple} holds")
            return 0
        print(f"triple {triple} FAILS: {v.note}")
        return 1
    if proof is not None:
        if proof not in ws.proofs:
            raise CliParseError(f"unknown proof {proof!r}")
        v = validate_proof(ws.proofs[proof], ws.env, D, ws.sets)
        if v:
            print(f"proof {proof} is valid")
            return 0
        print(f"proof {proof} INVALID: {v.note}")
        return 1
    raise CliParseError("hoare needs --triple or --proof")


def _has_cycle(rel: Relation) -> bool:
    n = rel.n
    color = [0] * n
    for start in range(n):
        if color[start]:
            continue
        stack = [(start, iter(range(n)))]
        color[start] = 1
        while stack:
            v, succ = stack[-1]
            advanced = False
            for w in succ:
                if not rel.rows[v] >> w & 1:
                    continue
                if color[w] == 1:
                    return True
                if color[w] == 0:
                    color[w] = 1
                    stack.append((w, iter(range(n))))
                    advanced = True
                    break
            if not advanced:
                color[v] = 2
                stack.pop()
    return False


def cmd_termination(path: str, relation: str) -> int:
    ws = load_workspace(path)
    if ws.n is None:
        raise MissingCapability("workspace declares no relational state space")
    if relation not in ws.relations:
        raise CliParseError(f"unknown relation {relation!r}")
    D = rel_model(ws.n)
    a = ws.relations[relation]
    rep = termination_report(D, a)
    print(TerminationReport(relation, rep.noetherian, rep.well_founded, rep.loebian))
    acyclic = not _has_cycle(a)
    if rep.noetherian.holds == acyclic:
        print("oracle-agree")
        return 0
    print(
        "ORACLE DISAGREEMENT: noetherian="
        f"{str(rep.noetherian.holds).lower()} but cycle search says acyclic={str(acyclic).lower()}"
    )
    return 1


# -- entry point --------------------------------------------------------------


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="kad",
        description="Check Kleene-algebra models, reachability, termination and Hoare triples.",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("check", help="run equational law checkers on a model")
    p.add_argument("path", help="workspace file, builtin:NAME, or rel:N")
    p.add_argument("--laws", choices=_LAW_CHOICES, default="all")

    p = sub.add_parser("reach", help="backward reachability over a workspace relation")
    p.add_argument("path")
    p.add_argument("--relation", required=True)
    p.add_argument("--targets", default="", help='target states, e.g. "3,5" or "{3,5}"')
    p.add_argument("--algo", choices=("naive", "efficient", "both"), default="both")

    p = sub.add_parser("hoare", help="check a triple or validate a proof tree")
    p.add_argument("path")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--triple")
    g.add_argument("--proof")

    p = sub.add_parser("termination", help="termination analysis of a workspace relation")
    p.add_argument("path")
    p.add_argument("--relation", required=True)

    args = ap.parse_args(argv)
    try:
        if args.cmd == "check":
            return cmd_check(args.path, args.laws)
        if args.cmd == "reach":
            return cmd_reach(args.path, args.relation, args.targets, args.algo)
        if args.cmd == "hoare":
            return cmd_hoare(args.path, args.triple, args.proof)
        if args.cmd == "termination":
            return cmd_termination(args.path, args.relation)
    except CliParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except MissingCapability as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
