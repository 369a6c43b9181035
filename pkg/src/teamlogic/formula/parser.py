"""Concrete ASCII (and optional unicode) syntax for formulas."""

from __future__ import annotations

import json

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from . import ast as A

GRAMMAR = r"""
?start: bor

?bor: split
    | bor BOR split             -> boolor

?split: conj
      | split SPLIT conj        -> split

?conj: until
     | conj AND until           -> conj

?until: unary
      | unary UOP until         -> binop

?unary: primary
      | PREFIX unary            -> prefix
      | NEG QE unary            -> negexists
      | QE unary                -> exists
      | QA unary                -> forall

?primary: PROP                  -> prop
        | NEG PROP              -> negprop
        | CONST                 -> const
        | "(" bor ")"
        | "[" bor "]"
        | "[" args SUBSET args "]"      -> incl
        | "[" args NSUBSET args "]"     -> nincl
        | DEP "(" bor ")"               -> dep1
        | DEP "(" [args] ";" bor ")"    -> dep
        | NEG DEP "(" bor ")"           -> ndep1
        | NEG DEP "(" [args] ";" bor ")" -> ndep
        | GENNAME "(" [args] ")"        -> gen
        | NEG GENNAME "(" [args] ")"    -> ngen
        | COSPLIT "(" bor "," bor ")"   -> cosplit

args: bor ("," bor)*

BOR: "OR" | "\\ovee" | "⊘"
SPLIT: "\\/" | "∨"
AND: "&" | "∧"
UOP: "U" | "W" | "EU" | "AU" | "EW" | "AW" | "US"
PREFIX: "X" | "F" | "G" | "EX" | "AX" | "EF" | "AF" | "EG" | "AG" | "A1" | "E1" | "AS" | "XS" | "GS" | "FS"
QE: "E" | "∃"
QA: "A" | "∀"
NEG: "!" | "¬"
SUBSET: "<=" | "⊆"
NSUBSET: "!<=" | "⊈"
CONST: "top" | "true" | "bot" | "false" | "NE" | "⊤" | "⊥"
DEP: "dep"
COSPLIT: "cosplit"
GENNAME.2: /gen:[a-z][a-z0-9_]*/
PROP: /(?!(?:top|true|bot|false|dep|cosplit)(?![a-z0-9_]))[a-z][a-z0-9_]*/

%import common.WS
%ignore WS
%ignore /#[^\n]*/
"""


class FormulaSyntaxError(ValueError):
    def __init__(self, msg, line=None, column=None):
        loc = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(msg + loc)
        self.line = line
        self.column = column


_PARSER = Lark(GRAMMAR, parser="lalr", maybe_placeholders=True)

_CTL_WRAP = {"EX": ("E", "X"), "AX": ("A", "X"), "EF": ("E", "F"), "AF": ("A", "F"), "EG": ("E", "G"), "AG": ("A", "G")}


def _quant(q, body):
    return A.Exists(body) if q == "E" else A.Forall(body)


def _temporal(op, body):
    if op == "X":
        return A.Next(body)
    if op == "F":
        return A.F(body)
    return A.G(body)


@v_args(inline=True)
class _Build(Transformer):
    def __init__(self, tables):
        super().__init__()
        self.tables = tables

    def prop(self, tok):
        if tok in ("top", "true", "bot", "false", "dep", "cosplit"):
            raise FormulaSyntaxError(f"reserved word {tok!r} used as proposition", tok.line, tok.column)
        return A.Prop(str(tok))

    def negprop(self, _neg, tok):
        return A.NegProp(str(tok))

    def const(self, tok):
        s = str(tok)
        if s in ("top", "true", "⊤"):
            return A.TOP
        if s in ("bot", "⊥"):
            return A.BOT
        if s == "false":
            return A.FALSE
        return A.NONEMPTY

    def boolor(self, a, _op, b):
        return A.BoolOr(a, b)

    def split(self, a, _op, b):
        return A.Or(a, b)

    def conj(self, a, _op, b):
        return A.And(a, b)

    def binop(self, a, op, b):
        op = str(op)
        if op == "U":
            return A.Until(a, b)
        if op == "W":
            return A.WUntil(a, b)
        if op == "US":
            return A.SyncMacro("US", (a, b))
        q, t = op[0], op[1]
        return _quant(q, A.Until(a, b) if t == "U" else A.WUntil(a, b))

    def prefix(self, op, body):
        op = str(op)
        if op in ("X", "F", "G"):
            return _temporal(op, body)
        if op in _CTL_WRAP:
            q, t = _CTL_WRAP[op]
            return _quant(q, _temporal(t, body))
        if op == "A1":
            return A.A1(body)
        if op == "E1":
            return A.E1(body)
        if op == "AS":
            return A.AS(body)
        return A.SyncMacro(op, (body,))

    def exists(self, _q, body):
        return A.Exists(body)

    def forall(self, _q, body):
        return A.Forall(body)

    def negexists(self, _neg, _q, body):
        return A.NegExists(body)

    def args(self, *items):
        return tuple(items)

    def incl(self, left, _op, right):
        if len(left) != len(right):
            raise FormulaSyntaxError("inclusion atom sides differ in length")
        return A.Incl(left, right)

    def nincl(self, left, _op, right):
        if len(left) != len(right):
            raise FormulaSyntaxError("inclusion atom sides differ in length")
        return A.NotIncl(left, right)

    def dep1(self, _kw, target):
        return A.Dep((), target)

    def dep(self, _kw, params, target):
        return A.Dep(params or (), target)

    def ndep1(self, _neg, _kw, target):
        return A.NotDep((), target)

    def ndep(self, _neg, _kw, params, target):
        return A.NotDep(params or (), target)

    def _gen(self, tok, args, negated):
        name = str(tok)[4:]
        if name not in self.tables:
            raise FormulaSyntaxError(f"no table for generalised atom {name!r}", tok.line, tok.column)
        table = self.tables[name]
        args = args or ()
        if len(args) != table.arity:
            raise FormulaSyntaxError(f"gen:{name} expects {table.arity} arguments", tok.line, tok.column)
        return A.Gen(name, args, table, negated)

    def gen(self, tok, args):
        return self._gen(tok, args, False)

    def ngen(self, _neg, tok, args):
        return self._gen(tok, args, True)

    def cosplit(self, _kw, a, b):
        return A.CoSplit(a, b)


def parse(text: str, tables=None, ctl: bool = False):
    """Parse a formula.

    `tables` maps generalised-atom names to GenTable values.  With
    `ctl=True` every temporal operator must sit directly under a tef
    quantifier and every quantifier directly above a temporal operator.
    """
    try:
        tree = _PARSER.parse(text)
    except UnexpectedInput as e:
        raise FormulaSyntaxError(f"syntax error near {text[e.pos_in_stream:e.pos_in_stream + 10]!r}"
                                 if e.pos_in_stream is not None else "syntax error",
                                 getattr(e, "line", None), getattr(e, "column", None)) from None
    try:
        phi = _Build(tables or {}).transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, ValueError):
            raise e.orig_exc from None
        raise
    try:
        A.check_atom_params(phi)
    except ValueError as e:
        raise FormulaSyntaxError(str(e)) from None
    if ctl:
        check_ctl(phi)
    return phi


TEMPORAL = (A.Next, A.Until, A.WUntil)


def check_ctl(phi):
    """Quantifier/modality pairing of the branching-time fragment."""

    def walk(f, under_quant):
        if isinstance(f, TEMPORAL) and not under_quant:
            raise FormulaSyntaxError(f"temporal operator without tef quantifier: {f}")
        if isinstance(f, A.QUANTIFIERS):
            if not isinstance(f.sub, TEMPORAL):
                raise FormulaSyntaxError(f"tef quantifier not followed by a temporal operator: {f}")
            for c in A.children(f.sub):
                walk(c, False)
            return
        for c in A.children(f):
            walk(c, False)

    walk(phi, False)


def load_tables(path_or_obj) -> dict:
    """Generalised-atom tables from JSON: {name: {"arity": k, "relations": [...]}}."""
    if isinstance(path_or_obj, dict):
        obj = path_or_obj
    else:
        with open(path_or_obj, encoding="utf-8") as fh:
            obj = json.load(fh)
    return {name: A.GenTable.from_json(entry) for name, entry in obj.items()}
