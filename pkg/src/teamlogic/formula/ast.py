"""Formula AST for team temporal logics in negation normal form.

Nodes are immutable and compare structurally.  The hash is cached on the
node since formulas are used heavily as dictionary keys.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, fields


class Formula:
    def _fields(self):
        return tuple(getattr(self, f.name) for f in fields(self))

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or hash(self) != hash(other):
            return False
        return self._fields() == other._fields()

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        h = self.__dict__.get("_h")
        if h is None:
            h = hash((type(self).__name__,) + self._fields())
            object.__setattr__(self, "_h", h)
        return h

    def __str__(self):
        from .printer import to_text

        return to_text(self)

    def __repr__(self):
        return f"<{type(self).__name__} {self}>"


def node(cls):
    return dataclass(frozen=True, eq=False, repr=False)(cls)


# ---------------------------------------------------------------- literals


@node
class Prop(Formula):
    name: str


@node
class NegProp(Formula):
    name: str


@node
class Top(Formula):
    """Satisfied by every team."""


@node
class Bottom(Formula):
    """Satisfied by the empty team only."""


@node
class FalseConst(Formula):
    """Satisfied by no team."""


@node
class NE(Formula):
    pass


# ---------------------------------------------------------------- connectives


@node
class And(Formula):
    left: Formula
    right: Formula


@node
class Or(Formula):
    """Split disjunction."""

    left: Formula
    right: Formula


@node
class BoolOr(Formula):
    """Boolean (classical) disjunction."""

    left: Formula
    right: Formula


@node
class CoSplit(Formula):
    """Every split sends the left part to `left` or the right part to `right`."""

    left: Formula
    right: Formula


@node
class Next(Formula):
    sub: Formula


@node
class Until(Formula):
    left: Formula
    right: Formula


@node
class WUntil(Formula):
    left: Formula
    right: Formula


@node
class Exists(Formula):
    sub: Formula


@node
class Forall(Formula):
    sub: Formula


@node
class NegExists(Formula):
    """No tef of the current team satisfies `sub`."""

    sub: Formula


@node
class A1(Formula):
    sub: Formula


@node
class E1(Formula):
    """Some singleton subteam satisfies `sub`."""

    sub: Formula


@node
class AS(Formula):
    """Every subteam satisfies `sub`."""

    sub: Formula


# ---------------------------------------------------------------- team atoms


@node
class Dep(Formula):
    params: tuple
    target: Formula


@node
class NotDep(Formula):
    params: tuple
    target: Formula


@node
class Incl(Formula):
    left: tuple
    right: tuple


@node
class NotIncl(Formula):
    left: tuple
    right: tuple


@dataclass(frozen=True)
class GenTable:
    """Family B of k-ary Boolean relations for a generalised atom."""

    arity: int
    relations: frozenset

    def __post_init__(self):
        rels = frozenset(frozenset(tuple(bool(v) for v in row) for row in rel) for rel in self.relations)
        for rel in rels:
            for row in rel:
                if len(row) != self.arity:
                    raise ValueError(f"row {row} does not have arity {self.arity}")
        object.__setattr__(self, "relations", rels)

    def contains(self, values) -> bool:
        return frozenset(values) in self.relations

    def is_downward_closed(self) -> bool:
        for rel in self.relations:
            rows = sorted(rel)
            for r in range(len(rows)):
                for sub in itertools.combinations(rows, r):
                    if frozenset(sub) not in self.relations:
                        return False
        return True

    def to_json(self):
        return {
            "arity": self.arity,
            "relations": sorted(sorted([int(v) for v in row] for row in rel) for rel in self.relations),
        }

    @classmethod
    def from_json(cls, obj) -> "GenTable":
        return cls(int(obj["arity"]), frozenset(frozenset(tuple(row) for row in rel) for rel in obj["relations"]))


@node
class Gen(Formula):
    name: str
    args: tuple
    table: GenTable
    negated: bool = False


@node
class SyncMacro(Formula):
    """Synchronous modality macro: op in XS, US, GS, FS."""

    op: str
    args: tuple
    o: str = "o"


# ---------------------------------------------------------------- helpers

TOP = Top()
BOT = Bottom()
FALSE = FalseConst()
NONEMPTY = NE()

LITERALS = (Prop, NegProp, Top, Bottom, FalseConst, NE)
BINARY = (And, Or, BoolOr, CoSplit, Until, WUntil)
UNARY = (Next, Exists, Forall, NegExists, A1, E1, AS)
ATOMS = (Dep, NotDep, Incl, NotIncl, Gen)
QUANTIFIERS = (Exists, Forall, NegExists)


def F(phi):
    return Until(TOP, phi)


def G(phi):
    return WUntil(phi, BOT)


def conj(*phis):
    phis = [p for p in phis]
    if not phis:
        return TOP
    out = phis[0]
    for p in phis[1:]:
        out = And(out, p)
    return out


def bor(*phis):
    if not phis:
        return FALSE
    out = phis[0]
    for p in phis[1:]:
        out = BoolOr(out, p)
    return out


def dep(*params, target=None):
    """dep(a, b, c) with the last argument as target, or dep(target=c)."""
    if target is None:
        *params, target = params
    return Dep(tuple(params), target)


def atom_params(phi) -> tuple:
    if isinstance(phi, (Dep, NotDep)):
        return tuple(phi.params) + (phi.target,)
    if isinstance(phi, (Incl, NotIncl)):
        return tuple(phi.left) + tuple(phi.right)
    if isinstance(phi, Gen):
        return tuple(phi.args)
    return ()


def children(phi) -> tuple:
    if isinstance(phi, BINARY):
        return (phi.left, phi.right)
    if isinstance(phi, UNARY):
        return (phi.sub,)
    if isinstance(phi, SyncMacro):
        return tuple(phi.args)
    return ()


def rebuild(phi, kids):
    if isinstance(phi, BINARY):
        return type(phi)(kids[0], kids[1])
    if isinstance(phi, UNARY):
        return type(phi)(kids[0])
    if isinstance(phi, SyncMacro):
        return SyncMacro(phi.op, tuple(kids), phi.o)
    return phi


def subformulas(phi) -> list:
    """Distinct subformulas (atom parameters excluded), children first."""
    seen = {}

    def walk(f):
        if f in seen:
            return
        for c in children(f):
            walk(c)
        seen[f] = None

    walk(phi)
    return list(seen)


def size(phi) -> int:
    """Tree size counting every node, including atom parameters."""
    return 1 + sum(size(c) for c in children(phi)) + sum(size(p) for p in atom_params(phi))


def dag_size(phi) -> int:
    """Number of distinct subformulas, including atom parameters."""
    seen = set()

    def walk(f):
        if f in seen:
            return
        seen.add(f)
        for c in children(f) + atom_params(f):
            walk(c)

    walk(phi)
    return len(seen)


def depth(phi) -> int:
    kids = children(phi)
    return 1 + max((depth(c) for c in kids), default=0)


def quantifier_depth(phi) -> int:
    inner = max((quantifier_depth(c) for c in children(phi)), default=0)
    if isinstance(phi, QUANTIFIERS):
        return inner + 1
    if isinstance(phi, SyncMacro):
        return inner + 1
    return inner


def temporal_size(phi) -> int:
    own = 1 if isinstance(phi, (Next, Until, WUntil, SyncMacro)) else 0
    return own + sum(temporal_size(c) for c in children(phi))


def props(phi) -> frozenset:
    out = set()

    def walk(f):
        if isinstance(f, (Prop, NegProp)):
            out.add(f.name)
        if isinstance(f, SyncMacro):
            out.add(f.o)
        for c in children(f) + atom_params(f):
            walk(c)

    walk(phi)
    return frozenset(out)


def contains(phi, kinds) -> bool:
    if isinstance(phi, kinds):
        return True
    return any(contains(c, kinds) for c in children(phi))


PROPOSITIONAL = (Prop, NegProp, And, Or, BoolOr, Top, FalseConst)


def is_propositional(phi) -> bool:
    if not isinstance(phi, PROPOSITIONAL):
        return False
    return all(is_propositional(c) for c in children(phi))


def is_ltl(phi) -> bool:
    """Plain LTL in NNF: literals, and, split, next, until, weak until."""
    if isinstance(phi, (Prop, NegProp, Top, Bottom)):
        return True
    if isinstance(phi, (And, Or, Next, Until, WUntil)):
        return all(is_ltl(c) for c in children(phi))
    return False


def eval_prop(phi, letter) -> bool:
    """Classical value of a propositional formula on one letter."""
    if isinstance(phi, Prop):
        return phi.name in letter
    if isinstance(phi, NegProp):
        return phi.name not in letter
    if isinstance(phi, Top):
        return True
    if isinstance(phi, (FalseConst, Bottom)):
        return False
    if isinstance(phi, And):
        return eval_prop(phi.left, letter) and eval_prop(phi.right, letter)
    if isinstance(phi, (Or, BoolOr)):
        return eval_prop(phi.left, letter) or eval_prop(phi.right, letter)
    raise ValueError(f"not a propositional formula: {phi}")


def neg_prop(phi):
    """Classical negation of a propositional formula, kept in NNF.

    Disjunctions come out as splits, which are flat on propositional
    formulas, so the result holds on a team iff it holds on each trace.
    """
    if isinstance(phi, Prop):
        return NegProp(phi.name)
    if isinstance(phi, NegProp):
        return Prop(phi.name)
    if isinstance(phi, Top):
        return FALSE
    if isinstance(phi, (FalseConst, Bottom)):
        return TOP
    if isinstance(phi, And):
        return Or(neg_prop(phi.left), neg_prop(phi.right))
    if isinstance(phi, (Or, BoolOr)):
        return And(neg_prop(phi.left), neg_prop(phi.right))
    raise ValueError(f"not a propositional formula: {phi}")


def check_atom_params(phi):
    """Raise ValueError if some team atom has a non-propositional parameter."""
    for f in subformulas(phi):
        for p in atom_params(f):
            if not is_propositional(p):
                raise ValueError(f"atom parameter {p} is not propositional")
        if isinstance(f, (Incl, NotIncl)) and len(f.left) != len(f.right):
            raise ValueError("inclusion atom sides differ in length")
        if isinstance(f, Gen) and len(f.args) != f.table.arity:
            raise ValueError(f"generalised atom {f.name} expects {f.table.arity} arguments")


def empty_truth(phi) -> bool:
    """Truth value on the empty team (independent of the tef)."""
    if isinstance(phi, (Prop, NegProp, Top, Bottom, Dep, Incl, A1)):
        return True
    if isinstance(phi, (FalseConst, NE, NotDep, NotIncl, E1)):
        return False
    if isinstance(phi, Gen):
        return phi.table.contains(()) != phi.negated
    if isinstance(phi, (And, Or)):
        return empty_truth(phi.left) and empty_truth(phi.right)
    if isinstance(phi, (BoolOr, CoSplit, WUntil)):
        return empty_truth(phi.left) or empty_truth(phi.right)
    if isinstance(phi, Until):
        return empty_truth(phi.right)
    if isinstance(phi, (Next, Exists, Forall, AS)):
        return empty_truth(phi.sub)
    if isinstance(phi, NegExists):
        return not empty_truth(phi.sub)
    if isinstance(phi, SyncMacro):
        return empty_truth(expand_macros(phi))
    raise TypeError(f"unknown node {type(phi).__name__}")


# ---------------------------------------------------------------- macros


def expand_macro(phi):
    """One synchronous-modality macro into core syntax."""
    o = Dep((), Prop(phi.o))
    if phi.op == "XS":
        return Exists(Next(And(o, phi.args[0])))
    if phi.op == "US":
        return Exists(Until(And(o, phi.args[0]), And(o, phi.args[1])))
    if phi.op == "GS":
        return Exists(WUntil(And(o, phi.args[0]), BOT))
    if phi.op == "FS":
        return expand_macro(SyncMacro("US", (TOP, phi.args[0]), phi.o))
    raise ValueError(f"unknown macro {phi.op}")


def expand_macros(phi):
    memo = {}

    def walk(f):
        if f in memo:
            return memo[f]
        kids = tuple(walk(c) for c in children(f))
        g = rebuild(f, kids) if kids else f
        if isinstance(g, SyncMacro):
            g = walk(expand_macro(g))
        memo[f] = g
        return g

    return walk(phi)


def normalize_forall(phi):
    """Replace every Forall by NegExists of the Boolean negation."""
    from .bn import boolean_negation

    memo = {}

    def walk(f):
        if f in memo:
            return memo[f]
        kids = tuple(walk(c) for c in children(f))
        g = rebuild(f, kids) if kids else f
        if isinstance(g, Forall):
            g = NegExists(boolean_negation(g.sub))
        memo[f] = g
        return g

    return walk(phi)
