"""Boolean negation: a formula satisfied exactly where the input is not."""

from __future__ import annotations

from .ast import (
    A1, AS, BOT, E1, FALSE, NONEMPTY, TOP, And, Bottom, BoolOr, CoSplit, Dep, Exists, FalseConst,
    Forall, Gen, Incl, NE, NegExists, NegProp, Next, NotDep, NotIncl, Or, Prop, SyncMacro, Top,
    Until, WUntil, expand_macros,
)


def boolean_negation(phi):
    memo = {}

    def bn(f):
        if f in memo:
            return memo[f]
        memo[f] = out = _bn(f, bn)
        return out

    return bn(phi)


def _bn(f, bn):
    if isinstance(f, Prop):
        # some nonempty part of the team violates p
        return Or(TOP, And(NONEMPTY, NegProp(f.name)))
    if isinstance(f, NegProp):
        return Or(TOP, And(NONEMPTY, Prop(f.name)))
    if isinstance(f, Top):
        return FALSE
    if isinstance(f, FalseConst):
        return TOP
    if isinstance(f, NE):
        return BOT
    if isinstance(f, Bottom):
        return NONEMPTY
    if isinstance(f, And):
        return BoolOr(bn(f.left), bn(f.right))
    if isinstance(f, BoolOr):
        return And(bn(f.left), bn(f.right))
    if isinstance(f, Or):
        return CoSplit(bn(f.left), bn(f.right))
    if isinstance(f, CoSplit):
        return Or(bn(f.left), bn(f.right))
    if isinstance(f, Next):
        return Next(bn(f.sub))
    if isinstance(f, Until):
        a, b = bn(f.left), bn(f.right)
        return BoolOr(Until(b, And(a, b)), WUntil(b, FALSE))
    if isinstance(f, WUntil):
        a, b = bn(f.left), bn(f.right)
        return Until(b, And(a, b))
    if isinstance(f, Exists):
        return NegExists(f.sub)
    if isinstance(f, NegExists):
        return Exists(f.sub)
    if isinstance(f, Forall):
        return Exists(bn(f.sub))
    if isinstance(f, A1):
        return E1(bn(f.sub))
    if isinstance(f, E1):
        return A1(bn(f.sub))
    if isinstance(f, AS):
        # some subteam violates the body
        return Or(TOP, bn(f.sub))
    if isinstance(f, Dep):
        return NotDep(f.params, f.target)
    if isinstance(f, NotDep):
        return Dep(f.params, f.target)
    if isinstance(f, Incl):
        return NotIncl(f.left, f.right)
    if isinstance(f, NotIncl):
        return Incl(f.left, f.right)
    if isinstance(f, Gen):
        return Gen(f.name, f.args, f.table, not f.negated)
    if isinstance(f, SyncMacro):
        return bn(expand_macros(f))
    raise TypeError(f"unknown node {type(f).__name__}")


def split_negation_via_as(phi):
    """The subteam-atom reading of the negated split, kept for comparison.

    AS(BN a) OR AS(BN b) is sound (it implies the negation of the split)
    but is not a complement in general.
    """
    if not isinstance(phi, Or):
        raise ValueError("expects a split")
    return BoolOr(AS(boolean_negation(phi.left)), AS(boolean_negation(phi.right)))
