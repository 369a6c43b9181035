"""Consistent subsets of the indexed closure and the local successor relation.

These are the textbook tableau states.  The translation in gaaba.py builds
the same information lazily (obligation sets); this module exists for
inspection and for checking the rules themselves on small formulas.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..formula import ast as A
from ..formula.closure import IndexedClosure, closure_formulas, index_sets

FREE = (A.Next, A.Until, A.WUntil, A.Exists, A.NegExists, A.Forall, A.SyncMacro)


@dataclass(frozen=True)
class ConsistentSet:
    pairs: frozenset
    closure: IndexedClosure

    def __contains__(self, pair):
        return pair in self.pairs

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)


def _splits(m):
    items = sorted(m)
    for r in range(len(items) + 1):
        for c in itertools.combinations(items, r):
            yield frozenset(c), m - frozenset(c)


def _singletons_value(s, f, j):
    return (f, frozenset((j,))) in s


def determined(f, m, s, n) -> bool:
    """Membership forced by the rules once smaller pairs are fixed (non-free kinds)."""
    if isinstance(f, (A.Prop, A.NegProp)):
        return all((f, frozenset((j,))) in s for j in m) if len(m) != 1 else (f, m) in s
    if isinstance(f, A.Top):
        return True
    if isinstance(f, A.Bottom):
        return not m
    if isinstance(f, A.FalseConst):
        return False
    if isinstance(f, A.NE):
        return bool(m)
    if isinstance(f, A.And):
        return (f.left, m) in s and (f.right, m) in s
    if isinstance(f, A.Or):
        return any((f.left, a) in s and (f.right, b) in s for a, b in _splits(m))
    if isinstance(f, A.BoolOr):
        return (f.left, m) in s or (f.right, m) in s
    if isinstance(f, A.CoSplit):
        return all((f.left, a) in s or (f.right, b) in s for a, b in _splits(m))
    if isinstance(f, A.A1):
        return all((f.sub, frozenset((j,))) in s for j in m)
    if isinstance(f, A.E1):
        return any((f.sub, frozenset((j,))) in s for j in m)
    if isinstance(f, A.AS):
        return all((f.sub, frozenset(c)) in s for r in range(len(m) + 1) for c in itertools.combinations(sorted(m), r))
    if isinstance(f, (A.Dep, A.NotDep)):
        ok = True
        for i, j in itertools.combinations(sorted(m), 2):
            agree = all(_singletons_value(s, p, i) == _singletons_value(s, p, j) for p in f.params)
            if agree and _singletons_value(s, f.target, i) != _singletons_value(s, f.target, j):
                ok = False
                break
        return ok == isinstance(f, A.Dep)
    if isinstance(f, (A.Incl, A.NotIncl)):
        ok = all(any(all(_singletons_value(s, l, i) == _singletons_value(s, r, j) for l, r in zip(f.left, f.right))
                     for j in m) for i in m)
        return ok == isinstance(f, A.Incl)
    if isinstance(f, A.Gen):
        vals = {tuple(_singletons_value(s, p, j) for p in f.args) for j in m}
        return f.table.contains(vals) != f.negated
    raise TypeError(f"no rule for {type(f).__name__}")


def _order(closure: IndexedClosure):
    forms = sorted(closure.formulas(), key=lambda f: (A.size(f), str(f)))
    return [(f, m) for f in forms for m in sorted(index_sets(closure.n), key=len)]


def _literal_base(closure):
    aps = sorted({f.name for f in closure.formulas() if isinstance(f, (A.Prop, A.NegProp))})
    return aps


def consistent_sets(closure: IndexedClosure) -> set:
    """All consistent subsets, enumerated by letter choice per index plus
    free choices for next/until/quantifier pairs, with the until rule
    checked as soon as both operands are fixed."""
    aps = _literal_base(closure)
    order = _order(closure)
    out = set()
    letters = [frozenset(c) for r in range(len(aps) + 1) for c in itertools.combinations(aps, r)]
    for vec in itertools.product(letters, repeat=closure.n):
        base = set()
        for j, letter in enumerate(vec):
            for a in aps:
                lit = A.Prop(a) if a in letter else A.NegProp(a)
                if (lit, frozenset((j,))) in closure:
                    base.add((lit, frozenset((j,))))

        def dfs(k, s):
            if k == len(order):
                out.add(ConsistentSet(frozenset(s), closure))
                return
            f, m = order[k]
            if isinstance(f, FREE):
                dfs(k + 1, s)
                if isinstance(f, (A.Until, A.WUntil)) and not ((f.left, m) in s or (f.right, m) in s):
                    return
                s.add((f, m))
                dfs(k + 1, s)
                s.discard((f, m))
                return
            if isinstance(f, (A.Prop, A.NegProp)) and len(m) == 1:
                dfs(k + 1, s)
                return
            if determined(f, m, s, closure.n):
                s.add((f, m))
                dfs(k + 1, s)
                s.discard((f, m))
            else:
                dfs(k + 1, s)

        dfs(0, set(base))
    return out


def is_consistent(s, closure: IndexedClosure) -> bool:
    """Rule checker, independent of the enumeration order."""
    pairs = s.pairs if isinstance(s, ConsistentSet) else frozenset(s)
    if not pairs <= closure.pairs:
        return False
    for f, m in closure.pairs:
        if isinstance(f, (A.Prop, A.NegProp)) and len(m) == 1:
            neg = A.NegProp(f.name) if isinstance(f, A.Prop) else A.Prop(f.name)
            if (neg, m) in closure and ((f, m) in pairs) == ((neg, m) in pairs):
                return False
            continue
        if isinstance(f, FREE):
            if isinstance(f, (A.Until, A.WUntil)) and (f, m) in pairs:
                if (f.left, m) not in pairs and (f.right, m) not in pairs:
                    return False
            continue
        if ((f, m) in pairs) != determined(f, m, pairs, closure.n):
            return False
    return True


def local_successors(s: ConsistentSet, direction: int, letter, candidates=None) -> set:
    """Consistent S' with S --(direction, letter)--> S' (direction 0-based)."""
    closure = s.closure
    if not 0 <= direction < closure.n:
        raise ValueError(f"direction {direction} out of range")
    letter = frozenset(letter)
    cands = candidates if candidates is not None else consistent_sets(closure)
    aps = _literal_base(closure)
    here = frozenset((direction,))
    need = set()
    for f, m in s.pairs:
        if isinstance(f, (A.Prop, A.NegProp)) and len(m) == 1 and m != here:
            need.add((f, m))
        if isinstance(f, A.Next):
            need.add((f.sub, m))
        if isinstance(f, (A.Until, A.WUntil)) and (f.right, m) not in s.pairs:
            need.add((f, m))
    out = set()
    for c in cands:
        if not need <= c.pairs:
            continue
        if any(((A.Prop(a), here) in c.pairs) != (a in letter) for a in aps if (A.Prop(a), here) in closure):
            continue
        out.add(c)
    return out


def closure_of(phi, n):
    from ..formula.closure import indexed_closure

    return indexed_closure(A.expand_macros(phi), n)


__all__ = ["ConsistentSet", "consistent_sets", "is_consistent", "local_successors", "closure_of",
           "closure_formulas"]
