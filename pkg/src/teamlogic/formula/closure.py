"""Indexed subformula closure over n traces (indices are 0-based)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import ast as A


def index_sets(n: int):
    return [frozenset(c) for r in range(n + 1) for c in itertools.combinations(range(n), r)]


def all_subformulas(phi) -> list:
    """Subformulas including atom parameters and their parts."""
    seen = {}

    def walk(f):
        if f in seen:
            return
        for c in A.children(f) + A.atom_params(f):
            walk(c)
        seen[f] = None

    walk(phi)
    return list(seen)


@dataclass(frozen=True)
class IndexedClosure:
    formula: A.Formula
    n: int
    pairs: frozenset

    def __contains__(self, pair):
        return pair in self.pairs

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)

    def formulas(self) -> set:
        return {f for f, _ in self.pairs}


def closure_formulas(phi) -> list:
    forms = dict.fromkeys(all_subformulas(phi))
    changed = True
    while changed:
        changed = False
        for f in list(forms):
            extra = []
            if isinstance(f, A.Prop):
                extra.append(A.NegProp(f.name))
            elif isinstance(f, (A.Dep, A.NotDep, A.Incl, A.NotIncl)):
                extra.extend(A.neg_prop(p) for p in A.atom_params(f))
            for g in extra:
                for h in all_subformulas(g):
                    if h not in forms:
                        forms[h] = None
                        changed = True
    return list(forms)


def indexed_closure(phi, n: int) -> IndexedClosure:
    if n < 0:
        raise ValueError("n must be nonnegative")
    forms = closure_formulas(phi)
    pairs = frozenset((f, m) for f in forms for m in index_sets(n))
    return IndexedClosure(phi, n, pairs)


def is_closed(cl: IndexedClosure) -> bool:
    """True when none of the closure rules adds a new pair."""
    ms = index_sets(cl.n)
    for f, _ in cl.pairs:
        needed = [f]
        needed += list(A.children(f)) + list(A.atom_params(f))
        if isinstance(f, A.Prop):
            needed.append(A.NegProp(f.name))
        if isinstance(f, (A.Dep, A.NotDep, A.Incl, A.NotIncl)):
            needed += [A.neg_prop(p) for p in A.atom_params(f)]
        for g in needed:
            for m in ms:
                if (g, m) not in cl.pairs:
                    return False
    return True
