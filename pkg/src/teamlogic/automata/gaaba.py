"""Generalised alternating asynchronous Büchi automata and the formula translation.

Transitions read the whole letter vector (one letter per direction, taken
at each trace's current local position) and do not depend on which
directions advance: the run's tef is chosen by the acceptance game.

States of a formula automaton are obligation sets.  A state holds pairs
(psi, M) that must be true now on the sub-team M, plus the set of indexed
until formulas whose eventuality was postponed by the step that produced
the state.  One acceptance set per indexed until (u, M) collects the
states where (u, M) was not postponed.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from ..formula import ast as A
from ..formula.printer import to_text as formula_text
from . import posbool as PB


@dataclass(frozen=True)
class TestLeaf:
    """Quantifier obligation resolved on the suffix team of `idx`."""

    negated: bool
    formula: A.Formula
    idx: tuple

    def label(self):
        ids = ",".join(str(j + 1) for j in self.idx)
        return f"{'!' if self.negated else ''}E[{formula_text(self.formula)}]@{{{ids}}}"


@dataclass(frozen=True)
class State:
    now: frozenset
    post: frozenset = frozenset()

    def __str__(self):
        def pair(p):
            f, m = p
            return f"{formula_text(f)}@{{{','.join(str(j + 1) for j in sorted(m))}}}"

        body = "; ".join(sorted(pair(p) for p in self.now))
        tail = "; ".join(sorted(pair(p) for p in self.post))
        return "{" + body + (" | postponed " + tail if tail else "") + "}"


def letter_vectors(aps, n):
    aps = sorted(aps)
    letters = [frozenset(c) for r in range(len(aps) + 1) for c in itertools.combinations(aps, r)]
    return [tuple(v) for v in itertools.product(letters, repeat=n)]


class Gaaba:
    """GAABA over n directions.

    `delta` is either a dict keyed by (state, letter vector) or a callable.
    Each acceptance set is a frozenset of states or a predicate on states.
    """

    def __init__(self, n, aps, init, delta, acceptance, subautomata=None, formula=None, name="A"):
        self.n = n
        self.aps = frozenset(aps)
        self.init = init
        self._delta = delta
        self.acceptance = list(acceptance)
        self.subautomata = subautomata if subautomata is not None else {}
        self.formula = formula
        self.name = name
        self._cache = {}
        self._states = None

    @property
    def m(self) -> int:
        return len(self.acceptance)

    def restrict_letters(self, letters) -> tuple:
        if len(letters) != self.n:
            raise ValueError(f"automaton has {self.n} directions, got {len(letters)} letters")
        return tuple(frozenset(l) & self.aps for l in letters)

    def delta(self, q, letters):
        key = (q, self.restrict_letters(letters))
        r = self._cache.get(key)
        if r is None:
            if callable(self._delta):
                r = self._delta(*key)
            else:
                r = self._delta[key]
            self._cache[key] = r
        return r

    def in_acc(self, i: int, q) -> bool:
        f = self.acceptance[i]
        return f(q) if callable(f) else q in f

    def acc_indices(self, q) -> frozenset:
        return frozenset(i for i in range(self.m) if self.in_acc(i, q))

    def alphabet(self):
        return letter_vectors(self.aps, self.n)

    def states(self) -> list:
        """Reachable states over the full alphabet, in discovery order."""
        if self._states is None:
            seen = dict.fromkeys(PB.states_of(self.init))
            queue = deque(seen)
            vectors = self.alphabet()
            while queue:
                q = queue.popleft()
                for v in vectors:
                    for q2 in PB.states_of(self.delta(q, v)):
                        if q2 not in seen:
                            seen[q2] = None
                            queue.append(q2)
            self._states = list(seen)
        return self._states

    def tests(self) -> list:
        out = {}
        for q in self.states():
            for v in self.alphabet():
                for leaf in PB.leaves(self.delta(q, v)):
                    if leaf[0] == "test":
                        out[leaf[1]] = None
        for leaf in PB.leaves(self.init):
            if leaf[0] == "test":
                out[leaf[1]] = None
        return list(out)

    def sub(self, leaf: TestLeaf) -> "Gaaba":
        return self.subautomata[(leaf.formula, len(leaf.idx))]


class Aaba(Gaaba):
    """Single acceptance set."""

    def __init__(self, *args, **kw):
        super().__init__(*args, **kw)
        if self.m != 1:
            raise ValueError("an AABA has exactly one acceptance set")

    def accepting(self, q) -> bool:
        return self.in_acc(0, q)


def explicit_gaaba(n, aps, init, table: dict, acceptance, cls=Gaaba) -> Gaaba:
    """Automaton from an explicit (state, letter vector) -> posbool table."""
    aps = frozenset(aps)
    for v in letter_vectors(aps, n):
        for q in {q for q, _ in table}:
            if (q, v) not in table:
                raise ValueError(f"transition missing for state {q} and letters {v}")
    return cls(n, aps, init, dict(table), [frozenset(f) for f in acceptance])


# ---------------------------------------------------------------- translation

ONE = (frozenset(), frozenset(), frozenset())


def _union(a, b):
    return (a[0] | b[0], a[1] | b[1], a[2] | b[2])


def _prune(alts):
    """Drop alternatives that are componentwise supersets of another."""
    alts = sorted(set(alts), key=lambda a: len(a[0]) + len(a[1]) + len(a[2]))
    kept = []
    for a in alts:
        if not any(b[0] <= a[0] and b[1] <= a[1] and b[2] <= a[2] for b in kept):
            kept.append(a)
    return kept


def _product(xs, ys):
    if not xs or not ys:
        return []
    return _prune(_union(a, b) for a in xs for b in ys)


def _subsets(m):
    items = sorted(m)
    for r in range(len(items) + 1):
        for c in itertools.combinations(items, r):
            yield frozenset(c)


def atom_holds(f, m, letters) -> bool:
    """Team atoms only look at the current letters of the traces in m."""

    def vals(params):
        return {j: tuple(A.eval_prop(p, letters[j]) for p in params) for j in m}

    if isinstance(f, (A.Dep, A.NotDep)):
        params, target = vals(f.params), vals((f.target,))
        seen, ok = {}, True
        for j in m:
            if seen.setdefault(params[j], target[j]) != target[j]:
                ok = False
                break
        return ok == isinstance(f, A.Dep)
    if isinstance(f, (A.Incl, A.NotIncl)):
        right = set(vals(f.right).values())
        ok = all(v in right for v in vals(f.left).values())
        return ok == isinstance(f, A.Incl)
    if isinstance(f, A.Gen):
        return f.table.contains(set(vals(f.args).values())) != f.negated
    raise TypeError(f"not an atom: {f}")


class _Tableau:
    def __init__(self, phi, n, registry):
        self.phi = phi
        self.n = n
        self.registry = registry
        self.memo = {}

    def expand(self, f, m, letters):
        key = (f, m, tuple(letters[j] for j in sorted(m)))
        r = self.memo.get(key)
        if r is None:
            r = self._expand(f, m, letters)
            self.memo[key] = r
        return r

    def _expand(self, f, m, letters):
        ex = self.expand
        if not m:
            return [ONE] if A.empty_truth(f) else []
        if isinstance(f, A.Prop):
            return [ONE] if all(f.name in letters[j] for j in m) else []
        if isinstance(f, A.NegProp):
            return [ONE] if all(f.name not in letters[j] for j in m) else []
        if isinstance(f, (A.Top, A.NE)):
            return [ONE]
        if isinstance(f, (A.Bottom, A.FalseConst)):
            return []
        if isinstance(f, (A.Dep, A.NotDep, A.Incl, A.NotIncl, A.Gen)):
            return [ONE] if atom_holds(f, m, letters) else []
        if isinstance(f, A.And):
            return _product(ex(f.left, m, letters), ex(f.right, m, letters))
        if isinstance(f, A.BoolOr):
            return _prune(ex(f.left, m, letters) + ex(f.right, m, letters))
        if isinstance(f, A.Or):
            out = []
            for m1 in _subsets(m):
                out += _product(ex(f.left, m1, letters), ex(f.right, m - m1, letters))
            return _prune(out)
        if isinstance(f, A.CoSplit):
            acc = [ONE]
            for m1 in _subsets(m):
                acc = _product(acc, _prune(ex(f.left, m1, letters) + ex(f.right, m - m1, letters)))
            return acc
        if isinstance(f, A.Next):
            return [(frozenset({(f.sub, m)}), frozenset(), frozenset())]
        if isinstance(f, A.Until):
            wait = (frozenset({(f, m)}), frozenset({(f, m)}), frozenset())
            return _prune(ex(f.right, m, letters) + _product(ex(f.left, m, letters), [wait]))
        if isinstance(f, A.WUntil):
            wait = (frozenset({(f, m)}), frozenset(), frozenset())
            return _prune(ex(f.right, m, letters) + _product(ex(f.left, m, letters), [wait]))
        if isinstance(f, A.A1):
            acc = [ONE]
            for j in sorted(m):
                acc = _product(acc, ex(f.sub, frozenset((j,)), letters))
            return acc
        if isinstance(f, A.E1):
            return _prune([a for j in sorted(m) for a in ex(f.sub, frozenset((j,)), letters)])
        if isinstance(f, A.AS):
            acc = [ONE]
            for s in _subsets(m):
                acc = _product(acc, ex(f.sub, s, letters))
            return acc
        if isinstance(f, (A.Exists, A.NegExists)):
            leaf = TestLeaf(isinstance(f, A.NegExists), f.sub, tuple(sorted(m)))
            self.registry.need(f.sub, len(m))
            return [(frozenset(), frozenset(), frozenset({leaf}))]
        raise TypeError(f"unsupported node {type(f).__name__} in automaton translation")

    def delta(self, q: State, letters):
        alts = [ONE]
        for f, m in sorted(q.now, key=lambda p: (str(p[0]), sorted(p[1]))):
            alts = _product(alts, self.expand(f, m, letters))
            if not alts:
                return PB.FALSE
        out = []
        for nxt, post, tests in alts:
            parts = [PB.test(t) for t in sorted(tests, key=TestLeaf.label)]
            if nxt or post:
                parts.append(PB.state(State(nxt, post)))
            out.append(PB.conj(*parts))
        return PB.disj(*out)


def until_pairs(phi, n) -> list:
    """Indexed until subformulas outside quantifier scope, M nonempty."""
    found = {}

    def walk(f):
        if isinstance(f, (A.Exists, A.NegExists, A.Forall)):
            return
        if isinstance(f, A.Until):
            found[f] = None
        for c in A.children(f):
            walk(c)

    walk(phi)
    return [(u, m) for u in found for m in _subsets(range(n)) if m]


class _Registry:
    def __init__(self):
        self.table = {}

    def need(self, psi, k):
        if (psi, k) not in self.table:
            self.table[(psi, k)] = None  # placeholder against recursion
            self.table[(psi, k)] = _build(psi, k, self)


def prepare(phi):
    """Core syntax: macros expanded, universal quantifiers as negated existentials."""
    return A.normalize_forall(A.expand_macros(phi))


def _build(phi, n, registry) -> Gaaba:
    tab = _Tableau(phi, n, registry)
    full = frozenset(range(n))
    init = PB.state(State(frozenset({(phi, full)}))) if n else (PB.TRUE if A.empty_truth(phi) else PB.FALSE)
    if n == 0 and isinstance(phi, (A.Exists, A.NegExists)):
        init = PB.TRUE if A.empty_truth(phi) else PB.FALSE
    pairs = until_pairs(phi, n)
    if pairs:
        acceptance = [(lambda q, p=p: p not in q.post) for p in pairs]
    else:
        acceptance = [lambda q: True]
    g = Gaaba(n, A.props(phi), init, tab.delta, acceptance, registry.table, formula=phi)
    g.until_pairs = pairs
    return g


def build_gaaba(phi, n: int) -> Gaaba:
    """GAABA for phi over teams of n traces (existential tef semantics).

    Maximal quantified subformulas become test leaves backed by nested
    automata in `subautomata`.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    phi = prepare(phi)
    return _build(phi, n, _Registry())
