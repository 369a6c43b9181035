"""Restricted-tef emptiness, fixed-size model checking and satisfiability.

Over a Kripke power the product tracks the automaton state, one Kripke
state per direction and the family bookkeeping.  When the automaton never
branches universally (no conjunctions, no quantifier leaves) the product
is a plain graph and Büchi nonemptiness is an SCC question; this is exact.
Otherwise we fall back to checking a bounded family of lasso teams, and
report the answer as not exact unless a witness was found.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import networkx as nx

from ..core_model import KripkeStructure, LassoTrace, Team, kripke_lasso_traces, all_lassos
from ..formula import ast as A
from ..formula.bn import boolean_negation
from ..tef import SYNC, Tef, TefFamily
from .degeneralize import degeneralize
from .gaaba import Gaaba, build_gaaba
from .game import Scheduler, accepts


class NotExact(Exception):
    """The automaton branches universally; the product is not a plain graph."""


@dataclass(frozen=True)
class KripkePower:
    """All n-tuples of traces of `kripke` starting in its initial states."""

    kripke: KripkeStructure
    n: int
    free_start: bool = False  # any state may start a trace


def universal_structure(aps) -> KripkeStructure:
    """Every letter over `aps` is a state with all transitions (use free_start)."""
    aps = sorted(aps)
    letters = [frozenset(c) for r in range(len(aps) + 1) for c in itertools.combinations(aps, r)]
    names = ["s" + "".join(sorted(l)) if l else "s_" for l in letters]
    labels = dict(zip(names, letters))
    edges = {s: list(names) for s in names}
    return KripkeStructure(tuple(names), edges, labels, names[0])


@dataclass
class EmptinessResult:
    empty: bool
    team: Team | None = None
    tef: Tef | None = None
    exact: bool = True
    product_size: int = 0
    note: str = ""

    def __bool__(self):
        return not self.empty


def _initial_vectors(power: KripkePower):
    k = power.kripke
    starts = list(k.states) if power.free_start else [k.root]
    return list(itertools.product(starts, repeat=power.n))


def product_graph(a: Gaaba, power: KripkePower, family: TefFamily, top_family=None):
    """Explicit product; raises NotExact on universal branching."""
    if a.m != 1:
        a = degeneralize(a)
    k, n = power.kripke, power.n
    sched = Scheduler(top_family or family, n)
    g = nx.DiGraph()
    top = ("TOP",)
    g.add_node(top, acc=True)
    g.add_edge(top, top, move=None)
    inits = []
    todo = []

    def leaf_targets(node):
        kind = node[0]
        if kind == "true":
            return [None]
        if kind == "false":
            return []
        if kind == "q":
            return [node[1]]
        if kind == "or":
            return [t for c in node[1] for t in leaf_targets(c)]
        raise NotExact(f"universal branching ({kind}) in the automaton")

    def add(q, ks, extra):
        v = ("P", q, ks, extra)
        if v not in g:
            g.add_node(v, acc=a.in_acc(0, q))
            todo.append(v)
        return v

    extra0 = sched.initial()
    for ks in _initial_vectors(power):
        for q in leaf_targets(a.init):
            v = top if q is None else add(q, ks, extra0)
            inits.append((v, ks))
    while todo:
        v = todo.pop()
        _, q, ks, extra = v
        letters = tuple(k.label(s) for s in ks)
        targets = leaf_targets(a.delta(q, letters))
        if not targets:
            continue
        for d, extra2 in sched.moves(extra):
            choices = [k.successors(s) if j in d else [s] for j, s in enumerate(ks)]
            for ks2 in itertools.product(*choices):
                for q2 in targets:
                    w = top if q2 is None else add(q2, ks2, extra2)
                    g.add_edge(v, w, move=d)
    return g, inits, sched


def _find_lasso(g, inits):
    """Path from an initial node to an accepting node on a cycle, plus the cycle."""
    live = set()
    for comp in nx.strongly_connected_components(g):
        comp = set(comp)
        nontrivial = len(comp) > 1 or any(g.has_edge(v, v) for v in comp)
        if nontrivial and any(g.nodes[v]["acc"] for v in comp):
            live |= {v for v in comp if g.nodes[v]["acc"]}
    if not live:
        return None
    best = None
    for v0, ks in inits:
        if v0 not in g:
            continue
        lengths = nx.single_source_shortest_path(g, v0)
        for v in live:
            if v in lengths and (best is None or len(lengths[v]) < len(best[1])):
                best = (ks, lengths[v])
    if best is None:
        return None
    ks0, path = best
    v = path[-1]
    if v == ("TOP",):
        return ks0, path, [v]
    comp = next(c for c in nx.strongly_connected_components(g) if v in c)
    sub = g.subgraph(comp)
    if g.has_edge(v, v):
        cycle = [v, v]
    else:
        back = min((nx.shortest_path(sub, w, v) for w in sub.successors(v)), key=len)
        cycle = [v] + back
    return ks0, path, cycle


def _extend(k: KripkeStructure, s):
    """Some infinite path from s as (states, loop start)."""
    seen, path = {}, []
    while s not in seen:
        seen[s] = len(path)
        path.append(s)
        s = sorted(k.successors(s), key=str)[0]
    return path, seen[s]


def _witness(g, k, n, sched, ks0, path, cycle):
    real = [p for p in path if p[0] == "P"]
    moves_pre = [g.edges[u, w]["move"] for u, w in zip(real, real[1:])]
    states = [ks0] + [p[2] for p in real[1:]]
    to_top = cycle[0] == ("TOP",)
    moves_cyc = [] if to_top else [g.edges[u, w]["move"] for u, w in zip(cycle, cycle[1:])]
    traces = []
    for d in range(n):
        seq = [ks0[d]]
        for mv, s in zip(moves_pre, states[1:]):
            if d in mv:
                seq.append(s[d])
        loop_seq = [p[2][d] for mv, p in zip(moves_cyc, cycle[1:]) if d in mv]
        if loop_seq:
            # the cycle ends where it starts, so its last state is seq[-1]
            pre, loop = seq[:-1], [seq[-1]] + loop_seq[:-1]
        else:
            ext, back = _extend(k, seq[-1])
            full = seq[:-1] + ext
            cut = len(seq) - 1 + back
            pre, loop = full[:cut], full[cut:]
        traces.append(LassoTrace(tuple(k.label(s) for s in pre), tuple(k.label(s) for s in loop)))
    if to_top:
        # accepted outright: continue with the family's default move
        ex = real[-1][3] if real else sched.initial()
        tail, seen = [], {}
        while ex not in seen:
            seen[ex] = len(tail)
            mv, ex = sched.moves(ex)[0]
            tail.append(mv)
        moves_pre = moves_pre + tail[: seen[ex]]
        moves_cyc = tail[seen[ex]:]
    if n == 0:
        return Team.of(), Tef(0, (), (), (frozenset(),))
    return Team.of(*traces), Tef(n, (0,) * n, tuple(moves_pre), tuple(moves_cyc))


def emptiness(a: Gaaba, family: TefFamily, inputs, top_family=None) -> EmptinessResult:
    """Is L_TE(a) restricted to `inputs` empty?

    `inputs` is a Team (a single membership question) or a KripkePower.
    """
    if isinstance(inputs, Team):
        v = accepts(a, inputs, family, top_family, want_witness=True)
        return EmptinessResult(not v.holds, inputs if v.holds else None, v.tef, True, len(v.arena))
    g, inits, sched = product_graph(a, inputs, family, top_family)
    found = _find_lasso(g, inits)
    if found is None:
        return EmptinessResult(True, product_size=g.number_of_nodes())
    team, tef = _witness(g, inputs.kripke, inputs.n, sched, *found)
    return EmptinessResult(False, team, tef, True, g.number_of_nodes())


# ---------------------------------------------------------------- problems


@dataclass
class ProblemResult:
    holds: bool
    team: Team | None = None
    tef: Tef | None = None
    exact: bool = True
    method: str = "product"
    checked: int = 0
    notes: list = field(default_factory=list)

    def __bool__(self):
        return self.holds


def _bounded_teams(traces, n):
    return (Team.of(*c) for c in itertools.combinations_with_replacement(traces, n))


def _search(phi, teams, family, mode, want):
    """First team whose verdict equals `want`, as (team, verdict, count)."""
    from .engine import automata_check

    count = 0
    for team in teams:
        count += 1
        v = automata_check(team, phi, mode, family)
        if v.holds == want:
            return team, v, count
    return None, None, count


def model_check(k: KripkeStructure, phi, n: int, mode: str, family: TefFamily,
                max_prefix: int = 2, max_cycle: int = 2) -> ProblemResult:
    """Do all size-n multisets of traces of k satisfy phi?"""
    if n < 1:
        raise ValueError("team size must be at least 1")
    if mode in ("forall", "sync", "synchronous"):
        top = SYNC if mode != "forall" else None
        try:
            a = build_gaaba(boolean_negation(phi), n)
            r = emptiness(a, family, KripkePower(k, n), top_family=top)
            return ProblemResult(r.empty, r.team, r.tef, True, "product", r.product_size)
        except NotExact:
            pass
    traces = list(kripke_lasso_traces(k, max_prefix, max_cycle))
    team, v, count = _search(phi, _bounded_teams(traces, n), family, mode, False)
    if team is not None:
        return ProblemResult(False, team, v.tef, True, "enumeration", count)
    return ProblemResult(True, None, None, False, "enumeration", count,
                         [f"checked {count} teams of lassos with prefix <= {max_prefix}, cycle <= {max_cycle}"])


def satisfiability(phi, n: int, mode: str, family: TefFamily, aps=None,
                   max_prefix: int = 1, max_loop: int = 2) -> ProblemResult:
    """Is there a size-n multiset of traces satisfying phi?"""
    if n < 0:
        raise ValueError("team size must be nonnegative")
    aps = sorted(set(aps) if aps is not None else A.props(A.expand_macros(phi)))
    if mode in ("exists", "sync", "synchronous"):
        top = SYNC if mode != "exists" else None
        try:
            a = build_gaaba(phi, n)
            r = emptiness(a, family, KripkePower(universal_structure(aps), n, free_start=True), top_family=top)
            return ProblemResult(not r.empty, r.team, r.tef, True, "product", r.product_size)
        except NotExact:
            pass
    traces = list(all_lassos(aps, max_prefix, max_loop))
    team, v, count = _search(phi, _bounded_teams(traces, n), family, mode, True)
    if team is not None:
        return ProblemResult(True, team, v.tef, True, "enumeration", count)
    return ProblemResult(False, None, None, False, "enumeration", count,
                         [f"checked {count} teams of lassos with prefix <= {max_prefix}, loop <= {max_loop}"])
