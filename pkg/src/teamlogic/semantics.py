"""Direct team-semantics evaluator over lasso teams: the brute-force oracle.

A configuration is the tef phase together with the (lasso-normalised)
local positions of all traces.  Until and weak until walk the
configuration sequence; revisiting a configuration decides them (least
fixpoint for U, greatest for W).  Tef quantifiers restart on the suffix
team of the live traces with a fresh tef from the family.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass

from .core_model import LassoTrace, Team, team_lcm
from .formula import ast as A
from .tef import SYNC, Tef, TefFamily, enumerate_family, synchronous_tef

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


class CapabilityError(Exception):
    """The requested family cannot be handled by this engine."""


# ---------------------------------------------------------------- plain LTL


def ltl_eval(t: LassoTrace, i: int, phi) -> bool:
    if not A.is_ltl(A.expand_macros(phi)) and not _is_classical(phi):
        raise ValueError(f"not an LTL formula: {phi}")
    return t.norm(i) in _ltl_sat(t, phi)


def _is_classical(phi):
    if isinstance(phi, (A.Prop, A.NegProp, A.Top, A.Bottom, A.FalseConst)):
        return True
    if isinstance(phi, (A.And, A.Or, A.BoolOr, A.Next, A.Until, A.WUntil)):
        return all(_is_classical(c) for c in A.children(phi))
    return False


def _ltl_sat(t: LassoTrace, phi) -> frozenset:
    positions = range(t.size())
    nxt = {j: t.next_pos(j) for j in positions}
    memo = {}

    def sat(f):
        if f in memo:
            return memo[f]
        if isinstance(f, A.Prop):
            out = {j for j in positions if f.name in t[j]}
        elif isinstance(f, A.NegProp):
            out = {j for j in positions if f.name not in t[j]}
        elif isinstance(f, A.Top):
            out = set(positions)
        elif isinstance(f, (A.Bottom, A.FalseConst)):
            out = set()
        elif isinstance(f, A.And):
            out = sat(f.left) & sat(f.right)
        elif isinstance(f, (A.Or, A.BoolOr)):
            out = sat(f.left) | sat(f.right)
        elif isinstance(f, A.Next):
            s = sat(f.sub)
            out = {j for j in positions if nxt[j] in s}
        elif isinstance(f, (A.Until, A.WUntil)):
            a, b = sat(f.left), sat(f.right)
            out = set(b) if isinstance(f, A.Until) else a | b
            while True:
                if isinstance(f, A.Until):
                    new = b | {j for j in a if nxt[j] in out}
                else:
                    new = b | {j for j in a if nxt[j] in out}
                    new &= out
                if new == out:
                    break
                out = new
        else:
            raise ValueError(f"not an LTL formula: {f}")
        memo[f] = frozenset(out)
        return memo[f]

    return sat(phi)


# ---------------------------------------------------------------- team evaluator


def dwell_bound_for(team: Team, phi) -> int:
    """Phase-length bound for context-bounded tef enumeration.

    Positions repeat after prefix + lcm steps; the extra lcm multiples
    give nested temporal operators room to observe every residue.
    """
    pre = max((len(t.prefix) for t in team.traces), default=0)
    return pre + team_lcm(team) * (A.temporal_size(phi) + 2)


class QuantCache:
    def __init__(self, family: TefFamily, dwell_bound=None):
        self.family = family
        self.dwell_bound = dwell_bound
        self.table = {}


def tefs_for(team: Team, phi, cache: QuantCache):
    if cache.family.kind in ("all", "ksync"):
        raise CapabilityError(f"tef family {cache.family} is not enumerable; use the automata engine")
    bound = cache.dwell_bound
    if bound is None and cache.family.kind == "kcb":
        bound = dwell_bound_for(team, phi)
    return enumerate_family(cache.family, team, bound)


class Evaluator:
    def __init__(self, team: Team, tef: Tef, cache: QuantCache):
        if tef.n != len(team):
            raise ValueError(f"tef is for {tef.n} traces, team has {len(team)}")
        self.traces = team.traces
        self.tef = tef
        self.cache = cache
        self.memo = {}

    # configurations are (phase, positions)
    def initial(self):
        return (0, tuple(t.norm(v) for t, v in zip(self.traces, self.tef.init)))

    def succ(self, cfg):
        phase, pos = cfg
        moved = self.tef.step(phase)
        pos = tuple(self.traces[j].next_pos(p) if j in moved else p for j, p in enumerate(pos))
        return (self.tef.phase(phase + 1), pos)

    def at(self, i: int):
        cfg = self.initial()
        for _ in range(i):
            cfg = self.succ(cfg)
        return cfg

    def letter(self, cfg, j):
        return self.traces[j][cfg[1][j]]

    def key(self, phi, m, cfg):
        return (phi, m, cfg[0], tuple(cfg[1][j] for j in sorted(m)))

    def eval(self, phi, m: frozenset, cfg) -> bool:
        if not m:
            return A.empty_truth(phi)
        k = self.key(phi, m, cfg)
        r = self.memo.get(k)
        if r is None:
            r = self._eval(phi, m, cfg)
            self.memo[k] = r
        return r

    def _vals(self, params, m, cfg):
        return {j: tuple(A.eval_prop(p, self.letter(cfg, j)) for p in params) for j in m}

    def _eval(self, f, m, cfg) -> bool:
        ev = self.eval
        if isinstance(f, A.Prop):
            return all(f.name in self.letter(cfg, j) for j in m)
        if isinstance(f, A.NegProp):
            return all(f.name not in self.letter(cfg, j) for j in m)
        if isinstance(f, A.Top):
            return True
        if isinstance(f, (A.Bottom, A.FalseConst)):
            return False
        if isinstance(f, A.NE):
            return True
        if isinstance(f, A.And):
            return ev(f.left, m, cfg) and ev(f.right, m, cfg)
        if isinstance(f, A.BoolOr):
            return ev(f.left, m, cfg) or ev(f.right, m, cfg)
        if isinstance(f, A.Or):
            return any(ev(f.left, m1, cfg) and ev(f.right, m - m1, cfg) for m1 in subsets(m))
        if isinstance(f, A.CoSplit):
            return all(ev(f.left, m1, cfg) or ev(f.right, m - m1, cfg) for m1 in subsets(m))
        if isinstance(f, A.Next):
            return ev(f.sub, m, self.succ(cfg))
        if isinstance(f, (A.Until, A.WUntil)):
            return self._until(f, m, cfg)
        if isinstance(f, A.A1):
            return all(ev(f.sub, frozenset((j,)), cfg) for j in m)
        if isinstance(f, A.E1):
            return any(ev(f.sub, frozenset((j,)), cfg) for j in m)
        if isinstance(f, A.AS):
            return all(ev(f.sub, s, cfg) for s in subsets(m))
        if isinstance(f, (A.Dep, A.NotDep)):
            return dep_holds(self._vals(f.params, m, cfg), self._vals((f.target,), m, cfg)) == isinstance(f, A.Dep)
        if isinstance(f, (A.Incl, A.NotIncl)):
            left = self._vals(f.left, m, cfg).values()
            right = set(self._vals(f.right, m, cfg).values())
            return all(v in right for v in left) == isinstance(f, A.Incl)
        if isinstance(f, A.Gen):
            vals = set(self._vals(f.args, m, cfg).values())
            return f.table.contains(vals) != f.negated
        if isinstance(f, (A.Exists, A.Forall, A.NegExists)):
            return self._quant(f, m, cfg)
        if isinstance(f, A.SyncMacro):
            return ev(A.expand_macros(f), m, cfg)
        raise TypeError(f"unknown node {type(f).__name__}")

    def _until(self, f, m, cfg) -> bool:
        weak = isinstance(f, A.WUntil)
        path, seen = [], set()
        c = cfg
        while True:
            k = self.key(f, m, c)
            if k in self.memo:
                result = self.memo[k]
                break
            if k in seen:
                result = weak
                break
            seen.add(k)
            path.append(k)
            if self.eval(f.right, m, c):
                result = True
                break
            if not self.eval(f.left, m, c):
                result = False
                break
            c = self.succ(c)
        for k in path:
            self.memo[k] = result
        return result

    def _quant(self, f, m, cfg) -> bool:
        idx = sorted(m)
        suffix = tuple(self.traces[j].suffix(cfg[1][j]) for j in idx)
        ok = exists_tef(f.sub, suffix, self.cache, universal=isinstance(f, A.Forall))
        return (not ok) if isinstance(f, A.NegExists) else ok


def exists_tef(phi, traces: tuple, cache: QuantCache, universal=False) -> bool:
    """Some (every, with universal) initial tef of the family satisfies phi."""
    key = (phi, traces, universal)
    r = cache.table.get(key)
    if r is not None:
        return r
    team = Team.of(*traces)
    r = universal
    for tef in tefs_for(team, phi, cache):
        ev = Evaluator(team, tef, cache)
        if ev.eval(phi, frozenset(range(len(team))), ev.initial()) != universal:
            r = not universal
            break
    cache.table[key] = r
    return r


def subsets(m: frozenset):
    items = sorted(m)
    for r in range(len(items) + 1):
        for c in itertools.combinations(items, r):
            yield frozenset(c)


def dep_holds(params: dict, target: dict) -> bool:
    seen = {}
    for j, key in params.items():
        v = target[j]
        if seen.setdefault(key, v) != v:
            return False
    return True


# ---------------------------------------------------------------- public API


@dataclass(frozen=True)
class EvalConfig:
    team: Team
    tef: Tef
    global_index: int = 0
    index_set: frozenset | None = None


def evaluate(cfg: EvalConfig, phi, family: TefFamily = SYNC, dwell_bound=None) -> bool:
    """Truth of (T, tau, i) |= phi on the live index set (0-based)."""
    phi = A.expand_macros(phi)
    cache = QuantCache(family, dwell_bound)
    ev = Evaluator(cfg.team, cfg.tef, cache)
    m = frozenset(range(len(cfg.team))) if cfg.index_set is None else frozenset(cfg.index_set)
    if not m <= frozenset(range(len(cfg.team))):
        raise ValueError("index set is not a subset of the team")
    return ev.eval(phi, m, ev.at(cfg.global_index))


def eval_formula(team: Team, tef: Tef, phi, family: TefFamily = SYNC, i: int = 0, index_set=None,
                 dwell_bound=None) -> bool:
    return evaluate(EvalConfig(team, tef, i, index_set), phi, family, dwell_bound)


@dataclass
class ModeResult:
    holds: bool
    tef: Tef | None = None  # witness for exists, counterexample for forall

    def __bool__(self):
        return self.holds


def check_mode(team: Team, phi, mode: str, family: TefFamily = SYNC, dwell_bound=None) -> ModeResult:
    """Satisfaction of phi by the team in mode exists, forall or sync.

    Top-level and nested tef quantifiers range over initial tefs of
    `family`; in sync mode the top-level tef is the synchronous one.
    """
    phi = A.expand_macros(phi)
    cache = QuantCache(family, dwell_bound)
    if mode in ("sync", "synchronous"):
        tefs = [synchronous_tef(len(team))]
        universal = False
    elif mode == "exists":
        tefs = tefs_for(team, phi, cache)
        universal = False
    elif mode == "forall":
        tefs = tefs_for(team, phi, cache)
        universal = True
    else:
        raise ValueError(f"unknown mode {mode!r}")
    full = frozenset(range(len(team)))
    for tef in tefs:
        ev = Evaluator(team, tef, cache)
        v = ev.eval(phi, full, ev.initial())
        if v != universal:
            return ModeResult(v, tef)
    return ModeResult(universal, None)
