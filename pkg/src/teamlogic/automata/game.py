"""Acceptance games for alternating asynchronous automata over lasso teams.

The Automaton player picks the advancement set allowed by the tef family
and resolves disjunctions; the Pathfinder resolves conjunctions.  Game
positions carry the automaton state, the local positions of all traces
(modulo their lassos) and the family's bookkeeping: offsets relative to
the slowest trace for k-synchronous tefs, the last advanced trace and the
number of switches for k-context-bounded ones.
"""

from __future__ import annotations

import itertools
from collections import deque

from ..core_model import Team
from ..tef import SYNC, Tef, TefFamily
from . import posbool as PB
from .degeneralize import degeneralize
from ..semantics import CapabilityError
from .gaaba import Gaaba

AUTOMATON, PATHFINDER = 0, 1


class Scheduler:
    """Legal advancement sets of a restricted tef family."""

    def __init__(self, family: TefFamily, n: int):
        if family.kind == "all" and n > 1:
            raise CapabilityError("emptiness over unrestricted tefs is undecidable; "
                                  "use a k-synchronous or k-context-bounded family")
        self.family = family
        self.n = n
        self._subsets = [frozenset(c) for r in range(n, 0, -1) for c in itertools.combinations(range(n), r)]

    def initial(self):
        if self.family.kind == "ksync":
            return (0,) * self.n
        if self.family.kind == "kcb":
            return (None, 0)
        return None

    def moves(self, extra):
        """(D, extra') pairs; the first one keeps any witness in the family."""
        n = self.n
        if n == 0:
            return [(frozenset(), extra)]
        kind = self.family.kind
        if kind in ("sync", "all"):
            return [(frozenset(range(n)), None)] if kind == "sync" or n == 1 else []
        if kind == "ksync":
            out = []
            for d in self._subsets:
                offs = [o + (j in d) for j, o in enumerate(extra)]
                low = min(offs)
                offs = tuple(o - low for o in offs)
                if max(offs) <= self.family.k:
                    out.append((d, offs))
            return out
        last, sw = extra
        out = []
        order = ([last] if last is not None else []) + [t for t in range(n) if t != last]
        for t in order:
            s = sw if last is None or t == last else sw + 1
            if s <= self.family.k:
                out.append((frozenset((t,)), (t, s)))
        return out


class GameArena:
    def __init__(self):
        self.index = {}
        self.payload = []
        self.owner = []
        self.succ = []
        self.labels = {}
        self.acc = []
        self.init = None

    def vertex(self, payload, owner):
        v = self.index.get(payload)
        if v is None:
            v = len(self.payload)
            self.index[payload] = v
            self.payload.append(payload)
            self.owner.append(owner)
            self.succ.append([])
            return v, True
        return v, False

    def __len__(self):
        return len(self.payload)

    def edges(self):
        return sum(len(s) for s in self.succ)

    def pred(self):
        pred = [[] for _ in self.payload]
        for v, ws in enumerate(self.succ):
            for w in ws:
                pred[w].append(v)
        return pred

    def check(self):
        for v, ws in enumerate(self.succ):
            if not ws:
                raise ValueError(f"vertex {self.payload[v]} has no successor")

    def to_dot(self) -> str:
        lines = ["digraph arena {"]
        acc = set().union(*self.acc) if self.acc else set()
        for v, p in enumerate(self.payload):
            shape = "box" if self.owner[v] == PATHFINDER else "ellipse"
            peri = 2 if v in acc else 1
            label = _short(p).replace('"', "'")
            lines.append(f'  v{v} [shape={shape}, peripheries={peri}, label="{label}"];')
        for v, ws in enumerate(self.succ):
            for w in ws:
                lines.append(f"  v{v} -> v{w};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _short(p):
    if p[0] in ("WIN", "LOSE"):
        return p[0]
    if p[0] == "S":
        return f"S {p[1]} pos={p[2]} ctx={p[3]}"
    return f"{p[1][0]} pos={p[2]}"


def arena_from_edges(owners, edges, accepting, init=0) -> GameArena:
    """Small explicit arena (used by tests and examples)."""
    g = GameArena()
    for v, o in enumerate(owners):
        g.vertex(("V", v), o)
    for v, w in edges:
        g.succ[v].append(w)
    g.acc = [set(accepting)] if not accepting or isinstance(next(iter(accepting)), int) else [set(a) for a in accepting]
    g.init = init
    g.check()
    return g


# ---------------------------------------------------------------- construction


class TestResolver:
    """Truth of quantifier leaves on suffix teams, memoised across games."""

    def __init__(self, family: TefFamily, generalized=False):
        self.family = family
        self.generalized = generalized
        self.table = {}

    def __call__(self, automaton, leaf, traces):
        suffix = tuple(traces[j] for j in leaf.idx)
        key = (leaf.formula, suffix)
        r = self.table.get(key)
        if r is None:
            sub = automaton.sub(leaf)
            r = accepts(sub, Team.of(*suffix), self.family, resolver=self, generalized=self.generalized).holds
            self.table[key] = r
        return r != leaf.negated


def membership_game(a: Gaaba, team: Team, family: TefFamily = SYNC, top_family: TefFamily | None = None,
                    resolver: TestResolver | None = None) -> GameArena:
    """Game won by the Automaton iff the team is in L_TE(a).

    `top_family` (default `family`) restricts the run's own tef; nested
    quantifier leaves are decided with `family`.
    """
    if len(team) != a.n:
        raise ValueError(f"automaton reads {a.n} traces, team has {len(team)}")
    sched = Scheduler(top_family or family, a.n)
    resolver = resolver or TestResolver(family)
    traces = team.traces
    arena = GameArena()
    win, _ = arena.vertex(("WIN",), AUTOMATON)
    lose, _ = arena.vertex(("LOSE",), AUTOMATON)
    arena.succ[win].append(win)
    arena.succ[lose].append(lose)
    todo = deque()

    def suffixes(pos):
        return tuple(t.suffix(p) for t, p in zip(traces, pos))

    def node_vertex(node, cur, nxt):
        kind = node[0]
        if kind == "true":
            return win
        if kind == "false":
            return lose
        if kind == "q":
            v, new = arena.vertex(("S", node[1], nxt[0], nxt[1]), AUTOMATON)
            if new:
                todo.append(v)
            return v
        if kind == "test":
            return win if resolver(a, node[1], suffixes(cur)) else lose
        owner = PATHFINDER if kind == "and" else AUTOMATON
        v, new = arena.vertex(("N", node, cur, nxt), owner)
        if new:
            arena.succ[v] = _dedupe([node_vertex(c, cur, nxt) for c in node[1]])
        return v

    pos0 = tuple(t.norm(0) for t in traces)
    ctx0 = (pos0, sched.initial())
    arena.init = node_vertex(a.init, pos0, ctx0)
    while todo:
        v = todo.popleft()
        _, q, pos, extra = arena.payload[v]
        letters = tuple(t[p] for t, p in zip(traces, pos))
        node = a.delta(q, letters)
        out = []
        for d, extra2 in sched.moves(extra):
            pos2 = tuple(t.next_pos(p) if j in d else p for j, (t, p) in enumerate(zip(traces, pos)))
            w = node_vertex(node, pos, (pos2, extra2))
            if w not in out:
                out.append(w)
                arena.labels[(v, w)] = d
        arena.succ[v] = out
    sets = []
    for i in range(a.m):
        sets.append({v for v, p in enumerate(arena.payload)
                     if p[0] == "WIN" or (p[0] == "S" and a.in_acc(i, p[1]))})
    arena.acc = sets
    arena.scheduler = sched
    arena.check()
    return arena


def _dedupe(xs):
    out = []
    for x in xs:
        if x not in out:
            out.append(x)
    return out


# ---------------------------------------------------------------- solvers


def attractor(arena: GameArena, target: set, player: int, region: set, pred=None):
    """Vertices in `region` from which `player` can force a visit to `target`."""
    pred = pred or arena.pred()
    attr = set(target) & region
    strategy = {}
    count = {v: sum(1 for w in arena.succ[v] if w in region) for v in region}
    queue = deque(attr)
    while queue:
        w = queue.popleft()
        for v in pred[w]:
            if v not in region or v in attr:
                continue
            if arena.owner[v] == player:
                attr.add(v)
                strategy[v] = w
                queue.append(v)
            else:
                count[v] -= 1
                if count[v] == 0:
                    attr.add(v)
                    queue.append(v)
    return attr, strategy


def solve_buchi_game(arena: GameArena):
    """Winning region of the Automaton and a positional strategy on it.

    Classic iteration: remove the Pathfinder's attractor to the vertices
    from which the Automaton cannot force a visit to the Büchi set.
    """
    if len(arena.acc) != 1:
        raise ValueError("Büchi game needs exactly one acceptance set; degeneralise first")
    pred = arena.pred()
    region = set(range(len(arena)))
    acc = arena.acc[0]
    while True:
        reach, _ = attractor(arena, acc & region, AUTOMATON, region, pred)
        trap = region - reach
        if not trap:
            break
        lost, _ = attractor(arena, trap, PATHFINDER, region, pred)
        region -= lost
    reach, strategy = attractor(arena, acc & region, AUTOMATON, region, pred)
    for v in region:
        if arena.owner[v] == AUTOMATON and v not in strategy:
            strategy[v] = next(w for w in arena.succ[v] if w in region)
    return region, strategy


def _cpre(arena, target, region):
    out = set()
    for v in region:
        ws = arena.succ[v]
        if arena.owner[v] == AUTOMATON:
            if any(w in target for w in ws):
                out.add(v)
        elif all(w in target for w in ws):
            out.add(v)
    return out


def solve_generalized_buchi_game(arena: GameArena) -> set:
    """nu Z. AND_i mu Y. (F_i & Cpre(Z)) | Cpre(Y), computed directly."""
    allv = set(range(len(arena)))
    z = set(allv)
    while True:
        new_z = set(allv)
        for f in arena.acc:
            base = f & _cpre(arena, z, allv)
            y = set()
            while True:
                y2 = base | _cpre(arena, y, allv)
                if y2 == y:
                    break
                y = y2
            new_z &= y
        if new_z == z:
            return z
        z = new_z


# ---------------------------------------------------------------- membership


class Verdict:
    def __init__(self, holds, tef=None, arena=None):
        self.holds = holds
        self.tef = tef
        self.arena = arena

    def __bool__(self):
        return self.holds

    def __repr__(self):
        return f"Verdict({self.holds}, tef={self.tef})"


def accepts(a: Gaaba, team: Team, family: TefFamily = SYNC, top_family=None, resolver=None,
            generalized=False, want_witness=False) -> Verdict:
    """Membership of the team in L_TE(a)."""
    resolver = resolver or TestResolver(family, generalized)
    if generalized:
        arena = membership_game(a, team, family, top_family, resolver)
        win = solve_generalized_buchi_game(arena)
        return Verdict(arena.init in win, None, arena)
    if a.m != 1:
        a = degeneralize(a)
    arena = membership_game(a, team, family, top_family, resolver)
    win, strategy = solve_buchi_game(arena)
    holds = arena.init in win
    tef = witness_tef(arena, strategy, team) if holds and want_witness else None
    return Verdict(holds, tef, arena)


def witness_tef(arena: GameArena, strategy: dict, team: Team) -> Tef:
    """Follow the winning strategy along the main branch into a lasso of moves."""
    n = len(team)
    sched = arena.scheduler
    moves, seen = [], {}
    v = arena.init
    extra = sched.initial()
    loop_at = None
    for _ in range(10 * len(arena) + 10):
        p = arena.payload[v]
        if p[0] == "WIN":
            break
        if p[0] == "S":
            if v in seen:
                loop_at = seen[v]
                break
            seen[v] = len(moves)
            w = strategy[v]
            moves.append(arena.labels[(v, w)])
            extra = p[3]
            extra = dict((d, e) for d, e in sched.moves(extra)).get(moves[-1], extra)
            v = w
            continue
        if arena.owner[v] == AUTOMATON:
            v = strategy[v]
        else:
            kids = arena.succ[v]
            v = next((w for w in kids if arena.payload[w][0] in ("S", "N")), kids[0])
    if loop_at is None:
        # the rest is unconstrained: keep taking the first legal move
        tail, seen_extra = [], {}
        while extra not in seen_extra:
            seen_extra[extra] = len(tail)
            d, extra = sched.moves(extra)[0]
            tail.append(d)
        loop_at = len(moves) + seen_extra[extra]
        moves += tail
    if n == 0:
        return Tef(0, (), (), (frozenset(),))
    return Tef(n, (0,) * n, tuple(moves[:loop_at]), tuple(moves[loop_at:]))
