"""Lasso traces, multiset teams and rooted Kripke structures."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from math import lcm


Letter = frozenset


def letter(*props) -> frozenset:
    return frozenset(props)


def _primitive(loop):
    n = len(loop)
    for d in range(1, n + 1):
        if n % d == 0 and loop[:d] * (n // d) == loop:
            return loop[:d]
    return loop


@dataclass(frozen=True)
class LassoTrace:
    """Ultimately periodic word prefix . loop^omega over sets of propositions.

    The representation is normalised on construction (primitive loop,
    shortest prefix), so structural equality is equality of words.
    """

    prefix: tuple
    loop: tuple

    def __post_init__(self):
        prefix = tuple(frozenset(a) for a in self.prefix)
        loop = tuple(frozenset(a) for a in self.loop)
        if not loop:
            raise ValueError("lasso loop must be nonempty")
        loop = _primitive(loop)
        # roll the loop back into the prefix while the letters agree
        while prefix and prefix[-1] == loop[-1]:
            prefix = prefix[:-1]
            loop = (loop[-1],) + loop[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "loop", loop)

    def __getitem__(self, i: int) -> frozenset:
        if i < 0:
            raise IndexError(i)
        if i < len(self.prefix):
            return self.prefix[i]
        return self.loop[(i - len(self.prefix)) % len(self.loop)]

    @property
    def period_start(self) -> int:
        return len(self.prefix)

    def norm(self, i: int) -> int:
        """Smallest position with the same suffix as position i."""
        a = len(self.prefix)
        if i < a:
            return i
        return a + (i - a) % len(self.loop)

    def next_pos(self, i: int) -> int:
        return self.norm(i + 1)

    def size(self) -> int:
        return len(self.prefix) + len(self.loop)

    def suffix(self, i: int) -> "LassoTrace":
        i = self.norm(i)
        a = len(self.prefix)
        if i < a:
            return LassoTrace(self.prefix[i:], self.loop)
        k = i - a
        return LassoTrace((), self.loop[k:] + self.loop[:k])

    def props(self) -> frozenset:
        out = set()
        for a in self.prefix + self.loop:
            out |= a
        return frozenset(out)

    def map_letters(self, fn) -> "LassoTrace":
        return LassoTrace(tuple(fn(a) for a in self.prefix), tuple(fn(a) for a in self.loop))

    def sort_key(self):
        return (tuple(tuple(sorted(a)) for a in self.prefix), tuple(tuple(sorted(a)) for a in self.loop))

    def __str__(self):
        return format_trace(self)


def fmt_set(a) -> str:
    return "{" + ",".join(sorted(str(x) for x in a)) + "}"


def format_trace(t: LassoTrace) -> str:
    pre = " ".join(fmt_set(a) for a in t.prefix)
    loop = " ".join(fmt_set(a) for a in t.loop)
    return (pre + " | " + loop) if pre else "| " + loop


@dataclass(frozen=True)
class Team:
    """Finite multiset of traces, stored as (index, trace) pairs sorted by index.

    Equality ignores the indices: two teams are equal when some bijection
    between their indices matches the traces.
    """

    entries: tuple = ()

    def __post_init__(self):
        entries = self.entries
        if isinstance(entries, dict):
            entries = entries.items()
        entries = tuple(sorted(((int(i), t) for i, t in entries), key=lambda e: e[0]))
        idx = [i for i, _ in entries]
        if len(set(idx)) != len(idx):
            raise ValueError("team indices must be pairwise distinct")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, *traces) -> "Team":
        if len(traces) == 1 and not isinstance(traces[0], LassoTrace):
            traces = tuple(traces[0])
        return cls(tuple((i + 1, t) for i, t in enumerate(traces)))

    @property
    def traces(self) -> tuple:
        return tuple(t for _, t in self.entries)

    @property
    def indices(self) -> tuple:
        return tuple(i for i, _ in self.entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.traces)

    def canonical(self) -> tuple:
        return tuple(sorted(self.traces, key=LassoTrace.sort_key))

    def __eq__(self, other):
        if not isinstance(other, Team):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def restrict(self, idx) -> "Team":
        keep = set(idx)
        return Team(tuple(e for e in self.entries if e[0] in keep))

    def props(self) -> frozenset:
        out = frozenset()
        for t in self.traces:
            out |= t.props()
        return out


def team_disjoint_union(a: Team, b: Team) -> Team:
    traces = a.traces + b.traces
    return Team(tuple((i + 1, t) for i, t in enumerate(traces)))


def split_enumeration(team: Team):
    """All 2^|team| ordered splits (T1, T2); subteams keep their indices."""
    ents = team.entries
    out = []
    for mask in range(1 << len(ents)):
        left = tuple(e for j, e in enumerate(ents) if mask >> j & 1)
        right = tuple(e for j, e in enumerate(ents) if not mask >> j & 1)
        out.append((Team(left), Team(right)))
    return out


def add_alternating_o(team: Team, o: str = "o") -> Team:
    if o in team.props():
        raise ValueError(f"proposition {o!r} already occurs in the team")
    out = []
    for i, t in team.entries:
        a, b = len(t.prefix), len(t.loop)
        span = b if b % 2 == 0 else 2 * b
        prefix = tuple(t[j] | ({o} if j % 2 == 0 else set()) for j in range(a))
        loop = tuple(t[j] | ({o} if j % 2 == 0 else set()) for j in range(a, a + span))
        out.append((i, LassoTrace(prefix, loop)))
    return Team(tuple(out))


def strip_prop(team: Team, o: str) -> Team:
    return Team(tuple((i, t.map_letters(lambda a: a - {o})) for i, t in team.entries))


@dataclass(frozen=True)
class KripkeStructure:
    states: tuple
    edges: dict = field(hash=False)
    labels: dict = field(hash=False)
    root: object = None

    def __post_init__(self):
        states = tuple(self.states)
        object.__setattr__(self, "states", states)
        edges = {s: tuple(self.edges.get(s, ())) for s in states}
        labels = {s: frozenset(self.labels.get(s, ())) for s in states}
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "labels", labels)
        if self.root not in labels:
            raise ValueError(f"root {self.root!r} is not a state")
        for s, succ in edges.items():
            if not succ:
                raise ValueError(f"state {s!r} has no successor (edge relation must be left-total)")
            for v in succ:
                if v not in labels:
                    raise ValueError(f"edge {s!r} -> {v!r} leaves the state set")

    def successors(self, s):
        return self.edges[s]

    def label(self, s) -> frozenset:
        return self.labels[s]

    def props(self) -> frozenset:
        out = frozenset()
        for a in self.labels.values():
            out |= a
        return out

    def initial_states(self):
        return (self.root,)


def alternation_transform(k: KripkeStructure, o: str = "o") -> KripkeStructure:
    """Two copies of each state, with and without o; edges flip the copy."""
    if o in k.props():
        raise ValueError(f"proposition {o!r} already occurs in the structure")

    def name(s, b):
        return f"{s}~{b}"

    states, edges, labels = [], {}, {}
    for s in k.states:
        for b in (1, 0):
            states.append(name(s, b))
            labels[name(s, b)] = k.label(s) | ({o} if b else set())
            edges[name(s, b)] = tuple(name(v, 1 - b) for v in k.successors(s))
    return KripkeStructure(tuple(states), edges, labels, name(k.root, 1))


def state_lassos(k: KripkeStructure, max_prefix: int, max_cycle: int):
    """Rooted lasso paths as (prefix states, loop states), each path once."""
    seen = set()
    out = []

    def extend(path):
        # try to close a loop ending at the current state
        last = path[-1]
        for start in range(len(path)):
            cyc = path[start:]
            pre = path[:start]
            if len(pre) <= max_prefix and 1 <= len(cyc) <= max_cycle and cyc[0] in k.successors(last):
                key = _norm_state_lasso(pre, cyc)
                if key not in seen:
                    seen.add(key)
                    out.append(key)
        if len(path) < max_prefix + max_cycle:
            for v in k.successors(last):
                extend(path + (v,))

    extend((k.root,))
    return out


def _norm_state_lasso(pre, cyc):
    cyc = _primitive(tuple(cyc))
    pre = tuple(pre)
    while pre and pre[-1] == cyc[-1]:
        pre = pre[:-1]
        cyc = (cyc[-1],) + cyc[:-1]
    return pre, cyc


def kripke_lasso_traces(k: KripkeStructure, max_prefix: int, max_cycle: int):
    if max_prefix < 0 or max_cycle < 1:
        raise ValueError("need max_prefix >= 0 and max_cycle >= 1")
    return [
        LassoTrace(tuple(k.label(s) for s in pre), tuple(k.label(s) for s in cyc))
        for pre, cyc in state_lassos(k, max_prefix, max_cycle)
    ]


def all_lassos(aps, max_prefix: int, max_loop: int):
    """Every distinct lasso word with the given bounds over the propositions."""
    aps = sorted(aps)
    letters = [frozenset(c) for r in range(len(aps) + 1) for c in itertools.combinations(aps, r)]
    out = []
    seen = set()
    for a in range(max_prefix + 1):
        for b in range(1, max_loop + 1):
            for word in itertools.product(letters, repeat=a + b):
                t = LassoTrace(word[:a], word[a:])
                if t not in seen:
                    seen.add(t)
                    out.append(t)
    return out


def team_lcm(team: Team) -> int:
    return lcm(*[len(t.loop) for t in team.traces]) if len(team) else 1


# ---------------------------------------------------------------- text formats

_SET_RE = re.compile(r"\{([^{}]*)\}")


def parse_set(text: str) -> frozenset:
    m = _SET_RE.fullmatch(text.strip())
    if not m:
        raise ValueError(f"bad set {text!r}")
    body = m.group(1).strip()
    return frozenset(x.strip() for x in body.split(",") if x.strip()) if body else frozenset()


def _sets(text: str):
    text = text.strip()
    pos = 0
    out = []
    for m in _SET_RE.finditer(text):
        if text[pos:m.start()].strip():
            raise ValueError(f"unexpected text {text[pos:m.start()]!r}")
        out.append(parse_set(m.group(0)))
        pos = m.end()
    if text[pos:].strip():
        raise ValueError(f"unexpected text {text[pos:]!r}")
    return out


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_trace_line(text: str) -> LassoTrace:
    if text.count("|") != 1:
        raise ValueError("a trace needs exactly one '|' between prefix and loop")
    pre, loop = text.split("|")
    loop_sets = _sets(loop)
    if not loop_sets:
        raise ValueError("empty loop")
    return LassoTrace(tuple(_sets(pre)), tuple(loop_sets))


def parse_traces(text: str) -> Team:
    """Trace file: lines ``trace <id>: <set>* | <set>+``."""
    entries = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line:
            continue
        m = re.fullmatch(r"trace\s+(\S+)\s*:(.*)", line)
        if not m:
            raise ValueError(f"line {n}: expected 'trace <id>: ...'")
        try:
            entries.append((m.group(1), parse_trace_line(m.group(2))))
        except ValueError as e:
            raise ValueError(f"line {n}: {e}") from None
    ids = [i for i, _ in entries]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate trace id")
    return Team.of([t for _, t in entries])


def format_traces(team: Team) -> str:
    return "".join(f"trace t{i}: {format_trace(t)}\n" for i, t in enumerate(team.traces, 1))


def parse_kripke(text: str) -> KripkeStructure:
    states, labels, edges, root = [], {}, {}, None
    for n, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line:
            continue
        parts = line.split(None, 2)
        kw = parts[0]
        try:
            if kw == "state" and len(parts) >= 2:
                name = parts[1]
                if name in labels:
                    raise ValueError(f"duplicate state {name}")
                states.append(name)
                labels[name] = parse_set(parts[2]) if len(parts) == 3 else frozenset()
                edges.setdefault(name, [])
            elif kw == "edge" and len(parts) == 3 and len(parts[2].split()) == 1:
                edges.setdefault(parts[1], []).append(parts[2].strip())
            elif kw == "root" and len(parts) == 2:
                root = parts[1]
            else:
                raise ValueError(f"cannot parse {line!r}")
        except ValueError as e:
            raise ValueError(f"line {n}: {e}") from None
    for s in edges:
        if s not in labels:
            raise ValueError(f"edge from unknown state {s}")
    if root is None:
        raise ValueError("missing root")
    return KripkeStructure(tuple(states), edges, labels, root)


def format_kripke(k: KripkeStructure) -> str:
    lines = [f"state {s} {fmt_set(k.label(s))}" for s in k.states]
    lines += [f"edge {s} {v}" for s in k.states for v in k.successors(s)]
    lines.append(f"root {k.root}")
    return "\n".join(lines) + "\n"
