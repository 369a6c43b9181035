"""Time evaluation functions as eventually periodic advancement-set sequences.

Trace indices are 0-based positions in the team's entry order.  The text
format uses 1-based indices.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass


def _primitive(loop):
    n = len(loop)
    for d in range(1, n + 1):
        if n % d == 0 and loop[:d] * (n // d) == loop:
            return loop[:d]
    return loop


@dataclass(frozen=True)
class Tef:
    """tau(i, t) = init[t] + |{j < i : t in steps[j]}|.

    `prefix` and `loop` hold frozensets of trace indices.  Sets must be
    nonempty unless `stuttering` is set (or the team is empty).
    """

    n: int
    init: tuple
    prefix: tuple
    loop: tuple
    stuttering: bool = False

    def __post_init__(self):
        init = tuple(int(v) for v in self.init)
        if len(init) != self.n or any(v < 0 for v in init):
            raise ValueError("init must hold one natural per trace")
        prefix = tuple(frozenset(s) for s in self.prefix)
        loop = tuple(frozenset(s) for s in self.loop)
        if not loop:
            raise ValueError("tef loop must be nonempty")
        for s in prefix + loop:
            if any(not 0 <= t < self.n for t in s):
                raise ValueError(f"advancement set {sorted(s)} out of range")
            if not s and self.n > 0 and not self.stuttering:
                raise ValueError("advancement sets must be nonempty (strict monotonicity)")
        loop = _primitive(loop)
        while prefix and prefix[-1] == loop[-1]:
            prefix = prefix[:-1]
            loop = (loop[-1],) + loop[:-1]
        object.__setattr__(self, "init", init)
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "loop", loop)

    def step(self, j: int) -> frozenset:
        if j < len(self.prefix):
            return self.prefix[j]
        return self.loop[(j - len(self.prefix)) % len(self.loop)]

    def phase(self, i: int) -> int:
        a = len(self.prefix)
        return i if i < a else a + (i - a) % len(self.loop)

    def value(self, i: int) -> tuple:
        return tuple(tef_value(self, i, t) for t in range(self.n))

    def steps_upto(self, i: int):
        return [self.step(j) for j in range(i)]

    def __str__(self):
        return format_tef(self)


def synchronous_tef(n: int, init=None) -> Tef:
    return Tef(n, tuple(init or (0,) * n), (), (frozenset(range(n)),))


def tef_value(tef: Tef, i: int, t: int) -> int:
    if not 0 <= t < tef.n:
        raise IndexError(f"trace index {t} out of range for n={tef.n}")
    if i < 0:
        raise ValueError("global time must be nonnegative")
    a = len(tef.prefix)
    if i <= a:
        return tef.init[t] + sum(1 for s in tef.prefix[:i] if t in s)
    full, rest = divmod(i - a, len(tef.loop))
    per_loop = sum(1 for s in tef.loop if t in s)
    return (tef.init[t] + sum(1 for s in tef.prefix if t in s) + full * per_loop
            + sum(1 for s in tef.loop[:rest] if t in s))


def tef_shift(tef: Tef, k: int) -> Tef:
    if k < 0:
        raise ValueError("shift must be nonnegative")
    init = tef.value(k)
    a = len(tef.prefix)
    if k < a:
        return Tef(tef.n, init, tef.prefix[k:], tef.loop, tef.stuttering)
    r = (k - a) % len(tef.loop)
    return Tef(tef.n, init, (), tef.loop[r:] + tef.loop[:r], tef.stuttering)


def restrict(tef: Tef, idx) -> Tef:
    """Reduct of the tef to the given traces (renumbered in order); may stutter."""
    idx = list(idx)
    pos = {t: j for j, t in enumerate(idx)}

    def sub(s):
        return frozenset(pos[t] for t in s if t in pos)

    return Tef(len(idx), tuple(tef.init[t] for t in idx), tuple(sub(s) for s in tef.prefix),
               tuple(sub(s) for s in tef.loop), stuttering=True)


PROPERTIES = ("monotone", "strict", "stepwise", "fair", "non_parallel", "synchronous")


def check_property(tef: Tef, prop: str) -> bool:
    steps = tef.prefix + tef.loop
    if prop == "monotone" or prop == "stepwise":
        return True
    if prop == "strict":
        return tef.n == 0 or all(steps)
    if prop == "fair":
        return all(any(t in s for s in tef.loop) for t in range(tef.n))
    if prop == "non_parallel":
        return all(v == 0 for v in tef.init) and all(len(s) == 1 for s in steps)
    if prop == "synchronous":
        full = frozenset(range(tef.n))
        return len(set(tef.init)) <= 1 and all(s == full for s in steps)
    raise ValueError(f"unknown property {prop!r}")


def max_divergence(tef: Tef):
    """Largest |tau(i,t) - tau(i,t')| over all i, or None when unbounded."""
    if tef.n == 0:
        return 0
    per_loop = {sum(1 for s in tef.loop if t in s) for t in range(tef.n)}
    if len(per_loop) > 1:
        return None
    horizon = len(tef.prefix) + len(tef.loop)
    vals = list(tef.init)
    best = max(vals) - min(vals)
    for j in range(horizon):
        for t in tef.step(j):
            vals[t] += 1
        best = max(best, max(vals) - min(vals))
    return best


def is_k_synchronous(tef: Tef, k: int) -> bool:
    d = max_divergence(tef)
    return d is not None and d <= k


def switch_count(tef: Tef):
    """Total number of context switches, or None when infinite or ill-formed."""
    steps = tef.prefix + tef.loop
    if any(len(s) != 1 for s in steps):
        return None
    if len(set(tef.loop)) > 1:
        return None
    seq = [next(iter(s)) for s in steps]
    return sum(1 for a, b in zip(seq, seq[1:]) if a != b)


def is_k_context_bounded(tef: Tef, k: int) -> bool:
    c = switch_count(tef)
    return c is not None and c <= k


@dataclass(frozen=True)
class TefFamily:
    """kind is one of all, sync, ksync, kcb."""

    kind: str
    k: int = 0

    def __post_init__(self):
        if self.kind not in ("all", "sync", "ksync", "kcb"):
            raise ValueError(f"unknown tef family {self.kind!r}")
        if self.k < 0:
            raise ValueError("k must be nonnegative")

    def contains(self, tef: Tef) -> bool:
        if self.kind == "all":
            return check_property(tef, "strict")
        if self.kind == "sync":
            return check_property(tef, "synchronous")
        if self.kind == "ksync":
            return is_k_synchronous(tef, self.k)
        return is_k_context_bounded(tef, self.k)

    def __str__(self):
        return self.kind if self.kind in ("all", "sync") else f"{self.kind}({self.k})"


SYNC = TefFamily("sync")


def kcb(k: int) -> TefFamily:
    return TefFamily("kcb", k)


def ksync(k: int) -> TefFamily:
    return TefFamily("ksync", k)


def default_dwell_bound(team) -> int:
    from .core_model import team_lcm

    pre = max((len(t.prefix) for t in team.traces), default=0)
    return pre + team_lcm(team)


def enumerate_family(family: TefFamily, team, dwell_bound: int | None = None):
    """Finite list of initial tefs of the family for the team."""
    n = len(team) if not isinstance(team, int) else team
    if family.kind in ("all", "ksync"):
        raise ValueError(f"family {family} is not enumerable; use the automata engine")
    if n == 0:
        return [Tef(0, (), (), (frozenset(),))]
    if family.kind == "sync":
        return [synchronous_tef(n)]
    if dwell_bound is None:
        dwell_bound = default_dwell_bound(team)
    if dwell_bound < 1:
        raise ValueError("dwell bound must be at least 1")
    out = []
    for switches in range(family.k + 1):
        for order in itertools.product(range(n), repeat=switches + 1):
            if any(a == b for a, b in zip(order, order[1:])):
                continue
            for dwells in itertools.product(range(1, dwell_bound + 1), repeat=switches):
                prefix = []
                for t, d in zip(order, dwells):
                    prefix += [frozenset((t,))] * d
                out.append(Tef(n, (0,) * n, tuple(prefix), (frozenset((order[-1],)),)))
    return out


# ---------------------------------------------------------------- text format

_SET = re.compile(r"\{([^{}]*)\}")


def _parse_sets(text):
    text = text.strip()
    out, pos = [], 0
    for m in _SET.finditer(text):
        if text[pos:m.start()].strip():
            raise ValueError(f"unexpected text {text[pos:m.start()]!r}")
        body = m.group(1).strip()
        out.append(frozenset(int(x) - 1 for x in body.split(",")) if body else frozenset())
        pos = m.end()
    if text[pos:].strip():
        raise ValueError(f"unexpected text {text[pos:]!r}")
    return out


def parse_tef(text: str, n: int | None = None) -> Tef:
    """``tef init=<v1,...,vn> steps=<set>* | <set>+`` with 1-based sets."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if len(lines) != 1:
        raise ValueError("expected exactly one tef line")
    m = re.fullmatch(r"tef\s+init=([0-9,\s]*?)\s+steps=(.*)", lines[0])
    if not m:
        raise ValueError("expected 'tef init=<v,...> steps=<sets> | <sets>'")
    init = tuple(int(x) for x in m.group(1).split(",") if x.strip())
    steps = m.group(2)
    if steps.count("|") != 1:
        raise ValueError("steps need exactly one '|'")
    pre, loop = steps.split("|")
    width = len(init) if n is None else n
    if len(init) != width:
        raise ValueError(f"init has {len(init)} entries, team has {width}")
    return Tef(width, init, tuple(_parse_sets(pre)), tuple(_parse_sets(loop)))


def _fmt(s):
    return "{" + ",".join(str(t + 1) for t in sorted(s)) + "}"


def format_tef(tef: Tef) -> str:
    pre = " ".join(_fmt(s) for s in tef.prefix)
    loop = " ".join(_fmt(s) for s in tef.loop)
    init = ",".join(str(v) for v in tef.init)
    return f"tef init={init} steps={pre + ' ' if pre else ''}| {loop}"
