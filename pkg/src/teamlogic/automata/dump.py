"""Text dump and parser for formula automata (with their test sub-automata).

    automaton 0
      formula (p U q)
      directions 1
      aps p q
      init s0
      acc s0 s2
      trans s0 {p} -> (s0 | s1)
    end

Automaton 0 is the top one.  A test leaf is written ?k@1,2 (or !?k@1,2
when negated): automaton k run on the suffix team of traces 1 and 2.
Each `acc` line is one acceptance set; states are listed by name only.
"""

from __future__ import annotations

import re

from ..core_model import _sets, fmt_set
from ..formula.parser import parse as parse_formula
from ..formula.printer import to_text as formula_text
from . import posbool as PB
from .gaaba import Gaaba, TestLeaf, explicit_gaaba


class DumpError(ValueError):
    pass


def _collect(a: Gaaba):
    """Top automaton followed by every reachable sub-automaton."""
    order, index = [a], {}
    i = 0
    while i < len(order):
        g = order[i]
        i += 1
        for leaf in g.tests():
            key = (leaf.formula, len(leaf.idx))
            if key not in index:
                index[key] = len(order)
                order.append(g.subautomata[key])
    return order, index


def dump_automaton(a: Gaaba) -> str:
    order, index = _collect(a)
    out = []
    for k, g in enumerate(order):
        states = g.states()
        names = {q: f"s{j}" for j, q in enumerate(states)}

        def show(node):
            return _render(node, names, index)

        out.append(f"automaton {k}")
        if g.formula is not None:
            out.append(f"  formula {formula_text(g.formula)}")
        out.append(f"  directions {g.n}")
        out.append("  aps " + " ".join(sorted(g.aps)))
        out.append(f"  init {show(g.init)}")
        for i in range(g.m):
            out.append("  acc " + " ".join(names[q] for q in states if g.in_acc(i, q)))
        for q in states:
            if str(q) != names[q]:
                out.append(f"  # {names[q]} = {q}")
            for v in g.alphabet():
                out.append(f"  trans {names[q]} {' '.join(fmt_set(x) for x in v)} -> {show(g.delta(q, v))}")
        out.append("end")
    return "\n".join(out) + "\n"


def _render(node, names, index):
    kind = node[0]
    if kind == "true":
        return "true"
    if kind == "false":
        return "false"
    if kind == "q":
        return names[node[1]]
    if kind == "test":
        leaf = node[1]
        k = index[(leaf.formula, len(leaf.idx))]
        ids = ",".join(str(j + 1) for j in leaf.idx)
        return f"{'!' if leaf.negated else ''}?{k}@{ids}"
    op = " & " if kind == "and" else " | "
    return "(" + op.join(_render(c, names, index) for c in node[1]) + ")"


_LEAF = re.compile(r"(!?)\?(\d+)@([\d,]+)")


def parse_automaton(text: str, tables=None) -> Gaaba:
    """Explicit automata from a dump; sub-automata are shared by key."""
    blocks, cur = [], None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        word, _, rest = line.partition(" ")
        if word == "automaton":
            if cur is not None:
                raise DumpError(f"line {lineno}: nested automaton block")
            cur = {"id": int(rest), "acc": [], "trans": [], "formula": None, "line": lineno}
        elif cur is None:
            raise DumpError(f"line {lineno}: {word!r} outside an automaton block")
        elif word == "end":
            blocks.append(cur)
            cur = None
        elif word in ("formula", "directions", "aps", "init"):
            cur[word] = rest.strip()
        elif word == "acc":
            cur["acc"].append(rest.split())
        elif word == "trans":
            lhs, arrow, rhs = rest.partition("->")
            if not arrow:
                raise DumpError(f"line {lineno}: transition without '->'")
            name, _, letters = lhs.strip().partition(" ")
            cur["trans"].append((name, letters, rhs.strip(), lineno))
        else:
            raise DumpError(f"line {lineno}: unknown keyword {word!r}")
    if cur is not None:
        raise DumpError("missing 'end'")
    if not blocks:
        raise DumpError("no automaton in input")
    if [b["id"] for b in blocks] != list(range(len(blocks))):
        raise DumpError("automata must be numbered 0, 1, 2, ... in order")

    formulas = []
    for b in blocks:
        try:
            formulas.append(parse_formula(b["formula"], tables) if b["formula"] else None)
        except ValueError as e:
            raise DumpError(f"automaton {b['id']}: {e}") from None
    shared = {}
    built = []
    for b, phi in zip(blocks, formulas):
        try:
            n = int(b["directions"])
        except (KeyError, ValueError):
            raise DumpError(f"automaton {b['id']}: missing or bad 'directions'") from None

        def leaf(tok, _n=n):
            m = _LEAF.fullmatch(tok)
            if not m:
                return None
            k = int(m.group(2))
            if not 0 <= k < len(blocks):
                raise DumpError(f"test refers to missing automaton {k}")
            idx = tuple(int(x) - 1 for x in m.group(3).split(","))
            if any(not 0 <= j < _n for j in idx):
                raise DumpError(f"test index out of range in {tok!r}")
            if formulas[k] is None:
                raise DumpError(f"automaton {k} is used as a test but has no formula")
            return TestLeaf(bool(m.group(1)), formulas[k], idx)

        try:
            init = PB.parse_text(b.get("init", "false"), leaf=leaf)
            table = {}
            for name, letters, rhs, lineno in b["trans"]:
                vec = tuple(_sets(letters)) if letters.strip() else ()
                if len(vec) != n:
                    raise DumpError(f"line {lineno}: expected {n} letters")
                table[(name, vec)] = PB.parse_text(rhs, leaf=leaf)
        except ValueError as e:
            raise DumpError(f"automaton {b['id']}: {e}") from None
        aps = b.get("aps", "").split()
        try:
            g = explicit_gaaba(n, aps, init, table, [frozenset(acc) for acc in b["acc"]] or [frozenset()])
        except ValueError as e:
            raise DumpError(f"automaton {b['id']}: {e}") from None
        g.formula = phi
        g.subautomata = shared
        built.append(g)
    for k, (g, phi) in enumerate(zip(built, formulas)):
        if k and phi is not None:
            shared[(phi, g.n)] = g
    return built[0]
