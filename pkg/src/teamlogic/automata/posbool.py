"""Positive Boolean combinations over automaton states and test leaves.

Nodes are plain tuples so they hash and compare structurally:
``("true",)``, ``("false",)``, ``("q", state)``, ``("test", leaf)``,
``("and", children)`` and ``("or", children)``.
"""

from __future__ import annotations

TRUE = ("true",)
FALSE = ("false",)


def state(q):
    return ("q", q)


def test(leaf):
    return ("test", leaf)


def _dedupe(items):
    out = []
    seen = set()
    for x in items:
        if x not in seen:
            seen.add(x)
            out.append(x)
    return out


def conj(*items):
    kids = []
    for x in items:
        if x == FALSE:
            return FALSE
        if x == TRUE:
            continue
        kids.extend(x[1] if x[0] == "and" else (x,))
    kids = _dedupe(kids)
    if not kids:
        return TRUE
    return kids[0] if len(kids) == 1 else ("and", tuple(kids))


def disj(*items):
    kids = []
    for x in items:
        if x == TRUE:
            return TRUE
        if x == FALSE:
            continue
        kids.extend(x[1] if x[0] == "or" else (x,))
    kids = _dedupe(kids)
    if not kids:
        return FALSE
    return kids[0] if len(kids) == 1 else ("or", tuple(kids))


def leaves(node):
    """All state and test leaves in the node."""
    kind = node[0]
    if kind in ("q", "test"):
        yield node
    elif kind in ("and", "or"):
        for c in node[1]:
            yield from leaves(c)


def states_of(node) -> list:
    return _dedupe(x[1] for x in leaves(node) if x[0] == "q")


def evaluate(node, val) -> bool:
    """Truth under a valuation `val(leaf) -> bool` for state/test leaves."""
    kind = node[0]
    if kind == "true":
        return True
    if kind == "false":
        return False
    if kind == "and":
        return all(evaluate(c, val) for c in node[1])
    if kind == "or":
        return any(evaluate(c, val) for c in node[1])
    return val(node)


def satisfied_by(node, chosen: set) -> bool:
    """Does the set of states `chosen` (true, all others false) satisfy node?"""
    return evaluate(node, lambda leaf: leaf[0] == "q" and leaf[1] in chosen)


def map_states(node, fn):
    kind = node[0]
    if kind == "q":
        return state(fn(node[1]))
    if kind == "and":
        return conj(*(map_states(c, fn) for c in node[1]))
    if kind == "or":
        return disj(*(map_states(c, fn) for c in node[1]))
    return node


def to_text(node, name=str) -> str:
    kind = node[0]
    if kind == "true":
        return "true"
    if kind == "false":
        return "false"
    if kind == "q":
        return name(node[1])
    if kind == "test":
        return node[1].label()
    op = " & " if kind == "and" else " | "
    return "(" + op.join(to_text(c, name) for c in node[1]) + ")"


def parse_text(text: str, lookup=lambda s: s, leaf=None):
    """Inverse of to_text.  Tokens are handed to `leaf` (if given) before
    `lookup`; `leaf` returns a test payload or None."""
    toks = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def expr():
        nonlocal pos
        items, op = [atom()], None
        while pos < len(toks) and toks[pos] in ("&", "|"):
            if op is not None and toks[pos] != op:
                raise ValueError("mixed & and | without parentheses")
            op = toks[pos]
            pos += 1
            items.append(atom())
        if op is None:
            return items[0]
        return conj(*items) if op == "&" else disj(*items)

    def atom():
        nonlocal pos
        if pos >= len(toks):
            raise ValueError("unexpected end of positive Boolean formula")
        t = toks[pos]
        pos += 1
        if t == "(":
            e = expr()
            if pos >= len(toks) or toks[pos] != ")":
                raise ValueError("missing ')'")
            pos += 1
            return e
        if t == "true":
            return TRUE
        if t == "false":
            return FALSE
        if leaf is not None:
            payload = leaf(t)
            if payload is not None:
                return test(payload)
        return state(lookup(t))

    node = expr()
    if pos != len(toks):
        raise ValueError(f"trailing tokens in {text!r}")
    return node
