"""Fully parenthesised printer; parse(to_text(f)) == f."""

from __future__ import annotations

from . import ast as A

_BIN = {A.And: "&", A.Or: "\\/", A.BoolOr: "OR", A.Until: "U", A.WUntil: "W"}
_UN = {A.Next: "X", A.Exists: "E", A.Forall: "A", A.NegExists: "!E", A.A1: "A1", A.E1: "E1", A.AS: "AS"}


def _args(items):
    return ", ".join(to_text(x) for x in items)


def to_text(phi) -> str:
    t = type(phi)
    if t is A.Prop:
        return phi.name
    if t is A.NegProp:
        return "!" + phi.name
    if t is A.Top:
        return "top"
    if t is A.Bottom:
        return "bot"
    if t is A.FalseConst:
        return "false"
    if t is A.NE:
        return "NE"
    if t in _BIN:
        return f"({to_text(phi.left)} {_BIN[t]} {to_text(phi.right)})"
    if t in _UN:
        return f"({_UN[t]} {to_text(phi.sub)})"
    if t is A.CoSplit:
        return f"cosplit({to_text(phi.left)}, {to_text(phi.right)})"
    if t in (A.Dep, A.NotDep):
        neg = "!" if t is A.NotDep else ""
        if not phi.params:
            return f"{neg}dep({to_text(phi.target)})"
        return f"{neg}dep({_args(phi.params)}; {to_text(phi.target)})"
    if t in (A.Incl, A.NotIncl):
        op = "<=" if t is A.Incl else "!<="
        return f"[{_args(phi.left)} {op} {_args(phi.right)}]"
    if t is A.Gen:
        return f"{'!' if phi.negated else ''}gen:{phi.name}({_args(phi.args)})"
    if t is A.SyncMacro:
        if phi.op == "US":
            return f"({to_text(phi.args[0])} US {to_text(phi.args[1])})"
        return f"({phi.op} {to_text(phi.args[0])})"
    raise TypeError(f"unknown node {t.__name__}")
