"""Formulas that pin down properties of the tef on o-alternating teams.

Every trace is assumed to carry a proposition o that holds exactly at its
even positions, so a trace advancing flips o and a paused trace keeps it.
"""

from __future__ import annotations

from ..formula import ast as A


def _o(o):
    return A.Prop(o), A.NegProp(o)


def phi_synch(o="o"):
    """All traces advance at every step and agree on o."""
    p, n = _o(o)
    return A.G(A.BoolOr(A.And(p, A.Next(n)), A.And(n, A.Next(p))))


def phi_synch_prime(o="o"):
    p, n = _o(o)
    return A.And(p, A.G(A.Or(A.And(p, A.Next(n)), A.And(n, A.Next(p)))))


def phi_fair(o="o"):
    """Every trace advances infinitely often."""
    p, n = _o(o)
    return A.A1(A.G(A.Or(A.And(p, A.F(n)), A.And(n, A.F(p)))))


def phi_off(o="o"):
    """Some nonempty part of the team does not move in the current step."""
    p, n = _o(o)
    left = A.Or(A.And(A.And(A.NONEMPTY, p), A.Next(p)), A.TOP)
    right = A.Or(A.And(A.And(A.NONEMPTY, n), A.Next(n)), A.TOP)
    return A.BoolOr(left, right)


def psi_synch(o="o"):
    p, n = _o(o)
    return A.BoolOr(A.And(p, A.Exists(A.Next(n))), A.And(n, A.Exists(A.Next(p))))


def psi_synch_prime(o="o"):
    p, n = _o(o)
    return A.Or(A.And(p, A.Exists(A.Next(n))), A.And(n, A.Exists(A.Next(p))))


def psi_synch_pp(o="o"):
    p, n = _o(o)
    stuck = A.Incl((p,), (n,))
    return A.Or(A.And(p, A.Forall(A.Next(A.Or(n, stuck)))), A.And(n, A.Forall(A.Next(A.Or(p, stuck)))))


def tef_property_formulas(o="o") -> dict:
    return {
        "phi_synch": phi_synch(o),
        "phi_synch_prime": phi_synch_prime(o),
        "phi_fair": phi_fair(o),
        "phi_off": phi_off(o),
        "psi_synch": psi_synch(o),
        "psi_synch_prime": psi_synch_prime(o),
        "psi_synch_pp": psi_synch_pp(o),
    }


# structural counterparts on the tef itself

def tef_is_synchronous_on_alternation(tef) -> bool:
    """Every step moves every trace and the start positions share parity."""
    full = frozenset(range(tef.n))
    return len({v % 2 for v in tef.init}) <= 1 and all(s == full for s in tef.prefix + tef.loop)


def tef_is_fair(tef) -> bool:
    return all(any(t in s for s in tef.loop) for t in range(tef.n))


def tef_has_defect(tef) -> bool:
    """Some step leaves at least one trace in place."""
    full = frozenset(range(tef.n))
    return any(s != full for s in tef.prefix + tef.loop)
