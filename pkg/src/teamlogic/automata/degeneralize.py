"""Counter construction from generalised Büchi to Büchi acceptance."""

from __future__ import annotations

from . import posbool as PB
from .gaaba import Aaba, Gaaba


def degeneralize(g: Gaaba) -> Aaba:
    """States (q, i) where i is the next acceptance set awaiting a visit.

    The counter advances when q is in F_i; (q, m-1) with q in F_{m-1}
    is accepting.  Reachable states are at most |Q| * m.
    """
    m = g.m
    if m < 1:
        raise ValueError("need at least one acceptance set")

    def delta(qi, letters):
        q, i = qi
        j = (i + 1) % m if g.in_acc(i, q) else i
        return PB.map_states(g.delta(q, letters), lambda q2: (q2, j))

    def accepting(qi):
        q, i = qi
        return i == m - 1 and g.in_acc(m - 1, q)

    init = PB.map_states(g.init, lambda q: (q, 0))
    a = Aaba(g.n, g.aps, init, delta, [accepting], g.subautomata, formula=g.formula, name=g.name)
    a.source = g
    return a


def product_states(g: Gaaba) -> list:
    """The full |Q| x m state space of the degeneralised automaton."""
    return [(q, i) for q in g.states() for i in range(g.m)]
