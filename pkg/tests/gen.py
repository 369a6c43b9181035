"""Random formulas, lassos and teams for property tests."""

import itertools
import random

from teamlogic.core_model import LassoTrace, Team, all_lassos
from teamlogic.formula import ast as A

LTL_UNARY = ("X",)
LTL_BINARY = ("and", "or", "U", "W")


def random_ltl(rng: random.Random, depth: int, aps=("p", "q")):
    """Quantifier-free formula in plain LTL (literals, and, split, X, U, W)."""
    if depth == 0 or rng.random() < 0.25:
        return rng.choice([A.Prop(a) for a in aps] + [A.NegProp(a) for a in aps] + [A.TOP, A.BOT])
    op = rng.choice(LTL_UNARY + LTL_BINARY)
    if op == "X":
        return A.Next(random_ltl(rng, depth - 1, aps))
    a, b = random_ltl(rng, depth - 1, aps), random_ltl(rng, depth - 1, aps)
    return {"and": A.And, "or": A.Or, "U": A.Until, "W": A.WUntil}[op](a, b)


def random_team_formula(rng, depth, aps=("p",), quantifiers=False, extensions=True):
    atoms = [A.Prop(a) for a in aps] + [A.NegProp(a) for a in aps] + [A.TOP, A.BOT]
    if extensions:
        atoms += [A.NONEMPTY] + [A.Dep((), A.Prop(a)) for a in aps]
        if len(aps) > 1:
            atoms += [A.Dep((A.Prop(aps[0]),), A.Prop(aps[1])), A.Incl((A.Prop(aps[0]),), (A.Prop(aps[1]),))]
    if depth == 0 or rng.random() < 0.2:
        return rng.choice(atoms)
    ops = ["X", "and", "or", "U", "W"]
    if extensions:
        ops += ["bor", "A1"]
    if quantifiers:
        ops += ["E", "A"]
    op = rng.choice(ops)
    sub = lambda: random_team_formula(rng, depth - 1, aps, quantifiers, extensions)
    if op == "X":
        return A.Next(sub())
    if op == "A1":
        return A.A1(sub())
    if op == "E":
        return A.Exists(sub())
    if op == "A":
        return A.Forall(sub())
    return {"and": A.And, "or": A.Or, "U": A.Until, "W": A.WUntil, "bor": A.BoolOr}[op](sub(), sub())


def random_lasso(rng, aps=("p",), max_prefix=1, max_loop=2):
    letters = [frozenset(a for a in aps if rng.random() < 0.5) for _ in range(max_prefix + max_loop)]
    pre = letters[: rng.randint(0, max_prefix)]
    loop = letters[max_prefix: max_prefix + rng.randint(1, max_loop)]
    return LassoTrace(tuple(pre), tuple(loop))


def random_team(rng, size, aps=("p",), max_prefix=1, max_loop=2):
    return Team.of(*(random_lasso(rng, aps, max_prefix, max_loop) for _ in range(size)))


def small_lassos(aps=("p",), max_prefix=1, max_loop=2):
    return list(all_lassos(aps, max_prefix, max_loop))


def random_gaaba(rng, n_states=3, m=2, aps=("p",), n=1, alternating=True):
    """Explicit GAABA over one direction per trace with random transitions."""
    from teamlogic.automata import explicit_gaaba
    from teamlogic.automata import posbool as PB
    from teamlogic.automata.gaaba import letter_vectors

    states = list(range(n_states))

    def node(depth=0):
        r = rng.random()
        if depth >= 2 or r < 0.45:
            return PB.state(rng.choice(states))
        if r < 0.5:
            return PB.TRUE if rng.random() < 0.5 else PB.FALSE
        kids = [node(depth + 1) for _ in range(2)]
        if alternating and rng.random() < 0.5:
            return PB.conj(*kids)
        return PB.disj(*kids)

    table = {(q, v): node() for q in states for v in letter_vectors(aps, n)}
    acceptance = [frozenset(q for q in states if rng.random() < 0.5) for _ in range(m)]
    return explicit_gaaba(n, aps, PB.state(0), table, acceptance)


def lasso_accepts_nondeterministic(g, trace):
    """Independent check for single-direction or-only automata: the product
    of automaton states and trace positions has a reachable cycle that
    meets every acceptance set (an accepting SCC)."""
    import networkx as nx

    from teamlogic.automata import posbool as PB

    def targets(node):
        kind = node[0]
        if kind == "true":
            return ["TOP"]
        if kind == "false":
            return []
        if kind == "q":
            return [node[1]]
        if kind == "or":
            return [t for c in node[1] for t in targets(c)]
        raise ValueError("not an or-only automaton")

    gr = nx.DiGraph()
    gr.add_edge("TOP", "TOP")
    starts = [("TOP" if q == "TOP" else (q, 0)) for q in targets(g.init)]
    todo, seen = list(starts), set(starts)
    while todo:
        v = todo.pop()
        if v == "TOP":
            continue
        q, i = v
        gr.add_node(v)
        for q2 in targets(g.delta(q, (trace[i],))):
            w = "TOP" if q2 == "TOP" else (q2, trace.next_pos(i))
            gr.add_edge(v, w)
            if w not in seen:
                seen.add(w)
                todo.append(w)
    reach = set()
    for s in starts:
        reach |= {s} | nx.descendants(gr, s)
    for comp in nx.strongly_connected_components(gr.subgraph(reach)):
        comp = set(comp)
        if "TOP" in comp:
            return True
        cyclic = len(comp) > 1 or any(gr.has_edge(v, v) for v in comp)
        if cyclic and all(any(g.in_acc(k, v[0]) for v in comp) for k in range(g.m)):
            return True
    return False


def random_tef(rng, n, max_init=2):
    from teamlogic.tef import Tef

    full = frozenset(range(n))
    subsets = [frozenset(c) for r in range(1, n + 1) for c in itertools.combinations(range(n), r)]

    def pick():
        return full if rng.random() < 0.5 else rng.choice(subsets)

    init = tuple(rng.randint(0, max_init) for _ in range(n)) if rng.random() < 0.5 else (0,) * n
    return Tef(n, init, tuple(pick() for _ in range(rng.randint(0, 2))),
               tuple(pick() for _ in range(rng.randint(1, 3))))


def async_exists(team, phi):
    """Some synchronous or one-switch tef satisfies phi."""
    from teamlogic.semantics import check_mode
    from teamlogic.tef import SYNC, kcb

    return check_mode(team, phi, "sync", SYNC).holds or check_mode(team, phi, "exists", kcb(1)).holds


def async_forall(team, phi):
    from teamlogic.semantics import check_mode
    from teamlogic.tef import SYNC, kcb

    return check_mode(team, phi, "sync", SYNC).holds and check_mode(team, phi, "forall", kcb(1)).holds
