"""Acceptance criteria C1-C9, each printing one PASS/FAIL line with its timing.

Run with `pytest -v tests/test_acceptance.py`.
"""

import itertools
import random
import time
from collections import Counter

import numpy as np
import pytest

import oracle
from gen import (async_exists, async_forall, random_gaaba, random_ltl, random_team, random_team_formula,
                 random_tef, small_lassos)
from teamlogic.automata import accepts, automata_check, degeneralize
from teamlogic.automata.degeneralize import product_states
from teamlogic.automata.emptiness import model_check
from teamlogic.core_model import KripkeStructure, Team, add_alternating_o, all_lassos, parse_trace_line
from teamlogic.formula import ast as A
from teamlogic.formula import load_tables, parse
from teamlogic.reductions import properties as P
from teamlogic.reductions.embeddings import embed_sync_ctl, embed_sync_ltl_exists, embed_sync_ltl_forall
from teamlogic.reductions.n2c import cycle_machine, encode_n2c
from teamlogic.semantics import check_mode, eval_formula
from teamlogic.tef import SYNC, kcb

MODES = ("exists", "forall", "sync")


@pytest.fixture
def report(capsys):
    def emit(tag, title, ok, elapsed, limit, detail=""):
        line = f"{'PASS' if ok else 'FAIL'} {tag} {title}: {detail} [{elapsed:.2f}s / limit {limit}s]"
        with capsys.disabled():
            print("\n" + line)
        assert ok, line

    return emit


def sub_multisets(team):
    """All proper sub-multisets, by removing one entry (enough for downward closure by induction)."""
    ts = list(team.traces)
    return [Team.of(*(ts[:i] + ts[i + 1:])) for i in range(len(ts))]


# ---------------------------------------------------------------- C1


def test_c1_conservativity(report):
    t0 = time.perf_counter()
    rng = random.Random(101)
    aps = ("p", "q", "r")
    bad = 0
    for _ in range(100):
        t = random_team(rng, 1, aps, max_prefix=2, max_loop=3).traces[0]
        f = random_ltl(rng, 4, aps)
        want = oracle.ltl(t, f, 0)
        team = Team.of(t)
        for mode in MODES:
            for fam in (SYNC, kcb(1)):
                bad += check_mode(team, f, mode, fam).holds != want
        bad += automata_check(team, f, "exists", kcb(1)).holds != want
    dt = time.perf_counter() - t0
    report("C1", "singleton teams agree with LTL", bad == 0 and dt < 10, dt, 10, f"100 cases, {bad} disagreements")


# ---------------------------------------------------------------- C2


def test_c2_worked_example(report):
    t0 = time.perf_counter()
    t = parse_trace_line("{p} {p} | {}")
    f = parse("X X p")
    big, small = Team.of(t, t), Team.of(t)
    results = []
    for fam in (kcb(1), SYNC):
        results.append((check_mode(big, f, "exists", fam).holds, check_mode(small, f, "exists", fam).holds))
        results.append((automata_check(big, f, "exists", fam).holds, automata_check(small, f, "exists", fam).holds))
    # asynchrony is what makes the two-trace team work
    ok = results[0] == results[1] == (True, False) and results[2] == results[3] == (False, False)
    v = automata_check(big, f, "exists", kcb(1))
    ok = ok and oracle.sat(big.traces, v.tef, f)
    dt = time.perf_counter() - t0
    report("C2", "X X p on one versus two copies", ok and dt < 1, dt, 1,
           f"two copies {results[0][0]}, one copy {results[0][1]} (evaluator and automata)")


# ---------------------------------------------------------------- C3


def test_c3_downward_closure(report):
    t0 = time.perf_counter()
    rng = random.Random(303)
    lassos = small_lassos(("p",), 1, 2)
    teams = [Team.of(*c) for n in range(0, 4) for c in itertools.combinations_with_replacement(lassos, n)]
    forms = [random_team_formula(rng, rng.randint(1, 3), ("p",), quantifiers=False, extensions=False)
             for _ in range(60)]
    violations, checked = 0, 0
    for fam in (SYNC, kcb(1)):
        for f in forms:
            cache = {}

            def holds(team):
                key = tuple(sorted(map(str, team.traces)))
                if key not in cache:
                    cache[key] = check_mode(team, f, "forall", fam).holds
                return cache[key]

            for team in teams:
                if len(team) and holds(team):
                    for s in sub_multisets(team):
                        checked += 1
                        violations += not holds(s)
    dt = time.perf_counter() - t0
    report("C3", "downward closure of the universal mode", violations == 0 and dt < 300, dt, 300,
           f"{len(teams)} teams x {len(forms)} formulas x 2 families, {checked} subteam checks, "
           f"{violations} violations")


# ---------------------------------------------------------------- C4


GEN_TABLES = load_tables({"same": {"arity": 1, "relations": [[], [[1]], [[0]]]}})

CORPUS = [
    "p OR q", "X p OR G q", "NE", "NE & X p", "p \\/ (NE & q)", "A1 F p", "A1 (p U q)", "dep(p)",
    "dep(p; q)", "G dep(q)", "X dep(p; q)", "[p <= q]", "[p, q <= q, p]", "G [p <= q]", "F [q <= p]",
    "gen:same(p)", "G gen:same(q)", "p U gen:same(q)", "(A1 X p) OR dep(q)", "NE \\/ bot",
    "E X p", "A X (p \\/ q)", "E (p U q)", "A G dep(p)", "X E X p", "p W (q OR NE)", "A1 G (p \\/ X q)",
    "G (p OR !p)", "F (p & q) \\/ G !p", "dep(p) W [p <= q]", "E1 p & A1 (q W p)", "X X (p \\/ q)",
]


def test_c4_oracle_automata_agreement(report):
    t0 = time.perf_counter()
    rng = random.Random(404)
    forms = [parse(s, GEN_TABLES) for s in CORPUS]
    kinds = Counter(type(s) for f in forms for s in A.subformulas(f))
    covered = all(kinds[k] for k in (A.BoolOr, A.NE, A.A1, A.Dep, A.Incl, A.Gen))
    lassos = small_lassos(("p", "q"), 1, 1)
    teams = [Team.of()] + [Team.of(t) for t in lassos]
    pairs = list(itertools.combinations_with_replacement(lassos, 2))
    total = bad = 0
    for f in forms:
        sample = teams + [Team.of(*c) for c in rng.sample(pairs, 25)]
        for team in sample:
            for fam in (SYNC, kcb(1)):
                for mode in MODES:
                    total += 1
                    bad += check_mode(team, f, mode, fam).holds != automata_check(team, f, mode, fam).holds
    dt = time.perf_counter() - t0
    ok = len(forms) >= 30 and covered and bad == 0 and dt < 600
    report("C4", "evaluator and automata agree", ok, dt, 600,
           f"{len(forms)} formulas, {total} verdicts, {bad} disagreements, atoms covered {covered}")


# ---------------------------------------------------------------- C5


def test_c5_embeddings(report):
    t0 = time.perf_counter()
    rng = random.Random(505)
    lassos = small_lassos(("p",), 1, 2)
    teams = [Team.of(*c) for n in range(0, 3) for c in itertools.combinations_with_replacement(lassos, n)]
    forms = [random_ltl(rng, rng.randint(1, 3), ("p",)) for _ in range(30)]
    bad = Counter()
    for f in forms:
        emb = {"ltl-exists": embed_sync_ltl_exists(f), "ltl-forall": embed_sync_ltl_forall(f),
               "ctl-exists": embed_sync_ctl(f, "exists"), "ctl-forall": embed_sync_ctl(f, "forall")}
        for team in teams:
            want = check_mode(team, f, "sync", SYNC).holds
            t_o = add_alternating_o(team)
            got = {"ltl-exists": async_exists(t_o, emb["ltl-exists"]),
                   "ltl-forall": async_forall(t_o, emb["ltl-forall"]),
                   "ctl-exists": check_mode(t_o, emb["ctl-exists"], "exists", SYNC).holds,
                   "ctl-forall": check_mode(t_o, emb["ctl-forall"], "forall", SYNC).holds}
            for k, v in got.items():
                bad[k] += v != want
    dt = time.perf_counter() - t0
    ok = sum(bad.values()) == 0 and dt < 600
    report("C5", "synchronous embeddings preserve truth", ok, dt, 600,
           f"{len(teams)} teams x {len(forms)} formulas x 4 translations, disagreements {dict(bad) or 0}")


# ---------------------------------------------------------------- C6


def test_c6_degeneralization(report):
    t0 = time.perf_counter()
    rng = random.Random(606)
    lassos = list(all_lassos(["p"], 2, 2))
    bad = bound_bad = 0
    for i in range(10):
        g = random_gaaba(rng, rng.randint(2, 5), 1 + i % 3)
        d = degeneralize(g)
        full = product_states(g)
        bound_bad += len(full) != len(g.states()) * g.m or not set(d.states()) <= set(full)
        for t in lassos:
            team = Team.of(t)
            bad += accepts(g, team, SYNC, generalized=True).holds != accepts(d, team, SYNC).holds
    dt = time.perf_counter() - t0
    ok = bad == 0 and bound_bad == 0 and dt < 60
    report("C6", "degeneralization keeps the language", ok, dt, 60,
           f"10 automata x {len(lassos)} lassos, {bad} language and {bound_bad} state-bound violations")


# ---------------------------------------------------------------- C7


def test_c7_linear_encoding(report):
    t0 = time.perf_counter()
    ns = [1, 2, 4, 8, 16]
    worst, fits = 0.0, []
    for kind in ("inc", "dec", "ifz"):
        sizes = [encode_n2c(cycle_machine(n, kind), 0).size for n in ns]
        coef, res, *_ = np.linalg.lstsq(np.vstack([ns, np.ones(len(ns))]).T, np.array(sizes, float), rcond=None)
        exact = all(s - sizes[0] == (sizes[1] - sizes[0]) * (n - 1) for n, s in zip(ns, sizes))
        worst = max(worst, float(res[0]) if len(res) else 0.0)
        fits.append(f"{kind}: {coef[0]:.0f}n+{coef[1]:.0f}" + ("" if exact else " (not exact)"))
        worst = worst if exact else float("inf")
    dt = time.perf_counter() - t0
    report("C7", "encoding size affine in machine size", worst < 1e-9 and dt < 1, dt, 1,
           f"{', '.join(fits)}, residual {worst:.1e}")


# ---------------------------------------------------------------- C8


def ring(s):
    names = tuple(f"s{i}" for i in range(s))
    edges = {f"s{i}": [f"s{(i + 1) % s}", f"s{(i + 2) % s}"] for i in range(s)}
    labels = {f"s{i}": frozenset({"p"}) if i % 3 == 0 else frozenset() for i in range(s)}
    return KripkeStructure(names, edges, labels, "s0")


def test_c8_polynomial_model_checking(report):
    t0 = time.perf_counter()
    f = parse("A1 G F p")
    sizes = [2, 4, 8, 16, 32, 64]
    times = []
    for s in sizes:
        k = ring(s)
        runs = []
        for _ in range(3 if s < 64 else 1):
            a = time.perf_counter()
            r = model_check(k, f, 2, "forall", kcb(1))
            runs.append(time.perf_counter() - a)
        assert r.exact
        times.append(min(runs))
    slope = float(np.polyfit(np.log(sizes), np.log(times), 1)[0])
    dt = time.perf_counter() - t0
    report("C8", "model checking time polynomial in structure size", slope <= 4 and dt < 300, dt, 300,
           f"log-log slope {slope:.2f} over {sizes[0]}..{sizes[-1]} states")


# ---------------------------------------------------------------- C9


def test_c9_tef_property_formulas(report):
    t0 = time.perf_counter()
    rng = random.Random(909)
    f = P.tef_property_formulas()
    bad = 0
    for _ in range(50):
        n = rng.randint(1, 3)
        team = add_alternating_o(random_team(rng, n, ("p",)))
        tef = random_tef(rng, n)
        bad += eval_formula(team, tef, f["phi_synch"]) != P.tef_is_synchronous_on_alternation(tef)
        bad += eval_formula(team, tef, f["phi_fair"]) != P.tef_is_fair(tef)
        bad += eval_formula(team, tef, A.F(f["phi_off"])) != P.tef_has_defect(tef)
    dt = time.perf_counter() - t0
    report("C9", "tef-property formulas match structural checks", bad == 0 and dt < 10, dt, 10,
           f"50 tefs x 3 properties, {bad} disagreements")

