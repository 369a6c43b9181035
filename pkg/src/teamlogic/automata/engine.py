"""Satisfaction modes decided through the automaton pipeline."""

from __future__ import annotations

from ..core_model import Team
from ..formula.bn import boolean_negation
from ..tef import SYNC, TefFamily
from .gaaba import build_gaaba
from .game import TestResolver, Verdict, accepts


def automata_check(team: Team, phi, mode: str, family: TefFamily = SYNC) -> Verdict:
    """exists / forall / sync satisfaction via build, degeneralise, game, solve.

    The forall mode is the complement of the existential check of the
    Boolean negation; the returned tef is then a counterexample.
    """
    n = len(team)
    resolver = TestResolver(family)
    if mode in ("sync", "synchronous"):
        return accepts(build_gaaba(phi, n), team, family, top_family=SYNC, resolver=resolver, want_witness=True)
    if mode == "exists":
        return accepts(build_gaaba(phi, n), team, family, resolver=resolver, want_witness=True)
    if mode == "forall":
        v = accepts(build_gaaba(boolean_negation(phi), n), team, family, resolver=resolver, want_witness=True)
        return Verdict(not v.holds, v.tef, v.arena)
    raise ValueError(f"unknown mode {mode!r}")
