import pytest

from teamlogic.core_model import (KripkeStructure, LassoTrace, Team, add_alternating_o, all_lassos,
                                  alternation_transform, format_kripke, format_traces, kripke_lasso_traces,
                                  letter, parse_kripke, parse_trace_line, parse_traces, strip_prop, team_lcm)


def test_lasso_normal_form():
    a = LassoTrace((letter("p"),), (letter(), letter("p")))
    b = LassoTrace((), (letter("p"), letter()))
    assert a == b
    assert LassoTrace((), (letter("p"), letter("p"))) == LassoTrace((), (letter("p"),))


def test_lasso_indexing_and_suffix():
    t = parse_trace_line("{p} {q} | {} {p}")
    assert [t[i] for i in range(6)] == [letter("p"), letter("q"), letter(), letter("p"), letter(), letter("p")]
    assert t.norm(7) == 3
    assert t.suffix(1) == parse_trace_line("{q} | {} {p}")
    assert t.suffix(4) == parse_trace_line("| {} {p}")


def test_lasso_periodicity_property():
    for t in all_lassos(["p"], 2, 3):
        for i in range(len(t.prefix), len(t.prefix) + 4):
            assert t[i] == t[i + 3 * len(t.loop)]


def test_empty_loop_rejected():
    with pytest.raises(ValueError):
        LassoTrace((letter("p"),), ())


def test_team_is_a_multiset():
    t = parse_trace_line("| {p}")
    u = parse_trace_line("| {}")
    assert Team.of(t, u) == Team.of(u, t)
    assert Team.of(t, t) != Team.of(t)
    assert len(Team.of(t, t)) == 2


def test_trace_file_roundtrip():
    team = parse_traces("trace a: {p} | {}\ntrace b: | {p} {q}\n# comment\n")
    assert parse_traces(format_traces(team)) == team


@pytest.mark.parametrize("text", ["trace a: {p} {p | {}", "trace a: {p}", "foo", "trace a: | {}\ntrace a: | {p}"])
def test_bad_trace_files(text):
    with pytest.raises(ValueError):
        parse_traces(text)


def test_alternating_o_marks_even_positions():
    team = Team.of(parse_trace_line("{p} | {} {p} {}"))
    t = add_alternating_o(team).traces[0]
    assert all(("o" in t[i]) == (i % 2 == 0) for i in range(20))
    assert strip_prop(add_alternating_o(team), "o") == team
    with pytest.raises(ValueError):
        add_alternating_o(add_alternating_o(team))


def test_team_lcm():
    team = Team.of(parse_trace_line("| {} {p}"), parse_trace_line("| {} {} {p}"))
    assert team_lcm(team) == 6


KRIPKE = """
state a {p}
state b {}
edge a b
edge b a
edge b b
root a
"""


def test_kripke_parse_format_roundtrip():
    k = parse_kripke(KRIPKE)
    assert set(k.successors("b")) == {"a", "b"}
    assert k.label("a") == letter("p")
    assert parse_kripke(format_kripke(k)) == k


def test_kripke_errors():
    with pytest.raises(ValueError):
        parse_kripke("state a {p}\nedge a a\n")
    with pytest.raises(ValueError):
        parse_kripke("state a p\nroot a\n")


def test_single_self_loop_has_one_lasso():
    k = parse_kripke("state a {p}\nedge a a\nroot a\n")
    assert kripke_lasso_traces(k, 0, 1) == [LassoTrace((), (letter("p"),))]


def test_two_cycle_lassos_include_period_two():
    k = parse_kripke("state a {p}\nstate b {}\nedge a b\nedge b a\nroot a\n")
    traces = kripke_lasso_traces(k, 0, 2)
    assert LassoTrace((), (letter("p"), letter())) in traces


def test_kripke_lassos_are_rooted_paths():
    k = parse_kripke(KRIPKE)
    for t in kripke_lasso_traces(k, 2, 2):
        assert t[0] == letter("p")
        for i in range(8):
            assert not (t[i] == letter("p") and t[i + 1] == letter("p"))


def test_alternation_transform_alternates_o():
    k = alternation_transform(parse_kripke(KRIPKE))
    for t in kripke_lasso_traces(k, 2, 4):
        assert all(("o" in t[i]) != ("o" in t[i + 1]) for i in range(10))


def test_all_lassos_distinct():
    ls = all_lassos(["p"], 1, 2)
    assert len(ls) == len(set(ls))
    # words of prefix <= 1, loop <= 2 over one proposition, up to equality
    assert len(ls) == 8


def test_kripke_requires_known_states():
    with pytest.raises(ValueError):
        KripkeStructure(("a",), {"a": ("zz",)}, {"a": ()}, "a")
