import pytest

from teamlogic.core_model import Team, parse_trace_line
from teamlogic.tef import (SYNC, Tef, check_property, enumerate_family, format_tef, is_k_context_bounded,
                           is_k_synchronous, kcb, ksync, max_divergence, parse_tef, restrict, switch_count,
                           synchronous_tef, tef_shift, tef_value)


def fs(*xs):
    return frozenset(xs)


def test_values_follow_advancement_sets():
    tef = Tef(2, (0, 0), (fs(0), fs(1)), (fs(0, 1),))
    assert [tef.value(i) for i in range(5)] == [(0, 0), (1, 0), (1, 1), (2, 2), (3, 3)]
    assert tef_value(tef, 100, 1) == 99


def test_normal_form_rolls_prefix_into_loop():
    a = Tef(1, (0,), (fs(0),), (fs(0),))
    assert a == synchronous_tef(1)
    assert Tef(2, (0, 0), (), (fs(0), fs(1), fs(0), fs(1))).loop == (fs(0), fs(1))


def test_strictness_enforced():
    with pytest.raises(ValueError):
        Tef(2, (0, 0), (fs(),), (fs(0),))
    with pytest.raises(ValueError):
        Tef(2, (0, 0), (), (fs(2),))


def test_shift():
    tef = Tef(2, (0, 0), (fs(0), fs(1)), (fs(0),))
    s = tef_shift(tef, 3)
    assert s.init == tef.value(3)
    assert [s.value(i) for i in range(4)] == [tef.value(i + 3) for i in range(4)]


def test_restrict_may_stutter():
    tef = Tef(2, (0, 0), (), (fs(0), fs(1)))
    r = restrict(tef, [1])
    assert r.stuttering
    assert [r.value(i) for i in range(4)] == [(0,), (0,), (1,), (1,)]


def test_properties():
    sync = synchronous_tef(3)
    assert check_property(sync, "synchronous") and check_property(sync, "fair")
    nonpar = Tef(2, (0, 0), (fs(0),), (fs(1),))
    assert check_property(nonpar, "non_parallel")
    assert not check_property(nonpar, "fair")
    assert check_property(Tef(2, (0, 0), (), (fs(0), fs(1))), "fair")


def test_k_synchronous():
    tef = Tef(2, (0, 0), (fs(0), fs(0)), (fs(0, 1),))
    assert max_divergence(tef) == 2
    assert is_k_synchronous(tef, 2) and not is_k_synchronous(tef, 1)
    assert max_divergence(Tef(2, (0, 0), (), (fs(0),))) is None


def test_context_bounded():
    tef = Tef(2, (0, 0), (fs(0), fs(1)), (fs(0),))
    assert switch_count(tef) == 2
    assert is_k_context_bounded(tef, 2) and not is_k_context_bounded(tef, 1)
    assert switch_count(Tef(2, (0, 0), (), (fs(0), fs(1)))) is None


def test_family_membership():
    tef = Tef(2, (0, 0), (fs(0),), (fs(1),))
    assert kcb(1).contains(tef) and not kcb(0).contains(tef)
    assert not ksync(5).contains(tef)
    assert SYNC.contains(synchronous_tef(2))


def test_enumerate_kcb():
    team = Team.of(parse_trace_line("| {p}"), parse_trace_line("| {}"))
    tefs = enumerate_family(kcb(1), team, dwell_bound=2)
    assert all(kcb(1).contains(t) for t in tefs)
    assert len(tefs) == len(set(tefs))
    # two traces: two single-trace tefs, plus two orders with dwell 1 or 2
    assert len(tefs) == 2 + 2 * 2
    with pytest.raises(ValueError):
        enumerate_family(ksync(1), team)


def test_text_roundtrip():
    tef = Tef(3, (0, 1, 0), (fs(0), fs(1, 2)), (fs(0, 1, 2), fs(2)))
    text = format_tef(tef)
    assert text == "tef init=0,1,0 steps={1} {2,3} | {1,2,3} {3}"
    assert parse_tef(text) == tef


@pytest.mark.parametrize("text", ["tef init=0 steps={1}", "tef init=0,0 steps=| {3}", "nonsense", "tef init=0 steps=| {}"])
def test_bad_tef_text(text):
    with pytest.raises(ValueError):
        parse_tef(text)
