from dataclasses import replace

import pytest
from hypothesis import assume, given, settings

from argdebate import framework as fw
from argdebate import interpreted as it
from argdebate.errors import FrameworkError, ResourceExceeded
from argdebate.interpreted import NOTHING, Action, AgentId, EnvState, GlobalState

from conftest import rooted_frameworks


def test_unattacked_root_single_state(ex1):
    s = it.build(ex1, "g")
    assert s.num_states == 1
    assert s.successors(0) == (0,)
    assert s.is_terminal(0)
    assert s.atom_holds(0, "Pro_g")


def test_first_move_from_c(ex1):
    s = it.build(ex1, "c")
    init = s.global_state(s.initial)
    assert init == GlobalState("c", None, EnvState(AgentId.OPP, "c", frozenset()))
    (joint, t), = s.joint_actions(s.initial)
    assert joint == (NOTHING, Action("d", "c"), NOTHING)
    g = s.global_state(t)
    assert g.l_opp == "d" and g.l_env == EnvState(AgentId.PRO, "d", frozenset({("d", "c")}))
    assert s.atom_holds(t, "Opp_d") and not s.atom_holds(t, "Pro_c")
    assert s.atom_holds(s.initial, "Pro_c")
    assert not any(s.atom_holds(s.initial, f"Opp_{x}") for x in ex1.args)


def test_enabled_actions_examples(ex1):
    s = it.build(ex1, "c")
    assert s.enabled_actions(s.initial, "Opp") == (Action("d", "c"),)
    assert s.enabled_actions(s.initial, "Pro") == (NOTHING,)
    assert s.enabled_actions(s.initial, "Env") == (NOTHING,)
    pro_d = [i for i in s.states()
             if s.global_state(i).l_env.turn is AgentId.PRO and s.global_state(i).l_env.last == "d"]
    assert pro_d
    for i in pro_d:
        assert set(s.enabled_actions(i, AgentId.PRO)) == {Action("e", "d"), Action("f", "d")}


def test_terminal_states(ex1):
    s = it.build(ex1, "c")
    assert not s.is_terminal(s.initial)
    for i in s.states():
        if s.global_state(i).l_env.last == "g":
            assert s.is_terminal(i)


def test_self_attack_loop():
    af = fw.ArgumentationFramework(("b",), (("b", "b"),))
    s = it.build(af, "b")
    seen = [s.global_state(i).l_env.attacks_seen for i in s.states()]
    assert seen[0] == frozenset() and all(x == {("b", "b")} for x in seen[1:])
    assert s.num_states == 3
    # after the first move the turn alternates between two states for ever
    assert s.successors(1) == (2,) and s.successors(2) == (1,)


def test_unknown_root_and_limits(ex1):
    with pytest.raises(FrameworkError):
        it.build(ex1, "z")
    with pytest.raises(ResourceExceeded):
        it.build(fw.generate_random(8, 0.6, 1), "a0", max_states=50)


def test_transition_and_index_lookup(ex1):
    s = it.build(ex1, "c")
    t = s.transition(s.global_state(0), (NOTHING, Action("d", "c"), NOTHING))
    assert t == 1 and s.index_of(s.global_state(t)) == t
    with pytest.raises(ValueError):
        s.transition(0, (Action("e", "d"), NOTHING, NOTHING))
    with pytest.raises(KeyError):
        s.index_of(GlobalState("a", "b", EnvState(AgentId.PRO, "b", frozenset())))


def test_listing_is_deterministic(ex1):
    a = it.build(ex1, "e").listing()
    assert a == it.build(ex1, "e").listing()
    assert a.splitlines()[1:3] == ["states", "  0 (e, empty, (Opp, e, {}))"]
    assert "  0 (nothing, attack(f,e), nothing) 1" in a
    assert "atoms\n  0 Pro_e\n" in a


def test_atom_parsing():
    assert it.parse_atom("Pro_a0") == (AgentId.PRO, "a0")
    assert it.parse_atom(("Opp", "x")) == (AgentId.OPP, "x")
    with pytest.raises(ValueError):
        it.parse_atom("Env_a")


def build_small(af, a, track_seen=True):
    # dense frameworks have huge tracked state spaces; skip those draws
    try:
        return it.build(af, a, track_seen=track_seen, max_states=5000)
    except ResourceExceeded:
        assume(False)


def check_structure(s):
    af, a = s.framework, s.root
    assert s.global_state(s.initial) == GlobalState(a, None, EnvState(AgentId.OPP, a, frozenset()))
    for i in s.states():
        g = s.global_state(i)
        if g.l_opp is None:
            assert i == s.initial
        movers = [ag for ag in it.AGENTS if s.enabled_actions(i, ag) != (NOTHING,)]
        assert len(movers) <= 1
        succ = s.successors(i)
        assert s.is_terminal(i) == (succ == (i,))
        assert s.is_terminal(i) == (not af.attackers(g.l_env.last))
        assert len(set(succ)) == len(succ)
        for t in succ:
            assert g.l_env.attacks_seen <= s.global_state(t).l_env.attacks_seen
        holding = [(o, x) for o in ("Pro", "Opp") for x in af.args if s.atom_holds(i, f"{o}_{x}")]
        assert len(holding) == 1
    assert len(s.decision_points(AgentId.ENV)) == 0


@settings(max_examples=80, deadline=None)
@given(rooted_frameworks(max_args=5))
def test_structural_invariants(pair):
    af, a = pair
    for track in (True, False):
        check_structure(build_small(af, a, track_seen=track))


@settings(max_examples=80, deadline=None)
@given(rooted_frameworks(max_args=5))
def test_reachable_only_and_bounded(pair):
    af, a = pair
    s = build_small(af, a)
    seen = {s.initial}
    stack = [s.initial]
    while stack:
        for t in s.successors(stack.pop()):
            if t not in seen:
                seen.add(t)
                stack.append(t)
    assert seen == set(s.states())
    assert s.num_states <= it.state_bound(af)


@settings(max_examples=80, deadline=None)
@given(rooted_frameworks(max_args=5))
def test_collapsed_is_functional_bisimulation(pair):
    af, a = pair
    full = build_small(af, a)
    small = it.build(af, a, track_seen=False)

    def image(i):
        g = full.global_state(i)
        return small.index_of(replace(g, l_env=replace(g.l_env, attacks_seen=frozenset())))

    assert image(full.initial) == small.initial
    assert {image(i) for i in full.states()} == set(small.states())
    for i in full.states():
        j = image(i)
        assert full.mover[i] is small.mover[j]
        assert full.atom_of[i] == small.atom_of[j]
        assert [(act, image(t)) for act, t in full.moves(i)] == list(small.moves(j))
