import pytest
from hypothesis import given, settings

from argdebate import dispute as dg
from argdebate import framework as fw
from argdebate.dispute import PlayerLabel as L
from argdebate.dispute import WinningKind as W
from argdebate.errors import FrameworkError
from argdebate.framework import SemanticsKind as SK

from conftest import rooted_frameworks

SIGMA1 = {"d": "e", "f": "e"}
SIGMA2 = {"d": "f", "e": "f"}
SIGMA3 = {"d": "e", "f": "g"}


def test_tree_examples(ex1):
    t = dg.expand_dispute_tree(ex1, "c", 2)
    assert (t.argument, t.label) == ("c", L.P)
    (d,) = t.children
    assert (d.argument, d.label) == ("d", L.O)
    assert [(c.argument, c.label) for c in d.children] == [("e", L.P), ("f", L.P)]
    g = dg.expand_dispute_tree(ex1, "g", 5)
    assert g.children == () and not g.truncated
    loop = fw.ArgumentationFramework(("b",), (("b", "b"),))
    chain = [(n.argument, n.label.value) for n in dg.expand_dispute_tree(loop, "b", 3).walk()]
    assert chain == [("b", "P"), ("b", "O"), ("b", "P"), ("b", "O")]


def test_tree_structure_invariants(ex1):
    for root in ex1.args:
        tree = dg.expand_dispute_tree(ex1, root, 6)
        stack = [tree]
        while stack:
            node = stack.pop()
            for child in node.children:
                assert ex1.attacks_pair(child.argument, node.argument)
                assert child.label is node.label.other()
                assert child.depth == node.depth + 1
                stack.append(child)


def test_render_outline(ex1):
    text = dg.render_outline(dg.expand_dispute_tree(ex1, "c", 2))
    assert text == "P: c\n  O: d\n    P: e ...\n    P: f ...\n"


def test_apply_strategy_examples(ex1):
    s3 = dg.apply_strategy(ex1, "c", SIGMA3)
    assert s3.pro_args == {"c", "e", "g"} and s3.opp_args == {"d", "f"}
    assert not s3.undefended_opp and not s3.has_infinite_branch
    s1 = dg.apply_strategy(ex1, "c", SIGMA1)
    assert s1.pro_args == {"c", "e"} and s1.opp_args == {"d", "f"}
    assert not s1.undefended_opp and s1.has_infinite_branch
    assert "g" in dg.apply_strategy(ex1, "c", SIGMA2).undefended_opp


@pytest.mark.parametrize("sigma, expected", [
    (SIGMA1, {W.GROUNDED: False, W.ADMISSIBLE: True, W.IDEAL: True}),
    (SIGMA2, {W.GROUNDED: False, W.ADMISSIBLE: False, W.IDEAL: False}),
    (SIGMA3, {W.GROUNDED: True, W.ADMISSIBLE: True, W.IDEAL: True}),
])
def test_example3_classification(ex1, sigma, expected):
    for kind, value in expected.items():
        assert dg.is_winning(ex1, "c", sigma, kind) is value


def test_exists_winning_examples(ex1):
    sigma = dg.exists_winning(ex1, "c", W.GROUNDED)
    assert sigma == SIGMA3
    assert dg.is_winning(ex1, "c", sigma, W.GROUNDED)
    assert dg.exists_winning(ex1, "b", W.ADMISSIBLE) is None
    single = fw.ArgumentationFramework(("a",), ())
    for kind in W:
        assert dg.exists_winning(single, "a", kind) == {}


def test_strategy_validation(ex1):
    with pytest.raises(FrameworkError):
        dg.ProponentStrategy(ex1, {"d": "g"})
    s = dg.ProponentStrategy(ex1, SIGMA3)
    assert s.items() == [("d", "e"), ("f", "g")]
    assert repr(s) == "ProponentStrategy({d -> e, f -> g})"


def test_kind_parsing():
    assert W.parse("GroundedWS") is W.GROUNDED
    assert W.parse("ideal") is W.IDEAL
    with pytest.raises(ValueError):
        W.parse("stable")


@settings(max_examples=200, deadline=None)
@given(rooted_frameworks(max_args=7))
def test_exists_winning_matches_oracles(pair):
    af, a = pair
    assert (dg.exists_winning(af, a, W.GROUNDED) is not None) == fw.accepted(af, a, SK.GROUNDED)
    assert (dg.exists_winning(af, a, W.ADMISSIBLE) is not None) == fw.accepted(af, a, SK.ADMISSIBLE)
    assert (dg.exists_winning(af, a, W.IDEAL) is not None) == fw.accepted(af, a, SK.IDEAL)


@settings(max_examples=200, deadline=None)
@given(rooted_frameworks(max_args=6))
def test_returned_witnesses_win(pair):
    af, a = pair
    for kind in W:
        sigma = dg.exists_winning(af, a, kind)
        if sigma is not None:
            assert dg.is_winning(af, a, sigma, kind)


def _open_branch(node):
    return node.truncated or any(_open_branch(c) for c in node.children)


@settings(max_examples=150, deadline=None)
@given(rooted_frameworks(max_args=6))
def test_grounded_finiteness_by_truncation(pair):
    # cycle detection agrees with explicitly unfolding to depth 2|Args|
    af, a = pair
    sigma = dg.exists_winning(af, a, W.GROUNDED)
    if sigma is not None:
        tree = dg.expand_dispute_tree(af, a, 2 * len(af.args), sigma)
        assert not _open_branch(tree)


@settings(max_examples=150, deadline=None)
@given(rooted_frameworks(max_args=6))
def test_subtree_monotone_in_strategy(pair):
    af, a = pair
    choice = {}
    prev = dg.apply_strategy(af, a, choice)
    while True:
        open_ = sorted(x for x in prev.undefended_opp if af.attackers(x))
        if not open_:
            break
        x = open_[0]
        choice[x] = af.sorted_attackers(x)[0]
        cur = dg.apply_strategy(af, a, choice)
        assert prev.pro_args <= cur.pro_args and prev.opp_args <= cur.opp_args
        prev = cur


@settings(max_examples=100, deadline=None)
@given(rooted_frameworks(max_args=5))
def test_search_agrees_with_brute_force(pair):
    # brute force over every total strategy on reachable opponent arguments
    from itertools import product
    af, a = pair
    opp = sorted(x for x in af.args if af.attackers(x))
    for kind in W:
        found = dg.exists_winning(af, a, kind)
        winners = []
        for combo in product(*(af.sorted_attackers(x) for x in opp)):
            if dg.is_winning(af, a, dict(zip(opp, combo)), kind):
                winners.append(combo)
        assert (found is not None) == bool(winners)
