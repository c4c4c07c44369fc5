from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mspq.correlators import dtw_bracket, gw_primary, theta
from mspq.relations import (
    DegenerateRelation,
    KnowledgeBase,
    MissingPrerequisites,
    Relation,
    RelationError,
    UnsupportedDatum,
    build_relation,
    resolve,
    run_induction_fjrw,
    run_induction_gw,
    solve_for,
    vdim_is_validated,
)
from mspq.graphs import parse_gamma

X = dtw_bracket(1, [(0, 1)])
N11 = gw_primary(1, 1)


def test_kb_seed_and_conflict():
    kb = KnowledgeBase()
    assert kb.get(theta(1, 0)) == 1
    kb.set(theta(1, 0), 1, "other")
    assert kb.entries[theta(1, 0)][1] == "seed"
    with pytest.raises(RelationError):
        kb.set(theta(1, 0), 2, "user")
    assert KnowledgeBase(seed=False).get(theta(1, 0)) is None


def test_kb_round_trip(tmp_path):
    kb = KnowledgeBase()
    kb.set(N11, Fraction(2875, 12), "user")
    kb.set(X, Fraction(51, 5), "solved")
    kb.set(theta(2, 12), Fraction(-7, 3), "user")
    path = tmp_path / "base.kb"
    kb.save(path)
    again = KnowledgeBase(path)
    assert again.values() == kb.values()
    again.save(path)
    assert path.read_text() == kb.dumps()


@pytest.mark.parametrize("text", ["GW\tGW(g=1,d=1)\t1/2\n", "FJRW\tGW(g=1,d=1)\t1\tx\n", "GW\tGW(g=1,d=1)\tabc\tx\n"])
def test_kb_malformed(text):
    with pytest.raises(RelationError):
        KnowledgeBase().loads(text)


def test_missing_kb_file_is_empty(tmp_path):
    assert KnowledgeBase(tmp_path / "none.kb").values() == {theta(1, 0): 1}


def test_solve_simple():
    rel = Relation(0, (), Fraction(0), Fraction(0), Fraction(2), {(X,): Fraction(-1)})
    kb = KnowledgeBase()
    assert solve_for(rel, X, kb) == 2
    assert kb.get(X) == 2


def test_solve_degenerate_and_blocked():
    rel = Relation(0, (), Fraction(0), Fraction(0), Fraction(2))
    with pytest.raises(DegenerateRelation):
        solve_for(rel, X)
    rel = Relation(0, (), Fraction(0), Fraction(0), Fraction(2), {(X,): Fraction(1), (N11,): Fraction(3)})
    with pytest.raises(MissingPrerequisites) as info:
        solve_for(rel, X)
    assert info.value.missing == [N11]
    rel = Relation(0, (), Fraction(0), Fraction(0), Fraction(2), {(X, X): Fraction(1)})
    with pytest.raises(MissingPrerequisites):
        solve_for(rel, X)


def test_worked_example_chain():
    kb = KnowledgeBase()
    rel = build_relation(1, "rho", 0, 0, kb)
    assert rel.unknowns() == {X}
    assert solve_for(rel, X, kb) == Fraction(51, 5)
    rel = build_relation(1, "", 1, 0, kb)
    assert rel.unknowns() == {N11}
    assert solve_for(rel, N11, kb) == Fraction(2875, 12)
    assert build_relation(1, "", 1, 0, kb).is_trivial()
    assert build_relation(1, "rho", 0, 0, kb).is_trivial()


def test_unsubstituted_relation_structure():
    rel = build_relation(1, "", 1, 0)
    assert rel.constant == Fraction(15163, 12)
    assert rel.terms == {(X,): -120, (theta(1, 0),): 200, (N11,): -1}


def test_run_induction_gw_needs_bracket():
    kb = KnowledgeBase()
    with pytest.raises(MissingPrerequisites) as info:
        run_induction_gw(1, 1, kb)
    assert info.value.missing == [X]
    kb.set(X, Fraction(51, 5), "user")
    assert run_induction_gw(1, 1, kb) == Fraction(2875, 12)


def test_resolve_solves_auxiliary_data():
    kb = KnowledgeBase()
    assert resolve(N11, kb) == Fraction(2875, 12)
    assert kb.entries[X][1] == "solved from g=1 gamma=rho d=0,0"


def test_run_induction_fjrw_datum():
    kb = KnowledgeBase()
    with pytest.raises(UnsupportedDatum):
        run_induction_fjrw(1, 4, kb)
    rel = build_relation(1, "", 0, 1, kb)
    assert rel.terms[(theta(1, 5),)] == Fraction(-1, 120)
    with pytest.raises(MissingPrerequisites) as info:
        run_induction_fjrw(1, 5, kb)
    assert theta(1, 5) not in info.value.missing


def test_unsupported_data():
    with pytest.raises(UnsupportedDatum):
        build_relation(1, "", 1, 0, delta=Fraction(1, 2))
    with pytest.raises(UnsupportedDatum):
        build_relation(1, "", 1, 0, delta=0)


def test_vdim_validation_flag():
    assert vdim_is_validated(parse_gamma("rho,rho"))
    assert not vdim_is_validated(parse_gamma("z1"))


@settings(max_examples=50, deadline=None)
@given(st.fractions(min_value=-100, max_value=100), st.fractions(min_value=-100, max_value=100).filter(bool),
       st.fractions(min_value=-100, max_value=100), st.fractions(min_value=-100, max_value=100))
def test_substitute_back_residual_zero(c, a, b, nval):
    rel = Relation(1, (), Fraction(1), Fraction(0), c, {(X,): a, (N11,): b})
    kb = KnowledgeBase()
    kb.set(N11, nval, "user")
    value = solve_for(rel, X, kb)
    assert rel.residual(kb.values()) == 0
    assert rel.residual({**kb.values(), X: value + 1}) == a


def test_residual_needs_values():
    rel = Relation(1, (), Fraction(1), Fraction(0), Fraction(1), {(X,): Fraction(1)})
    with pytest.raises(MissingPrerequisites):
        rel.residual({})


@pytest.mark.slow
def test_second_fjrw_coefficient():
    rel = build_relation(1, "", 0, 2)
    assert rel.terms[(theta(1, 10),)] == Fraction(1, 3628800)
