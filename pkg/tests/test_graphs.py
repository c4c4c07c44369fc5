from __future__ import annotations

import random
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_force_aut
from mspq.graphs import (
    DecoratedGraph,
    Edge,
    GraphError,
    Monodromy,
    Vertex,
    automorphism_order,
    canonical_form,
    classify_vertex,
    deserialize,
    enumerate_graphs,
    enumerate_report,
    flatten,
    format_gamma,
    graph_id,
    is_flat,
    is_regular,
    parse_gamma,
    serialize,
    star_graph,
    validate,
)


def test_gamma_tokens():
    gamma = parse_gamma("z1,z2,rho,phi")
    assert [m.kind for m in gamma] == ["zeta", "zeta", "rho", "phi"]
    assert format_gamma(gamma) == "z1,z2,rho,phi"
    assert parse_gamma("") == ()
    with pytest.raises(GraphError):
        parse_gamma("z5")


@pytest.mark.parametrize(
    "datum,count",
    [((1, "rho", 0, 0), 3), ((1, "", 1, 0), 4), ((0, "", 0, 0), 0), ((2, "", 0, 0), 6), ((1, "", 0, 1), 25)],
)
def test_enumeration_counts(datum, count):
    g, gamma, d0, dinf = datum
    assert len(enumerate_graphs(g, parse_gamma(gamma), d0, dinf)) == count


@pytest.mark.parametrize("datum", [(1, "rho", 0, 0), (1, "", 1, 0), (2, "", 0, 0), (1, "", 0, 1), (1, "", 2, 0)])
def test_enumerated_graphs_are_valid_and_distinct(datum):
    g, gamma, d0, dinf = datum
    graphs = enumerate_graphs(g, parse_gamma(gamma), d0, dinf)
    forms = set()
    for G in graphs:
        validate(G)
        assert is_regular(G) and is_flat(G)
        assert G.g == g and G.d0 == d0 and G.dinf == dinf
        assert sum(v.genus for v in G.vertices) + G.betti() == g
        assert sum(v.d0 for v in G.vertices) + sum(e.d0 for e in G.edges) == d0
        assert sum(v.dinf for v in G.vertices) + sum(e.dinf for e in G.edges) == dinf
        forms.add(canonical_form(G))
    assert len(forms) == len(graphs)


def test_reference_example_shapes(graphs_d1):
    shapes = sorted(
        tuple(sorted((v.level, v.genus, int(v.d0), classify_vertex(G, v)) for v in G.vertices)) for G in graphs_d1
    )
    assert shapes == sorted([
        (("0", 0, 0, "V01"), ("1", 0, 0, "V02"), ("inf", 1, 0, "VS")),
        (("0", 0, 0, "V01"), ("1", 1, 0, "VS")),
        (("0", 1, 0, "VS"), ("1", 0, 0, "V01")),
        (("0", 1, 1, "VS"),),
    ])


def test_aut_matches_brute_force_on_reference_data(graphs_rho, graphs_d1):
    for G in graphs_rho + graphs_d1 + enumerate_graphs(2, (), 0, 0) + enumerate_graphs(1, (), 0, 1):
        assert automorphism_order(G) == brute_force_aut(G)


def _synthetic(seed: int) -> DecoratedGraph:
    rng = random.Random(seed)
    nv = rng.randint(2, 6)
    levels = ["0", "1", "inf"]
    verts = []
    for i in range(nv):
        verts.append(Vertex(i, rng.choice(levels), rng.randint(0, 1), (), Fraction(rng.randint(0, 1)), 0))
    edges = []
    for j in range(rng.randint(1, 7)):
        a, b = rng.sample(range(nv), 2)
        la, lb = verts[a].level, verts[b].level
        if la == lb:
            continue
        if levels.index(la) > levels.index(lb):
            a, b = b, a
        cls = {("0", "1"): "E0", ("1", "inf"): "Einf", ("0", "inf"): "E0inf"}[(verts[a].level, verts[b].level)]
        d0 = rng.choice([1, 2]) if cls == "E0" else 0
        dinf = rng.choice([Fraction(1, 5), Fraction(2, 5)]) if cls != "E0" else 0
        edges.append(Edge(len(edges), (a, b), cls, d0, dinf))
    return DecoratedGraph(0, (), 0, 0, tuple(verts), tuple(edges))


@pytest.mark.parametrize("seed", range(20))
def test_aut_matches_brute_force_on_synthetic(seed):
    G = _synthetic(seed)
    assert automorphism_order(G) == brute_force_aut(G)


def test_star_graph_automorphisms():
    G = star_graph(1, 5)
    validate(G)
    assert automorphism_order(G) == 120


def _relabel(G: DecoratedGraph, perm: list[int], eperm: list[int]) -> DecoratedGraph:
    ids = [v.id for v in G.vertices]
    m = dict(zip(ids, perm))
    verts = tuple(replace(v, id=m[v.id]) for v in reversed(G.vertices))
    edges = tuple(
        replace(e, id=eperm[i], ends=(m[e.ends[0]], m[e.ends[1]])) for i, e in enumerate(G.edges)
    )
    return replace(G, vertices=verts, edges=edges, _cache={})


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=19), st.randoms(use_true_random=False))
def test_canonical_form_invariant_under_relabelling(seed, rnd):
    G = _synthetic(seed)
    perm = [v.id for v in G.vertices]
    rnd.shuffle(perm)
    eperm = list(range(len(G.edges)))
    rnd.shuffle(eperm)
    H = _relabel(G, perm, eperm)
    assert canonical_form(H) == canonical_form(G)
    assert graph_id(H) == graph_id(G)
    assert automorphism_order(H) == automorphism_order(G)


def test_serialize_round_trip(graphs_d1):
    for G in graphs_d1:
        text = serialize(G)
        H = deserialize(text)
        assert serialize(H) == text
        assert canonical_form(H) == canonical_form(G)


def test_validate_rejects_bad_graphs():
    v0 = Vertex(0, "0", 0, (), 0, 0)
    v1 = Vertex(1, "1", 0, (), 0, 0)
    with pytest.raises(GraphError):
        validate(DecoratedGraph(0, (), 1, 0, (v0, v1), (Edge(0, (0, 1), "Einf", 0, Fraction(1, 5)),)))
    with pytest.raises(GraphError):
        validate(DecoratedGraph(0, (), 0, 0, (v0, v1), ()))  # disconnected


def test_flatten_balanced_node():
    q = Vertex(0, "0", 0, (), 0, 0)
    mid = Vertex(1, "1", 0, (), 0, 0)
    top = Vertex(2, "inf", 1, (), 0, Fraction(-1, 5))
    G = DecoratedGraph(
        1, (), 1, Fraction(6, 5), (q, mid, top),
        (Edge(0, (0, 1), "E0", 1, 0), Edge(1, (1, 2), "Einf", 0, 1)),
    )
    assert not is_flat(G)
    F = flatten(G)
    assert [e.cls for e in F.edges] == ["E0inf"]
    assert len(F.vertices) == 2


def test_irregular_graphs_are_counted_not_returned():
    rep = enumerate_report(1, parse_gamma("z3"), 0, Fraction(1, 5))
    for G in rep.graphs:
        assert is_regular(G)


def test_monodromy_validation():
    with pytest.raises(GraphError):
        Monodromy("zeta", 0)
    with pytest.raises(GraphError):
        Monodromy("rho", 2)
