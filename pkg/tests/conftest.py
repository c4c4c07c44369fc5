from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction

import pytest

from mspq.graphs import DecoratedGraph, enumerate_graphs, parse_gamma


def brute_force_aut(G: DecoratedGraph) -> int:
    """Automorphisms by permuting vertices, then matching parallel edges freely."""
    verts = list(G.vertices)
    ids = [v.id for v in verts]

    def vlab(v):
        return (v.level, v.genus, v.legs, v.d0, v.dinf)

    edges = Counter((e.ends, e.cls, e.d0, e.dinf) for e in G.edges)
    mult = 1
    for c in edges.values():
        for j in range(2, c + 1):
            mult *= j
    count = 0
    for perm in itertools.permutations(ids):
        sigma = dict(zip(ids, perm))
        if any(vlab(v) != vlab(G.vertex(sigma[v.id])) for v in verts):
            continue
        image = Counter(((sigma[a], sigma[b]), c, d0, di) for (a, b), c, d0, di in edges.elements())
        if image == edges:
            count += 1
    return count * mult


@pytest.fixture(scope="session")
def graphs_rho():
    return enumerate_graphs(1, parse_gamma("rho"), 0, 0)


@pytest.fixture(scope="session")
def graphs_d1():
    return enumerate_graphs(1, (), 1, 0)


def by_shape(graphs, predicate):
    found = [G for G in graphs if predicate(G)]
    assert len(found) == 1
    return found[0]


def frac(x) -> Fraction:
    return Fraction(x)
