"""Localization contribution of a regular decorated graph.

Every vertex owns one ambient factor (or none when it is unstable at levels 1
and inf); edges and vertices contribute classes in the product space, and the
integral is pushed to a point factor by factor.  The result is a linear
combination of products of unknown correlators with coefficients in ``Q``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor, factorial
from typing import Mapping, Sequence

from .algebra import ClassExpr, Factor, NilGen, RatFuncT, Space, SymPoly, laurent_coeff
from .correlators import Correlator
from .fjrw import EMPTY, SpinDatum, dual_twisted_reduce, fjrw_vanishes, fjrw_vdim
from .graphs import (
    DecoratedGraph,
    Edge,
    Monodromy,
    Vertex,
    automorphism_order,
    classify_vertex,
    flag_monodromy,
    is_regular,
    validate,
)
from .gw import gw_vertex_value
from .taut import hodge_integral

__all__ = [
    "ContributionError",
    "GraphContribution",
    "msp_vdim",
    "graph_space",
    "edge_weight",
    "edge_factor",
    "vertex_factor",
    "graph_integrand",
    "graph_contribution",
]


class ContributionError(ValueError):
    """The graph is outside the supported class (irregular, E0inf edge, ...)."""


@dataclass
class GraphContribution:
    """``constant + sum coeff * prod(keys)`` with rational coefficients."""

    constant: Fraction = Fraction(0)
    terms: dict[tuple[Correlator, ...], Fraction] = field(default_factory=dict)

    def is_zero(self) -> bool:
        return not self.constant and not self.terms

    def evaluate(self, values: Mapping[Correlator, Fraction]) -> Fraction:
        total = self.constant
        for keys, c in self.terms.items():
            prod = c
            for k in keys:
                prod *= values[k]
            total += prod
        return total

    def unknowns(self) -> set[Correlator]:
        return {k for keys in self.terms for k in keys}

    def __add__(self, other: "GraphContribution") -> "GraphContribution":
        terms = dict(self.terms)
        for k, c in other.terms.items():
            v = terms.get(k, Fraction(0)) + c
            if v:
                terms[k] = v
            else:
                terms.pop(k, None)
        return GraphContribution(self.constant + other.constant, terms)

    def render(self) -> str:
        parts = []
        if self.constant or not self.terms:
            parts.append(str(self.constant))
        for keys, c in sorted(self.terms.items()):
            parts.append(f"{c}*" + "*".join(k.key() for k in keys))
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# dimension

def msp_vdim(g: int, gamma: Sequence[Monodromy], d0, dinf) -> Fraction:
    """Virtual dimension of the master space moduli; contributions have t-degree ``-vdim``."""
    out = Fraction(d0) + Fraction(dinf) + 1 - g
    for mono in gamma:
        if mono.kind == "rho":
            out += 1
        elif mono.kind == "phi":
            out -= 3
        else:
            out += 1 - Fraction(4 * mono.m, 5)
    return out


# ---------------------------------------------------------------------------
# ambient space

def _fname(v: Vertex) -> str:
    return f"v{v.id}"


def _psi(v: Vertex, e: Edge) -> str:
    return f"psi{v.id}_{e.id}"


def _lam(v: Vertex, i: int) -> str:
    return f"lam{v.id}_{i}"


def _h(G: DecoratedGraph, v: Vertex, e: Edge | None = None) -> str:
    if v.d0 > 0 and classify_vertex(G, v) == "VS" and e is not None:
        return f"h{v.id}_{e.id}"
    return f"h{v.id}"


def _gw_integrator(G: DecoratedGraph, v: Vertex):
    edges = G.edges_at(v.id)
    legs = len(v.legs)
    g, d = v.genus, int(v.d0)

    def integrate(sub: tuple) -> SymPoly:
        ins = [(sub[2 * i], sub[2 * i + 1]) for i in range(len(edges))]
        return gw_vertex_value(g, d, ins + [(0, 0)] * legs)

    return integrate


def _hodge_integrator(g: int, nedges: int, legs: int, with_h: bool):
    def integrate(sub: tuple) -> Fraction:
        exps = tuple(sub[:nedges]) + (0,) * legs
        lam = tuple(sub[nedges:nedges + g])
        scale = Fraction(1)
        if with_h:
            if sub[-1] != 3:
                return Fraction(0)
            scale = Fraction(5)  # int_Q h^3
        return scale * hodge_integral(g, exps, lam)

    return integrate


def _spin_data(G: DecoratedGraph, v: Vertex) -> list[int]:
    ms = [flag_monodromy(e) for e in G.edges_at(v.id)]
    ms += [G.gamma[leg].m for leg in v.legs]
    return ms


def _spin_integrator(G: DecoratedGraph, v: Vertex):
    ms = _spin_data(G, v)
    legs = len(v.legs)

    def integrate(sub: tuple) -> SymPoly:
        return dual_twisted_reduce(v.genus, ms, tuple(sub) + (0,) * legs)

    return integrate


def graph_space(G: DecoratedGraph) -> Space:
    factors = []
    for v in sorted(G.vertices, key=lambda x: x.id):
        kind = classify_vertex(G, v)
        edges = G.edges_at(v.id)
        n = G.n(v)
        name = _fname(v)
        if v.level == "0":
            if kind != "VS":
                factors.append(Factor(name, 3, (NilGen(_h(G, v), 1, name),), lambda s: Fraction(-5), 3))
            elif v.d0 > 0:
                gens = []
                for e in edges:
                    gens += [NilGen(_psi(v, e), 1, name), NilGen(_h(G, v, e), 1, name)]
                factors.append(Factor(name, n, tuple(gens), _gw_integrator(G, v), n))
            else:
                dim = 3 * v.genus - 3 + n + 3
                gens = [NilGen(_psi(v, e), 1, name) for e in edges]
                gens += [NilGen(_lam(v, i), i, name) for i in range(1, v.genus + 1)]
                gens.append(NilGen(_h(G, v), 1, name))
                integ = _hodge_integrator(v.genus, len(edges), len(v.legs), True)
                factors.append(Factor(name, dim, tuple(gens), integ, dim))
        elif v.level == "1":
            if kind == "VS":
                dim = 3 * v.genus - 3 + n
                gens = [NilGen(_psi(v, e), 1, name) for e in edges]
                gens += [NilGen(_lam(v, i), i, name) for i in range(1, v.genus + 1)]
                integ = _hodge_integrator(v.genus, len(edges), len(v.legs), False)
                factors.append(Factor(name, dim, tuple(gens), integ, dim))
        elif kind == "VS":
            vdim = fjrw_vdim(SpinDatum(v.genus, tuple(_spin_data(G, v))))
            if vdim == EMPTY:
                raise ContributionError(f"vertex {v.id}: empty spin moduli")
            gens = [NilGen(_psi(v, e), 1, name) for e in edges]
            factors.append(Factor(name, max(vdim, 0), tuple(gens), _spin_integrator(G, v), None))
    return Space(factors)


# ---------------------------------------------------------------------------
# weights and factors

def _t(sp: Space, c=1) -> ClassExpr:
    return sp.scalar(RatFuncT.monomial(c, 1))


def _inf_end_v01(G: DecoratedGraph, e: Edge) -> bool:
    top = G.vertex(e.ends[1])
    return classify_vertex(G, top) == "V01"


def edge_weight(G: DecoratedGraph, sp: Space, e: Edge, vid: int) -> ClassExpr:
    """Equivariant weight of the tangent line of the edge curve at end ``vid``."""
    if e.cls == "E0":
        low = G.vertex(e.ends[0])
        d = e.d
        w = (sp.gen(_h(G, low, e)) + _t(sp)) * (1 / d)
        return w if vid == e.ends[0] else -w
    if e.cls != "Einf":
        raise ContributionError(f"edge {e.id}: unsupported edge class {e.cls}")
    d = e.d
    if _inf_end_v01(G, e):
        w = _t(sp, 5 / (5 * d + 1))
        return w if vid == e.ends[1] else -w
    if vid == e.ends[1]:
        return _t(sp, 1 / (e.r * d))
    return _t(sp, -1 / d)


def edge_factor(G: DecoratedGraph, sp: Space, e: Edge) -> ClassExpr:
    """Edge term ``A_e``."""
    d = e.d
    if e.cls == "E0":
        dd = int(d)
        h = sp.gen(_h(G, G.vertex(e.ends[0]), e))
        ht = (h + _t(sp)) * Fraction(1, dd)
        num = sp.scalar(1)
        for j in range(1, 5 * dd):
            num = num * (h * -5 + ht * j)
        den = sp.scalar(1)
        for j in range(1, dd + 1):
            den = den * (h - ht * j) ** 5 * (ht * j)
        return num / den
    if e.cls != "Einf":
        raise ContributionError(f"edge {e.id}: unsupported edge class {e.cls}")
    t = RatFuncT.t()
    val = RatFuncT.const(1)
    if _inf_end_v01(G, e):
        c = Fraction(5) / (5 * d + 1)
        n = int(-d)
        for j in range(1, n):
            val = val * (-t - t * (c * j)) ** 5
        for j in range(1, int(-5 * d)):
            val = val / (t * (-c * j))
        for j in range(1, n + 1):
            val = val / (t * (c * j))
        return sp.scalar(val)
    for j in range(1, ceil(-d)):
        val = val * (-t - t * (Fraction(j) / d)) ** 5
    for j in range(1, int(-5 * d) + 1):
        val = val / (t * (-Fraction(j) / d))
    for j in range(1, floor(-d) + 1):
        val = val / (t * (Fraction(j) / d))
    return sp.scalar(val)


def _euler_hodge(sp: Space, v: Vertex, signed: bool, weight: ClassExpr) -> ClassExpr:
    # e_T(E^vee (x) L) = sum (-1)^i lam_i w^{g-i}  or  e_T(E (x) L) = sum lam_i w^{g-i}
    out = sp.scalar(0)
    for i in range(v.genus + 1):
        lam = sp.scalar(1) if i == 0 else sp.gen(_lam(v, i))
        term = lam * weight ** (v.genus - i)
        out = out + (term * (-1) ** i if signed else term)
    return out


def _chern_from_ch(sp: Space, chs: Sequence[ClassExpr]) -> ClassExpr:
    """Total Chern class from Chern characters."""
    s = sp.scalar(0)
    for i, c in enumerate(chs, start=1):
        s = s + c * ((-1) ** (i - 1) * factorial(i - 1))
    out = sp.scalar(1)
    term = sp.scalar(1)
    n = 1
    while True:
        term = term * s * Fraction(1, n)
        if term.is_zero():
            return out
        out = out + term
        n += 1


def _degree_part(sp: Space, x: ClassExpr, deg: int) -> ClassExpr:
    degs = [g.degree for g in sp.gens]
    return ClassExpr(sp, {m: c for m, c in x.terms.items() if sum(a * b for a, b in zip(m, degs)) == deg})


def _hodge_quintic_euler(sp: Space, v: Vertex) -> ClassExpr:
    """``e(E^vee boxtimes T_Q)`` on ``Mbar_{g,n} x Q`` in lambda and h."""
    g = v.genus
    if g == 0:
        return sp.scalar(1)
    h = sp.gen(f"h{v.id}")
    top = 3 * g
    # power sums of the Hodge bundle from lambda classes (Newton)
    lam = [sp.scalar(1)] + [sp.gen(_lam(v, i)) for i in range(1, g + 1)]
    p: list[ClassExpr] = [sp.scalar(0)]
    for k in range(1, top + 1):
        pk = lam[k] * ((-1) ** (k - 1) * k) if k <= g else sp.scalar(0)
        for i in range(1, k):
            if k - i <= g:
                pk = pk + lam[k - i] * p[i] * (-1) ** (k - 1 + i)
        p.append(pk)
    # c(T_Q) = 1 + 10 h^2 - 40 h^3: power sums 3, 0, -20 h^2, -120 h^3
    pt = [sp.scalar(3), sp.scalar(0), h * h * -20, h * h * h * -120]
    chs = []
    for k in range(1, top + 1):
        total = sp.scalar(0)
        for a in range(0, k + 1):
            if k - a > 3:
                continue
            pe = sp.scalar(g) if a == 0 else p[a] * (-1) ** a
            total = total + pe * pt[k - a] * Fraction(1, factorial(a) * factorial(k - a))
        chs.append(total)
    return _degree_part(sp, _chern_from_ch(sp, chs), top)


def vertex_factor(G: DecoratedGraph, sp: Space, v: Vertex) -> ClassExpr:
    """Vertex term ``B_v`` (``A_v`` together with its weight factors)."""
    kind = classify_vertex(G, v)
    edges = G.edges_at(v.id)
    t = _t(sp)
    if kind == "VS":
        if v.level == "0":
            a = sp.scalar(1)
            for e in edges:
                a = a * (sp.gen(_h(G, v, e)) + t)
            if v.d0 == 0:
                ht = sp.gen(_h(G, v)) + t
                a = a * _euler_hodge(sp, v, True, ht) / ht
                a = a * _hodge_quintic_euler(sp, v) * (-1) ** ((1 - v.genus) % 2)
        elif v.level == "1":
            a = (_euler_hodge(sp, v, True, -t) / -t) ** 5
            a = a * t * 5 / _euler_hodge(sp, v, False, t * 5)
            a = a * sp.scalar(RatFuncT.monomial(-1, 5)) ** len(edges)
            nphi = sum(1 for leg in v.legs if G.gamma[leg].kind == "phi")
            a = a * sp.scalar(RatFuncT.monomial(Fraction(-1, 5), 4)) ** nphi
        else:
            a = sp.scalar(1)
        for e in edges:
            a = a / (edge_weight(G, sp, e, v.id) - sp.gen(_psi(v, e)))
        return a
    if v.level == "0":
        a = sp.gen(_h(G, v)) + t if kind == "V02" else sp.scalar(1)
    elif v.level == "1":
        if kind == "V02":
            a = sp.scalar(RatFuncT.monomial(-5, 6))
        elif kind == "V11" and G.gamma[v.legs[0]].kind == "phi":
            a = sp.scalar(RatFuncT.monomial(-1, 5))
        else:
            a = t * 5
    else:
        a = sp.scalar(1)
        if kind == "V02" and edges[0].d.denominator == 1:
            a = (-t) ** 6
    if kind == "V01":
        return a * edge_weight(G, sp, edges[0], v.id)
    if kind == "V02":
        return a / (edge_weight(G, sp, edges[0], v.id) + edge_weight(G, sp, edges[1], v.id))
    return a


# ---------------------------------------------------------------------------
# assembly

def _check_supported(G: DecoratedGraph) -> None:
    validate(G)
    for e in G.edges:
        if e.cls == "E0inf":
            raise ContributionError(f"edge {e.id}: unsupported edge class E0inf")
    if not is_regular(G):
        raise ContributionError("irregular graph: no contribution formula")
    for v in G.vertices:
        if v.level == "inf" and any(G.gamma[leg].kind != "zeta" for leg in v.legs):
            raise ContributionError(f"vertex {v.id}: broad leg at level inf")


def _prefactor(G: DecoratedGraph) -> Fraction:
    out = Fraction(1, automorphism_order(G))
    for e in G.edges:
        if e.cls == "E0":
            out /= e.d
        else:
            ge = -5 * e.d + (-1 if _inf_end_v01(G, e) else 0)
            out /= ge
    return out


def _vanishing_inf_vertex(G: DecoratedGraph) -> bool:
    for v in G.vertices:
        if v.level == "inf" and classify_vertex(G, v) == "VS":
            if fjrw_vanishes(SpinDatum(v.genus, tuple(_spin_data(G, v)))):
                return True
    return False


def graph_integrand(G: DecoratedGraph) -> SymPoly:
    """Integrated contribution before the ``t^vdim`` normalization."""
    _check_supported(G)
    if _vanishing_inf_vertex(G):
        return SymPoly()
    sp = graph_space(G)
    total = sp.scalar(_prefactor(G))
    for e in G.edges:
        total = total * edge_factor(G, sp, e)
    for v in G.vertices:
        total = total * vertex_factor(G, sp, v)
    return total.integrate()


def graph_contribution(G: DecoratedGraph, kb=None, delta=None) -> GraphContribution:
    """``Contr(G)``: the ``t^0`` coefficient of ``t^delta`` times the integral.

    ``delta`` defaults to the virtual dimension of the datum of ``G``.  Values
    known to ``kb`` (anything with a ``values()`` mapping) are substituted.
    """
    if delta is None:
        delta = msp_vdim(G.g, G.gamma, G.d0, G.dinf)
    delta = Fraction(delta)
    if delta.denominator != 1:
        raise ContributionError(f"non-integral dimension {delta}")
    res = graph_integrand(G)
    shift = RatFuncT.monomial(1, int(delta))
    out = GraphContribution()
    for keys, coeff in res.terms.items():
        c = laurent_coeff(coeff * shift, 0)
        if not c:
            continue
        if keys == ():
            out.constant += c
        else:
            out.terms[keys] = out.terms.get(keys, Fraction(0)) + c
    if kb is not None:
        out = _substitute(out, kb.values())
    return out


def _substitute(c: GraphContribution, values: Mapping[Correlator, Fraction]) -> GraphContribution:
    out = GraphContribution(c.constant)
    for keys, coeff in c.terms.items():
        rest = []
        for k in keys:
            if k in values:
                coeff *= values[k]
            else:
                rest.append(k)
        out = out + (GraphContribution(coeff) if not rest else GraphContribution(Fraction(0), {tuple(rest): coeff}))
    return out
