"""Decorated localization graphs: model, validation, canonical form, enumeration.

Vertices sit at level ``"0"``, ``"1"`` or ``"inf"``.  Every edge joins a
level-1 vertex to a level-0 vertex (class ``E0``) or to a level-inf vertex
(class ``Einf``); flattening can produce ``E0inf`` edges joining levels 0 and
inf directly.  Degrees follow the pair convention ``(d0, dinf)`` with
``d_e = d0 - dinf``:

* ``E0`` edge: ``(d_e, 0)`` with ``d_e`` a positive integer;
* ``Einf`` edge: ``(0, -d_e)`` with ``d_e`` a negative multiple of 1/5;
* stable level-0 vertex: ``(d_v, 0)``; level-1 vertex: ``(0, 0)``;
* stable level-inf vertex: ``(0, -(2 g_v - 2 + n_v)/5)``; unstable ones ``(0, 0)``.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations, product
from math import factorial
from typing import Iterable, Iterator, Sequence

__all__ = [
    "GraphError",
    "EnumerationBoundError",
    "Monodromy",
    "parse_gamma",
    "format_gamma",
    "Vertex",
    "Edge",
    "DecoratedGraph",
    "LEVELS",
    "classify_vertex",
    "flag_monodromy",
    "validate",
    "is_regular",
    "is_flat",
    "flatten",
    "canonical_form",
    "automorphism_order",
    "graph_id",
    "canonicalize",
    "EnumerationResult",
    "enumerate_graphs",
    "enumerate_report",
    "serialize",
    "deserialize",
    "single_vertex_graph",
    "star_graph",
]

LEVELS = ("0", "1", "inf")


class GraphError(ValueError):
    """Invalid decorated graph."""


class EnumerationBoundError(ValueError):
    """The requested datum exceeds the enumeration search bounds."""


# ---------------------------------------------------------------------------
# monodromies

@dataclass(frozen=True, order=True)
class Monodromy:
    """``zeta`` with ``m`` in 1..4 encodes zeta_5^m; ``rho``/``phi`` are broad."""

    kind: str
    m: int = 0

    def __post_init__(self) -> None:
        if self.kind == "zeta":
            if self.m not in (1, 2, 3, 4):
                raise GraphError(f"narrow monodromy exponent must be 1..4, got {self.m}")
        elif self.kind in ("rho", "phi"):
            if self.m:
                raise GraphError("broad monodromy carries no exponent")
        else:
            raise GraphError(f"unknown monodromy kind {self.kind!r}")

    @property
    def narrow(self) -> bool:
        return self.kind == "zeta"

    def token(self) -> str:
        return f"z{self.m}" if self.kind == "zeta" else self.kind

    @classmethod
    def parse(cls, token: str) -> "Monodromy":
        token = token.strip()
        if token in ("rho", "phi"):
            return cls(token)
        if len(token) == 2 and token[0] == "z" and token[1] in "1234":
            return cls("zeta", int(token[1]))
        raise GraphError(f"bad monodromy token {token!r}")


def parse_gamma(spec: str) -> tuple[Monodromy, ...]:
    spec = spec.strip()
    if not spec:
        return ()
    return tuple(Monodromy.parse(tok) for tok in spec.split(","))


def format_gamma(gamma: Sequence[Monodromy]) -> str:
    return ",".join(m.token() for m in gamma)


# ---------------------------------------------------------------------------
# graph model

@dataclass(frozen=True)
class Vertex:
    id: int
    level: str
    genus: int = 0
    legs: tuple[int, ...] = ()
    d0: Fraction = Fraction(0)
    dinf: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if self.level not in LEVELS:
            raise GraphError(f"bad level {self.level!r}")
        object.__setattr__(self, "legs", tuple(sorted(self.legs)))
        object.__setattr__(self, "d0", Fraction(self.d0))
        object.__setattr__(self, "dinf", Fraction(self.dinf))


@dataclass(frozen=True)
class Edge:
    id: int
    ends: tuple[int, int]
    cls: str
    d0: Fraction = Fraction(0)
    dinf: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if self.cls not in ("E0", "Einf", "E0inf"):
            raise GraphError(f"bad edge class {self.cls!r}")
        object.__setattr__(self, "ends", tuple(self.ends))
        object.__setattr__(self, "d0", Fraction(self.d0))
        object.__setattr__(self, "dinf", Fraction(self.dinf))

    @property
    def d(self) -> Fraction:
        return self.d0 - self.dinf

    @property
    def r(self) -> int:
        return 1 if self.d.denominator == 1 else 5


@dataclass(frozen=True)
class DecoratedGraph:
    g: int
    gamma: tuple[Monodromy, ...]
    d0: Fraction
    dinf: Fraction
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...] = ()
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "gamma", tuple(self.gamma))
        object.__setattr__(self, "d0", Fraction(self.d0))
        object.__setattr__(self, "dinf", Fraction(self.dinf))
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))

    def vertex(self, vid: int) -> Vertex:
        idx = self._cache.get("vidx")
        if idx is None:
            idx = {v.id: v for v in self.vertices}
            self._cache["vidx"] = idx
        try:
            return idx[vid]
        except KeyError:
            raise GraphError(f"no vertex {vid}") from None

    def edge(self, eid: int) -> Edge:
        for e in self.edges:
            if e.id == eid:
                return e
        raise GraphError(f"no edge {eid}")

    def edges_at(self, vid: int) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if vid in e.ends)

    def valence(self, vid: int) -> int:
        return sum(e.ends.count(vid) for e in self.edges)

    def n(self, v: Vertex) -> int:
        return self.valence(v.id) + len(v.legs)

    def other_end(self, e: Edge, vid: int) -> Vertex:
        a, b = e.ends
        return self.vertex(b if a == vid else a)

    def betti(self) -> int:
        return len(self.edges) - len(self.vertices) + 1

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        adj: dict[int, set[int]] = {v.id: set() for v in self.vertices}
        for e in self.edges:
            a, b = e.ends
            adj[a].add(b)
            adj[b].add(a)
        seen = {self.vertices[0].id}
        stack = [self.vertices[0].id]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(self.vertices)


# ---------------------------------------------------------------------------
# classification, validation, regularity

def classify_vertex(G: DecoratedGraph, v: Vertex) -> str:
    """Return ``"VS"``, ``"V01"``, ``"V02"`` or ``"V11"``."""
    n = G.n(v)
    chi = 2 * v.genus - 2 + n
    stable = chi > 0 or (v.level == "0" and v.d0 > 0)
    if stable:
        return "VS"
    a, b = len(v.legs), G.valence(v.id)
    shape = {(0, 1): "V01", (0, 2): "V02", (1, 1): "V11"}.get((a, b))
    if shape is None or v.genus:
        raise GraphError(f"vertex {v.id}: unstable vertex with invalid shape (legs={a}, edges={b})")
    return shape


def flag_monodromy(e: Edge) -> int:
    """Exponent ``m`` with ``exp(-2 pi i d_e) = zeta_5^m`` (0 for integer ``d_e``)."""
    return int((-5 * e.d) % 5)


def _inf_vertex_data(G: DecoratedGraph, v: Vertex) -> list[int]:
    """Monodromy exponents (flags then narrow legs) at a level-inf vertex."""
    ms = [flag_monodromy(e) for e in G.edges_at(v.id)]
    for leg in v.legs:
        mono = G.gamma[leg]
        ms.append(mono.m if mono.narrow else -1)
    return ms


def _is_exceptional(ms: Sequence[int]) -> bool:
    c = Counter(ms)
    if c[4] == 1 and c[1] >= 2 and c[1] + 1 == len(ms):
        return True
    return c[2] == 1 and c[3] == 1 and c[1] >= 1 and c[1] + 2 == len(ms)


def _inf_vertex_regular(G: DecoratedGraph, v: Vertex, kind: str) -> bool:
    if kind == "VS":
        ms = _inf_vertex_data(G, v)
        if any(m <= 0 for m in ms):
            return False
        if all(m in (1, 2) for m in ms):
            return True
        return v.genus == 0 and _is_exceptional(ms)
    es = G.edges_at(v.id)
    if kind == "V01":
        return True
    if kind == "V02":
        return all(e.d.denominator != 1 for e in es)
    # V11: stacky marking only
    return es[0].d.denominator != 1 and all(G.gamma[leg].narrow for leg in v.legs)


def validate(G: DecoratedGraph) -> None:
    """Raise :class:`GraphError` unless ``G`` is a well-formed decorated graph."""
    ids = [v.id for v in G.vertices]
    if len(set(ids)) != len(ids) or not ids:
        raise GraphError("vertex ids must be unique and nonempty")
    eids = [e.id for e in G.edges]
    if len(set(eids)) != len(eids):
        raise GraphError("edge ids must be unique")
    legs = sorted(leg for v in G.vertices for leg in v.legs)
    if legs != list(range(len(G.gamma))):
        raise GraphError("legs must be distributed exactly once over vertices")
    if not G.is_connected():
        raise GraphError("graph is not connected")
    for e in G.edges:
        a, b = (G.vertex(x) for x in e.ends)
        if a.id == b.id:
            raise GraphError(f"edge {e.id} is a loop")
        want = {"E0": ("0", "1"), "Einf": ("1", "inf"), "E0inf": ("0", "inf")}[e.cls]
        if (a.level, b.level) != want:
            raise GraphError(f"edge {e.id}: class {e.cls} must join levels {want}")
        if e.cls == "E0":
            if e.dinf != 0 or e.d0.denominator != 1 or e.d0 <= 0:
                raise GraphError(f"edge {e.id}: E0 degrees must be (positive integer, 0)")
        elif e.cls == "Einf":
            if e.d0 != 0 or e.dinf <= 0 or (5 * e.dinf).denominator != 1:
                raise GraphError(f"edge {e.id}: Einf degrees must be (0, positive fifth)")
    for v in G.vertices:
        kind = classify_vertex(G, v)
        for leg in v.legs:
            mono = G.gamma[leg]
            allowed = {"0": ("rho",), "1": ("rho", "phi"), "inf": ("zeta", "phi")}[v.level]
            if mono.kind not in allowed:
                raise GraphError(f"vertex {v.id}: leg {mono.token()} not allowed at level {v.level}")
        if v.level == "0":
            if v.dinf != 0 or v.d0 < 0 or v.d0.denominator != 1:
                raise GraphError(f"vertex {v.id}: level-0 degrees must be (d >= 0, 0)")
            if kind != "VS" and v.d0:
                raise GraphError(f"vertex {v.id}: unstable level-0 vertex has degree 0")
        elif v.level == "1":
            if v.d0 or v.dinf:
                raise GraphError(f"vertex {v.id}: level-1 vertices carry degree 0")
        else:
            if v.d0:
                raise GraphError(f"vertex {v.id}: level-inf vertices have d0 = 0")
            if kind == "VS":
                want = Fraction(-(2 * v.genus - 2 + G.n(v)), 5)
                if v.dinf != want:
                    raise GraphError(f"vertex {v.id}: level-inf degree must be {want}")
                ms = _inf_vertex_data(G, v)
                if all(m > 0 for m in ms) and (2 * v.genus - 2 + len(ms) - sum(ms)) % 5:
                    raise GraphError(f"vertex {v.id}: spin degree condition fails")
            else:
                if v.dinf:
                    raise GraphError(f"vertex {v.id}: unstable level-inf vertex has degree 0")
                es = G.edges_at(v.id)
                if kind == "V01" and es[0].d.denominator != 1:
                    raise GraphError(f"vertex {v.id}: unmarked smooth point must be untwisted")
                if kind == "V02" and (es[0].d + es[1].d).denominator != 1:
                    raise GraphError(f"vertex {v.id}: node monodromies must be inverse")
                if kind == "V11":
                    mono = G.gamma[v.legs[0]]
                    if mono.narrow and mono.m != int((5 * es[0].d) % 5):
                        raise GraphError(f"vertex {v.id}: marking monodromy must match the edge")
    if sum(v.d0 for v in G.vertices) + sum(e.d0 for e in G.edges) != G.d0:
        raise GraphError("d0 degrees do not sum to the datum")
    if sum(v.dinf for v in G.vertices) + sum(e.dinf for e in G.edges) != G.dinf:
        raise GraphError("dinf degrees do not sum to the datum")
    if sum(v.genus for v in G.vertices) + G.betti() != G.g:
        raise GraphError("genus does not match vertex genera plus loops")
    for e in G.edges:
        if e.cls != "Einf":
            continue
        vinf = G.vertex(e.ends[1])
        v1 = G.vertex(e.ends[0])
        delta = -1 if classify_vertex(G, vinf) == "V01" and vinf.level == "inf" else 0
        delta1 = -1 if classify_vertex(G, v1) == "V01" else 0
        if -5 * e.d + delta + delta1 < 1:
            raise GraphError(f"edge {e.id}: rho cannot vanish at the level-1 end")


def is_regular(G: DecoratedGraph) -> bool:
    for v in G.vertices:
        if v.level != "inf":
            continue
        if not _inf_vertex_regular(G, v, classify_vertex(G, v)):
            return False
    return True


def _balanced(G: DecoratedGraph, v: Vertex) -> bool:
    if v.level != "1" or classify_vertex(G, v) != "V02":
        return False
    e1, e2 = G.edges_at(v.id)
    return e1.d + e2.d == 0


def is_flat(G: DecoratedGraph) -> bool:
    return not any(_balanced(G, v) for v in G.vertices)


def flatten(G: DecoratedGraph) -> DecoratedGraph:
    """Replace every balanced level-1 ``V02`` vertex by a single ``E0inf`` edge."""
    vertices = list(G.vertices)
    edges = list(G.edges)
    changed = True
    next_id = max((e.id for e in edges), default=-1) + 1
    while changed:
        changed = False
        H = replace(G, vertices=tuple(vertices), edges=tuple(edges), _cache={})
        for v in vertices:
            if not _balanced(H, v):
                continue
            e1, e2 = H.edges_at(v.id)
            if {e1.cls, e2.cls} != {"E0", "Einf"}:
                continue
            e0, ei = (e1, e2) if e1.cls == "E0" else (e2, e1)
            a = H.other_end(e0, v.id)
            b = H.other_end(ei, v.id)
            new = Edge(next_id, (a.id, b.id), "E0inf", e0.d0 + ei.d0, e0.dinf + ei.dinf)
            next_id += 1
            vertices = [w for w in vertices if w.id != v.id]
            edges = [e for e in edges if e.id not in (e0.id, ei.id)] + [new]
            changed = True
            break
    return replace(G, vertices=tuple(vertices), edges=tuple(edges), _cache={})


# ---------------------------------------------------------------------------
# canonical form and automorphisms

def _vlabel(v: Vertex) -> tuple:
    return (LEVELS.index(v.level), v.genus, v.legs, v.d0, v.dinf)


def _elabel(e: Edge) -> tuple:
    return (e.cls, e.d0, e.dinf)


def _structure(G: DecoratedGraph):
    """Twin-collapsed weighted structure used by canonicalization."""
    verts = list(G.vertices)
    nbr: dict[int, Counter] = {v.id: Counter() for v in verts}
    for e in G.edges:
        a, b = e.ends
        nbr[a][(_elabel(e), b, 0)] += 1
        nbr[b][(_elabel(e), a, 1)] += 1
    # twins: same label, same neighbourhood multiset
    groups: dict[tuple, list[int]] = {}
    for v in verts:
        sig = (_vlabel(v), tuple(sorted(nbr[v.id].items(), key=repr)))
        groups.setdefault(sig, []).append(v.id)
    rep_of = {}
    size = {}
    for ids in groups.values():
        ids.sort()
        for x in ids:
            rep_of[x] = ids[0]
        size[ids[0]] = len(ids)
    reps = sorted(size)
    labels = {r: (_vlabel(G.vertex(r)), size[r]) for r in reps}
    emult: Counter = Counter()
    for e in G.edges:
        a, b = e.ends
        ra, rb = rep_of[a], rep_of[b]
        # keep edges of the representative only
        if a == ra and b == rb:
            emult[(ra, rb, _elabel(e))] += 1
    twin_factor = 1
    for s in size.values():
        twin_factor *= factorial(s)
    par_factor = 1
    pairs: Counter = Counter()
    for e in G.edges:
        pairs[(e.ends, _elabel(e))] += 1
    for m in pairs.values():
        par_factor *= factorial(m)
    return reps, labels, emult, twin_factor * par_factor


def _refine(reps, labels, adj, colors: dict[int, int]) -> dict[int, int]:
    while True:
        sigs = {}
        for r in reps:
            neigh = sorted((lab, colors[o]) for lab, o in adj[r])
            sigs[r] = (colors[r], tuple(neigh))
        ordered = sorted(set(sigs.values()))
        index = {s: i for i, s in enumerate(ordered)}
        new = {r: index[sigs[r]] for r in reps}
        if len(set(new.values())) == len(set(colors.values())):
            return new
        colors = new


def _canon(G: DecoratedGraph) -> tuple[tuple, int]:
    cached = G._cache.get("canon")
    if cached is not None:
        return cached
    reps, labels, emult, factor = _structure(G)
    adj: dict[int, list] = {r: [] for r in reps}
    for (a, b, lab), m in emult.items():
        adj[a].append(((lab, m, 0), b))
        adj[b].append(((lab, m, 1), a))
    order_labels = sorted(set(labels.values()))
    colors = {r: order_labels.index(labels[r]) for r in reps}
    colors = _refine(reps, labels, adj, colors)
    best: list = [None, 0]

    def encode(col: dict[int, int]) -> tuple:
        pos = {r: col[r] for r in reps}
        vs = tuple(labels[r] for r in sorted(reps, key=lambda x: pos[x]))
        es = tuple(sorted((pos[a], pos[b], lab, m) for (a, b, lab), m in emult.items()))
        return (vs, es)

    def search(col: dict[int, int]) -> None:
        cells: dict[int, list[int]] = {}
        for r in reps:
            cells.setdefault(col[r], []).append(r)
        if len(cells) == len(reps):
            enc = encode(col)
            if best[0] is None or enc < best[0]:
                best[0], best[1] = enc, 1
            elif enc == best[0]:
                best[1] += 1
            return
        target = min((c for c in cells if len(cells[c]) > 1), key=lambda c: (len(cells[c]), c))
        for r in cells[target]:
            new = {x: 2 * c for x, c in col.items()}
            new[r] = 2 * target - 1
            search(_refine(reps, labels, adj, new))

    search(colors)
    header = (G.g, tuple(m.token() for m in G.gamma), G.d0, G.dinf)
    result = ((header,) + best[0], best[1] * factor)
    G._cache["canon"] = result
    return result


def canonical_form(G: DecoratedGraph) -> tuple:
    return _canon(G)[0]


def automorphism_order(G: DecoratedGraph) -> int:
    """Order of the decoration-preserving automorphism group (legs fixed)."""
    return _canon(G)[1]


def graph_id(G: DecoratedGraph) -> str:
    return hashlib.sha256(repr(canonical_form(G)).encode()).hexdigest()[:10]


def canonicalize(G: DecoratedGraph) -> DecoratedGraph:
    """Deterministic representative: vertices ordered by level and label."""
    order = sorted(G.vertices, key=lambda v: (_vlabel(v), _nbr_key(G, v), v.id))
    remap = {v.id: i for i, v in enumerate(order)}
    verts = tuple(replace(v, id=remap[v.id]) for v in order)
    edges = sorted(
        (remap[e.ends[0]], remap[e.ends[1]], e.cls, e.d0, e.dinf) for e in G.edges
    )
    es = tuple(Edge(i, (a, b), c, d0, di) for i, (a, b, c, d0, di) in enumerate(edges))
    return replace(G, vertices=verts, edges=es, _cache={})


def _nbr_key(G: DecoratedGraph, v: Vertex) -> tuple:
    return tuple(sorted((_elabel(e), _vlabel(G.other_end(e, v.id))) for e in G.edges_at(v.id)))


# ---------------------------------------------------------------------------
# serialization

def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def serialize(G: DecoratedGraph) -> str:
    lines = [f"graph g={G.g} gamma={format_gamma(G.gamma)} d={_fmt(G.d0)},{_fmt(G.dinf)}"]
    for v in G.vertices:
        legs = ",".join(str(x) for x in v.legs)
        lines.append(f"v {v.id} level={v.level} g={v.genus} d={_fmt(v.d0)},{_fmt(v.dinf)} legs={legs}")
    for e in G.edges:
        lines.append(f"e {e.id} {e.ends[0]} {e.ends[1]} {e.cls} d={_fmt(e.d0)},{_fmt(e.dinf)}")
    return "\n".join(lines)


def deserialize(text: str) -> DecoratedGraph:
    header = None
    verts, edges = [], []
    for raw in text.strip().splitlines():
        parts = raw.split()
        if not parts:
            continue
        if parts[0] == "graph":
            kv = dict(p.split("=", 1) for p in parts[1:])
            d0, dinf = (Fraction(x) for x in kv["d"].split(","))
            header = (int(kv["g"]), parse_gamma(kv["gamma"]), d0, dinf)
        elif parts[0] == "v":
            kv = dict(p.split("=", 1) for p in parts[2:])
            d0, dinf = (Fraction(x) for x in kv["d"].split(","))
            legs = tuple(int(x) for x in kv["legs"].split(",") if x)
            verts.append(Vertex(int(parts[1]), kv["level"], int(kv["g"]), legs, d0, dinf))
        elif parts[0] == "e":
            d0, dinf = (Fraction(x) for x in parts[5].split("=", 1)[1].split(","))
            edges.append(Edge(int(parts[1]), (int(parts[2]), int(parts[3])), parts[4], d0, dinf))
        else:
            raise GraphError(f"bad graph line {raw!r}")
    if header is None:
        raise GraphError("missing graph header")
    g, gamma, d0, dinf = header
    return DecoratedGraph(g, gamma, d0, dinf, tuple(verts), tuple(edges))


# ---------------------------------------------------------------------------
# enumeration

@dataclass
class EnumerationResult:
    graphs: list[DecoratedGraph]
    e0inf: list[DecoratedGraph] = field(default_factory=list)
    irregular: int = 0
    loops: list[DecoratedGraph] = field(default_factory=list)


@dataclass(frozen=True, order=True)
class _Outer:
    level: str
    genus: int
    d: int
    legs: tuple[int, ...]
    stubs: tuple[int, ...]  # E0: degrees; inf: q = -5 d_e


def single_vertex_graph(g: int, gamma: Sequence[Monodromy], level: str, d0=0) -> DecoratedGraph:
    gamma = tuple(gamma)
    legs = tuple(range(len(gamma)))
    dinf = Fraction(-(2 * g - 2 + len(gamma)), 5) if level == "inf" else Fraction(0)
    v = Vertex(0, level, g, legs, Fraction(d0), dinf)
    return DecoratedGraph(g, gamma, Fraction(d0), dinf, (v,), ())


def star_graph(g: int, k: int, q: int = 2) -> DecoratedGraph:
    """One level-inf vertex of genus ``g`` joined by ``k`` edges of degree
    ``-q/5`` to unstable level-1 leaves."""
    centre = Vertex(0, "inf", g, (), 0, Fraction(-(2 * g - 2 + k), 5))
    leaves = [Vertex(i + 1, "1") for i in range(k)]
    edges = [Edge(i, (i + 1, 0), "Einf", 0, Fraction(q, 5)) for i in range(k)]
    dinf = centre.dinf + sum(e.dinf for e in edges)
    return DecoratedGraph(g, (), Fraction(0), dinf, (centre, *leaves), tuple(edges))


def _multisets(budget: int, min_part: int, max_part: int, weight=lambda q: q) -> Iterator[tuple[int, ...]]:
    """Non-increasing tuples of parts in [min_part, max_part] with total weight <= budget."""

    def rec(prefix: tuple[int, ...], left: int, cap: int) -> Iterator[tuple[int, ...]]:
        yield prefix
        for q in range(cap, min_part - 1, -1):
            w = weight(q)
            if w <= left:
                yield from rec(prefix + (q,), left - w, q)

    yield from rec((), budget, max_part)


def _subsets(items: Sequence[int]) -> Iterator[tuple[int, ...]]:
    for r in range(len(items) + 1):
        yield from combinations(items, r)


def _level0_protos(g: int, rho: Sequence[int], d0: int) -> list[_Outer]:
    out = []
    for gv in range(g + 1):
        for dv in range(d0 + 1):
            for legs in _subsets(rho):
                for stubs in _multisets(d0 - dv, 1, d0):
                    if not stubs:
                        continue
                    n = len(legs) + len(stubs)
                    stable = 2 * gv - 2 + n > 0 or dv > 0
                    if not stable and (gv or dv or (len(legs), len(stubs)) not in ((0, 1), (0, 2), (1, 1))):
                        continue
                    out.append(_Outer("0", gv, dv, tuple(legs), tuple(sorted(stubs))))
    return out


def _inf_protos(G_g: int, gamma, zeta: Sequence[int], fmax: int, kmax: int) -> list[_Outer]:
    out = []
    for gv in range(G_g + 1):
        for legs in _subsets(zeta):
            legm = [gamma[i].m for i in legs]
            for k1 in range(kmax + 1):
                for big in _multisets(fmax, 2, fmax + 1, weight=lambda q: q - 1):
                    stubs = tuple(sorted((1,) * k1 + big))
                    if not stubs:
                        continue
                    n = len(stubs) + len(legs)
                    if 2 * gv - 2 + n > 0:
                        ms = [q % 5 for q in stubs] + legm
                        if any(m == 0 for m in ms):
                            continue
                        if (2 * gv - 2 + n - sum(ms)) % 5:
                            continue
                        if not (all(m in (1, 2) for m in ms) or (gv == 0 and _is_exceptional(ms))):
                            continue
                        out.append(_Outer("inf", gv, 0, tuple(legs), stubs))
                    elif gv == 0:
                        if len(legs) == 0 and len(stubs) == 1 and stubs[0] % 5 == 0:
                            out.append(_Outer("inf", 0, 0, (), stubs))
                        elif len(legs) == 1 and len(stubs) == 1 and stubs[0] % 5:
                            if legm[0] == (-stubs[0]) % 5:
                                out.append(_Outer("inf", 0, 0, tuple(legs), stubs))
                        elif len(legs) == 0 and len(stubs) == 2:
                            a, b = stubs
                            if a % 5 and b % 5 and (a + b) % 5 == 0:
                                out.append(_Outer("inf", 0, 0, (), stubs))
    return out


def _inf_cost(p: _Outer) -> int:
    n = len(p.stubs) + len(p.legs)
    if 2 * p.genus - 2 + n > 0:
        return -(2 * p.genus - 2 + n) + sum(p.stubs)
    return sum(p.stubs)


def _chi(p: _Outer) -> int:
    return 2 * p.genus - 2 + len(p.stubs) + len(p.legs)


def _combos(protos: list[_Outer], ok, state0, step) -> Iterator[tuple[_Outer, ...]]:
    """Non-decreasing sequences of prototypes accepted by ``ok`` (multisets)."""

    def rec(start: int, chosen: tuple, state) -> Iterator[tuple]:
        if ok(state, final=True):
            yield chosen
        for i in range(start, len(protos)):
            nxt = step(state, protos[i])
            if nxt is None or not ok(nxt, final=False):
                continue
            yield from rec(i, chosen + (protos[i],), nxt)

    yield from rec(0, (), state0)


def _set_partitions(n: int) -> Iterator[list[int]]:
    """Restricted growth strings of length ``n``."""
    if n == 0:
        yield []
        return
    a = [0] * n

    def rec(i: int, m: int) -> Iterator[list[int]]:
        if i == n:
            yield list(a)
            return
        for b in range(m + 2):
            a[i] = b
            yield from rec(i + 1, max(m, b))

    yield from rec(1, 0)


def enumerate_report(
    g: int,
    gamma: Sequence[Monodromy],
    d0,
    dinf,
    *,
    max_candidates: int = 2_000_000,
) -> EnumerationResult:
    """Enumerate regular decorated graphs for the datum ``(g, gamma, (d0, dinf))``."""
    gamma = tuple(gamma)
    d0 = Fraction(d0)
    dinf = Fraction(dinf)
    if g < 0 or d0 < 0 or d0.denominator != 1 or (5 * dinf).denominator != 1:
        raise EnumerationBoundError("degrees must satisfy d0 in Z>=0 and 5*dinf in Z")
    D0 = int(d0)
    R = int(5 * dinf)
    rho = [i for i, m in enumerate(gamma) if m.kind == "rho"]
    phi = [i for i, m in enumerate(gamma) if m.kind == "phi"]
    zeta = [i for i, m in enumerate(gamma) if m.kind == "zeta"]
    ell = len(gamma)
    chitot = 2 * g - 2 + ell
    fmax = R + 2 * g + len(zeta)
    result = EnumerationResult([])
    seen: dict[tuple, DecoratedGraph] = {}
    seen_e0inf: dict[tuple, DecoratedGraph] = {}
    budget = [max_candidates]

    def consider(G: DecoratedGraph) -> None:
        budget[0] -= 1
        if budget[0] < 0:
            raise EnumerationBoundError(f"search space exceeds {max_candidates} candidates")
        try:
            validate(G)
        except GraphError:
            return
        if not is_regular(G):
            result.irregular += 1
            return
        if not is_flat(G):
            F = flatten(G)
            seen_e0inf.setdefault(canonical_form(F), F)
            return
        key = canonical_form(G)
        if key not in seen:
            seen[key] = canonicalize(G)

    # single-vertex graphs
    for level in LEVELS:
        if level == "0" and zeta:
            continue
        if level == "1" and (zeta or D0 or R):
            continue
        if level == "inf" and (rho or D0):
            continue
        if level == "0" and (phi or R):
            continue
        try:
            G = single_vertex_graph(g, gamma, level, D0 if level == "0" else 0)
        except GraphError:
            continue
        if G.dinf == dinf:
            consider(G)

    # x = chi_inf - #{stubs with q >= 2} is at most chitot + 2*d0 at the end,
    # and each unit of unused free cost can lower it by at most one
    xfinal = chitot + 2 * D0
    kmax = max(0, xfinal + fmax + 2)
    p0 = _level0_protos(g, rho, D0)
    pinf = _inf_protos(g, gamma, zeta, fmax, kmax)

    def ok0(state, final):
        deg, gen, legs = state
        if deg > D0 or gen > g:
            return False
        return deg == D0 if final else True

    def step0(state, p):
        deg, gen, legs = state
        if set(p.legs) & legs:
            return None
        return (deg + p.d + sum(p.stubs), gen + p.genus, legs | set(p.legs))

    def okinf(state, final):
        cost, free, gen, legs, x = state
        if free > fmax or gen > g or x > xfinal + (fmax - free):
            return False
        return cost == R and x <= xfinal if final else True

    def stepinf(state, p):
        cost, free, gen, legs, x = state
        if set(p.legs) & legs:
            return None
        c = _inf_cost(p)
        stable = 2 * p.genus - 2 + len(p.stubs) + len(p.legs) > 0
        fr = sum(q - 1 for q in p.stubs) if stable else sum(p.stubs)
        nbig = sum(1 for q in p.stubs if q >= 2)
        return (cost + c, free + fr, gen + p.genus, legs | set(p.legs), x + _chi(p) - nbig)

    configs0 = list(_combos(p0, ok0, (0, 0, frozenset()), step0))
    configsinf = list(_combos(pinf, okinf, (0, 0, 0, frozenset(), 0), stepinf))

    for c0 in configs0:
        legs0 = {x for p in c0 for x in p.legs}
        gen0 = sum(p.genus for p in c0)
        for ci in configsinf:
            if not c0 and not ci:
                continue
            legsi = {x for p in ci for x in p.legs}
            geni = sum(p.genus for p in ci)
            if gen0 + geni > g:
                continue
            if set(zeta) - legsi:
                continue
            rest_legs = [x for x in range(ell) if x not in legs0 and x not in legsi]
            if any(gamma[x].kind == "zeta" for x in rest_legs):
                continue
            _phase_b(g, gamma, d0, dinf, c0, ci, rest_legs, g - gen0 - geni, consider)

    result.graphs = [seen[k] for k in sorted(seen, key=repr)]
    result.e0inf = [seen_e0inf[k] for k in sorted(seen_e0inf, key=repr)]
    return result


def _phase_b(g, gamma, d0, dinf, c0, ci, rest_legs, gen_left, consider) -> None:
    outer = [("0", p) for p in c0] + [("inf", p) for p in ci]
    stubs = []  # (outer index, cls, value)
    for idx, (lvl, p) in enumerate(outer):
        for q in p.stubs:
            stubs.append((idx, "E0" if lvl == "0" else "Einf", q))
    nst = len(stubs)
    if nst == 0:
        return
    inf_unstable = {
        idx for idx, (lvl, p) in enumerate(outer)
        if lvl == "inf" and 2 * p.genus - 2 + len(p.stubs) + len(p.legs) <= 0
    }
    for rgs in _set_partitions(nst):
        # identical stubs are interchangeable: keep non-decreasing labels
        if any(stubs[i] == stubs[i + 1] and rgs[i] > rgs[i + 1] for i in range(nst - 1)):
            continue
        nb = max(rgs) + 1
        blocks = [[i for i in range(nst) if rgs[i] == b] for b in range(nb)]
        V = len(outer) + nb
        h1 = nst - V + 1
        gsum = gen_left - h1
        if h1 < 0 or gsum < 0:
            continue
        # a bare single-stub block is an unstable leaf; rho must still vanish there
        bad = False
        for blk in blocks:
            if len(blk) == 1:
                idx, cls, q = stubs[blk[0]]
                if cls == "Einf" and q - 1 - (1 if idx in inf_unstable and q % 5 == 0 else 0) < 1:
                    if not rest_legs and gsum == 0:
                        bad = True
                        break
        if bad:
            continue
        for genera in _compositions(gsum, nb):
            for assign in product(range(nb), repeat=len(rest_legs)):
                legs_of = [tuple(x for x, b in zip(rest_legs, assign) if b == k) for k in range(nb)]
                G = _build(g, gamma, d0, dinf, outer, stubs, blocks, genera, legs_of)
                if G is not None:
                    consider(G)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _build(g, gamma, d0, dinf, outer, stubs, blocks, genera, legs_of) -> DecoratedGraph | None:
    verts = []
    for idx, (lvl, p) in enumerate(outer):
        if lvl == "0":
            verts.append(Vertex(idx, "0", p.genus, p.legs, Fraction(p.d), Fraction(0)))
        else:
            n = len(p.stubs) + len(p.legs)
            chi = 2 * p.genus - 2 + n
            di = Fraction(-chi, 5) if chi > 0 else Fraction(0)
            verts.append(Vertex(idx, "inf", p.genus, p.legs, Fraction(0), di))
    base = len(outer)
    for k, blk in enumerate(blocks):
        n = len(blk) + len(legs_of[k])
        chi = 2 * genera[k] - 2 + n
        if chi <= 0 and (genera[k] or (len(legs_of[k]), len(blk)) not in ((0, 1), (0, 2), (1, 1))):
            return None
        verts.append(Vertex(base + k, "1", genera[k], legs_of[k], Fraction(0), Fraction(0)))
    edges = []
    where = {}
    for k, blk in enumerate(blocks):
        for i in blk:
            where[i] = base + k
    for i, (idx, cls, q) in enumerate(stubs):
        if cls == "E0":
            edges.append(Edge(i, (idx, where[i]), "E0", Fraction(q), Fraction(0)))
        else:
            edges.append(Edge(i, (where[i], idx), "Einf", Fraction(0), Fraction(q, 5)))
    return DecoratedGraph(g, tuple(gamma), d0, dinf, tuple(verts), tuple(edges))


def enumerate_graphs(g: int, gamma: Sequence[Monodromy], d0, dinf) -> list[DecoratedGraph]:
    """Duplicate-free list of regular flat graphs without ``E0inf`` edges."""
    return enumerate_report(g, gamma, d0, dinf).graphs
