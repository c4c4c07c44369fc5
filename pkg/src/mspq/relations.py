"""Vanishing relations, the knowledge base and the induction drivers."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .algebra import format_rat, parse_rat
from .contrib import ContributionError, GraphContribution, graph_contribution, msp_vdim
from .correlators import Correlator, CorrelatorKeyError, gw_primary, theta
from .graphs import DecoratedGraph, Monodromy, enumerate_report, format_gamma, graph_id, parse_gamma

__all__ = [
    "RelationError",
    "DegenerateRelation",
    "MissingPrerequisites",
    "UnsupportedDatum",
    "KnowledgeBase",
    "Relation",
    "msp_vdim",
    "vdim_is_validated",
    "build_relation",
    "solve_for",
    "resolve",
    "run_induction_gw",
    "run_induction_fjrw",
]


class RelationError(ValueError):
    pass


class DegenerateRelation(RelationError):
    pass


class UnsupportedDatum(RelationError):
    pass


class MissingPrerequisites(RelationError):
    def __init__(self, target: Correlator | None, missing: Iterable[Correlator]):
        self.target = target
        self.missing = sorted(set(missing))
        names = ", ".join(k.key() for k in self.missing)
        what = f" for {target.key()}" if target is not None else ""
        super().__init__(f"missing prerequisites{what}: {names}")


# ---------------------------------------------------------------------------
# knowledge base

_KINDS = ("GW", "FJRW", "DTW-bracket")


class KnowledgeBase:
    """Exact values of correlators with provenance, stored one per line as
    ``kind<TAB>key<TAB>p/q<TAB>provenance``."""

    def __init__(self, path: str | os.PathLike | None = None, *, seed: bool = True):
        self.path = path
        self.entries: dict[Correlator, tuple[Fraction, str]] = {}
        if seed:
            self.entries[theta(1, 0)] = (Fraction(1), "seed")
        if path is not None and os.path.exists(path):
            with open(path, encoding="utf-8") as fh:
                self.loads(fh.read())

    def __contains__(self, key: Correlator) -> bool:
        return key in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, key: Correlator) -> Fraction | None:
        item = self.entries.get(key)
        return None if item is None else item[0]

    def values(self) -> dict[Correlator, Fraction]:
        return {k: v for k, (v, _) in self.entries.items()}

    def set(self, key: Correlator, value, provenance: str) -> None:
        value = Fraction(value)
        old = self.entries.get(key)
        if old is not None and old[0] != value:
            raise RelationError(f"conflicting value for {key.key()}: {old[0]} vs {value}")
        if old is None or old[1] != "seed":
            self.entries[key] = (value, provenance)

    def dumps(self) -> str:
        lines = []
        for key in sorted(self.entries, key=lambda k: (k.kb_kind, k.key())):
            value, prov = self.entries[key]
            lines.append(f"{key.kb_kind}\t{key.key()}\t{format_rat(value)}\t{prov}")
        return "".join(line + "\n" for line in lines)

    def loads(self, text: str) -> None:
        for n, line in enumerate(text.splitlines(), start=1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise RelationError(f"kb line {n}: expected 4 tab-separated fields")
            kind, key, value, prov = parts
            try:
                corr = Correlator.parse(key)
                val = parse_rat(value)
            except (CorrelatorKeyError, ValueError) as exc:
                raise RelationError(f"kb line {n}: {exc}") from None
            if kind not in _KINDS or corr.kb_kind != kind:
                raise RelationError(f"kb line {n}: kind {kind!r} does not match key {key!r}")
            self.set(corr, val, prov)

    def save(self, path: str | os.PathLike | None = None) -> None:
        path = path if path is not None else self.path
        if path is None:
            raise RelationError("knowledge base has no file path")
        tmp = f"{path}.tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(self.dumps())
        os.replace(tmp, path)


# ---------------------------------------------------------------------------
# relations

Monomial = tuple[Correlator, ...]


@dataclass
class Relation:
    """``constant + sum coeff * prod(keys) = 0``."""

    g: int
    gamma: tuple[Monodromy, ...]
    d0: Fraction
    dinf: Fraction
    constant: Fraction = Fraction(0)
    terms: dict[Monomial, Fraction] = field(default_factory=dict)

    @property
    def datum(self) -> str:
        return f"g={self.g} gamma={format_gamma(self.gamma)} d={format_rat(self.d0)},{format_rat(self.dinf)}"

    def unknowns(self) -> set[Correlator]:
        return {k for mono in self.terms for k in mono}

    def is_trivial(self) -> bool:
        return not self.terms and not self.constant

    def add(self, c: GraphContribution) -> None:
        self.constant += c.constant
        for mono, coeff in c.terms.items():
            v = self.terms.get(mono, Fraction(0)) + coeff
            if v:
                self.terms[mono] = v
            else:
                self.terms.pop(mono, None)

    def substitute(self, values: Mapping[Correlator, Fraction]) -> "Relation":
        out = Relation(self.g, self.gamma, self.d0, self.dinf, self.constant)
        for mono, coeff in self.terms.items():
            rest = []
            for k in mono:
                if k in values:
                    coeff *= values[k]
                else:
                    rest.append(k)
            if not rest:
                out.constant += coeff
            elif coeff:
                key = tuple(rest)
                v = out.terms.get(key, Fraction(0)) + coeff
                if v:
                    out.terms[key] = v
                else:
                    out.terms.pop(key, None)
        return out

    def residual(self, values: Mapping[Correlator, Fraction]) -> Fraction:
        r = self.substitute(values)
        if r.terms:
            raise MissingPrerequisites(None, r.unknowns())
        return r.constant

    def render(self) -> str:
        parts = [format_rat(self.constant)]
        for mono, c in sorted(self.terms.items(), key=lambda kv: [k.key() for k in kv[0]]):
            parts.append(f"{format_rat(c)} * " + " * ".join(k.key() for k in mono))
        return " + ".join(parts) + " = 0"


VALIDATED_KINDS = ("rho",)


def vdim_is_validated(gamma: Sequence[Monodromy]) -> bool:
    """True when every leg is of a kind for which the dimension count is established."""
    return all(m.kind in VALIDATED_KINDS for m in gamma)


def _datum_args(g, gamma, d0, dinf):
    if isinstance(gamma, str):
        gamma = parse_gamma(gamma)
    return int(g), tuple(gamma), Fraction(d0), Fraction(dinf)


def build_relation(g, gamma, d0, dinf, kb: KnowledgeBase | None = None, *, delta=None) -> Relation:
    """Sum of all regular-graph contributions for the datum, with kb values substituted."""
    g, gamma, d0, dinf = _datum_args(g, gamma, d0, dinf)
    if delta is None:
        delta = msp_vdim(g, gamma, d0, dinf)
    delta = Fraction(delta)
    if delta.denominator != 1 or delta <= 0:
        raise UnsupportedDatum(f"virtual dimension {delta} is not a positive integer")
    rep = enumerate_report(g, gamma, d0, dinf)
    if rep.e0inf:
        raise UnsupportedDatum(f"{len(rep.e0inf)} graph(s) need E0inf edge contributions")
    rel = Relation(g, gamma, d0, dinf)
    for G in rep.graphs:
        rel.add(_contribution(G, delta))
    if kb is not None:
        rel = rel.substitute(kb.values())
    return rel


def _contribution(G: DecoratedGraph, delta) -> GraphContribution:
    try:
        return graph_contribution(G, delta=delta)
    except (ContributionError, ValueError) as exc:
        raise RelationError(f"graph {graph_id(G)}: {exc}") from exc


def solve_for(rel: Relation, unknown: Correlator, kb: KnowledgeBase | None = None) -> Fraction:
    """Solve a relation whose only unresolved term is linear in ``unknown``."""
    r = rel.substitute(kb.values()) if kb is not None else rel
    coeff = Fraction(0)
    blockers: set[Correlator] = set()
    for mono, c in r.terms.items():
        if mono == (unknown,):
            coeff = c
        else:
            blockers.update(k for k in mono if k != unknown)
            if unknown in mono and all(k == unknown for k in mono):
                blockers.add(unknown)
    if blockers:
        raise MissingPrerequisites(unknown, blockers)
    if not coeff:
        raise DegenerateRelation(f"relation degenerate for unknown {unknown.key()}")
    value = -r.constant / coeff
    if kb is not None:
        kb.set(unknown, value, f"solved from {rel.datum}")
    return value


# ---------------------------------------------------------------------------
# automatic resolution of prerequisites

def _aux_data(key: Correlator) -> list[tuple]:
    """Candidate data whose relation determines ``key`` once smaller data are known."""
    rho = Monodromy("rho")
    if key.kind == "GW":
        return [(key.g, (), key.d, 0)]
    if key.kind == "FJRW":
        m, r = divmod(key.k - 7 * key.g + 2, 5)
        if r == 0 and m >= 0:
            return [(key.g, (), 0, key.g + m)]
        return []
    # dual-twisted brackets appear with all-rho data of the same genus
    n = len(key.insertions)
    return [(key.g, (rho,) * ell, 0, 0) for ell in range(max(n, 1), n + 2)]


def resolve(target: Correlator, kb: KnowledgeBase, *, depth: int = 3) -> Fraction:
    """Determine ``target`` by solving auxiliary relations, recursing on blockers."""
    if target in kb:
        return kb.get(target)
    last: RelationError | None = None
    for datum in _aux_data(target):
        try:
            rel = build_relation(*datum, kb)
        except RelationError as exc:
            last = exc
            continue
        if target not in rel.unknowns():
            continue
        for _ in range(depth + 1):
            try:
                return solve_for(rel, target, kb)
            except MissingPrerequisites as exc:
                last = exc
                if depth <= 0:
                    break
                progress = False
                for b in exc.missing:
                    if b == target:
                        continue
                    try:
                        resolve(b, kb, depth=depth - 1)
                        progress = True
                    except RelationError as inner:
                        last = inner
                if not progress:
                    break
                rel = rel.substitute(kb.values())
            except DegenerateRelation as exc:
                last = exc
                break
    if isinstance(last, RelationError):
        raise last
    raise MissingPrerequisites(target, [target])


# ---------------------------------------------------------------------------
# induction drivers

def run_induction_gw(g: int, d: int, kb: KnowledgeBase) -> Fraction:
    """Solve ``N_{g,d}`` from the datum ``(g, (), (d, 0))``."""
    target = gw_primary(g, d)
    rel = build_relation(g, (), d, 0, kb)
    return solve_for(rel, target, kb)


def run_induction_fjrw(g: int, k: int, kb: KnowledgeBase) -> Fraction:
    """Solve ``Theta_{g,k}`` with ``k = 7g - 2 + 5m`` from ``(g, (), (0, g + m))``."""
    m, r = divmod(k - 7 * g + 2, 5)
    if r or m < 0:
        raise UnsupportedDatum(f"k={k} is not of the form 7g-2+5m with m >= 0")
    target = theta(g, k)
    rel = build_relation(g, (), 0, g + m, kb)
    return solve_for(rel, target, kb)
