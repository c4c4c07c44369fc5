"""Command-line interface.

Usage examples::

    python -m mspq enumerate g=1 gamma=rho d=0,0
    python -m mspq eval g=1 gamma= d=1,0 --kb base.kb
    python -m mspq relation g=1 gamma= d=1,0 --kb base.kb
    python -m mspq solve g=1 gamma= d=1,0 --for "GW(g=1,d=1)"
    python -m mspq kb show --kb base.kb
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import format_rat, parse_rat
from .contrib import ContributionError, GraphContribution, graph_contribution, msp_vdim
from .correlators import Correlator, CorrelatorKeyError
from .graphs import (
    DecoratedGraph,
    EnumerationBoundError,
    GraphError,
    Monodromy,
    automorphism_order,
    classify_vertex,
    enumerate_report,
    format_gamma,
    graph_id,
    parse_gamma,
)
from .relations import (
    DegenerateRelation,
    KnowledgeBase,
    MissingPrerequisites,
    RelationError,
    UnsupportedDatum,
    build_relation,
    resolve,
    solve_for,
    vdim_is_validated,
)

__all__ = ["RunConfig", "ConfigError", "main", "EXIT_CODES"]

EXIT_CODES = {
    "ok": 0,
    "usage": 2,
    "kb": 3,
    "enumeration": 4,
    "evaluation": 5,
    "solve": 6,
}


class ConfigError(ValueError):
    pass


class _Failure(Exception):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


@dataclass
class RunConfig:
    command: str
    g: int = 0
    gamma: tuple[Monodromy, ...] = ()
    d0: Fraction = Fraction(0)
    dinf: Fraction = Fraction(0)
    kb_path: str | None = None
    fmt: str = "table"
    graph: str | None = None
    delta: Fraction | None = None
    target: str | None = None
    kb_action: tuple[str, ...] = ()

    @property
    def datum(self) -> str:
        return f"g={self.g} gamma={format_gamma(self.gamma)} d={format_rat(self.d0)},{format_rat(self.dinf)}"


def parse_datum(tokens: Sequence[str]) -> tuple[int, tuple[Monodromy, ...], Fraction, Fraction]:
    """Parse ``g=<int> gamma=<tokens> d=<p/q>,<p/q>``."""
    fields: dict[str, str] = {}
    for tok in tokens:
        if "=" not in tok:
            raise ConfigError(f"expected key=value, got {tok!r}")
        k, v = tok.split("=", 1)
        if k not in ("g", "gamma", "d"):
            raise ConfigError(f"unknown datum field {k!r}")
        fields[k] = v
    if "g" not in fields or "d" not in fields:
        raise ConfigError("datum needs g= and d=")
    try:
        g = int(fields["g"])
        gamma = parse_gamma(fields.get("gamma", ""))
        parts = fields["d"].split(",")
        if len(parts) != 2:
            raise ConfigError("d= needs two comma-separated degrees")
        d0, dinf = (parse_rat(p) for p in parts)
    except (GraphError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    return g, gamma, d0, dinf


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mspq", description="MSP localization engine for the quintic")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, kb=True):
        sp.add_argument("datum", nargs="+", help="g=<int> gamma=<z1..z4,rho,phi list> d=<d0>,<dinf>")
        sp.add_argument("--format", choices=("table", "record"), default="table")
        if kb:
            sp.add_argument("--kb", help="knowledge-base file")

    sp = sub.add_parser("enumerate", help="list regular graphs")
    common(sp, kb=False)
    sp.add_argument("--graph", help="only the graph with this id")
    sp = sub.add_parser("eval", help="per-graph contributions")
    common(sp)
    sp.add_argument("--graph", help="only the graph with this id")
    sp.add_argument("--delta", help="override the virtual dimension")
    sp = sub.add_parser("relation", help="the vanishing relation")
    common(sp)
    sp.add_argument("--delta", help="override the virtual dimension")
    sp = sub.add_parser("solve", help="solve the relation for one unknown")
    common(sp)
    sp.add_argument("--for", dest="target", required=True, help="correlator key, e.g. GW(g=1,d=1)")
    sp = sub.add_parser("kb", help="show or edit a knowledge base")
    sp.add_argument("action", nargs="+", help="show | set <key> <p/q>")
    sp.add_argument("--kb", required=True)
    sp.add_argument("--format", choices=("table", "record"), default="table")
    return p


def build_config(argv: Sequence[str]) -> RunConfig:
    ns = _parser().parse_args(list(argv))
    cfg = RunConfig(ns.command, kb_path=getattr(ns, "kb", None), fmt=ns.format)
    if ns.command == "kb":
        cfg.kb_action = tuple(ns.action)
        return cfg
    cfg.g, cfg.gamma, cfg.d0, cfg.dinf = parse_datum(ns.datum)
    cfg.graph = getattr(ns, "graph", None)
    delta = getattr(ns, "delta", None)
    if delta is not None:
        try:
            cfg.delta = parse_rat(delta)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    cfg.target = getattr(ns, "target", None)
    return cfg


# ---------------------------------------------------------------------------
# rendering

def _vertex_str(G: DecoratedGraph, v) -> str:
    legs = ",".join(G.gamma[i].token() for i in v.legs)
    deg = f"{format_rat(v.d0)},{format_rat(v.dinf)}"
    return f"{v.id}:L{v.level}:g{v.genus}:d({deg}):{classify_vertex(G, v)}" + (f":[{legs}]" if legs else "")


def _edge_str(e) -> str:
    return f"{e.ends[0]}-{e.ends[1]}:{e.cls}:d={format_rat(e.d)}"


def _graph_record(G: DecoratedGraph) -> dict:
    return {
        "id": graph_id(G),
        "aut": automorphism_order(G),
        "vertices": [_vertex_str(G, v) for v in G.vertices],
        "edges": [_edge_str(e) for e in G.edges],
    }


def _contrib_str(c: GraphContribution) -> str:
    parts = [format_rat(c.constant)]
    for keys, coeff in sorted(c.terms.items(), key=lambda kv: [k.key() for k in kv[0]]):
        parts.append(f"{format_rat(coeff)} * " + " * ".join(k.key() for k in keys))
    return " + ".join(parts)


def _emit(out, cfg: RunConfig, record: dict, line: str) -> None:
    if cfg.fmt == "record":
        out.write(json.dumps(record, sort_keys=True) + "\n")
    else:
        out.write(line + "\n")


# ---------------------------------------------------------------------------
# commands

def _load_kb(cfg: RunConfig) -> KnowledgeBase:
    try:
        return KnowledgeBase(cfg.kb_path)
    except (OSError, RelationError) as exc:
        raise _Failure("kb", f"unreadable kb {cfg.kb_path}: {exc}") from None


def _graphs(cfg: RunConfig) -> list[DecoratedGraph]:
    try:
        rep = enumerate_report(cfg.g, cfg.gamma, cfg.d0, cfg.dinf)
    except (EnumerationBoundError, GraphError) as exc:
        raise _Failure("enumeration", str(exc)) from None
    graphs = rep.graphs
    if cfg.graph is not None:
        graphs = [G for G in graphs if graph_id(G) == cfg.graph]
        if not graphs:
            raise _Failure("enumeration", f"no graph with id {cfg.graph}")
    return graphs


def _warn_vdim(cfg: RunConfig, err) -> None:
    if cfg.delta is None and not vdim_is_validated(cfg.gamma):
        err.write(f"warning\tvdim\tdimension formula not validated for gamma={format_gamma(cfg.gamma)}\n")


def _check_delta(cfg: RunConfig) -> None:
    d = cfg.delta
    if d is not None and (d.denominator != 1 or d <= 0):
        raise _Failure("evaluation", f"virtual dimension {d} is not a positive integer")


def cmd_enumerate(cfg: RunConfig, out, err) -> None:
    graphs = _graphs(cfg)
    if cfg.fmt == "table":
        out.write(f"datum {cfg.datum} graphs={len(graphs)}\n")
    for G in graphs:
        rec = _graph_record(G)
        line = f"{rec['id']}  aut={rec['aut']}  V[{' '.join(rec['vertices'])}]  E[{' '.join(rec['edges'])}]"
        _emit(out, cfg, rec, line)


def cmd_eval(cfg: RunConfig, out, err) -> None:
    kb = _load_kb(cfg)
    _warn_vdim(cfg, err)
    _check_delta(cfg)
    graphs = _graphs(cfg)
    delta = cfg.delta if cfg.delta is not None else msp_vdim(cfg.g, cfg.gamma, cfg.d0, cfg.dinf)
    for G in graphs:
        try:
            c = graph_contribution(G, kb, delta)
        except (ContributionError, ValueError) as exc:
            raise _Failure("evaluation", f"graph {graph_id(G)}: {exc}") from None
        text = _contrib_str(c)
        rec = {"id": graph_id(G), "contribution": text}
        _emit(out, cfg, rec, f"{graph_id(G)}  {text}")


def cmd_relation(cfg: RunConfig, out, err) -> None:
    kb = _load_kb(cfg)
    _warn_vdim(cfg, err)
    _check_delta(cfg)
    try:
        rel = build_relation(cfg.g, cfg.gamma, cfg.d0, cfg.dinf, kb, delta=cfg.delta)
    except UnsupportedDatum as exc:
        raise _Failure("enumeration", str(exc)) from None
    except (EnumerationBoundError, GraphError) as exc:
        raise _Failure("enumeration", str(exc)) from None
    except RelationError as exc:
        raise _Failure("evaluation", str(exc)) from None
    _emit(out, cfg, {"datum": cfg.datum, "relation": rel.render()}, rel.render())


def cmd_solve(cfg: RunConfig, out, err) -> None:
    kb = _load_kb(cfg)
    try:
        target = Correlator.parse(cfg.target or "")
    except CorrelatorKeyError as exc:
        raise ConfigError(str(exc)) from None
    try:
        rel = build_relation(cfg.g, cfg.gamma, cfg.d0, cfg.dinf, kb)
    except (UnsupportedDatum, EnumerationBoundError, GraphError) as exc:
        raise _Failure("enumeration", str(exc)) from None
    except RelationError as exc:
        raise _Failure("evaluation", str(exc)) from None
    if target not in kb and target not in rel.unknowns():
        raise _Failure("solve", f"{target.key()} does not occur in the relation for {cfg.datum}")
    try:
        # prerequisites of the requested datum are resolved from auxiliary data
        if target in kb:
            value = kb.get(target)
        else:
            for blocker in sorted(rel.unknowns() - {target}):
                resolve(blocker, kb)
            value = solve_for(rel, target, kb)
    except (DegenerateRelation, MissingPrerequisites) as exc:
        raise _Failure("solve", str(exc)) from None
    except RelationError as exc:
        raise _Failure("solve", str(exc)) from None
    if cfg.kb_path is not None:
        try:
            kb.save(cfg.kb_path)
        except OSError as exc:
            raise _Failure("kb", f"cannot write kb {cfg.kb_path}: {exc}") from None
    _emit(out, cfg, {"key": target.key(), "value": format_rat(value)}, format_rat(value))


def cmd_kb(cfg: RunConfig, out, err) -> None:
    kb = _load_kb(cfg)
    action = cfg.kb_action
    if action[0] == "show" and len(action) == 1:
        for key in sorted(kb.entries, key=lambda k: (k.kb_kind, k.key())):
            value, prov = kb.entries[key]
            rec = {"kind": key.kb_kind, "key": key.key(), "value": format_rat(value), "provenance": prov}
            _emit(out, cfg, rec, f"{key.key()} = {format_rat(value)}  [{prov}]")
        return
    if action[0] == "set" and len(action) == 3:
        try:
            key = Correlator.parse(action[1])
            value = parse_rat(action[2])
        except (CorrelatorKeyError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        try:
            kb.set(key, value, "user")
            kb.save(cfg.kb_path)
        except (OSError, RelationError) as exc:
            raise _Failure("kb", str(exc)) from None
        _emit(out, cfg, {"key": key.key(), "value": format_rat(value)}, f"{key.key()} = {format_rat(value)}")
        return
    raise ConfigError("kb action must be 'show' or 'set <key> <p/q>'")


COMMANDS = {
    "enumerate": cmd_enumerate,
    "eval": cmd_eval,
    "relation": cmd_relation,
    "solve": cmd_solve,
    "kb": cmd_kb,
}


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        cfg = build_config(argv)
        COMMANDS[cfg.command](cfg, out, err)
    except SystemExit as exc:
        return int(exc.code or 0)
    except ConfigError as exc:
        err.write(f"error\tusage\t{exc}\n")
        return EXIT_CODES["usage"]
    except _Failure as exc:
        err.write(f"error\t{exc.kind}\t{exc}\n")
        return EXIT_CODES[exc.kind]
    return EXIT_CODES["ok"]


if __name__ == "__main__":
    raise SystemExit(main())
