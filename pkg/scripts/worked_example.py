"""Solve the genus-one degree-one invariant from scratch and print each step."""

from __future__ import annotations

from mspq.correlators import dtw_bracket, gw_primary
from mspq.relations import KnowledgeBase, build_relation, solve_for


def main() -> None:
    kb = KnowledgeBase()
    rel = build_relation(1, "rho", 0, 0, kb)
    print(rel.datum, "::", rel.render())
    print("  ->", dtw_bracket(1, [(0, 1)]).key(), "=", solve_for(rel, dtw_bracket(1, [(0, 1)]), kb))
    rel = build_relation(1, "", 1, 0, kb)
    print(rel.datum, "::", rel.render())
    print("  ->", gw_primary(1, 1).key(), "=", solve_for(rel, gw_primary(1, 1), kb))
    print(kb.dumps(), end="")


if __name__ == "__main__":
    main()
