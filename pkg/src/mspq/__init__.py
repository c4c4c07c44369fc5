"""Exact MSP localization engine for quintic Gromov-Witten and FJRW invariants."""

from .algebra import ClassExpr, RatFuncT, SymPoly, laurent_coeff
from .contrib import GraphContribution, graph_contribution, msp_vdim
from .correlators import Correlator, gw_primary, theta
from .graphs import DecoratedGraph, Edge, Monodromy, Vertex, enumerate_graphs, parse_gamma
from .relations import KnowledgeBase, Relation, build_relation, resolve, solve_for

__all__ = [
    "ClassExpr",
    "RatFuncT",
    "SymPoly",
    "laurent_coeff",
    "GraphContribution",
    "graph_contribution",
    "msp_vdim",
    "Correlator",
    "gw_primary",
    "theta",
    "DecoratedGraph",
    "Edge",
    "Monodromy",
    "Vertex",
    "enumerate_graphs",
    "parse_gamma",
    "KnowledgeBase",
    "Relation",
    "build_relation",
    "resolve",
    "solve_for",
]
