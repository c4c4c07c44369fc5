"""Quintic Gromov-Witten descendants and their reduction to primary invariants.

A descendant ``<prod tau_{a_i}(h^{k_i})>_{g,d}`` with ``d > 0`` is reduced with
the string, dilaton and divisor equations until no markings remain, leaving a
rational multiple of the unmarked invariant ``N_{g,d} = <>_{g,d}``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .algebra import RatFuncT, SymPoly
from .correlators import Correlator, gw_primary

__all__ = ["GWError", "GWCorrelator", "gw_reduce", "gw_vertex_value"]

H_TOP = 3  # h^4 = 0 on the quintic threefold

GWCorrelator = Correlator


class GWError(ValueError):
    pass


def gw_reduce(g: int, d: int, insertions: Sequence[tuple[int, int]]) -> dict[Correlator, Fraction]:
    """Reduce ``<prod tau_a(h^k)>_{g,d}`` (``d > 0``) to primary invariants.

    Returns a map ``N_{g,d} -> coefficient`` (empty when the descendant vanishes).
    """
    if d <= 0:
        raise GWError("descendant reduction needs positive degree")
    if g < 0:
        raise GWError("negative genus")
    ins = tuple(sorted((int(a), int(k)) for a, k in insertions))
    if any(a < 0 or k < 0 for a, k in ins):
        raise GWError("negative insertion exponent")
    c = _reduce(g, d, ins)
    return {gw_primary(g, d): c} if c else {}


@lru_cache(maxsize=None)
def _reduce(g: int, d: int, ins: tuple[tuple[int, int], ...]) -> Fraction:
    if any(k > H_TOP for _, k in ins):
        return Fraction(0)
    n = len(ins)
    if sum(a + k for a, k in ins) != n:
        return Fraction(0)
    if n == 0:
        return Fraction(1)
    # string
    if (0, 0) in ins:
        i = ins.index((0, 0))
        rest = ins[:i] + ins[i + 1:]
        total = Fraction(0)
        for j, (a, k) in enumerate(rest):
            if a:
                total += _reduce(g, d, _swap(rest, j, (a - 1, k)))
        return total
    # dilaton
    if (1, 0) in ins:
        i = ins.index((1, 0))
        rest = ins[:i] + ins[i + 1:]
        return (2 * g - 2 + n - 1) * _reduce(g, d, rest)
    # divisor
    if (0, 1) in ins:
        i = ins.index((0, 1))
        rest = ins[:i] + ins[i + 1:]
        total = d * _reduce(g, d, rest)
        for j, (a, k) in enumerate(rest):
            if a:
                total += _reduce(g, d, _swap(rest, j, (a - 1, k + 1)))
        return total
    raise GWError(f"irreducible descendant {ins}")  # excluded by the dimension count


def _swap(ins: tuple, j: int, new: tuple[int, int]) -> tuple:
    return tuple(sorted(ins[:j] + (new,) + ins[j + 1:]))


def gw_vertex_value(g: int, d: int, insertions: Sequence[tuple[int, int]]) -> SymPoly:
    """Value of a level-0 vertex integrand monomial with ``d > 0``.

    The twisted invariant carrying ``prod psi^a ev^* h^k`` equals
    ``(-1)^{d+1-g} t^{-(d+1-g)}`` times the quintic descendant.
    """
    out = SymPoly()
    e = d + 1 - g
    for key, c in gw_reduce(g, d, insertions).items():
        out = out + SymPoly.symbol(key, RatFuncT.monomial(c * (-1) ** (e % 2), -e))
    return out
