"""FJRW side: spin moduli dimensions, vanishing, GRR Chern characters and
dual-twisted brackets.

A dual-twisted bracket is

    <tau_{a_1}(zeta^{m_1}) ... >^{dt}_g
        = int_{[Mbar^{1/5}_{g,gamma}]^vir} prod psi_i^{a_i} / e_T(R pi_* L^vee (x) L_{-1}).

It is a monomial ``c * t^p`` with ``p = -rank - (vdim - sum a)``.  When
``sum a = vdim`` only the degree-0 part of the inverse Euler class pairs with
the cycle, so ``c`` follows from the virtual cycle alone; otherwise the
bracket stays symbolic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Sequence, Union

from .algebra import ClassExpr, Factor, NilGen, RatFuncT, Space, SymPoly
from .correlators import Correlator, dtw_bracket, theta
from .taut import bernoulli_number, psi_integral

__all__ = [
    "FJRWError",
    "EMPTY",
    "SpinDatum",
    "fjrw_vdim",
    "fjrw_vanishes",
    "fjrw_rank",
    "bernoulli_poly",
    "bernoulli_eval",
    "grr_chern_character",
    "grr_space",
    "euler_from_ch",
    "exceptional_degree",
    "genus_one_components",
    "genus_one_psi",
    "virtual_psi_integral",
    "dual_twisted_reduce",
    "bracket_t_power",
]

EMPTY = "empty"


class FJRWError(ValueError):
    """Unsupported sector or malformed spin datum."""


@dataclass(frozen=True)
class SpinDatum:
    """Genus and narrow monodromy exponents ``m_i`` (``zeta_5^{m_i}``)."""

    g: int
    ms: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "ms", tuple(self.ms))
        if self.g < 0:
            raise FJRWError("negative genus")
        for m in self.ms:
            if m not in (1, 2, 3, 4):
                raise FJRWError(f"broad or invalid sector m={m}: unsupported sector")

    @property
    def k(self) -> int:
        return sum(1 for m in self.ms if m == 2)

    @property
    def ell(self) -> int:
        return len(self.ms)


def fjrw_vdim(d: SpinDatum) -> Union[int, str]:
    """Virtual dimension, or ``EMPTY`` when the degree condition fails."""
    if (2 * d.g - 2 - sum(m - 1 for m in d.ms)) % 5:
        return EMPTY
    return sum(2 - m for m in d.ms)


def _exceptional(ms: Sequence[int]) -> bool:
    ms = sorted(ms)
    ones = ms.count(1)
    if ms.count(4) == 1 and ones >= 2 and ones + 1 == len(ms):
        return True
    return ms.count(2) == 1 and ms.count(3) == 1 and ones >= 1 and ones + 2 == len(ms)


def fjrw_vanishes(d: SpinDatum) -> bool:
    """True unless the virtual cycle can be nonzero."""
    if fjrw_vdim(d) == EMPTY:
        return True
    if d.g >= 1:
        return not all(m in (1, 2) for m in d.ms)
    return not _exceptional(d.ms)


def fjrw_rank(d: SpinDatum) -> int:
    """Rank of ``R pi_* L^vee`` (Riemann-Roch on the orbifold curve)."""
    r = Fraction(-(2 * d.g - 2 + d.ell), 5) + 1 - d.g - Fraction(sum(5 - m for m in d.ms), 5)
    if r.denominator != 1:
        raise FJRWError(f"non-integral rank for {d}")
    return int(r)


def bracket_t_power(d: SpinDatum, exps: Sequence[int]) -> int:
    vdim = fjrw_vdim(d)
    if vdim == EMPTY:
        raise FJRWError("empty moduli")
    return -fjrw_rank(d) - (vdim - sum(exps))


# ---------------------------------------------------------------------------
# Bernoulli polynomials and GRR

@lru_cache(maxsize=None)
def bernoulli_poly(m: int) -> tuple[Fraction, ...]:
    """Coefficients of ``B_m(x) = sum_k C(m,k) B_k x^{m-k}``, index = power of x."""
    coeffs = [Fraction(0)] * (m + 1)
    for k in range(m + 1):
        coeffs[m - k] += comb(m, k) * bernoulli_number(k)
    return tuple(coeffs)


def bernoulli_eval(m: int, x) -> Fraction:
    x = Fraction(x)
    return sum((c * x**i for i, c in enumerate(bernoulli_poly(m))), Fraction(0))


def grr_space(d: SpinDatum, h: int) -> Space:
    """Ambient space for the degree-``h`` Chern character on the spin moduli."""
    budget = max(3 * d.g - 3 + d.ell, h)
    gens = [NilGen(f"kappa{h}", h, "spin")]
    gens += [NilGen(f"psibar{i}", 1, "spin") for i in range(d.ell)]
    gens += [NilGen(f"bdry{k}_{h}", h, "spin") for k in range(5)]
    return Space([Factor("spin", budget, tuple(gens))])


def grr_chern_character(d: SpinDatum, h: int) -> ClassExpr:
    """``ch_h(R pi_* L^vee)`` in kappa, coarse psi and boundary classes.

    ``bdry{k}_{h}`` stands for the pushforward from the boundary stratum whose
    node has multiplicity ``k`` of ``sum_{a+b=h-1} (-psibar)^a psibar'^b``.
    """
    if h < 1:
        raise FJRWError("Chern character degree must be positive")
    sp = grr_space(d, h)
    fh = factorial(h + 1)
    out = sp.gen(f"kappa{h}", bernoulli_eval(h + 1, Fraction(-1, 5)) / fh)
    for i, m in enumerate(d.ms):
        coeff = -bernoulli_eval(h + 1, Fraction(5 - m, 5)) / fh
        out = out + sp.gen(f"psibar{i}", 1) ** h * coeff
    for k in range(5):
        coeff = 5 * bernoulli_eval(h + 1, Fraction(k, 5)) / fh / 2
        if k == 0:
            coeff /= 5
        out = out + sp.gen(f"bdry{k}_{h}", coeff)
    return out


def euler_from_ch(ch: Sequence[ClassExpr], rank: int, a, space: Space | None = None):
    """Equivariant Euler class of ``V (x) L_a`` from ``ch_1, ch_2, ...`` of ``V``.

    Returns ``(a t)^rank * exp(sum_i (-1)^{i-1} (i-1)! ch_i / (a t)^i)``; a
    plain :class:`RatFuncT` when no class data is supplied.
    """
    a = Fraction(a)
    if not a:
        raise FJRWError("twist weight must be nonzero")
    at = RatFuncT.monomial(a, 1)
    lead = at**rank
    if space is None:
        if ch:
            space = ch[0].space
        else:
            return lead
    s = space.scalar(0)
    for i, c in enumerate(ch, start=1):
        s = s + c * (RatFuncT.const((-1) ** (i - 1) * factorial(i - 1)) / at**i)
    return _exp(s) * lead


def _exp(x: ClassExpr) -> ClassExpr:
    if not x.constant_term().is_zero():
        raise FJRWError("exponential needs a nilpotent argument")
    out = x.space.scalar(1)
    term = x.space.scalar(1)
    n = 1
    while True:
        term = term * x * Fraction(1, n)
        if term.is_zero():
            return out
        out = out + term
        n += 1


# ---------------------------------------------------------------------------
# virtual cycle integrals

def exceptional_degree() -> Fraction:
    """Degree of the genus-0 exceptional virtual cycle over the coarse point."""
    return Fraction(1, 5)


def genus_one_components() -> tuple[Fraction, Fraction, int]:
    """Pieces of the genus-one cycle with one zeta marking.

    Returns ``(int_{[M0]} psi, int_{[M1]} psi, coefficient of [M0])``.  ``M0``
    is the component with trivial 5-torsion (a mu_5-gerbe over Mbar_{1,1}),
    ``M1`` collects the 24 nontrivial roots; psi = psibar / 5 at the marking.
    """
    coarse = psi_integral(1, (1,))
    gerbe = Fraction(1, 5)
    m0 = gerbe * coarse / 5
    m1 = (5**2 - 1) * gerbe * coarse / 5
    return m0, m1, -(4**5)


def genus_one_psi() -> Fraction:
    """``int_{[Mbar^{1/5}_{1,(zeta)}]^vir} psi``."""
    m0, m1, c0 = genus_one_components()
    return c0 * m0 + m1


def _genus_one_pushforward() -> Fraction:
    # pushforward of the genus-one virtual cycle to the coarse Mbar_{1,n}
    m0, m1, c0 = genus_one_components()
    coarse = psi_integral(1, (1,))
    return (c0 * m0 + m1) * 5 / coarse


def virtual_psi_integral(d: SpinDatum, psibar_exps: Sequence[int]) -> tuple[Fraction, Correlator | None]:
    """``int_{vir} prod psibar_i^{a_i}`` when ``sum a = vdim``.

    Returns ``(c, key)``: the integral is ``c`` times the primitive invariant
    ``key`` (``None`` when it is a pure number).
    """
    exps = tuple(psibar_exps)
    vdim = fjrw_vdim(d)
    if vdim == EMPTY or fjrw_vanishes(d):
        return Fraction(0), None
    if sum(exps) != vdim:
        raise FJRWError("virtual integral needs full degree")
    if d.g == 0:
        return exceptional_degree() * psi_integral(0, exps), None
    base = tuple(i for i, m in enumerate(d.ms) if m == 2)
    if d.g == 1 and not base:
        return _genus_one_pushforward() * psi_integral(1, exps), theta(1, 0)
    return _fiber_integral(d.g, tuple(d.ms), exps), theta(d.g, d.k)


def _fiber_integral(g: int, ms: tuple[int, ...], exps: tuple[int, ...]) -> Fraction:
    """Reduce zeta-markings (pulled back cycle) by string and dilaton."""
    pairs = tuple(sorted(zip(ms, exps)))
    return _fiber(g, pairs)


@lru_cache(maxsize=None)
def _fiber(g: int, pairs: tuple[tuple[int, int], ...]) -> Fraction:
    if all(m == 2 for m, _ in pairs):
        return Fraction(1) if all(a == 0 for _, a in pairs) else Fraction(0)
    n = len(pairs)
    for idx, (m, a) in enumerate(pairs):
        if m != 1 or a > 1:
            continue
        rest = pairs[:idx] + pairs[idx + 1:]
        if a == 0:
            total = Fraction(0)
            for j, (mj, aj) in enumerate(rest):
                if aj:
                    new = rest[:j] + ((mj, aj - 1),) + rest[j + 1:]
                    total += _fiber(g, tuple(sorted(new)))
            return total
        return (2 * g - 2 + n - 1) * _fiber(g, rest)
    raise FJRWError("no forgettable zeta marking")  # excluded by degree count


def dual_twisted_reduce(g: int, ms: Sequence[int], exps: Sequence[int]) -> SymPoly:
    """Evaluate ``<prod tau_{a_i}(zeta^{m_i})>^{dt}_g`` as far as possible.

    Returns ``c * t^p`` times a primitive ``Theta`` key when a closed form is
    available, otherwise ``t^p`` times a symbolic ``DTW`` key.
    """
    d = SpinDatum(g, tuple(ms))
    exps = tuple(exps)
    if len(exps) != d.ell:
        raise FJRWError("one psi exponent per marking")
    if fjrw_vanishes(d):
        return SymPoly()
    vdim = fjrw_vdim(d)
    total = sum(exps)
    if total > vdim:
        return SymPoly()
    p = bracket_t_power(d, exps)
    if total == vdim:
        # only (-t)^{-rank} pairs with the cycle; psi = psibar / 5
        c, key = virtual_psi_integral(d, exps)
        coeff = RatFuncT.monomial(c * Fraction(1, 5**total) * (-1) ** (-fjrw_rank(d) % 2), p)
        if not c:
            return SymPoly()
        return SymPoly.symbol(key, coeff) if key is not None else SymPoly.const(coeff)
    key = dtw_bracket(g, tuple(zip(exps, d.ms)))
    return SymPoly.symbol(key, RatFuncT.monomial(1, p))
