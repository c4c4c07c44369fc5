"""Tautological intersection numbers on moduli of stable curves.

``psi_integral`` evaluates descendant integrals through string/dilaton
reductions and the DVV (Virasoro) recursion.  ``hodge_psi_integral`` adds
lambda classes: each lambda monomial is rewritten in Chern characters of the
Hodge bundle, and one Chern character at a time is removed with Mumford's
Grothendieck-Riemann-Roch expression (kappa term, psi term, boundary terms).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial
from typing import Iterable, Mapping, Sequence

__all__ = [
    "TautError",
    "PsiMonomial",
    "psi_integral",
    "hodge_psi_integral",
    "hodge_integral",
    "lambda_to_ch",
    "string_dilaton_reduce",
    "bernoulli_number",
    "MAX_HODGE_GENUS",
]

MAX_HODGE_GENUS = 2


class TautError(ValueError):
    """Unstable moduli or unsupported request."""


@dataclass(frozen=True)
class PsiMonomial:
    """``prod psi_i^{a_i} * prod lambda_i^{e_i}`` on ``Mbar_{g,n}``."""

    g: int
    exps: tuple[int, ...]
    lam: tuple[int, ...] = ()

    @property
    def n(self) -> int:
        return len(self.exps)

    def degree(self) -> int:
        return sum(self.exps) + sum((i + 1) * e for i, e in enumerate(self.lam))


def _check_stable(g: int, n: int) -> None:
    if g < 0 or n < 0 or 2 * g - 2 + n <= 0:
        raise TautError(f"unstable moduli Mbar_{{{g},{n}}}")


def _dfact(n: int) -> int:
    """Double factorial with (-1)!! = 1."""
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


# ---------------------------------------------------------------------------
# psi integrals

def psi_integral(g: int, exps: Sequence[int]) -> Fraction:
    """``int_{Mbar_{g,n}} prod psi_i^{a_i}``; zero when the degree is wrong."""
    exps = tuple(exps)
    _check_stable(g, len(exps))
    if any(a < 0 for a in exps):
        raise TautError("negative psi exponent")
    return _psi(g, tuple(sorted(exps)))


@lru_cache(maxsize=None)
def _psi(g: int, exps: tuple[int, ...]) -> Fraction:
    n = len(exps)
    if sum(exps) != 3 * g - 3 + n:
        return Fraction(0)
    if g == 0:
        # closed form (n-3)!/prod a_i!
        den = 1
        for a in exps:
            den *= factorial(a)
        return Fraction(factorial(n - 3), den)
    if g == 1 and exps == (1,):
        return Fraction(1, 24)
    if exps[0] == 0:
        rest = exps[1:]
        if 2 * g - 2 + len(rest) <= 0:
            return Fraction(0)
        total = Fraction(0)
        for i, a in enumerate(rest):
            if a:
                new = rest[:i] + (a - 1,) + rest[i + 1:]
                total += _psi(g, tuple(sorted(new)))
        return total
    if 1 in exps:
        i = exps.index(1)
        rest = exps[:i] + exps[i + 1:]
        if 2 * g - 2 + len(rest) > 0:
            return (2 * g - 2 + len(rest)) * _psi(g, rest)
    return _dvv(g, exps)


def _dvv(g: int, exps: tuple[int, ...]) -> Fraction:
    # peel off the largest exponent k+1
    k = exps[-1] - 1
    others = exps[:-1]
    total = Fraction(0)
    for j, dj in enumerate(others):
        rest = others[:j] + others[j + 1:]
        coef = Fraction(_dfact(2 * k + 2 * dj + 1), _dfact(2 * dj - 1))
        new = tuple(sorted(rest + (dj + k,)))
        if 2 * g - 2 + len(new) > 0:
            total += coef * _psi(g, new)
    for r in range(k):
        s = k - 1 - r
        coef = Fraction(_dfact(2 * r + 1) * _dfact(2 * s + 1), 2)
        if g >= 1:
            new = tuple(sorted(others + (r, s)))
            total += coef * _psi(g - 1, new)
        m = len(others)
        for mask in range(1 << m):
            left = tuple(others[i] for i in range(m) if mask >> i & 1)
            right = tuple(others[i] for i in range(m) if not mask >> i & 1)
            for g1 in range(g + 1):
                g2 = g - g1
                if 2 * g1 - 2 + len(left) + 1 <= 0 or 2 * g2 - 2 + len(right) + 1 <= 0:
                    continue
                a = _psi(g1, tuple(sorted(left + (r,))))
                if a:
                    total += coef * a * _psi(g2, tuple(sorted(right + (s,))))
    return total / _dfact(2 * k + 3)


# ---------------------------------------------------------------------------
# Hodge integrals

@lru_cache(maxsize=None)
def bernoulli_number(n: int) -> Fraction:
    """Bernoulli numbers with B_1 = -1/2."""
    if n == 0:
        return Fraction(1)
    total = Fraction(0)
    for k in range(n):
        total += Fraction(factorial(n + 1), factorial(k) * factorial(n + 1 - k)) * bernoulli_number(k)
    return -total / (n + 1)


ChPoly = dict  # sorted tuple of odd ch-degrees -> Fraction


def _chpoly_mul(a: ChPoly, b: ChPoly, cap: int) -> ChPoly:
    out: dict[tuple[int, ...], Fraction] = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            key = tuple(sorted(ka + kb))
            if sum(key) > cap:
                continue
            out[key] = out.get(key, Fraction(0)) + va * vb
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def _lambda_ch(i: int) -> tuple[tuple[tuple[int, ...], Fraction], ...]:
    """lambda_i as a polynomial in odd ch_k, from c(E) = exp(sum (-1)^{k-1}(k-1)! ch_k)."""
    # exp of s = sum_k c_k ch_k graded by k; collect degree-i part
    gens = {(k,): Fraction((-1) ** (k - 1) * factorial(k - 1)) for k in range(1, i + 1, 2)}
    result: ChPoly = {(): Fraction(1)} if i == 0 else {}
    power: ChPoly = {(): Fraction(1)}
    for m in range(1, i + 1):
        power = _chpoly_mul(power, gens, i)
        for key, v in power.items():
            if sum(key) == i:
                result[key] = result.get(key, Fraction(0)) + v / factorial(m)
    return tuple(sorted((k, v) for k, v in result.items() if v))


def lambda_to_ch(lam: Sequence[int], cap: int) -> ChPoly:
    """Expand ``prod lambda_i^{e_i}`` into Chern characters of the Hodge bundle."""
    out: ChPoly = {(): Fraction(1)}
    for idx, e in enumerate(lam):
        poly = dict(_lambda_ch(idx + 1))
        for _ in range(e):
            out = _chpoly_mul(out, poly, cap)
    return out


def hodge_psi_integral(m: PsiMonomial) -> Fraction:
    """Mixed lambda/psi integral ``int_{Mbar_{g,n}} prod psi^a prod lambda^e``."""
    g, n = m.g, m.n
    _check_stable(g, n)
    if g > MAX_HODGE_GENUS and any(m.lam):
        raise TautError(f"unsupported genus {g} for Hodge integrals")
    return hodge_integral(g, m.exps, m.lam)


def hodge_integral(g: int, exps: Sequence[int], lam: Sequence[int] = ()) -> Fraction:
    """Same as :func:`hodge_psi_integral` without the genus cap."""
    exps = tuple(exps)
    lam = tuple(lam)
    _check_stable(g, len(exps))
    while lam and lam[-1] == 0:
        lam = lam[:-1]
    if not lam:
        return psi_integral(g, exps)
    if len(lam) > g:
        return Fraction(0)
    dim = 3 * g - 3 + len(exps)
    lam_deg = sum((i + 1) * e for i, e in enumerate(lam))
    if lam_deg + sum(exps) != dim:
        return Fraction(0)
    total = Fraction(0)
    sexps = tuple(sorted(exps))
    for chs, coef in lambda_to_ch(lam, lam_deg).items():
        if sum(chs) == lam_deg:
            total += coef * _ch_int(g, sexps, chs)
    return total


@lru_cache(maxsize=None)
def _ch_int(g: int, exps: tuple[int, ...], chs: tuple[int, ...]) -> Fraction:
    """``int prod psi^a prod ch_k(E)`` with ``exps`` and ``chs`` sorted."""
    n = len(exps)
    if 2 * g - 2 + n <= 0:
        return Fraction(0)
    if sum(exps) + sum(chs) != 3 * g - 3 + n:
        return Fraction(0)
    if not chs:
        return _psi(g, exps)
    if g == 0:
        return Fraction(0)
    if any(k % 2 == 0 for k in chs) or any(k > 2 * g - 1 for k in chs):
        return Fraction(0)
    k = chs[-1]
    rest = chs[:-1]
    l2 = k + 1
    pref = bernoulli_number(l2) / factorial(l2)
    total = Fraction(0)
    # kappa_k = pi_* psi_{n+1}^{k+1}
    total += _ch_int(g, tuple(sorted(exps + (k + 1,))), rest)
    for i in range(n):
        new = exps[:i] + (exps[i] + k,) + exps[i + 1:]
        total -= _ch_int(g, tuple(sorted(new)), rest)
    half = Fraction(1, 2)
    for j in range(k):
        sign = -1 if j % 2 else 1
        jj = k - 1 - j
        if g >= 1:
            total += half * sign * _ch_int(g - 1, tuple(sorted(exps + (j, jj))), rest)
        for mask in range(1 << n):
            left = tuple(exps[i] for i in range(n) if mask >> i & 1)
            right = tuple(exps[i] for i in range(n) if not mask >> i & 1)
            for g1 in range(g + 1):
                g2 = g - g1
                if 2 * g1 - 1 + len(left) <= 0 or 2 * g2 - 1 + len(right) <= 0:
                    continue
                # distribute remaining ch's over the two sides
                for assign in product((0, 1), repeat=len(rest)):
                    ch1 = tuple(c for c, s in zip(rest, assign) if s == 0)
                    ch2 = tuple(c for c, s in zip(rest, assign) if s == 1)
                    a = _ch_int(g1, tuple(sorted(left + (j,))), ch1)
                    if not a:
                        continue
                    b = _ch_int(g2, tuple(sorted(right + (jj,))), ch2)
                    total += half * sign * a * b
    return pref * total


# ---------------------------------------------------------------------------
# string / dilaton reduction

Key = tuple  # (g, sorted exps); () denotes the constant 1


def string_dilaton_reduce(g: int, exps: Iterable[int]) -> dict[Key, Fraction]:
    """Rewrite ``<prod tau_{a_i}>_g`` by string and dilaton equations.

    Returns a combination of irreducible correlators ``(g, exps)`` (no tau_0 or
    tau_1 that can be removed while staying stable).  The base cases
    ``<tau_0^3>_0`` and ``<tau_1>_1`` are evaluated and reported under ``()``.
    """
    exps = tuple(sorted(exps))
    _check_stable(g, len(exps))
    out: dict[Key, Fraction] = {}
    stack: list[tuple[Fraction, int, tuple[int, ...]]] = [(Fraction(1), g, exps)]
    while stack:
        coef, gg, ee = stack.pop()
        n = len(ee)
        if sum(ee) != 3 * gg - 3 + n:
            continue
        if (gg, ee) == (0, (0, 0, 0)):
            out[()] = out.get((), Fraction(0)) + coef
            continue
        if (gg, ee) == (1, (1,)):
            out[()] = out.get((), Fraction(0)) + coef / 24
            continue
        rest_stable = 2 * gg - 2 + (n - 1) > 0
        if ee and ee[0] == 0 and rest_stable:
            rest = ee[1:]
            for i, a in enumerate(rest):
                if a:
                    new = rest[:i] + (a - 1,) + rest[i + 1:]
                    stack.append((coef, gg, tuple(sorted(new))))
            continue
        if 1 in ee and rest_stable:
            i = ee.index(1)
            rest = ee[:i] + ee[i + 1:]
            stack.append((coef * (2 * gg - 2 + len(rest)), gg, rest))
            continue
        out[(gg, ee)] = out.get((gg, ee), Fraction(0)) + coef
    return {k: v for k, v in sorted(out.items()) if v}


def evaluate_reduction(terms: Mapping[Key, Fraction]) -> Fraction:
    """Evaluate the output of :func:`string_dilaton_reduce` numerically."""
    total = Fraction(0)
    for key, coef in terms.items():
        total += coef if key == () else coef * psi_integral(*key)
    return total
