"""Exact arithmetic substrate.

Rationals are :class:`fractions.Fraction`.  :class:`RatFuncT` is a reduced
rational function in the single equivariant parameter ``t``.  :class:`ClassExpr`
is an element of a truncated graded ring: polynomials in nilpotent generators
(hyperplane, psi, lambda classes) with :class:`RatFuncT` coefficients, living
on a product of ambient factors each carrying a degree budget.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence, Union

__all__ = [
    "Rat",
    "parse_rat",
    "format_rat",
    "RatFuncT",
    "NilGen",
    "Factor",
    "Space",
    "ClassExpr",
    "SymPoly",
    "AlgebraError",
    "laurent_coeff",
    "class_arith",
    "class_invert",
    "class_integrate",
]

Rat = Fraction
Poly = tuple  # tuple[Fraction, ...], index = power of t, no trailing zeros


class AlgebraError(ValueError):
    """Raised on malformed or unsupported algebraic operations."""


def parse_rat(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` into an exact rational."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise AlgebraError(f"not an exact rational: {text!r}") from exc


def format_rat(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# univariate polynomials over Q

def _trim(p: Sequence[Fraction]) -> Poly:
    n = len(p)
    while n and not p[n - 1]:
        n -= 1
    return tuple(p[:n])


def _padd(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def _pneg(a: Poly) -> Poly:
    return tuple(-c for c in a)


def _pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _pscale(a: Poly, c: Fraction) -> Poly:
    if not c:
        return ()
    return tuple(x * c for x in a)


def _pdivmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    db = len(b) - 1
    lead = b[-1]
    if len(rem) - 1 < db:
        return (), _trim(rem)
    quo = [Fraction(0)] * (len(rem) - db)
    for k in range(len(rem) - 1 - db, -1, -1):
        c = rem[k + db] / lead
        quo[k] = c
        if c:
            for j, y in enumerate(b):
                rem[k + j] -= c * y
    return _trim(quo), _trim(rem[:db])


def _pgcd(a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, _pdivmod(a, b)[1]
    if not a:
        return (Fraction(1),)
    return _pscale(a, 1 / a[-1])


def _valuation(a: Poly) -> int:
    for i, c in enumerate(a):
        if c:
            return i
    raise AlgebraError("valuation of zero polynomial")


def _is_monomial(a: Poly) -> bool:
    return all(not c for c in a[:-1])


def _poly_str(p: Poly) -> str:
    if not p:
        return "0"
    parts = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = format_rat(a)
        else:
            mono = "t" if k == 1 else f"t^{k}"
            body = mono if a == 1 else f"{format_rat(a)}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# rational functions in t

class RatFuncT:
    """Reduced fraction ``num/den`` of polynomials in ``t`` with monic ``den``."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Iterable = (), den: Iterable = (1,), *, _reduced: bool = False):
        n = _trim([Fraction(c) for c in num])
        d = _trim([Fraction(c) for c in den])
        if not d:
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            n, d = _reduce(n, d)
        self.num: Poly = n
        self.den: Poly = d
        self._hash = None

    # constructors -----------------------------------------------------
    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> "RatFuncT":
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c) -> "RatFuncT":
        c = Fraction(c)
        return cls._raw((c,) if c else (), (Fraction(1),))

    @classmethod
    def monomial(cls, c, k: int) -> "RatFuncT":
        """``c * t**k`` for any integer ``k``."""
        c = Fraction(c)
        if not c:
            return cls.const(0)
        if k >= 0:
            return cls._raw((Fraction(0),) * k + (c,), (Fraction(1),))
        return cls._raw((c,), (Fraction(0),) * (-k) + (Fraction(1),))

    @classmethod
    def t(cls) -> "RatFuncT":
        return cls.monomial(1, 1)

    @staticmethod
    def coerce(x) -> "RatFuncT":
        if isinstance(x, RatFuncT):
            return x
        if isinstance(x, (int, Fraction)):
            return RatFuncT.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to RatFuncT")

    # predicates --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def is_const(self) -> bool:
        return len(self.num) <= 1 and len(self.den) == 1

    def const_value(self) -> Fraction:
        if not self.is_const():
            raise AlgebraError(f"not a constant: {self}")
        return self.num[0] if self.num else Fraction(0)

    def is_laurent_monomial(self) -> bool:
        return _is_monomial(self.den) and self.num != () and _is_monomial(self.num)

    # arithmetic ----------------------------------------------------------
    def __add__(self, other):
        try:
            o = RatFuncT.coerce(other)
        except TypeError:
            return NotImplemented
        if not o.num:
            return self
        if not self.num:
            return o
        if self.den == o.den:
            return RatFuncT(_padd(self.num, o.num), self.den)
        return RatFuncT(_padd(_pmul(self.num, o.den), _pmul(o.num, self.den)), _pmul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self) -> "RatFuncT":
        return RatFuncT._raw(_pneg(self.num), self.den)

    def __sub__(self, other):
        try:
            return self + (-RatFuncT.coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return RatFuncT.const(0)
            return RatFuncT._raw(_pscale(self.num, Fraction(other)), self.den)
        if not isinstance(other, RatFuncT):
            return NotImplemented
        if not self.num or not other.num:
            return RatFuncT.const(0)
        return RatFuncT(_pmul(self.num, other.num), _pmul(self.den, other.den))

    __rmul__ = __mul__

    def inverse(self) -> "RatFuncT":
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFuncT(self.den, self.num)

    def __truediv__(self, other):
        try:
            o = RatFuncT.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return RatFuncT.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "RatFuncT":
        if k < 0:
            return self.inverse() ** (-k)
        out = RatFuncT.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # comparison ----------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RatFuncT.const(other)
        if not isinstance(other, RatFuncT):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # evaluation ------------------------------------------------------------
    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        num = sum((c * x**i for i, c in enumerate(self.num)), Fraction(0))
        den = sum((c * x**i for i, c in enumerate(self.den)), Fraction(0))
        if not den:
            raise ZeroDivisionError(f"pole at t={x}")
        return num / den

    def valuation(self) -> int:
        """t-adic valuation (order of vanishing at t = 0)."""
        return _valuation(self.num) - _valuation(self.den)

    def laurent_coeff(self, k: int) -> Fraction:
        return laurent_coeff(self, k)

    def __repr__(self) -> str:
        return f"RatFuncT({self})"

    def __str__(self) -> str:
        if not self.num:
            return "0"
        if len(self.den) == 1:
            return _poly_str(self.num)
        if _is_monomial(self.den):
            k = len(self.den) - 1
            den = "t" if k == 1 else f"t^{k}"
        else:
            den = f"({_poly_str(self.den)})"
        num = _poly_str(self.num)
        if len([c for c in self.num if c]) > 1:
            num = f"({num})"
        return f"{num}/{den}"


def _reduce(n: Poly, d: Poly) -> tuple[Poly, Poly]:
    if not n:
        return (), (Fraction(1),)
    if _is_monomial(d):
        k = len(d) - 1
        v = min(_valuation(n), k)
        lead = d[-1]
        n = n[v:]
        if lead != 1:
            n = _pscale(n, 1 / lead)
        return n, (Fraction(0),) * (k - v) + (Fraction(1),)
    g = _pgcd(n, d)
    if len(g) > 1:
        n = _pdivmod(n, g)[0]
        d = _pdivmod(d, g)[0]
    lead = d[-1]
    if lead != 1:
        n = _pscale(n, 1 / lead)
        d = _pscale(d, 1 / lead)
    return n, d


def laurent_coeff(f: RatFuncT, k: int) -> Fraction:
    """Coefficient of ``t**k`` in the Laurent expansion of ``f`` at ``t = 0``."""
    f = RatFuncT.coerce(f)
    if not f.num:
        return Fraction(0)
    v = _valuation(f.den)
    u = f.den[v:]
    need = k + v  # coefficient index in num * u^{-1}
    if need < 0:
        return Fraction(0)
    inv = [Fraction(0)] * (need + 1)
    inv[0] = 1 / u[0]
    for i in range(1, need + 1):
        s = Fraction(0)
        for j in range(1, min(i, len(u) - 1) + 1):
            s += u[j] * inv[i - j]
        inv[i] = -s * inv[0]
    out = Fraction(0)
    for i, c in enumerate(f.num):
        if i > need:
            break
        if c:
            out += c * inv[need - i]
    return out


# ---------------------------------------------------------------------------
# symbolic linear combinations (products of opaque symbols)

class SymPoly:
    """Finite sum of ``coeff * (s1 * s2 * ...)`` with ``RatFuncT`` coefficients.

    Keys are sorted tuples of hashable, mutually ordered symbols; ``()`` is the
    constant term.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple, RatFuncT] | None = None):
        self.terms: dict[tuple, RatFuncT] = {}
        if terms:
            for k, v in terms.items():
                v = RatFuncT.coerce(v)
                if not v.is_zero():
                    self.terms[tuple(k)] = v

    @classmethod
    def const(cls, c) -> "SymPoly":
        return cls({(): RatFuncT.coerce(c)})

    @classmethod
    def symbol(cls, s, coeff=1) -> "SymPoly":
        return cls({(s,): RatFuncT.coerce(coeff)})

    @staticmethod
    def coerce(x) -> "SymPoly":
        if isinstance(x, SymPoly):
            return x
        return SymPoly.const(x)

    def is_zero(self) -> bool:
        return not self.terms

    def symbols(self) -> set:
        return {s for k in self.terms for s in k}

    def __add__(self, other) -> "SymPoly":
        o = SymPoly.coerce(other)
        out = dict(self.terms)
        for k, v in o.terms.items():
            w = out.get(k)
            w = v if w is None else w + v
            if w.is_zero():
                out.pop(k, None)
            else:
                out[k] = w
        res = SymPoly()
        res.terms = out
        return res

    __radd__ = __add__

    def __neg__(self) -> "SymPoly":
        res = SymPoly()
        res.terms = {k: -v for k, v in self.terms.items()}
        return res

    def __sub__(self, other) -> "SymPoly":
        return self + (-SymPoly.coerce(other))

    def __mul__(self, other) -> "SymPoly":
        if isinstance(other, (int, Fraction, RatFuncT)):
            c = RatFuncT.coerce(other)
            if c.is_zero():
                return SymPoly()
            res = SymPoly()
            res.terms = {k: v * c for k, v in self.terms.items()}
            return res
        if not isinstance(other, SymPoly):
            return NotImplemented
        out: dict[tuple, RatFuncT] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(sorted(k1 + k2))
                w = v1 * v2
                prev = out.get(k)
                out[k] = w if prev is None else prev + w
        return SymPoly({k: v for k, v in out.items() if not v.is_zero()})

    __rmul__ = __mul__

    def map_coeffs(self, fn: Callable[[RatFuncT], RatFuncT]) -> "SymPoly":
        return SymPoly({k: fn(v) for k, v in self.terms.items()})

    def substitute(self, values: Mapping) -> "SymPoly":
        """Replace symbols found in ``values`` (symbol -> Fraction)."""
        out = SymPoly()
        for k, v in self.terms.items():
            coeff = v
            rest = []
            for s in k:
                if s in values:
                    coeff = coeff * Fraction(values[s])
                else:
                    rest.append(s)
            out = out + SymPoly({tuple(rest): coeff})
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymPoly):
            try:
                other = SymPoly.coerce(other)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __repr__(self) -> str:
        return f"SymPoly({self.terms!r})"


# ---------------------------------------------------------------------------
# truncated class rings

@dataclass(frozen=True)
class NilGen:
    """A nilpotent cohomology generator on one ambient factor."""

    name: str
    degree: int
    space: str

    def __post_init__(self) -> None:
        if self.degree < 1:
            raise AlgebraError(f"generator {self.name} must have positive degree")


Integrator = Callable[[tuple], Union[Fraction, SymPoly]]


@dataclass(frozen=True)
class Factor:
    """One ambient moduli factor: generators, degree budget, integration rule.

    ``top`` is the degree that integrates nontrivially; ``None`` means every
    degree up to the budget is passed to the integrator (used for factors whose
    integrand is capped with a symbolic class of complementary degree).
    """

    name: str
    budget: int
    gens: tuple[NilGen, ...] = ()
    integrator: Integrator | None = field(default=None, compare=False, hash=False)
    top: int | None = None

    def __post_init__(self) -> None:
        for gen in self.gens:
            if gen.space != self.name:
                raise AlgebraError(f"generator {gen.name} belongs to {gen.space}, not {self.name}")


class Space:
    """Product of ambient factors; monomials are dense exponent tuples."""

    def __init__(self, factors: Sequence[Factor] = ()):
        self.factors: tuple[Factor, ...] = tuple(factors)
        names = [f.name for f in self.factors]
        if len(set(names)) != len(names):
            raise AlgebraError("duplicate factor names")
        self.gens: tuple[NilGen, ...] = tuple(g for f in self.factors for g in f.gens)
        self.index = {g.name: i for i, g in enumerate(self.gens)}
        if len(self.index) != len(self.gens):
            raise AlgebraError("duplicate generator names")
        self.slices: list[tuple[int, int]] = []
        pos = 0
        for f in self.factors:
            self.slices.append((pos, pos + len(f.gens)))
            pos += len(f.gens)
        self._degrees = tuple(g.degree for g in self.gens)
        self._budgets = tuple(f.budget for f in self.factors)
        self.zero_mono = (0,) * len(self.gens)
        self._fdeg = lru_cache(maxsize=None)(self._factor_degrees)

    def _factor_degrees(self, mono: tuple) -> tuple[int, ...]:
        degs = self._degrees
        return tuple(
            sum(mono[i] * degs[i] for i in range(a, b)) for a, b in self.slices
        )

    def admissible(self, mono: tuple) -> bool:
        return all(x <= b for x, b in zip(self._fdeg(mono), self._budgets))

    def factor_degrees(self, mono: tuple) -> tuple[int, ...]:
        return self._fdeg(mono)

    def gen(self, name: str, coeff=1) -> "ClassExpr":
        i = self.index[name]
        mono = tuple(1 if j == i else 0 for j in range(len(self.gens)))
        if not self.admissible(mono):
            return ClassExpr(self, {})
        return ClassExpr(self, {mono: RatFuncT.coerce(coeff)})

    def scalar(self, c) -> "ClassExpr":
        return ClassExpr(self, {self.zero_mono: RatFuncT.coerce(c)})

    def monomial(self, exps: Mapping[str, int], coeff=1) -> "ClassExpr":
        mono = [0] * len(self.gens)
        for name, e in exps.items():
            mono[self.index[name]] = e
        mono_t = tuple(mono)
        if not self.admissible(mono_t):
            return ClassExpr(self, {})
        return ClassExpr(self, {mono_t: RatFuncT.coerce(coeff)})

    def __repr__(self) -> str:
        return "Space(" + ", ".join(f"{f.name}[{f.budget}]" for f in self.factors) + ")"


class ClassExpr:
    """Truncated polynomial in nilpotent generators with ``RatFuncT`` coefficients."""

    __slots__ = ("space", "terms")

    def __init__(self, space: Space, terms: Mapping[tuple, RatFuncT]):
        self.space = space
        self.terms: dict[tuple, RatFuncT] = {
            m: c for m, c in terms.items() if not c.is_zero()
        }

    def _coerce(self, other) -> "ClassExpr":
        if isinstance(other, ClassExpr):
            if other.space is not self.space:
                raise AlgebraError("mismatched ambient spaces")
            return other
        return self.space.scalar(RatFuncT.coerce(other))

    def __add__(self, other) -> "ClassExpr":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for m, c in o.terms.items():
            prev = out.get(m)
            out[m] = c if prev is None else prev + c
        return ClassExpr(self.space, out)

    __radd__ = __add__

    def __neg__(self) -> "ClassExpr":
        return ClassExpr(self.space, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "ClassExpr":
        try:
            return self + (-self._coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other) -> "ClassExpr":
        return (-self) + other

    def __mul__(self, other) -> "ClassExpr":
        if isinstance(other, (int, Fraction, RatFuncT)):
            c = RatFuncT.coerce(other)
            return ClassExpr(self.space, {m: v * c for m, v in self.terms.items()})
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        sp = self.space
        out: dict[tuple, RatFuncT] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                if not sp.admissible(m):
                    continue
                w = c1 * c2
                prev = out.get(m)
                out[m] = w if prev is None else prev + w
        return ClassExpr(sp, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "ClassExpr":
        if k < 0:
            return self.invert() ** (-k)
        out = self.space.scalar(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __truediv__(self, other) -> "ClassExpr":
        if isinstance(other, (int, Fraction, RatFuncT)):
            return self * RatFuncT.coerce(other).inverse()
        return self * self._coerce(other).invert()

    def constant_term(self) -> RatFuncT:
        return self.terms.get(self.space.zero_mono, RatFuncT.const(0))

    def invert(self) -> "ClassExpr":
        a0 = self.constant_term()
        if a0.is_zero():
            raise AlgebraError("non-invertible class: zero constant term")
        inv0 = a0.inverse()
        nil = (self - a0) * inv0
        neg = -nil
        out = self.space.scalar(1)
        power = self.space.scalar(1)
        while True:
            power = power * neg
            if not power.terms:
                break
            out = out + power
        return out * inv0

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        try:
            o = self._coerce(other)
        except (TypeError, AlgebraError):
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def integrate(self) -> SymPoly:
        """Push forward to a point factor by factor."""
        sp = self.space
        memo: list[dict] = [dict() for _ in sp.factors]
        total = SymPoly()
        for mono, coeff in sorted(self.terms.items()):
            fdeg = sp.factor_degrees(mono)
            value = SymPoly.const(coeff)
            for i, (fac, (a, b)) in enumerate(zip(sp.factors, sp.slices)):
                if fac.top is not None and fdeg[i] != fac.top:
                    value = SymPoly()
                    break
                sub = mono[a:b]
                if sub in memo[i]:
                    part = memo[i][sub]
                else:
                    if fac.integrator is None:
                        raise AlgebraError(f"no integration rule for factor {fac.name}")
                    part = fac.integrator(sub)
                    part = SymPoly.coerce(part)
                    memo[i][sub] = part
                value = value * part
                if value.is_zero():
                    break
            total = total + value
        return total

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, c in sorted(self.terms.items()):
            names = [
                g.name if e == 1 else f"{g.name}^{e}"
                for g, e in zip(self.space.gens, mono)
                if e
            ]
            parts.append(f"({c})" + "".join("*" + n for n in names))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"ClassExpr({self.render()})"


def class_arith(a: ClassExpr, b, op: str) -> ClassExpr:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise AlgebraError(f"unknown class operation {op!r}")


def class_invert(a: ClassExpr) -> ClassExpr:
    return a.invert()


def class_integrate(a: ClassExpr) -> RatFuncT:
    """Integrate to a pure rational function; symbolic results are rejected."""
    res = a.integrate()
    extra = [k for k in res.terms if k != ()]
    if extra:
        raise AlgebraError(f"integral has symbolic terms: {extra[0]}")
    return res.terms.get((), RatFuncT.const(0))
