from __future__ import annotations

from fractions import Fraction
from math import factorial, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mspq.taut import (
    TautError,
    bernoulli_number,
    evaluate_reduction,
    hodge_integral,
    psi_integral,
    string_dilaton_reduce,
)


def test_known_psi_values():
    assert psi_integral(0, (0, 0, 0)) == 1
    assert psi_integral(1, (1,)) == Fraction(1, 24)
    assert psi_integral(2, (4,)) == Fraction(1, 1152)
    assert psi_integral(2, (2, 3)) == Fraction(29, 5760)
    assert psi_integral(3, (7,)) == Fraction(1, 82944)
    assert psi_integral(1, (1, 1)) == Fraction(1, 24)
    assert psi_integral(1, (2,)) == 0


def test_unstable_raises():
    with pytest.raises(TautError):
        psi_integral(0, (0, 0))


@st.composite
def genus0_exps(draw):
    n = draw(st.integers(min_value=3, max_value=8))
    budget = n - 3
    exps = []
    for i in range(n - 1):
        a = draw(st.integers(min_value=0, max_value=budget))
        exps.append(a)
        budget -= a
    exps.append(budget)
    return tuple(exps)


@settings(max_examples=200, deadline=None)
@given(genus0_exps())
def test_genus0_closed_form(exps):
    n = len(exps)
    assert psi_integral(0, exps) == Fraction(factorial(n - 3), prod(factorial(a) for a in exps))


@settings(max_examples=100, deadline=None)
@given(genus0_exps())
def test_string_and_dilaton_identities(exps):
    n = len(exps)
    # string: raise one exponent so that adding tau_0 keeps the degree right
    up = (exps[0] + 1,) + exps[1:]
    rhs = sum((psi_integral(0, up[:i] + (a - 1,) + up[i + 1:]) for i, a in enumerate(up) if a), Fraction(0))
    assert psi_integral(0, up + (0,)) == rhs
    # dilaton
    assert psi_integral(0, exps + (1,)) == (n - 2) * psi_integral(0, exps)


@pytest.mark.parametrize("g,exps", [(1, (1, 1, 1)), (2, (1, 2, 3, 1)), (2, (0, 2, 3, 2)), (3, (2, 7))])
def test_reduction_evaluates_to_integral(g, exps):
    assert evaluate_reduction(string_dilaton_reduce(g, exps)) == psi_integral(g, exps)


def test_hodge_values():
    assert hodge_integral(1, (0,), (1,)) == Fraction(1, 24)
    assert hodge_integral(2, (), (3,)) == Fraction(1, 2880)
    assert hodge_integral(2, (), (1, 1)) == Fraction(1, 5760)
    assert hodge_integral(2, (2,), (0, 1)) == Fraction(7, 5760)
    assert hodge_integral(2, (3,), (1,)) == Fraction(1, 480)
    assert hodge_integral(3, (), (6,)) == Fraction(1, 90720)


@pytest.mark.parametrize("g", [1, 2, 3])
def test_lambda_g_formula(g):
    # int psi^{2g-2} lambda_g over Mbar_{g,1} = 2^{2g-1}-1 / 2^{2g-1} * |B_2g| / (2g)!
    lam = (0,) * (g - 1) + (1,)
    expected = Fraction(2 ** (2 * g - 1) - 1, 2 ** (2 * g - 1)) * abs(bernoulli_number(2 * g)) / factorial(2 * g)
    assert hodge_integral(g, (2 * g - 2,), lam) == expected


def test_bernoulli_numbers():
    assert bernoulli_number(1) == Fraction(-1, 2)
    assert bernoulli_number(2) == Fraction(1, 6)
    assert bernoulli_number(3) == 0
    assert bernoulli_number(4) == Fraction(-1, 30)
