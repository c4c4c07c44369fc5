from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mspq.algebra import RatFuncT
from mspq.correlators import dtw_bracket, theta
from mspq.fjrw import (
    EMPTY,
    FJRWError,
    SpinDatum,
    bernoulli_eval,
    bernoulli_poly,
    dual_twisted_reduce,
    euler_from_ch,
    exceptional_degree,
    fjrw_rank,
    fjrw_vanishes,
    fjrw_vdim,
    genus_one_components,
    genus_one_psi,
    grr_chern_character,
    grr_space,
)
from mspq.taut import bernoulli_number


def test_vdim_examples():
    assert fjrw_vdim(SpinDatum(1, (2, 2))) == EMPTY
    assert fjrw_vdim(SpinDatum(1, (2,) * 5)) == 0
    assert fjrw_vdim(SpinDatum(0, (1, 2, 3))) == 0


def test_vanishing_examples():
    assert not fjrw_vanishes(SpinDatum(2, (1, 2, 2)))
    assert not fjrw_vanishes(SpinDatum(0, (1, 1, 4)))
    assert fjrw_vanishes(SpinDatum(1, (3,)))


def test_broad_sector_rejected():
    with pytest.raises(FJRWError):
        SpinDatum(1, (0,))


spin_data = st.builds(
    SpinDatum, st.integers(min_value=0, max_value=4), st.lists(st.integers(min_value=1, max_value=4), max_size=8)
)


@given(spin_data)
def test_empty_implies_vanishing(d):
    if fjrw_vdim(d) == EMPTY:
        assert fjrw_vanishes(d)
    else:
        fjrw_rank(d)  # integral whenever the moduli is nonempty


@settings(max_examples=20)
@given(st.integers(min_value=0, max_value=8), st.fractions(min_value=-3, max_value=3, max_denominator=11))
def test_bernoulli_difference(m, x):
    if m == 0:
        assert bernoulli_eval(0, x + 1) - bernoulli_eval(0, x) == 0
    else:
        assert bernoulli_eval(m, x + 1) - bernoulli_eval(m, x) == m * x ** (m - 1)


def test_bernoulli_values():
    for m in range(9):
        assert bernoulli_poly(m)[0] == bernoulli_number(m)
    assert bernoulli_eval(1, 0) == Fraction(-1, 2)


def test_grr_coefficients():
    d = SpinDatum(1, (2,))
    ch = grr_chern_character(d, 1)
    sp = ch.space
    coeff = {sp.gens[i].name: c.const_value() for m, c in ch.terms.items() for i, e in enumerate(m) if e}
    assert coeff["kappa1"] == Fraction(61, 300)
    assert coeff["psibar0"] == Fraction(11, 300)
    # boundary: k = 0 node carries the extra 1/5
    assert coeff["bdry0_1"] == 5 * bernoulli_eval(2, 0) / 2 / 2 / 5


def test_euler_from_ch_trivial():
    t = RatFuncT.t()
    assert euler_from_ch([], 4, -1) == t ** 4
    assert euler_from_ch([], 3, 2) * euler_from_ch([], -3, 2) == RatFuncT.const(1)


@given(st.integers(min_value=-6, max_value=6), st.sampled_from([-1, 1, 2, 5]))
def test_euler_from_ch_inverse_ranks(r, a):
    assert euler_from_ch([], r, a) * euler_from_ch([], -r, a) == RatFuncT.const(1)


def test_euler_from_ch_first_order():
    d = SpinDatum(1, (2,))
    sp = grr_space(d, 1)
    c = sp.gen("kappa1")
    e = euler_from_ch([c], 0, -1)
    assert e == sp.scalar(1) + c * RatFuncT.monomial(-1, -1)
    with pytest.raises(FJRWError):
        euler_from_ch([c], 0, 0)


def test_exceptional_degree():
    assert exceptional_degree() == Fraction(1, 5)
    t = RatFuncT.t()
    # rank -1 for (1,1,4); only the degree-0 part pairs with the cycle
    res = dual_twisted_reduce(0, (1, 1, 4), (0, 0, 0))
    assert res.terms == {(): -t / 5}


def test_genus_one_seed():
    m0, m1, c0 = genus_one_components()
    assert m0 == Fraction(1, 600)
    assert m1 == Fraction(1, 25)
    assert c0 == -(4 ** 5)
    assert genus_one_psi() == -(4 ** 5) * Fraction(1, 600) + Fraction(1, 25) == Fraction(-5, 3)


def test_genus_one_bracket():
    t = RatFuncT.t()
    res = dual_twisted_reduce(1, (1,), (1,))
    assert res.terms == {(theta(1, 0),): t * Fraction(5, 3)}
    sym = dual_twisted_reduce(1, (1,), (0,))
    assert sym.terms == {(dtw_bracket(1, [(0, 1)]),): RatFuncT.const(1)}


@pytest.mark.parametrize("g,m", [(1, 0), (1, 1), (2, 0), (2, 1), (3, 0)])
def test_zero_dimensional_theta(g, m):
    k = 7 * g - 2 + 5 * m
    d = SpinDatum(g, (2,) * k)
    rank = fjrw_rank(d)
    assert rank == 3 - 4 * m - 7 * g
    res = dual_twisted_reduce(g, (2,) * k, (0,) * k)
    assert res.terms == {(theta(g, k),): RatFuncT.monomial((-1) ** (rank % 2), -rank)}


def test_psi_beyond_dimension_vanishes():
    assert dual_twisted_reduce(1, (1,), (2,)).is_zero()
    assert dual_twisted_reduce(1, (3,), (0,)).is_zero()
