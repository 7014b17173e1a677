#!/usr/bin/python3
# vim: tabstop=8 expandtab shiftwidth=4 softtabstop=4
"""
test_filtration.py
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Rational

from libs.errors import KStabError
from libs.filtration import *

def small():
    return FiltrationData(1, {1: [(0, 1), (1, 1)], 2: [(0, 2), (2, 1)]}, {1: 2, 2: 3}, 0, 2, "small")

def test_valid_filtration():
    f = small()
    assert filtration_validate(f) == []
    assert f.degrees() == [1, 2]
    assert (f.min_jump(2), f.max_jump(2)) == (0, 2)
    assert filtration_s_m(f, 1) == Rational(1, 2)
    assert filtration_s_m(f, 2) == Rational(1, 3)

def kinds(f):
    return [v.split(":")[0] for v in filtration_validate(f)]

def test_violations():
    assert kinds(FiltrationData(2, {3: [(0, 1)]}, {}, 0, 1)) == ["degree"]
    assert kinds(FiltrationData(1, {1: []}, {}, 0, 1)) == ["empty"]
    assert kinds(FiltrationData(1, {1: [(1, 1), (0, 1)]}, {}, 0, 2)) == ["monotone"]
    assert kinds(FiltrationData(1, {1: [(0, 2)]}, {1: 3}, 0, 1)) == ["multiplicity"]
    assert kinds(FiltrationData(1, {1: [(0, 0)]}, {}, 0, 1)) == ["multiplicity"]
    assert kinds(FiltrationData(1, {1: [(1, 1)]}, {}, 0, 1)) == ["linear-bound"]
    assert kinds(FiltrationData(1, {1: [(1, 1)], 2: [(3, 1)]}, {}, 0, 5)) == ["submultiplicative"]
    assert kinds(FiltrationData(1, {1: [(2, 1)], 2: [(3, 1)]}, {}, 0, 5)) == ["superadditive"]

def test_missing_degree():
    with pytest.raises(KStabError) as e:
        filtration_s_m(small(), 3)
    assert e.value.kind == "missing-degree"
    with pytest.raises(KStabError):
        filtration_s_estimate(FiltrationData(1, {}, {}, 0, 1))

def test_s_estimate():
    f = FiltrationData(1, {1: [(1, 1)], 2: [(2, 1)], 3: [(3, 1)], 4: [(4, 1)]}, {}, 0, 2)
    assert filtration_s_estimate(f) == (1, 4, 0)
    value, m, spread = filtration_s_estimate(small())
    assert (value, m, spread) == (Rational(1, 3), 2, Rational(1, 6))

def test_trivial_filtration(pairs):
    f = trivial_filtration(pairs["p2"], [1, 2, 3])
    assert filtration_validate(f) == []
    assert f.dims == {1: 10, 2: 28, 3: 55}
    assert all(filtration_s_m(f, m) == 0 for m in (1, 2, 3))

def test_valuation_filtration(pairs):
    pair = pairs["f3"]
    v = ToricValuation(pair.fan, (0, 1))
    f = valuation_filtration(pair, v, [2, 4, 6])
    assert filtration_validate(f) == []
    assert f.e_plus == 3
    for m in (2, 4, 6):
        assert filtration_s_m(f, m) == s_m(pair, v, m)

@settings(max_examples=20, deadline=None)
@given(st.fractions(min_value=Fraction(-2), max_value=Fraction(2)))
def test_shift_moves_s_m_linearly(c):
    c = Rational(c.numerator, c.denominator)
    f = small()
    g = shift_filtration(f, c)
    assert filtration_validate(g) == []
    for m in (1, 2):
        assert filtration_s_m(g, m) == filtration_s_m(f, m) + c
