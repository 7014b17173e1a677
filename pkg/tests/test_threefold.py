#!/usr/bin/python3
# vim: tabstop=8 expandtab shiftwidth=4 softtabstop=4
"""
test_threefold.py
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Rational

from libs.errors import KStabError
from libs.threefold import *

def test_unit_parameters():
    p = ThreefoldParams(1, 1)
    assert vol_anticanonical(p) == 4
    assert vol_via_fiber_integral(p) == 4
    assert s_of_Y(p) == Rational(27, 16)
    assert delta_bound_threefold(p) == Rational(16, 27)

def test_curve_pieces():
    curve = vol_curve_Y(ThreefoldParams(1, 1))
    assert curve.breakpoints == (0, 1, 2)
    assert curve.pieces == ((4,), (2, 3, 0, -1))
    assert curve(Rational(3, 2)) == Rational(25, 8)
    assert integrate_piecewise(curve, 0, 2) == Rational(27, 4)

def test_curve_needs_its_breakpoint():
    curve = vol_curve_Y(ThreefoldParams(1, 1))
    samples = sample_chambers(curve, [0, 2], 3)
    with pytest.raises(KStabError) as e:
        fit_piecewise(samples, [0, 2], 3)
    assert e.value.kind == "missed-breakpoint"

def test_bound_tends_to_three_fifths():
    for hk in (10**3, 10**6):
        bound = delta_bound_threefold(ThreefoldParams(1, hk))
        assert bound < DELTA_CEILING
    assert DELTA_CEILING - bound < Rational(1, 10**5)
    assert s_of_Y(ThreefoldParams(1, 10**6)) > S_FLOOR

def test_report():
    r = ThreefoldReport(ThreefoldParams(1, 1))
    assert r.passed
    assert r.volume == r.volume_fiber == 4
    assert r.integral == Rational(27, 4)
    assert r.quadrature_error < 1e-9
    assert r.gate is None
    assert sorted(r.checks) == ["bound-below-3/5", "curve-nonincreasing", "quadrature",
                                "s-above-5/3", "volume-fiber-integral"]

def test_report_gate():
    r = ThreefoldReport(ThreefoldParams(1, 1), a0=1)
    assert r.gate.threshold == Rational(4, 5)
    assert r.gate.status == "assumption-fails"
    r = ThreefoldReport(ThreefoldParams(1, 1), a0=10)
    assert r.gate.threshold == Rational(2, 7)
    assert r.gate.status == "gate-inconclusive"

def test_invalid_params():
    for h2, hk in ((0, 1), (1, 0), (-1, 2)):
        with pytest.raises(KStabError) as e:
            ThreefoldParams(h2, hk)
        assert e.value.kind == "invalid-params"
    p = ThreefoldParams(1, 0, relaxed=True)
    assert s_of_Y(p) == Rational(7, 4)
    with pytest.raises(KStabError):
        ThreefoldParams(0, 0, relaxed=True)

positive = st.fractions(min_value=Fraction(1, 50), max_value=Fraction(50))

@settings(max_examples=40, deadline=None)
@given(positive, positive)
def test_closed_forms_hold(h2, hk):
    p = ThreefoldParams(Rational(h2.numerator, h2.denominator), Rational(hk.numerator, hk.denominator))
    assert vol_via_fiber_integral(p) == vol_anticanonical(p)
    assert s_of_Y(p) > S_FLOOR
    assert delta_bound_threefold(p) < DELTA_CEILING
    assert vol_curve_Y(p).is_nonincreasing()
