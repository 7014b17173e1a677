#!/usr/bin/python3
# vim: tabstop=8 expandtab shiftwidth=4 softtabstop=4
"""
test_piecewise.py
"""

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Rational

from libs.errors import KStabError
from libs.piecewise import *

#vol(-K_X - tY) of the threefold at H^2 = H.(-K_S) = 1
def threefold_curve():
    return PiecewisePolynomial([0, 1, 2], [[4], [2, 3, 0, -1]])

def test_evaluation_and_chambers():
    pp = threefold_curve()
    assert pp.domain == (0, 2)
    assert pp.degree == 3
    assert pp.chambers() == [(0, 1), (1, 2)]
    assert pp(0) == 4
    assert pp(1) == 4
    assert pp(Rational(3, 2)) == Rational(25, 8)
    assert pp(2) == 0

def test_piece_index_at_breakpoints():
    pp = threefold_curve()
    assert pp.piece_index(0) == 0
    assert pp.piece_index(1) == 1
    assert pp.piece_index(2) == 1

def test_out_of_domain():
    with pytest.raises(KStabError) as e:
        threefold_curve()(3)
    assert e.value.kind == "out-of-domain"

def test_malformed_breakpoints():
    with pytest.raises(KStabError) as e:
        PiecewisePolynomial([0, 2, 1], [[1], [1]])
    assert e.value.kind == "malformed"
    with pytest.raises(KStabError):
        PiecewisePolynomial([0, 1], [[1], [2]])

def test_continuity_and_monotonicity():
    pp = threefold_curve()
    assert pp.is_continuous()
    assert pp.is_nonincreasing()
    jump = PiecewisePolynomial([0, 1, 2], [[1], [2]])
    assert jump.continuity_defects() == [1]
    assert not jump.is_nonincreasing()
    rising = PiecewisePolynomial([0, 1], [[0, 1]])
    assert not rising.is_nonincreasing()

def test_derivative_and_scaling():
    pp = threefold_curve()
    d = pp.derivative()
    assert d.pieces == ((0,), (3, 0, -3))
    assert pp.scaled(Rational(1, 4))(0) == 1

def test_exact_integral():
    pp = threefold_curve()
    assert integrate_piecewise(pp, 0, 2) == Rational(27, 4)
    assert integrate_piecewise(pp, 1, 2) == Rational(11, 4)
    assert integrate_piecewise(pp, Rational(1, 2), 1) == 2

def test_integral_outside_domain():
    with pytest.raises(KStabError) as e:
        integrate_piecewise(threefold_curve(), 0, 3)
    assert e.value.kind == "out-of-domain"

def test_quadrature_agrees():
    pp = threefold_curve()
    approx = quadrature_integral(pp, 0, 2, nodes=64)
    assert relative_error(approx, Rational(27, 4)) < 1e-9

def test_fit_recovers_curve():
    pp = threefold_curve()
    samples = sample_chambers(pp, [0, 1, 2], 3)
    assert len(samples) == 10
    assert fit_piecewise(samples, [0, 1, 2], 3).pieces == pp.pieces

def test_fit_detects_missed_breakpoint():
    pp = threefold_curve()
    samples = sample_chambers(pp, [0, 2], 3)
    with pytest.raises(KStabError) as e:
        fit_piecewise(samples, [0, 2], 3)
    assert e.value.kind == "missed-breakpoint"

def test_fit_needs_samples():
    with pytest.raises(KStabError) as e:
        fit_piecewise([(Rational(1, 2), 1)], [0, 1], 2)
    assert e.value.kind == "insufficient-samples"

coefficients = st.lists(st.integers(min_value=-20, max_value=20), min_size=1, max_size=4)

@settings(max_examples=25, deadline=None)
@given(coefficients, coefficients, st.integers(min_value=1, max_value=5))
def test_fit_reproduces_random_pieces(left, right, width):
    pp = PiecewisePolynomial([0, 1, 1 + width], [left, right])
    refit = fit_piecewise(pp.samples(), pp.breakpoints, pp.degree)
    assert refit.pieces == pp.pieces
