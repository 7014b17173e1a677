#!/usr/bin/python3
# vim: tabstop=8 expandtab shiftwidth=4 softtabstop=4
"""
threefold.py
The threefold X = P_S(O + O(H)) over a surface S with K_S^2 = 0

Everything is expressed through h2 = H^2 and hk = H.(-K_S).  Y is the
section of X -> S with A_X(Y) = 1.  The fiber integral expands
(tH - K_S)^2 = t^2 H^2 + 2t H.(-K_S) + K_S^2 with a plus sign on the
middle term, which integrates to H^2 + 3H.(-K_S).
"""

import logging

from sympy import Poly, QQ, Rational

from libs.errors import KStabError, InconsistencyError
from libs.piecewise import *
from libs.ainvariant import assumption_threshold, GateReport

log = logging.getLogger(__name__)

DIM = 3
DELTA_CEILING = Rational(3, 5)
S_FLOOR = Rational(5, 3)

class ThreefoldParams:
    """This class holds the intersection numbers (h2, hk) with K_S^2 = 0"""
    def __init__(self, h2, hk, relaxed=False):
        self.h2 = Rational(h2)
        self.hk = Rational(hk)
        self.ksq = Rational(0)
        self.relaxed = relaxed
        if relaxed:
            if self.h2 < 0 or self.hk < 0 or self.h2 + self.hk == 0:
                raise KStabError("invalid-params", f"h2={self.h2}, hk={self.hk}")
        elif self.h2 <= 0 or self.hk <= 0:
            raise KStabError("invalid-params", f"need h2 > 0 and hk > 0, got {self.h2}, {self.hk}")

    def __repr__(self):
        return f"ThreefoldParams(h2={self.h2}, hk={self.hk})"


def vol_anticanonical(p):
    """vol(-K_X) = H^2 + 3H.(-K_S)"""
    return p.h2 + 3 * p.hk

def vol_via_fiber_integral(p):
    """6 int_0^1 (tH - K_S)^2 / 2 dt"""
    square = Poly(p.h2 * T**2 + 2 * p.hk * T + p.ksq, T, domain=QQ)
    F = (3 * square).integrate()
    return Rational(F.eval(1) - F.eval(0))

def _upper_piece(p):
    return Poly((2 - T) * ((T**2 - T + 1) * p.h2 + 3 * T * p.hk), T, domain=QQ)

def vol_curve_Y(p):
    """vol(-K_X - tY): constant up to t=1, then (2-t)((t^2-t+1)H^2 + 3tH.(-K_S))"""
    upper = _upper_piece(p)
    curve = PiecewisePolynomial([0, 1, 2], [[vol_anticanonical(p)],
                                            reversed(upper.all_coeffs())])
    if not curve.is_continuous():
        raise InconsistencyError(f"vol curve of Y jumps at t=1 for {p}")
    if curve(2) != 0:
        raise InconsistencyError(f"vol curve of Y is {curve(2)} at t=2 for {p}")
    return curve

def s_of_Y_closed(p):
    return (Rational(7, 4) * p.h2 + 5 * p.hk) / vol_anticanonical(p)

def s_of_Y(p):
    """S_X(Y) = (7/4 H^2 + 5H.(-K_S)) / (H^2 + 3H.(-K_S))"""
    closed = s_of_Y_closed(p)
    integral = integrate_piecewise(vol_curve_Y(p), 0, 2) / vol_anticanonical(p)
    if closed != integral:
        raise InconsistencyError(f"S(Y) closed form {closed} != integral {integral}")
    return closed

def delta_bound_threefold(p):
    """A_X(Y)/S_X(Y) = 1/S_X(Y), always below 3/5"""
    bound = 1 / s_of_Y(p)
    if not bound < DELTA_CEILING:
        raise InconsistencyError(f"delta bound {bound} not below {DELTA_CEILING} for {p}")
    return bound


class ThreefoldReport:
    """This class gathers every quantity of the threefold for one parameter pair"""
    def __init__(self, p, nodes=64, a0=None):
        self.params = p
        self.volume = vol_anticanonical(p)
        self.volume_fiber = vol_via_fiber_integral(p)
        self.curve = vol_curve_Y(p)
        self.s_value = s_of_Y(p)
        self.integral = integrate_piecewise(self.curve, 0, 2)
        self.quadrature = quadrature_integral(self.curve, 0, 2, nodes)
        self.quadrature_error = relative_error(self.quadrature, self.integral)
        self.bound = delta_bound_threefold(p)
        self.gate = None
        if a0 is not None:
            a0 = Rational(a0)
            self.gate = GateReport(assumption_threshold(DIM, a0), self.bound, "Y", a0)
        self.checks = {
            "volume-fiber-integral": self.volume == self.volume_fiber,
            "s-above-5/3": self.s_value > S_FLOOR,
            "bound-below-3/5": self.bound < DELTA_CEILING,
            "curve-nonincreasing": self.curve.is_nonincreasing(),
            "quadrature": self.quadrature_error < 1e-9,
        }

    def __repr__(self):
        return f"ThreefoldReport({self.params}: S={self.s_value} bound={self.bound})"

    @property
    def passed(self):
        return all(self.checks.values())
