#!/usr/bin/python3
# vim: tabstop=8 expandtab shiftwidth=4 softtabstop=4
"""
piecewise.py
Exact piecewise polynomials of one variable: fitting, calculus, checks
"""

import bisect
import logging

import numpy as np
from sympy import Rational, Poly, QQ, symbols
from sympy.polys.polyfuncs import interpolate

from libs.errors import KStabError

log = logging.getLogger(__name__)

T = symbols("t")

def _trim(coeffs):
    coeffs = list(coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)

class PiecewisePolynomial:
    """Polynomial pieces on [t_0,t_1], ..., [t_{k-1},t_k]

    pieces[j] holds the ascending coefficients of the piece on
    [breakpoints[j], breakpoints[j+1]].
    """
    def __init__(self, breakpoints, pieces):
        self.breakpoints = tuple(Rational(b) for b in breakpoints)
        self.pieces = tuple(_trim(Rational(c) for c in p) for p in pieces)
        if len(self.breakpoints) < 2:
            raise KStabError("malformed", "need at least two breakpoints")
        if len(self.pieces) != len(self.breakpoints) - 1:
            raise KStabError("malformed", "one piece per chamber required")
        for a, b in zip(self.breakpoints, self.breakpoints[1:]):
            if not a < b:
                raise KStabError("malformed", "breakpoints must increase strictly")

    def __repr__(self):
        parts = []
        for j, p in enumerate(self.pieces):
            a, b = self.breakpoints[j], self.breakpoints[j+1]
            parts.append(f"[{a},{b}]: {self.poly(j).as_expr()}")
        return "PiecewisePolynomial(" + "; ".join(parts) + ")"

    @property
    def domain(self):
        return self.breakpoints[0], self.breakpoints[-1]

    @property
    def degree(self):
        return max(len(p) - 1 for p in self.pieces)

    def chambers(self):
        return list(zip(self.breakpoints, self.breakpoints[1:]))

    def poly(self, j):
        return Poly(list(reversed(self.pieces[j])), T, domain=QQ)

    def piece_index(self, t):
        t = Rational(t)
        lo, hi = self.domain
        if t < lo or t > hi:
            raise KStabError("out-of-domain", f"t={t} outside [{lo},{hi}]")
        j = bisect.bisect_right(self.breakpoints, t) - 1
        return min(j, len(self.pieces) - 1)

    def __call__(self, t):
        t = Rational(t)
        return Rational(self.poly(self.piece_index(t)).eval(t))

    def continuity_defects(self):
        """Breakpoints where the two neighbouring pieces disagree"""
        defects = []
        for j in range(1, len(self.pieces)):
            t = self.breakpoints[j]
            if self.poly(j-1).eval(t) != self.poly(j).eval(t):
                defects.append(t)
        return defects

    def is_continuous(self):
        return not self.continuity_defects()

    def is_nonincreasing(self):
        """Exact sign check of the derivative on every chamber"""
        for j, (a, b) in enumerate(self.chambers()):
            d = self.poly(j).diff(T)
            if d.is_zero:
                continue
            where = {a, b}
            for (s, e), _mult in d.intervals(inf=a, sup=b):
                where.add(max(a, min(b, Rational(s))))
                where.add(max(a, min(b, Rational(e))))
            if any(d.eval(p) > 0 for p in where):
                return False
        return self.is_continuous()

    def derivative(self):
        pieces = []
        for j in range(len(self.pieces)):
            pieces.append(reversed(self.poly(j).diff(T).all_coeffs()))
        return PiecewisePolynomial(self.breakpoints, pieces)

    def scaled(self, c):
        c = Rational(c)
        return PiecewisePolynomial(self.breakpoints, [[c*x for x in p] for p in self.pieces])

    def samples(self, per_chamber=None):
        """Interior samples usable by fit_piecewise"""
        if per_chamber is None:
            per_chamber = self.degree + 2
        return sample_chambers(self, self.breakpoints, per_chamber - 2)


def sample_chambers(func, breakpoints, degree_bound):
    """degree_bound+2 equally spaced interior samples of func per chamber"""
    samples = []
    count = degree_bound + 2
    for a, b in zip(breakpoints, breakpoints[1:]):
        a, b = Rational(a), Rational(b)
        for k in range(1, count + 1):
            t = a + (b - a) * Rational(k, count + 1)
            samples.append((t, Rational(func(t))))
    return samples

def interpolate_checked(points, degree_bound, where=""):
    """Interpolate the first degree_bound+1 points, validate the rest"""
    head = points[:degree_bound+1]
    if len(head) == 1:
        p = Poly(head[0][1], T, domain=QQ)
    else:
        p = Poly(interpolate(list(head), T), T, domain=QQ)
    if p.degree() > degree_bound:
        raise KStabError("missed-breakpoint", f"degree {p.degree()} fit on {where}")
    for t, v in points[degree_bound+1:]:
        if p.eval(t) != v:
            raise KStabError("missed-breakpoint",
                             f"sample t={t} disagrees on chamber {where}")
    return tuple(reversed(p.all_coeffs()))

def fit_piecewise(samples, breakpoints, degree_bound):
    """Rebuild an exact piecewise polynomial from chamber-wise samples"""
    breaks = sorted(set(Rational(b) for b in breakpoints))
    values = {}
    for t, v in samples:
        values[Rational(t)] = Rational(v)
    pieces = []
    for a, b in zip(breaks, breaks[1:]):
        inside = sorted((t, v) for t, v in values.items() if a < t < b)
        if len(inside) < degree_bound + 1:
            raise KStabError("insufficient-samples",
                             f"{len(inside)} samples on [{a},{b}], need {degree_bound+1}")
        pieces.append(interpolate_checked(inside, degree_bound, f"[{a},{b}]"))
    log.debug("fit %d chambers of degree <= %d", len(pieces), degree_bound)
    return PiecewisePolynomial(breaks, pieces)

def integrate_piecewise(pp, a, b):
    """Exact integral of pp over [a,b] via antiderivatives"""
    a, b = Rational(a), Rational(b)
    lo, hi = pp.domain
    if a > b or a < lo or b > hi:
        raise KStabError("out-of-domain", f"[{a},{b}] not inside [{lo},{hi}]")
    total = Rational(0)
    for j, (s, e) in enumerate(pp.chambers()):
        left, right = max(a, s), min(b, e)
        if left >= right:
            continue
        F = pp.poly(j).integrate()
        total += F.eval(right) - F.eval(left)
    return Rational(total)

def quadrature_integral(pp, a, b, nodes=64):
    """Floating Gauss-Legendre integral, chamber by chamber"""
    a, b = Rational(a), Rational(b)
    x, w = np.polynomial.legendre.leggauss(nodes)
    total = 0.0
    for j, (s, e) in enumerate(pp.chambers()):
        left, right = max(a, s), min(b, e)
        if left >= right:
            continue
        lf, rf = float(left), float(right)
        coeffs = [float(c) for c in pp.pieces[j]]
        t = 0.5 * (rf - lf) * x + 0.5 * (rf + lf)
        total += 0.5 * (rf - lf) * float(np.dot(w, np.polynomial.polynomial.polyval(t, coeffs)))
    return total

def relative_error(approx, exact):
    exact = float(exact)
    if exact == 0.0:
        return abs(approx)
    return abs(approx - exact) / abs(exact)
