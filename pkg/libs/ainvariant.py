#!/usr/bin/python3
# vim: tabstop=8 expandtab shiftwidth=4 softtabstop=4
"""
ainvariant.py
The constant a(X,Delta), the threshold (n+1)/(n+1+a) and full pair reports

a(X,Delta) is the sup of t with A ample, A - t(K+Delta) ample and
-K-Delta-A pseudoeffective.  Writing A = L - z with L = -K-Delta and
z >= 0 effective, ampleness across every wall w becomes
    w(z) < w(L)            and       w(z) < (1+t) w(L)
so the sup is the optimum of one linear program (closure of a convex
set), and +oo when no wall is negative on L.
"""

import logging

from sympy import Rational, oo
from sympy.solvers.simplex import linprog, InfeasibleLPError, UnboundedLPError

from libs.errors import InconsistencyError
from libs.invariants import *

log = logging.getLogger(__name__)

#doubling stops here and the pair is treated as having no finite bracket
BISECTION_CEILING = Rational(2)**40

class AInvariant:
    """Exact value plus the bisection bracket (lo, hi] around it"""
    def __init__(self, value, lo=None, hi=None):
        self.value = value
        self.lo = lo
        self.hi = hi

    def __repr__(self):
        if self.lo is None:
            return f"AInvariant({self.value})"
        return f"AInvariant({self.value} in ({self.lo},{self.hi}])"

    @property
    def is_infinite(self):
        return self.value == oo


def _wall_data(pair):
    L = pair.anticanonical()
    forms = [w.form() for w in pair.fan.walls]
    return forms, [dot(f, L.coeffs) for f in forms]

def a_invariant_exact(pair):
    pair.require_big()
    forms, wl = _wall_data(pair)
    if all(x >= 0 for x in wl):
        return oo
    nrays = len(pair.fan.rays)
    rows, rhs = [], []
    for f, x in zip(forms, wl):
        if x >= 0:
            rows.append(list(f) + [0])
        else:
            rows.append(list(f) + [-x])
        rhs.append(x)
    try:
        value, _point = linprog([0] * nrays + [-1], rows, rhs)
    except UnboundedLPError:
        return oo
    except InfeasibleLPError:
        raise InconsistencyError(f"no ample A below -K-D on big pair {pair.name}")
    return Rational(-value)

def strictly_feasible(pair, t):
    """True if some ample A has A + tL ample and L - A effective"""
    forms, wl = _wall_data(pair)
    t = Rational(t)
    nrays = len(pair.fan.rays)
    rows, rhs = [], []
    for f, x in zip(forms, wl):
        rows.append(list(f) + [1])
        rhs.append(min(x, (1 + t) * x))
    rows.append([0] * nrays + [1])
    rhs.append(1)
    try:
        value, _point = linprog([0] * nrays + [-1], rows, rhs)
    except InfeasibleLPError:
        return False
    return -value > 0

def a_invariant_bisection(pair, denominator):
    """Bracket (lo, hi] with strict feasibility at lo and infeasibility at hi"""
    pair.require_big()
    lo = Rational(0)
    if not strictly_feasible(pair, lo):
        raise InconsistencyError(f"t=0 infeasible on big pair {pair.name}")
    hi = Rational(1)
    while strictly_feasible(pair, hi):
        lo = hi
        hi = 2 * hi
        if hi > BISECTION_CEILING:
            return oo, oo
    step = Rational(1, int(denominator))
    while hi - lo > step:
        mid = (lo + hi) / 2
        if strictly_feasible(pair, mid):
            lo = mid
        else:
            hi = mid
    log.debug("a(%s) bracket (%s, %s]", pair.name, lo, hi)
    return lo, hi

def a_invariant(pair, denominator=65536):
    """a(X,Delta) by the exact LP, confirmed by strict-feasibility bisection"""
    exact = a_invariant_exact(pair)
    if exact == oo:
        if not strictly_feasible(pair, BISECTION_CEILING):
            raise InconsistencyError(f"a({pair.name}) = oo but t={BISECTION_CEILING} infeasible")
        return AInvariant(oo)
    lo, hi = a_invariant_bisection(pair, denominator)
    if hi == oo or not lo < exact <= hi:
        raise InconsistencyError(f"a({pair.name}) = {exact} outside bracket ({lo}, {hi}]")
    return AInvariant(exact, lo, hi)

def assumption_threshold(dim, a_value):
    """(n+1)/(n+1+a), 0 when a is infinite"""
    if a_value == oo:
        return Rational(0)
    return Rational(dim + 1, 1) / (dim + 1 + a_value)


class GateReport:
    def __init__(self, threshold, delta_upper, witness, a_value):
        self.threshold = threshold
        self.delta_upper = delta_upper
        self.witness = witness
        self.a_value = a_value
        if delta_upper < threshold:
            self.status = "assumption-fails"
        else:
            self.status = "gate-inconclusive"

    def __repr__(self):
        return f"GateReport({self.status}: delta<={self.delta_upper} vs {self.threshold})"

def assumption_gate(pair, radius, denominator=65536):
    """Compare delta_upper with (n+1)/(n+1+a(X,Delta))"""
    pair.require_big()
    delta, witness = delta_upper(pair, radius)
    a_value = a_invariant(pair, denominator).value
    return GateReport(assumption_threshold(pair.dim, a_value), delta, witness, a_value)

def invariant_report(pair, radius, schedule, denominator=65536, a=None):
    """Every invariant of one pair in a single InvariantReport; a is a precomputed AInvariant"""
    pair.require_big()
    volume = divisor_volume(pair, pair.anticanonical())
    reports = [valuation_report(pair, v, schedule)
               for v in candidate_valuations(pair.fan, radius)]
    best = min(reports, key=lambda r: r.ratio)
    delta_m = {m: delta_m_upper(pair, m) for m in schedule}
    if a is None:
        a = a_invariant(pair, denominator)
    a_value = a.value
    threshold = assumption_threshold(pair.dim, a_value)
    flags = {
        "s-routes-agree": all(r.s_exact == r.s_curve for r in reports),
        "candidates-semistable": best.ratio >= 1,
        "threshold-below-one": threshold < 1,
        "gate": GateReport(threshold, best.ratio, best.valuation, a_value).status,
    }
    return InvariantReport(pair, volume, reports, best.ratio, best.valuation,
                           delta_m, a_value, threshold, flags)
