#!/usr/bin/python3
# vim: tabstop=8 expandtab shiftwidth=4 softtabstop=4
"""
invariants.py
Volume curves, S and S_m invariants, basis type divisors and delta bounds
"""

import functools
import logging

import numpy as np
from sympy import Rational, factorial, oo

from libs.errors import KStabError, InconsistencyError
from libs.fan import *

log = logging.getLogger(__name__)

def clear_caches():
    for f in (_s_pair, s_m, _orders):
        f.cache_clear()

def slice_family(pair, v):
    """P(t) = {u in P_(-K-D) : <u,v> - psi(v) >= t}"""
    L = pair.anticanonical()
    psi = support_value(pair, L, v)
    rays = pair.fan.rays
    return PolytopeFamily(rays + (v.vector,), L.coeffs + (-psi,),
                          [0] * len(rays) + [-1])

def pseudoeffective_threshold(pair, v):
    """tau = max over P of <u,v> - psi(v)"""
    L = pair.anticanonical()
    P = divisor_polytope(pair, L)
    return support_threshold(P, v.vector)[1] - support_value(pair, L, v)

def vol_curve(pair, v):
    """t -> vol(-K-D-tE_v) on [0, tau] as an exact piecewise polynomial"""
    pair.require_big()
    tau = pseudoeffective_threshold(pair, v)
    curve = slice_family(pair, v).volume_curve(0, tau, scale=factorial(pair.dim))
    vol = divisor_volume(pair, pair.anticanonical())
    if curve(0) != vol:
        raise InconsistencyError(f"vol curve of {v.label()} starts at {curve(0)}, volume is {vol}")
    if curve(tau) != 0:
        raise InconsistencyError(f"vol curve of {v.label()} ends at {curve(tau)}")
    if not curve.is_nonincreasing():
        raise InconsistencyError(f"vol curve of {v.label()} is not nonincreasing")
    log.debug("%s %s: %d chambers, tau=%s", pair.name, v.label(), len(curve.pieces), tau)
    return curve

def s_invariant_curve(pair, v):
    curve = vol_curve(pair, v)
    vol = divisor_volume(pair, pair.anticanonical())
    return integrate_piecewise(curve, *curve.domain) / vol

def s_invariant_barycenter(pair, v):
    pair.require_big()
    L = pair.anticanonical()
    bary = polytope_barycenter(divisor_polytope(pair, L))
    return Rational(dot(bary, v.vector) - support_value(pair, L, v))

@functools.lru_cache(maxsize=None)
def _s_pair(pair, v):
    exact = s_invariant_barycenter(pair, v)
    curve = s_invariant_curve(pair, v)
    if exact != curve:
        raise InconsistencyError(
            f"S({v.label()}) on {pair.name}: barycenter {exact} != curve {curve}")
    return exact, curve

def s_invariant(pair, v):
    """S by both routes, which must agree exactly"""
    return _s_pair(pair, v)[0]

def s_invariant_raw(pair, vector):
    """Barycenter formula on a non primitive vector; degree one homogeneous"""
    pair.require_big()
    L = pair.anticanonical()
    vector = tuple(int(c) for c in vector)
    bary = polytope_barycenter(divisor_polytope(pair, L))
    return Rational(dot(bary, vector) - support_value(pair, L, vector))

@functools.lru_cache(maxsize=None)
def _orders(pair, v, m):
    L = pair.anticanonical()
    pts = lattice_array(divisor_polytope(pair, L), m)
    if len(pts) == 0:
        raise KStabError("no-sections", f"no sections in degree {m} on {pair.name}")
    shift = m * support_value(pair, L, v)
    values, counts = np.unique(pts @ np.array(v.vector, dtype=np.int64), return_counts=True)
    return tuple((Rational(int(x)) - shift, int(c)) for x, c in zip(values, counts))

def section_orders(pair, v, m):
    """(order of vanishing, multiplicity) over the monomial basis of R_m"""
    return list(_orders(pair, v, m))

def section_count(pair, m):
    return len(lattice_array(divisor_polytope(pair, pair.anticanonical()), m))

@functools.lru_cache(maxsize=None)
def s_m(pair, v, m):
    """S_m = (1/(m N_m)) sum of orders over the monomial basis"""
    orders = _orders(pair, v, m)
    total = sum(lam * c for lam, c in orders)
    count = sum(c for _lam, c in orders)
    return Rational(total / (m * count))

def basis_type_divisor(pair, m):
    """Monomial m-basis type divisor sum S_m(E_rho) D_rho"""
    fan = pair.fan
    L = pair.anticanonical()
    D = ToricDivisor(fan, [s_m(pair, v, m) for v in ray_valuations(fan)], f"D_{m}")
    pts = lattice_array(divisor_polytope(pair, L), m)
    center = [Rational(int(pts[:, i].sum()), m * len(pts)) for i in range(pair.dim)]
    for i, ray in enumerate(fan.rays):
        if D.coeffs[i] - L.coeffs[i] != dot(center, ray):
            raise InconsistencyError(f"D_{m} is not Q-linearly equivalent to -K-D on {pair.name}")
    return D

def delta_m_upper(pair, m):
    """min over rays of A/S_m, an upper bound for delta_m"""
    value = oo
    for v in ray_valuations(pair.fan):
        sm = s_m(pair, v, m)
        if sm > 0:
            value = min(value, log_discrepancy(pair, v) / sm)
    if pair.fan.is_smooth():
        lct = lct_snc_toric(pair, basis_type_divisor(pair, m))
        if lct != value:
            raise InconsistencyError(f"delta_{m} bound {value} != lct {lct} on {pair.name}")
    return value

def delta_upper(pair, radius):
    """min of A/S over the candidate valuations and the minimizer"""
    pair.require_big()
    best, witness = None, None
    for v in candidate_valuations(pair.fan, radius):
        ratio = log_discrepancy(pair, v) / s_invariant(pair, v)
        log.debug("%s %s: A/S=%s", pair.name, v.label(), ratio)
        if best is None or ratio < best:
            best, witness = ratio, v
    return Rational(best), witness


class AmpleSResult:
    def __init__(self, s_value, dim, tau, curve):
        self.s_value = s_value
        self.bound = Rational(1, dim + 1)
        self.passed = s_value >= self.bound
        self.tau = tau
        self.curve = curve

    def __repr__(self):
        return f"AmpleSResult(S={self.s_value} bound={self.bound} passed={self.passed})"

def ample_s_check(pair, A):
    """S(A) = (1/vol) int vol(-K-D-tA) dt compared with 1/(n+1)"""
    if not A.is_ample():
        raise KStabError("precondition", f"{A.name or A} is not ample")
    L = pair.anticanonical()
    if not is_pseudoeffective(pair, L - A):
        raise KStabError("precondition", f"-K-D-{A.name or 'A'} is not pseudoeffective")
    pair.require_big()
    family = PolytopeFamily(pair.fan.rays, L.coeffs, [-a for a in A.coeffs])
    tau = family.last_nonempty(0)
    curve = family.volume_curve(0, tau, scale=factorial(pair.dim))
    s_value = integrate_piecewise(curve, 0, tau) / divisor_volume(pair, L)
    return AmpleSResult(Rational(s_value), pair.dim, tau, curve)

def ample_test_divisors(pair):
    """Ample classes A with -K-D-A pseudoeffective, from scaled -K-D and rays"""
    L = pair.anticanonical()
    found = []
    if L.is_ample():
        for c in (Rational(1), Rational(1, 2), Rational(1, 3)):
            A = L.scale(c)
            A.name = "-K-D" if c == 1 else f"{c}(-K-D)"
            found.append(A)
    for name in sorted(pair.divisors):
        A = pair.divisor(name)
        if A.is_ample() and is_pseudoeffective(pair, L - A):
            found.append(A)
    return found


class ValuationReport:
    """A, S by both routes, tau and the S_m table for one valuation"""
    def __init__(self, valuation, a, s_exact, s_curve, tau, s_m_table):
        self.valuation = valuation
        self.a = a
        self.s_exact = s_exact
        self.s_curve = s_curve
        self.tau = tau
        self.s_m_table = dict(s_m_table)
        self.ratio = a / s_exact

    def __repr__(self):
        return f"ValuationReport({self.valuation.label()}: A={self.a} S={self.s_exact})"

def valuation_report(pair, v, schedule=()):
    a = log_discrepancy(pair, v)
    s_exact, s_curve = _s_pair(pair, v)
    tau = pseudoeffective_threshold(pair, v)
    table = {m: s_m(pair, v, m) for m in schedule}
    return ValuationReport(v, a, s_exact, s_curve, tau, table)


class InvariantReport:
    """This class collects every invariant computed for one pair"""
    def __init__(self, pair, volume, reports, delta_upper, witness, delta_m,
                 a_invariant, threshold, flags):
        self.pair = pair
        self.volume = volume
        self.reports = reports
        self.delta_upper = delta_upper
        self.witness = witness
        self.delta_m = dict(delta_m)
        self.a_invariant = a_invariant
        self.threshold = threshold
        self.flags = dict(flags)

    def __repr__(self):
        return f"InvariantReport({self.pair.name}: delta<={self.delta_upper} a={self.a_invariant})"
