#!/usr/bin/python3
# vim: tabstop=8 expandtab shiftwidth=4 softtabstop=4
"""
decomposition.py
A and S on X versus its anticanonical model Z, and the delta transfer bound
"""

import logging

from sympy import Rational, oo

from libs.errors import KStabError, InconsistencyError
from libs.model import *
from libs.invariants import *

log = logging.getLogger(__name__)

class DecompositionRow:
    """One valuation: A and S on both sides and ord(B)"""
    def __init__(self, valuation, a_x, a_z, ord_b, s_x, s_z):
        self.valuation = valuation
        self.a_x = a_x
        self.a_z = a_z
        self.ord_b = ord_b
        self.s_x = s_x
        self.s_z = s_z
        self.ratio = a_x / s_x
        self.ratio_via_model = (a_z + ord_b) / (s_z + ord_b)
        self.a_identity = a_x == a_z + ord_b
        self.s_identity = s_x == s_z + ord_b

    def __repr__(self):
        return f"DecompositionRow({self.valuation.label()}: ordB={self.ord_b})"

    @property
    def passed(self):
        return self.a_identity and self.s_identity and self.ratio == self.ratio_via_model


def ord_b_via_polytope(pair, v):
    """ord_v(B) = min over P of <u,v> - psi_X(v); P is ample on Z"""
    L = pair.anticanonical()
    P = divisor_polytope(pair, L)
    return support_threshold(P, v.vector)[0] - support_value(pair, L, v)

def decomposition_row(model, vector):
    source, target = model.source, model.target
    vx = ToricValuation(source.fan, vector)
    vz = ToricValuation(target.fan, vector)
    rec = model.record(vector)
    ord_b = ord_b_via_polytope(source, vx)
    if ord_b != rec.ord_b:
        raise InconsistencyError(f"ord(B) at {vx.label()}: {rec.ord_b} from A, {ord_b} from P")
    return DecompositionRow(vx, rec.a_x, rec.a_z, ord_b,
                            s_invariant(source, vx), s_invariant(target, vz))

def s_decomposition_check(pair, extra=()):
    """Rows for every ray of X (and extra vectors); identities asserted exactly"""
    model = anticanonical_model(pair)
    vectors = list(pair.fan.rays)
    for v in extra:
        if tuple(v) not in vectors:
            vectors.append(tuple(v))
    rows = [decomposition_row(model, v) for v in vectors]
    for row in rows:
        if not row.passed:
            raise InconsistencyError(f"decomposition identity fails at {row.valuation.label()} on {pair.name}")
    return model, rows

def model_constant(pair, radius=1):
    """Largest t with A_Z >= t ord(B) over rays and radius candidates"""
    model = anticanonical_model(pair)
    best = oo
    for v in candidate_valuations(pair.fan, radius):
        rec = model.record(v.vector)
        if rec.a_z <= 0:
            raise KStabError("model-not-klt", f"A_Z({v.label()}) = {rec.a_z}")
        if rec.ord_b > 0:
            best = min(best, rec.a_z / rec.ord_b)
    return best

def delta_transfer_bound(delta_z, t, relaxed=False):
    """delta(Z)(t+1)/(delta(Z)+t), a lower bound for delta(X)"""
    delta_z, t = Rational(delta_z), Rational(t)
    if t <= 0:
        raise KStabError("precondition", f"t = {t} must be positive")
    if delta_z < 1 or (delta_z == 1 and not relaxed):
        raise KStabError("requires-stable-model", f"delta(Z) = {delta_z} is not > 1")
    bound = delta_z * (t + 1) / (delta_z + t)
    if delta_z > 1 and not bound > 1:
        raise InconsistencyError(f"transfer bound {bound} <= 1 for delta(Z)={delta_z}, t={t}")
    return bound
