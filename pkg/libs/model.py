#!/usr/bin/python3
# vim: tabstop=8 expandtab shiftwidth=4 softtabstop=4
"""
model.py
Anticanonical model of a toric pair: the normal fan of P_{-K-Delta}
"""

import logging

from libs.errors import KStabError, InconsistencyError
from libs.fan import *

log = logging.getLogger(__name__)

class ValuationRecord:
    """A_X, A_Z and ord(B) for one valuation"""
    def __init__(self, vector, a_x, a_z):
        self.vector = vector
        self.a_x = a_x
        self.a_z = a_z
        self.ord_b = a_x - a_z

    def __repr__(self):
        return f"ValuationRecord({self.vector}: A_X={self.a_x} A_Z={self.a_z} ordB={self.ord_b})"


class ModelDecomposition:
    """This class holds X, its anticanonical model Z and the divisor B"""
    def __init__(self, source, target, ray_map):
        self.source = source
        self.target = target
        #target ray index -> source ray index
        self.ray_map = tuple(ray_map)
        self.records = [self.record(v) for v in source.fan.rays]

    def __repr__(self):
        return f"ModelDecomposition({self.source.name} -> {len(self.target.fan.rays)} rays)"

    def record(self, vector):
        vector = tuple(vector)
        a_x = log_discrepancy(self.source, ToricValuation(self.source.fan, vector))
        a_z = log_discrepancy(self.target, ToricValuation(self.target.fan, vector))
        rec = ValuationRecord(vector, a_x, a_z)
        if rec.ord_b < 0:
            raise InconsistencyError(f"ord(B) = {rec.ord_b} < 0 at {vector} on {self.source.name}")
        return rec

    def contracted_rays(self):
        kept = set(self.ray_map)
        return [i for i in range(len(self.source.fan.rays)) if i not in kept]

    def is_trivial(self):
        return all(r.ord_b == 0 for r in self.records)


def anticanonical_model(pair):
    """Toric Z = Proj R(X, -(K+Delta)) with Delta_Z carried over on shared rays"""
    pair.require_big()
    fan = pair.fan
    P = divisor_polytope(pair, pair.anticanonical())
    facets = P.facets()
    verts = P.vertices()
    tight = P.tight_sets()
    cones = []
    for k in range(len(verts)):
        on = sorted(i for i in tight[k] if i in facets)
        if len(on) != pair.dim:
            raise KStabError("non-simplicial-model",
                             f"vertex {verts[k]} of P_(-K-D) lies on {len(on)} facets")
        cones.append([facets.index(i) for i in on])
    rays = [fan.rays[i] for i in facets]
    delta = [pair.delta[i] for i in facets]
    zfan = Fan(rays, cones, name=pair.name + "-model")
    target = ToricPair(zfan, delta, name=pair.name + "-model")
    log.debug("model of %s keeps rays %s", pair.name, facets)
    return ModelDecomposition(pair, target, facets)
