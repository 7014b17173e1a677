#!/usr/bin/python3
# vim: tabstop=8 expandtab shiftwidth=4 softtabstop=4
"""
fan.py
Simplicial complete fans, toric pairs, divisors and divisorial valuations
"""

import itertools
import logging
import math

from sympy import Matrix, Rational, factorial, oo

from libs.errors import KStabError
from libs.polytope import *

log = logging.getLogger(__name__)

#base of the generic test point used by the completeness check
GENERIC_BASE = 10**6

def primitive(vector):
    """Primitive generator of the ray through vector and the scale factor"""
    vector = tuple(int(c) for c in vector)
    if not any(vector):
        raise KStabError("malformed", "zero vector has no primitive generator")
    g = math.gcd(*vector)
    return tuple(c // g for c in vector), g

class Fan:
    """This class is a complete simplicial fan"""
    def __init__(self, rays, cones, name=""):
        self.name = name
        self.rays = tuple(tuple(int(c) for c in v) for v in rays)
        if len(self.rays) == 0:
            raise KStabError("invalid-fan", "no rays")
        self.dim = len(self.rays[0])
        for v in self.rays:
            if len(v) != self.dim:
                raise KStabError("invalid-fan", f"ray {v} has wrong dimension")
            if not any(v) or math.gcd(*v) != 1:
                raise KStabError("invalid-fan", f"ray {v} is not primitive")
        if len(set(self.rays)) != len(self.rays):
            raise KStabError("invalid-fan", "repeated ray")
        self.cones = tuple(tuple(sorted(int(i) for i in c)) for c in cones)
        self._coords = []
        for c in self.cones:
            if len(c) != self.dim or len(set(c)) != self.dim:
                raise KStabError("invalid-fan", f"cone {c} is not simplicial")
            if any(i < 0 or i >= len(self.rays) for i in c):
                raise KStabError("invalid-fan", f"cone {c} refers to a missing ray")
            M = Matrix([self.rays[i] for i in c]).T
            if M.det() == 0:
                raise KStabError("invalid-fan", f"cone {c} rays are dependent")
            self._coords.append(M.inv())
        self.walls = self._find_walls()
        self._check_complete()

    def __repr__(self):
        return f"Fan({self.name!r}, rays={self.rays}, cones={self.cones})"

    def key(self):
        return (self.rays, self.cones)

    def __eq__(self, other):
        return isinstance(other, Fan) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def cone_coordinates(self, k, vector):
        return tuple(Rational(x) for x in self._coords[k] * Matrix(vector))

    def cone_of(self, vector):
        """First maximal cone containing vector and the coordinates in it"""
        for k in range(len(self.cones)):
            c = self.cone_coordinates(k, vector)
            if all(x >= 0 for x in c):
                return k, c
        raise KStabError("internal", f"{vector} lies in no cone of {self.name}")

    def is_smooth(self):
        return all(abs(Matrix([self.rays[i] for i in c]).det()) == 1 for c in self.cones)

    def _find_walls(self):
        shared = {}
        for k, c in enumerate(self.cones):
            for drop in c:
                wall = tuple(i for i in c if i != drop)
                shared.setdefault(wall, []).append((k, drop))
        walls = []
        for wall, sides in sorted(shared.items()):
            if len(sides) != 2:
                raise KStabError("invalid-fan", f"wall {wall} bounds {len(sides)} cones")
            (k1, r1), (k2, r2) = sides
            walls.append(Wall(self, wall, k1, r1, k2, r2))
        return walls

    def _check_complete(self):
        for w in self.walls:
            normal = w.normal()
            s1 = dot(normal, self.rays[w.ray1])
            s2 = dot(normal, self.rays[w.ray2])
            if s1 * s2 >= 0:
                raise KStabError("invalid-fan", f"cones across wall {w.rays} overlap")
        generic = tuple(GENERIC_BASE**i + 1 for i in range(self.dim))
        inside = [k for k in range(len(self.cones))
                  if all(x > 0 for x in self.cone_coordinates(k, generic))]
        if len(inside) != 1:
            raise KStabError("invalid-fan", "cones do not cover space exactly once")


class Wall:
    """Codimension one cone shared by cone1 (extra ray1) and cone2 (extra ray2)"""
    def __init__(self, fan, rays, cone1, ray1, cone2, ray2):
        self.fan = fan
        self.rays = rays
        self.cone1 = cone1
        self.ray1 = ray1
        self.cone2 = cone2
        self.ray2 = ray2

    def __repr__(self):
        return f"Wall({self.rays}: {self.ray1}|{self.ray2})"

    def normal(self):
        if not self.rays:
            return (1,)
        M = Matrix([self.fan.rays[i] for i in self.rays])
        return tuple(M.nullspace()[0])

    def form(self):
        """Linear form a -> a[ray2] - sum c_i a[i], a positive multiple of D.C_wall"""
        fan = self.fan
        coords = fan.cone_coordinates(self.cone1, fan.rays[self.ray2])
        form = [Rational(0)] * len(fan.rays)
        form[self.ray2] += 1
        for i, c in zip(fan.cones[self.cone1], coords):
            form[i] -= c
        return tuple(form)

    def evaluate(self, coeffs):
        return Rational(dot(self.form(), coeffs))


class ToricDivisor:
    """This class is a torus invariant Q-divisor sum a_rho D_rho"""
    def __init__(self, fan, coeffs, name=""):
        self.fan = fan
        self.coeffs = tuple(Rational(a) for a in coeffs)
        self.name = name
        if len(self.coeffs) != len(fan.rays):
            raise KStabError("malformed",
                             f"divisor {name!r} has {len(self.coeffs)} coefficients for {len(fan.rays)} rays")

    def __repr__(self):
        return f"ToricDivisor({self.name!r}, {[str(a) for a in self.coeffs]})"

    def __eq__(self, other):
        return isinstance(other, ToricDivisor) and self.fan == other.fan and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.fan, self.coeffs))

    def __add__(self, other):
        return ToricDivisor(self.fan, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        return ToricDivisor(self.fan, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def scale(self, c):
        c = Rational(c)
        return ToricDivisor(self.fan, [c*a for a in self.coeffs])

    def is_effective_cycle(self):
        return all(a >= 0 for a in self.coeffs)

    def wall_values(self):
        return [w.evaluate(self.coeffs) for w in self.fan.walls]

    def is_ample(self):
        return all(x > 0 for x in self.wall_values())

    def is_nef(self):
        return all(x >= 0 for x in self.wall_values())


class ToricPair:
    """This class is a toric pair (X, Delta) with boundary on the rays"""
    def __init__(self, fan, delta=None, name="", divisors=None):
        self.fan = fan
        self.name = name or fan.name
        if delta is None:
            delta = [0] * len(fan.rays)
        self.delta = tuple(Rational(d) for d in delta)
        if len(self.delta) != len(fan.rays):
            raise KStabError("invalid-pair", "one boundary coefficient per ray required")
        for d in self.delta:
            if d < 0 or d >= 1:
                raise KStabError("invalid-pair", f"boundary coefficient {d} not in [0,1)")
        self.divisors = dict(divisors or {})

    def __repr__(self):
        return f"ToricPair({self.name!r}, delta={[str(d) for d in self.delta]})"

    def key(self):
        return (self.fan.key(), self.delta)

    def __eq__(self, other):
        return isinstance(other, ToricPair) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    @property
    def dim(self):
        return self.fan.dim

    def anticanonical(self):
        """-K-Delta with coefficients 1 - Delta_rho"""
        return ToricDivisor(self.fan, [1 - d for d in self.delta], "-K-D")

    def divisor(self, name):
        if name in ("-K", "-K-D"):
            return self.anticanonical()
        if name not in self.divisors:
            raise KStabError("unknown-divisor", f"unknown divisor {name!r}")
        return ToricDivisor(self.fan, self.divisors[name], name)

    def is_big(self):
        P = divisor_polytope(self, self.anticanonical())
        return not P.is_empty() and P.is_full_dimensional()

    def require_big(self):
        if not self.is_big():
            raise KStabError("not-big", f"-K-Delta is not big on {self.name}")


class ToricValuation:
    """This class is the divisorial valuation ord_E of a primitive vector"""
    def __init__(self, fan, vector):
        vector = tuple(int(c) for c in vector)
        if primitive(vector)[1] != 1:
            raise KStabError("malformed", f"{vector} is not primitive")
        self.fan = fan
        self.vector = vector
        self.cone, self.coords = fan.cone_of(vector)

    def __repr__(self):
        return f"ToricValuation({self.vector})"

    def __eq__(self, other):
        return isinstance(other, ToricValuation) and self.fan == other.fan and self.vector == other.vector

    def __hash__(self):
        return hash((self.fan, self.vector))

    def label(self):
        return "(" + ",".join(str(c) for c in self.vector) + ")"

    def ray_index(self):
        if self.vector in self.fan.rays:
            return self.fan.rays.index(self.vector)
        return None


def make_valuation(fan, vector):
    """Primitivize vector; returns the valuation and the scale factor"""
    v, scale = primitive(vector)
    if scale != 1:
        log.warning("valuation %s primitivized to %s (scale %d)", tuple(vector), v, scale)
    return ToricValuation(fan, v), scale

def ray_valuations(fan):
    return [ToricValuation(fan, v) for v in fan.rays]

def candidate_valuations(fan, radius):
    """Rays plus primitive vectors with sup-norm <= radius, sorted"""
    radius = int(radius)
    if radius < 1:
        raise KStabError("no-candidates", f"radius {radius} gives no candidates")
    vectors = set(fan.rays)
    for v in itertools.product(range(-radius, radius + 1), repeat=fan.dim):
        if any(v) and math.gcd(*v) == 1:
            vectors.add(v)
    return [ToricValuation(fan, v) for v in sorted(vectors)]

def divisor_polytope(pair, D):
    """P_D = {u : <u, v_rho> >= -a_rho}"""
    return HPolytope(pair.fan.rays, D.coeffs)

def divisor_volume(pair, D):
    """vol(D) = n! vol(P_D)"""
    return factorial(pair.dim) * polytope_volume(divisor_polytope(pair, D))

def is_pseudoeffective(pair, D):
    return not divisor_polytope(pair, D).is_empty()

def support_value(pair, D, v):
    """psi_D(v), linear on cones with psi_D(v_rho) = -a_rho"""
    if not isinstance(v, ToricValuation):
        k, coords = pair.fan.cone_of(tuple(v))
    else:
        k, coords = v.cone, v.coords
    cone = pair.fan.cones[k]
    return Rational(-sum(c * D.coeffs[i] for c, i in zip(coords, cone)))

def log_discrepancy(pair, v):
    """A_{X,Delta}(ord_v) = sum c_rho (1 - Delta_rho)"""
    return -support_value(pair, pair.anticanonical(), v)

def log_discrepancy_raw(pair, vector):
    """Same formula on a non primitive vector; degree one homogeneous"""
    return -support_value(pair, pair.anticanonical(), tuple(int(c) for c in vector))

def lct_snc_toric(pair, D):
    """lct(X, Delta; D) for torus invariant effective D on a smooth fan"""
    if not pair.fan.is_smooth():
        raise KStabError("requires-smooth", f"{pair.name} is not smooth")
    if not D.is_effective_cycle():
        raise KStabError("precondition", f"{D} is not effective")
    ratios = [(1 - d) / a for d, a in zip(pair.delta, D.coeffs) if a > 0]
    if not ratios:
        return oo
    return Rational(min(ratios))
