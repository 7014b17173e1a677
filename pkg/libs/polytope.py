#!/usr/bin/python3
# vim: tabstop=8 expandtab shiftwidth=4 softtabstop=4
"""
polytope.py
Exact rational H-polytopes: vertices, volume, barycenter, lattice points
and one-parameter families of polytopes with moving facets
"""

import functools
import itertools
import logging

import numpy as np
from sympy import Matrix, Rational, ceiling, factorial, floor

from libs.errors import KStabError
from libs.piecewise import *

log = logging.getLogger(__name__)

#largest number of integer values scanned per axis by lattice_points
MAX_AXIS_EXTENT = 10**4

def dot(u, v):
    return sum(a*b for a, b in zip(u, v))

@functools.lru_cache(maxsize=None)
def _inverse(rows):
    """Rational inverse of an integer square matrix, None if singular"""
    M = Matrix(rows)
    if M.det() == 0:
        return None
    return tuple(tuple(Rational(x) for x in r) for r in M.inv().tolist())

def _solve(rows, rhs):
    inv = _inverse(rows)
    if inv is None:
        return None
    return tuple(dot(r, rhs) for r in inv)

def affine_rank(points):
    if len(points) <= 1:
        return 0
    base = points[0]
    diffs = [[p[i] - base[i] for i in range(len(base))] for p in points[1:]]
    if len(diffs) == 1:
        return 1 if any(c != 0 for c in diffs[0]) else 0
    return Matrix(diffs).rank()

class HPolytope:
    """This class is the polytope {u : <u, v_i> >= -b_i}"""
    def __init__(self, normals, bounds):
        normals = tuple(tuple(int(c) for c in v) for v in normals)
        if len(normals) == 0:
            raise KStabError("malformed", "polytope without inequalities")
        n = len(normals[0])
        for v in normals:
            if len(v) != n:
                raise KStabError("malformed", f"normal {v} has wrong dimension")
            if not any(v):
                raise KStabError("malformed", "zero normal")
        if len(bounds) != len(normals):
            raise KStabError("malformed", "one bound per normal required")
        self.dim = n
        self.normals = normals
        self.bounds = tuple(Rational(b) for b in bounds)
        self._vertices = None
        self._tight = None
        self._bounded = None

    def __repr__(self):
        ineqs = ", ".join(f"<u,{v}> >= {-b}" for v, b in zip(self.normals, self.bounds))
        return f"HPolytope(dim={self.dim}: {ineqs})"

    def contains(self, u):
        return all(dot(u, v) + b >= 0 for v, b in zip(self.normals, self.bounds))

    def dilate(self, m):
        m = Rational(m)
        return HPolytope(self.normals, [m*b for b in self.bounds])

    def translate(self, w):
        return HPolytope(self.normals, [b - dot(w, v) for v, b in zip(self.normals, self.bounds)])

    def linear_image(self, U):
        """Image under an integer matrix U with nonzero determinant"""
        M = Matrix(U)
        det = M.det()
        if det == 0:
            raise KStabError("malformed", "singular transformation")
        adj = M.adjugate().T
        sign = 1 if det > 0 else -1
        normals = []
        for v in self.normals:
            normals.append([sign * int(x) for x in adj * Matrix(v)])
        return HPolytope(normals, [b * abs(det) for b in self.bounds])

    def require_spanning(self):
        if Matrix(self.normals).rank() < self.dim:
            raise KStabError("unbounded", "normals do not span the ambient space")

    def vertices(self):
        """Sorted vertex list by exhaustive n-subset intersection"""
        if self._vertices is None:
            self.require_spanning()
            n = self.dim
            found = set()
            for idx in itertools.combinations(range(len(self.normals)), n):
                u = _solve(tuple(self.normals[i] for i in idx),
                           tuple(-self.bounds[i] for i in idx))
                if u is None or u in found:
                    continue
                if self.contains(u):
                    found.add(u)
            self._vertices = tuple(sorted(found))
            self._tight = tuple(
                frozenset(i for i, (v, b) in enumerate(zip(self.normals, self.bounds))
                          if dot(u, v) + b == 0)
                for u in self._vertices)
        return self._vertices

    def tight_sets(self):
        self.vertices()
        return self._tight

    def is_empty(self):
        return len(self.vertices()) == 0

    def is_bounded(self):
        """Recession cone {d : <d, v_i> >= 0} is trivial"""
        if self._bounded is None:
            self.require_spanning()
            n = self.dim
            self._bounded = True
            for idx in itertools.combinations(range(len(self.normals)), n - 1):
                if n == 1:
                    d = (1,)
                else:
                    M = Matrix([self.normals[i] for i in idx])
                    if M.rank() < n - 1:
                        continue
                    d = tuple(M.nullspace()[0])
                for sgn in (1, -1):
                    if all(sgn * dot(d, v) >= 0 for v in self.normals):
                        self._bounded = False
                        return False
        return self._bounded

    def require_bounded(self):
        if not self.is_bounded():
            raise KStabError("unbounded", repr(self))

    def is_full_dimensional(self):
        verts = self.vertices()
        return len(verts) > self.dim and affine_rank(list(verts)) == self.dim

    def facets(self):
        """Indices of the inequalities that define facets"""
        verts = self.vertices()
        tight = self._tight
        result = []
        for i in range(len(self.normals)):
            on = [verts[k] for k in range(len(verts)) if i in tight[k]]
            if len(on) >= self.dim and affine_rank(on) == self.dim - 1:
                result.append(i)
        return result

    def triangulation(self):
        """Pulling triangulation: simplices as tuples of vertex indices"""
        if self.is_empty() or not self.is_full_dimensional():
            return []
        self.require_bounded()
        return self._pull(frozenset(range(len(self._vertices))), self.dim)

    def _pull(self, face, dim):
        apex = min(face)
        if dim == 0:
            return [(apex,)]
        verts = self._vertices
        simplices = []
        seen = set()
        for i in range(len(self.normals)):
            if i in self._tight[apex]:
                continue
            sub = frozenset(w for w in face if i in self._tight[w])
            if len(sub) < dim or sub in seen:
                continue
            seen.add(sub)
            if affine_rank([verts[w] for w in sorted(sub)]) != dim - 1:
                continue
            for s in self._pull(sub, dim - 1):
                simplices.append((apex,) + s)
        return simplices

    def simplex_volume(self, simplex):
        verts = self._vertices
        base = verts[simplex[0]]
        rows = [[verts[k][i] - base[i] for i in range(self.dim)] for k in simplex[1:]]
        return abs(Matrix(rows).det()) / factorial(self.dim)


def polytope_volume(P):
    """Exact Euclidean volume; 0 for empty or lower dimensional P"""
    if P.is_empty():
        return Rational(0)
    P.require_bounded()
    total = Rational(0)
    for s in P.triangulation():
        total += P.simplex_volume(s)
    return Rational(total)

def polytope_barycenter(P):
    """Exact barycenter of a full dimensional polytope"""
    simplices = P.triangulation()
    if not simplices:
        raise KStabError("precondition", "barycenter of a polytope without interior")
    verts = P.vertices()
    total = Rational(0)
    moment = [Rational(0)] * P.dim
    for s in simplices:
        vol = P.simplex_volume(s)
        total += vol
        for i in range(P.dim):
            moment[i] += vol * sum(verts[k][i] for k in s) / len(s)
    return tuple(Rational(c / total) for c in moment)

def support_threshold(P, w):
    """(min, max) of <u, w> over P"""
    if P.is_empty():
        raise KStabError("infeasible", "support of an empty polytope")
    P.require_bounded()
    values = [dot(u, w) for u in P.vertices()]
    return Rational(min(values)), Rational(max(values))

def lattice_array(P, m=1):
    """Integer points of m*P as a numpy array, rows in lexicographic order"""
    m = int(m)
    if m < 1:
        raise KStabError("precondition", f"dilation factor {m} must be positive")
    if P.is_empty():
        return np.zeros((0, P.dim), dtype=np.int64)
    P.require_bounded()
    axes = []
    for i in range(P.dim):
        e = [0] * P.dim
        e[i] = 1
        lo, hi = support_threshold(P, e)
        lo, hi = int(ceiling(m*lo)), int(floor(m*hi))
        if hi - lo > MAX_AXIS_EXTENT:
            raise KStabError("too-large", f"axis {i} spans {hi-lo} values at m={m}")
        axes.append(np.arange(lo, hi + 1, dtype=np.int64))
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, P.dim)
    A = np.array(P.normals, dtype=np.int64)
    rhs = np.array([int(ceiling(-m*b)) for b in P.bounds], dtype=np.int64)
    mask = np.all(grid @ A.T >= rhs, axis=1)
    return grid[mask]

def lattice_points(P, m=1):
    """Integer points of m*P, lexicographically ordered"""
    return [tuple(int(c) for c in row) for row in lattice_array(P, m)]

def ehrhart_fit(P, degrees):
    """Counting polynomial of m -> |mP cap Z^n|, validated on extra m"""
    degrees = sorted(set(int(m) for m in degrees))
    if len(degrees) < P.dim + 2:
        raise KStabError("insufficient-samples", f"need {P.dim + 2} dilations")
    points = [(Rational(m), Rational(len(lattice_array(P, m)))) for m in degrees]
    return interpolate_checked(points, P.dim, "ehrhart")


class PolytopeFamily:
    """This class is the family P(t) = {u : <u, v_i> >= -(b_i + t*c_i)}"""
    def __init__(self, normals, bounds, slopes):
        self.base = HPolytope(normals, bounds)
        self.slopes = tuple(Rational(c) for c in slopes)
        if len(self.slopes) != len(self.base.normals):
            raise KStabError("malformed", "one slope per normal required")
        self.dim = self.base.dim

    def at(self, t):
        t = Rational(t)
        return HPolytope(self.base.normals,
                         [b + t*c for b, c in zip(self.base.bounds, self.slopes)])

    def breakpoints(self, lo, hi=None):
        """Values of t in (lo,hi) where a vertex of P(t) meets another facet

        With hi=None every event above lo is returned and hi is not appended.
        """
        lo = Rational(lo)
        hi = None if hi is None else Rational(hi)
        normals, bounds, slopes = self.base.normals, self.base.bounds, self.slopes
        n = self.dim
        roots = set()
        for idx in itertools.combinations(range(len(normals)), n):
            rows = tuple(normals[i] for i in idx)
            u0 = _solve(rows, tuple(-bounds[i] for i in idx))
            if u0 is None:
                continue
            u1 = _solve(rows, tuple(-slopes[i] for i in idx))
            for j in range(len(normals)):
                if j in idx:
                    continue
                const = dot(u0, normals[j]) + bounds[j]
                slope = dot(u1, normals[j]) + slopes[j]
                if slope == 0:
                    continue
                r = Rational(-const / slope)
                if r <= lo or (hi is not None and r >= hi) or r in roots:
                    continue
                u = tuple(a + r*b for a, b in zip(u0, u1))
                if self.at(r).contains(u):
                    roots.add(r)
        ends = {lo} if hi is None else {lo, hi}
        return sorted(roots | ends)

    def last_nonempty(self, lo, hi=None):
        """Largest breakpoint t in [lo,hi] with P(t) nonempty"""
        candidates = self.breakpoints(lo, hi)
        best = None
        for t in candidates:
            if not self.at(t).is_empty():
                best = t
        if best is None:
            raise KStabError("infeasible", "family empty on the whole range")
        if hi is None and not self.at(candidates[-1] + 1).is_empty():
            raise KStabError("unbounded", "family never becomes empty")
        return best

    def volume_curve(self, lo, hi, scale=1):
        """t -> scale*vol(P(t)) on [lo,hi] as an exact PiecewisePolynomial"""
        breaks = self.breakpoints(lo, hi)
        scale = Rational(scale)
        samples = sample_chambers(lambda t: scale * polytope_volume(self.at(t)),
                                  breaks, self.dim)
        log.debug("volume curve: %d chambers on [%s,%s]", len(breaks) - 1, lo, hi)
        return fit_piecewise(samples, breaks, self.dim)
