#!/usr/bin/python3
# vim: tabstop=8 expandtab shiftwidth=4 softtabstop=4
"""
filtration.py
Finitely presented linearly bounded filtrations of the section ring

A filtration is stored by its jumps: for each degree m a sorted list of
(lambda, dim Gr^lambda R_m).  Left continuity is automatic for finite
jump data and is not checked.
"""

import logging

from sympy import Rational

from libs.errors import KStabError
from libs.invariants import *

log = logging.getLogger(__name__)

class FiltrationData:
    """This class is a filtration F^lambda R_m given by its jumps"""
    def __init__(self, level, jumps, dims, e_minus, e_plus, name=""):
        self.level = int(level)
        self.jumps = {int(m): [(Rational(lam), int(c)) for lam, c in js]
                      for m, js in jumps.items()}
        self.dims = {int(m): int(n) for m, n in dims.items()}
        self.e_minus = Rational(e_minus)
        self.e_plus = Rational(e_plus)
        self.name = name

    def __repr__(self):
        return f"FiltrationData({self.name!r}, degrees={self.degrees()})"

    def degrees(self):
        return sorted(self.jumps)

    def min_jump(self, m):
        return self.jumps[m][0][0]

    def max_jump(self, m):
        return self.jumps[m][-1][0]


def filtration_validate(f):
    """Violated conditions as 'kind: detail' strings, empty when valid"""
    violations = []
    for m in f.degrees():
        js = f.jumps[m]
        if m <= 0 or m % f.level:
            violations.append(f"degree: {m} is not a positive multiple of {f.level}")
        if not js:
            violations.append(f"empty: no jumps in degree {m}")
            continue
        for (a, _), (b, _) in zip(js, js[1:]):
            if not a < b:
                violations.append(f"monotone: jumps {a}, {b} in degree {m}")
        if any(c <= 0 for _lam, c in js):
            violations.append(f"multiplicity: nonpositive multiplicity in degree {m}")
        total = sum(c for _lam, c in js)
        if m in f.dims and total != f.dims[m]:
            violations.append(f"multiplicity: {total} != dim R_{m} = {f.dims[m]}")
        for lam, _c in js:
            if not m * f.e_minus <= lam < m * f.e_plus:
                violations.append(f"linear-bound: jump {lam} outside [{m*f.e_minus},{m*f.e_plus}) in degree {m}")
    stored = [m for m in f.degrees() if f.jumps[m]]
    for i, m in enumerate(stored):
        for k in stored[i:]:
            if m + k not in f.jumps or not f.jumps[m + k]:
                continue
            if f.min_jump(m + k) > f.min_jump(m) + f.min_jump(k):
                violations.append(f"submultiplicative: min jumps {m}+{k}")
            if f.max_jump(m + k) < f.max_jump(m) + f.max_jump(k):
                violations.append(f"superadditive: max jumps {m}+{k}")
    return violations

def filtration_s_m(f, m):
    """S_m(F) = (1/(m N_m)) sum lambda dim Gr^lambda R_m"""
    m = int(m)
    if m not in f.jumps or not f.jumps[m]:
        raise KStabError("missing-degree", f"degree {m} not stored in {f.name}")
    total = sum(lam * c for lam, c in f.jumps[m])
    count = sum(c for _lam, c in f.jumps[m])
    return Rational(total / (m * count))

def filtration_s_estimate(f):
    """S_m at the largest stored degree and the spread of the last three"""
    degrees = [m for m in f.degrees() if f.jumps[m]]
    if not degrees:
        raise KStabError("missing-degree", f"{f.name} stores no degrees")
    tail = [filtration_s_m(f, m) for m in degrees[-3:]]
    return tail[-1], degrees[-1], max(tail) - min(tail)

def trivial_filtration(pair, degrees):
    dims = {m: section_count(pair, m) for m in degrees}
    jumps = {m: [(0, n)] for m, n in dims.items()}
    return FiltrationData(1, jumps, dims, 0, 1, name="trivial")

def valuation_filtration(pair, v, degrees):
    """Filtration by order of vanishing along E_v"""
    jumps = {m: section_orders(pair, v, m) for m in degrees}
    dims = {m: sum(c for _lam, c in js) for m, js in jumps.items()}
    tau = pseudoeffective_threshold(pair, v)
    return FiltrationData(1, jumps, dims, 0, tau + 1, name=f"ord{v.label()}")

def shift_filtration(f, c):
    """F^(lambda - mc): every jump in degree m moves by m*c"""
    c = Rational(c)
    jumps = {m: [(lam + m*c, n) for lam, n in js] for m, js in f.jumps.items()}
    return FiltrationData(f.level, jumps, f.dims, f.e_minus + c, f.e_plus + c,
                          name=f"{f.name}+{c}")
