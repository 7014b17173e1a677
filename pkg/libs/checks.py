#!/usr/bin/python3
# vim: tabstop=8 expandtab shiftwidth=4 softtabstop=4
"""
checks.py
The consolidated invariant suite run by the check command
"""

import logging
import time

from sympy import Rational, oo

from libs.errors import KStabError
from libs.decomposition import *
from libs.ainvariant import *
from libs.filtration import *
from libs.threefold import *
from libs.instances import InstanceLibrary

log = logging.getLogger(__name__)

config = None

def checks_set_config(config_in):
    global config
    config = config_in

CHECKS = []

def check(name):
    def register(func):
        CHECKS.append((name, func))
        return func
    return register


class CheckResult:
    def __init__(self, name, count, failures, seconds):
        self.name = name
        self.count = count
        self.failures = failures
        self.seconds = seconds

    def __repr__(self):
        return f"CheckResult({self.name}: {'PASS' if self.passed else 'FAIL'})"

    @property
    def passed(self):
        return not self.failures


def _by_name(instances, name):
    for inst, pair in instances:
        if inst.name == name:
            return inst, pair
    return None, None

def _is_integral(P):
    return all(c.q == 1 for u in P.vertices() for c in u)

def _anticanonical_polytope(pair):
    return divisor_polytope(pair, pair.anticanonical())

@check("polytope-examples")
def check_polytope_examples(cfg, instances):
    failures = []
    square = HPolytope([(1, 0), (-1, 0), (0, 1), (0, -1)], [0, 1, 0, 1])
    simplex = HPolytope([(1, 0), (0, 1), (-1, -1)], [0, 0, 1])
    triangle = HPolytope([(1, 0), (0, 1), (-1, -1)], [1, 1, 1])
    empty = HPolytope([(1, 0), (-1, 0), (0, 1), (0, -1)], [-2, 1, 0, 1])
    cases = [
        ("vol square", polytope_volume(square), 1),
        ("vol simplex", polytope_volume(simplex), Rational(1, 2)),
        ("vol triangle", polytope_volume(triangle), Rational(9, 2)),
        ("points simplex m=3", len(lattice_points(simplex, 3)), 10),
        ("points square", len(lattice_points(square)), 4),
        ("points empty", len(lattice_points(empty, 5)), 0),
        ("support triangle", support_threshold(triangle, (1, 1)), (-2, 1)),
        ("support zero", support_threshold(triangle, (0, 0)), (0, 0)),
    ]
    for label, got, want in cases:
        if got != want:
            failures.append(f"{label}: got {got}, expected {want}")
    return len(cases), failures

@check("volume-invariance")
def check_volume_invariance(cfg, instances):
    failures = []
    count = 0
    for inst, pair in instances:
        P = _anticanonical_polytope(pair)
        vol = polytope_volume(P)
        n = pair.dim
        shear = [[1 if i == j or (i == 0 and j == 1) else 0 for j in range(n)] for i in range(n)]
        flip = [[-1 if i == j == 0 else int(i == j) for j in range(n)] for i in range(n)]
        images = [
            ("translate", P.translate([(-1)**i * (i + 1) for i in range(n)]), vol),
            ("shear", P.linear_image(shear), vol),
            ("flip", P.linear_image(flip), vol),
            ("dilate 2", P.dilate(2), vol * 2**n),
        ]
        for label, Q, want in images:
            count += 1
            got = polytope_volume(Q)
            if got != want:
                failures.append(f"{inst.name} {label}: {got} != {want}")
    return count, failures

@check("ehrhart")
def check_ehrhart(cfg, instances):
    failures = []
    count = 0
    for inst, pair in instances:
        P = _anticanonical_polytope(pair)
        if not _is_integral(P):
            continue
        count += 1
        coeffs = ehrhart_fit(P, range(1, pair.dim + 4))
        vol = polytope_volume(P)
        if coeffs[-1] != vol or len(coeffs) != pair.dim + 1:
            failures.append(f"{inst.name}: leading Ehrhart coefficient {coeffs[-1]} != volume {vol}")
    return count, failures

@check("quadrature")
def check_quadrature(cfg, instances):
    failures = []
    count = 0
    for inst, pair in instances:
        for v in ray_valuations(pair.fan):
            count += 1
            curve = vol_curve(pair, v)
            exact = integrate_piecewise(curve, *curve.domain)
            approx = quadrature_integral(curve, *curve.domain, nodes=cfg.quad_nodes)
            if relative_error(approx, exact) >= 1e-9:
                failures.append(f"{inst.name} {v.label()}: quadrature {approx} vs {exact}")
            refit = fit_piecewise(curve.samples(), curve.breakpoints, curve.degree)
            if refit.pieces != curve.pieces:
                failures.append(f"{inst.name} {v.label()}: refit differs from curve")
    return count, failures

@check("two-route-s")
def check_two_route_s(cfg, instances):
    failures = []
    count = 0
    for inst, pair in instances:
        for v in candidate_valuations(pair.fan, cfg.radius):
            count += 1
            exact = s_invariant_barycenter(pair, v)
            try:
                curve = s_invariant_curve(pair, v)
            except KStabError as e:
                failures.append(f"{inst.name} {v.label()}: curve route failed ({e})")
                continue
            if exact != curve:
                failures.append(f"{inst.name} {v.label()}: barycenter {exact} != curve {curve}")
    return count, failures

@check("fano-sanity")
def check_fano_sanity(cfg, instances):
    failures = []
    count = 0
    for name in ("p1", "p2", "p1xp1"):
        inst, pair = _by_name(instances, name)
        if pair is None:
            continue
        for v in ray_valuations(pair.fan):
            count += 1
            s = s_invariant(pair, v)
            if s != 1:
                failures.append(f"{name} {v.label()}: S = {s}")
            if name == "p2":
                for m in cfg.m_schedule:
                    sm = s_m(pair, v, m)
                    if sm != 1:
                        failures.append(f"p2 {v.label()}: S_{m} = {sm}")
        delta, witness = delta_upper(pair, cfg.radius)
        if delta != 1:
            failures.append(f"{name}: delta upper bound {delta} at {witness.label()}")
    return count, failures

@check("unstable-witness")
def check_unstable_witness(cfg, instances):
    inst, pair = _by_name(instances, "blp2")
    if pair is None:
        return 0, []
    delta, witness = delta_upper(pair, max(cfg.radius, 1))
    if delta != Rational(6, 7) or witness.vector != (1, 1):
        return 1, [f"blp2: delta upper bound {delta} at {witness.label()}, expected 6/7 at (1,1)"]
    return 1, []

@check("log-discrepancy")
def check_log_discrepancy(cfg, instances):
    failures = []
    count = 0
    for inst, pair in instances:
        for v in candidate_valuations(pair.fan, 2):
            a = log_discrepancy(pair, v)
            if a <= 0:
                failures.append(f"{inst.name} {v.label()}: A = {a} not positive")
            for k in (2, 3):
                count += 1
                raw = log_discrepancy_raw(pair, [k * c for c in v.vector])
                if raw != k * a:
                    failures.append(f"{inst.name} {k}*{v.label()}: A = {raw}, expected {k*a}")
    return count, failures

@check("scale-invariance")
def check_scale_invariance(cfg, instances):
    """A/S of k*v equals A/S of v"""
    failures = []
    count = 0
    for inst, pair in instances:
        for v in candidate_valuations(pair.fan, 2):
            ratio = log_discrepancy(pair, v) / s_invariant(pair, v)
            for k in (2, 3):
                count += 1
                w = [k * c for c in v.vector]
                scaled = log_discrepancy_raw(pair, w) / s_invariant_raw(pair, w)
                if scaled != ratio:
                    failures.append(f"{inst.name} {k}*{v.label()}: A/S = {scaled}, expected {ratio}")
    return count, failures

@check("convergence")
def check_convergence(cfg, instances):
    """S_m -> S with nonincreasing error and S_m <= (1+eps) S from m = 8"""
    failures = []
    count = 0
    schedule = list(cfg.m_schedule)
    for inst, pair in instances:
        integral = _is_integral(_anticanonical_polytope(pair))
        for v in ray_valuations(pair.fan):
            count += 1
            s = s_invariant(pair, v)
            errors = [abs(s_m(pair, v, m) - s) for m in schedule]
            if errors[-1] > cfg.tolerance:
                failures.append(f"{inst.name} {v.label()}: |S_{schedule[-1]} - S| = {errors[-1]}")
            if integral:
                for (m0, e0), (m1, e1) in zip(list(zip(schedule, errors))[1:],
                                              list(zip(schedule, errors))[2:]):
                    if e1 > e0:
                        failures.append(f"{inst.name} {v.label()}: error grows from m={m0} to m={m1}")
            for m in schedule:
                if m >= 8 and s_m(pair, v, m) > (1 + cfg.epsilon) * s:
                    failures.append(f"{inst.name} {v.label()}: S_{m} = {s_m(pair, v, m)} > (1+eps)S")
    return count, failures

@check("ample-s")
def check_ample_s(cfg, instances):
    failures = []
    count = 0
    for inst, pair in instances:
        L = pair.anticanonical()
        for A in ample_test_divisors(pair):
            count += 1
            result = ample_s_check(pair, A)
            if not result.passed:
                failures.append(f"{inst.name} {A.name}: S(A) = {result.s_value} < {result.bound}")
            if A == L and result.s_value != result.bound:
                failures.append(f"{inst.name}: S(-K-D) = {result.s_value} != {result.bound}")
    return count, failures

@check("decomposition")
def check_decomposition(cfg, instances):
    failures = []
    count = 0
    for inst, pair in instances:
        try:
            model, rows = s_decomposition_check(pair)
        except KStabError as e:
            failures.append(f"{inst.name}: {e}")
            continue
        count += len(rows)
        for row in rows:
            if row.ord_b < 0:
                failures.append(f"{inst.name} {row.valuation.label()}: ord(B) = {row.ord_b}")
        if pair.anticanonical().is_ample() and not model.is_trivial():
            failures.append(f"{inst.name}: -K-D ample but B != 0")
        if inst.name == "f3" and model.is_trivial():
            failures.append("f3: B = 0, expected a contracted ray")
    return count, failures

@check("lct-basis-type")
def check_lct_basis_type(cfg, instances):
    failures = []
    count = 0
    for inst, pair in instances:
        if not pair.fan.is_smooth():
            continue
        for m in cfg.m_schedule:
            count += 1
            delta_m_upper(pair, m)
        D = basis_type_divisor(pair, cfg.m_schedule[0])
        for c in (2, Rational(1, 3)):
            count += 1
            if lct_snc_toric(pair, D.scale(c)) != lct_snc_toric(pair, D) / c:
                failures.append(f"{inst.name}: lct({c} D) != lct(D)/{c}")
    return count, failures

@check("a-invariant")
def check_a_invariant(cfg, instances):
    failures = []
    count = 0
    for inst, pair in instances:
        count += 1
        a = a_invariant(pair, cfg.a_denominator)
        nef = pair.anticanonical().is_nef()
        if nef != a.is_infinite:
            failures.append(f"{inst.name}: a = {a.value} but nef = {nef}")
        if not a.is_infinite and not a.value > 0:
            failures.append(f"{inst.name}: a = {a.value} not positive")
        if not assumption_threshold(pair.dim, a.value) < 1:
            failures.append(f"{inst.name}: threshold not below 1")
    return count, failures

@check("assumption-gate")
def check_assumption_gate(cfg, instances):
    failures = []
    count = 0
    for inst, pair in instances:
        count += 1
        gate = assumption_gate(pair, cfg.radius, cfg.a_denominator)
        if gate.a_value == oo and gate.status != "gate-inconclusive":
            failures.append(f"{inst.name}: threshold 0 but status {gate.status}")
        if gate.status == "assumption-fails" and not gate.delta_upper < gate.threshold:
            failures.append(f"{inst.name}: failing gate without witness")
    return count, failures

@check("model-constant")
def check_model_constant(cfg, instances):
    failures = []
    count = 0
    for inst, pair in instances:
        count += 1
        t = model_constant(pair, 1)
        trivial = anticanonical_model(pair).is_trivial()
        if trivial and t != oo:
            failures.append(f"{inst.name}: B = 0 but constant {t}")
        if not trivial and not (t != oo and t > 0):
            failures.append(f"{inst.name}: constant {t} not a positive rational")
    return count, failures

@check("transfer-bound")
def check_transfer_bound(cfg, instances):
    failures = []
    count = 0
    for d in (Rational(11, 10), Rational(3, 2), 2, 5):
        for t in (Rational(1, 10), 1, 10):
            count += 1
            if not delta_transfer_bound(d, t) > 1:
                failures.append(f"d={d} t={t}")
    if delta_transfer_bound(1, 7, relaxed=True) != 1:
        failures.append("d=1 relaxed is not 1")
    if delta_transfer_bound(2, 1) != Rational(4, 3):
        failures.append("d=2 t=1 is not 4/3")
    for d in (Rational(6, 5), 2, 3):
        count += 1
        if abs(delta_transfer_bound(d, 10**6) - d) >= Rational(1, 10**5):
            failures.append(f"d={d}: bound at t=10^6 is not within 1e-5 of d")
    return count + 2, failures

@check("filtrations")
def check_filtrations(cfg, instances):
    failures = []
    count = 0
    degrees = list(cfg.m_schedule[:2])
    degrees.append(degrees[0] + degrees[-1])
    for inst, pair in instances:
        v = ray_valuations(pair.fan)[0]
        trivial = trivial_filtration(pair, degrees)
        ordv = valuation_filtration(pair, v, degrees)
        shifted = shift_filtration(ordv, Rational(1, 3))
        for f in (trivial, ordv, shifted):
            count += 1
            for violation in filtration_validate(f):
                failures.append(f"{inst.name} {f.name}: {violation}")
        for m in degrees:
            count += 1
            if filtration_s_m(trivial, m) != 0:
                failures.append(f"{inst.name}: trivial S_{m} != 0")
            if filtration_s_m(ordv, m) != s_m(pair, v, m):
                failures.append(f"{inst.name}: valuation filtration S_{m} != s_m")
            if filtration_s_m(shifted, m) != s_m(pair, v, m) + Rational(1, 3):
                failures.append(f"{inst.name}: shifted S_{m} not moved by 1/3")
    return count, failures

@check("threefold")
def check_threefold(cfg, instances):
    failures = []
    count = 0
    grid = (Rational(1, 2), 1, 3)
    for h2 in grid:
        for hk in grid:
            count += 1
            report = ThreefoldReport(ThreefoldParams(h2, hk), cfg.quad_nodes)
            for name, ok in report.checks.items():
                if not ok:
                    failures.append(f"h2={h2} hk={hk}: {name}")
    report = ThreefoldReport(ThreefoldParams(1, 1), cfg.quad_nodes)
    if (report.volume, report.s_value, report.bound) != (4, Rational(27, 16), Rational(16, 27)):
        failures.append(f"h2=hk=1: {report}")
    far = delta_bound_threefold(ThreefoldParams(1, 10**6))
    if not 0 < DELTA_CEILING - far < Rational(1, 10**5):
        failures.append(f"hk=10^6: bound {far} is not within 1e-5 below 3/5")
    return count + 2, failures

@check("expected-values")
def check_expected_values(cfg, instances):
    failures = []
    count = 0
    for inst, pair in instances:
        count += len(inst.expected)
        failures += expected_drift(inst, pair, cfg)
    return count, failures

def expected_drift(inst, pair, cfg):
    """One message per expect.* value of inst that the computation does not reproduce"""
    drift = []
    for (kind, arg), want in sorted(inst.expected.items(), key=str):
        got = expected_value(pair, kind, arg, cfg)
        if got != want:
            drift.append(f"{inst.name} {kind}{'' if arg is None else arg}: {got} != {want}")
    return drift

def expected_value(pair, kind, arg, cfg):
    if kind == "volume":
        return divisor_volume(pair, pair.anticanonical())
    if kind == "delta_upper":
        return delta_upper(pair, cfg.radius)[0]
    if kind == "a":
        return a_invariant(pair, cfg.a_denominator).value
    v = ToricValuation(pair.fan, arg)
    if kind == "s":
        return s_invariant(pair, v)
    return ord_b_via_polytope(pair, v)

def run_checks(cfg=None, names=None, instances=None):
    """Run the registered checks; a raised error is a failure of that check"""
    cfg = cfg or config
    clear_caches()
    if instances is None:
        instances = [(inst, inst.pair()) for inst in InstanceLibrary().all()]
    results = []
    for name, func in CHECKS:
        if names and name not in names:
            continue
        start = time.perf_counter()
        try:
            count, failures = func(cfg, instances)
        except KStabError as e:
            count, failures = 0, [f"error: {e}"]
        seconds = time.perf_counter() - start
        log.debug("check %s: %d cases in %.2fs", name, count, seconds)
        results.append(CheckResult(name, count, failures, seconds))
    return results
