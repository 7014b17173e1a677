#!/usr/bin/env python
# vim: tabstop=8 expandtab shiftwidth=4 softtabstop=4
"""
PyKStab.py
Exact K-stability invariants of toric pairs from the command line
"""

import sys, os, traceback, datetime, platform

from libs.config import *
from libs.checks import *
from libs.report import Report, Record, format_rational
from libs.instances import InstanceLibrary, parse_rational, parse_vector

library = InstanceLibrary()

def load_pair(cfg):
    inst = library.resolve(cfg.args.instance)
    pair = inst.pair()
    if library.get_id(cfg.args.instance) is None:
        cfg.drift += expected_drift(inst, pair, cfg)
    return inst, pair

def pick_valuation(cfg, pair):
    if cfg.args.ray is not None:
        if not 0 <= cfg.args.ray < len(pair.fan.rays):
            raise KStabError("precondition", f"no ray {cfg.args.ray}")
        return ToricValuation(pair.fan, pair.fan.rays[cfg.args.ray]), 1
    vector = parse_vector(cfg.args.v)
    if len(vector) != pair.dim:
        raise KStabError("precondition", f"{vector} is not of dimension {pair.dim}")
    return make_valuation(pair.fan, vector)

def cmd_volume(cfg):
    inst, pair = load_pair(cfg)
    D = pair.divisor(cfg.args.divisor)
    vol = divisor_volume(pair, D)
    rep = Report(inst.name)
    rep.records.append(Record(inst.name, "", f"vol({cfg.args.divisor})", vol))
    rep.line(format_rational(vol))
    rep.emit()
    return 0

def cmd_s(cfg):
    inst, pair = load_pair(cfg)
    v, scale = pick_valuation(cfg, pair)
    r = valuation_report(pair, v, cfg.m_schedule)
    rep = Report(inst.name)
    c = v.label()
    if scale != 1:
        rep.line(f"note: ({cfg.args.v}) primitivized to {c}, scale {scale}")
    rep.value("A", r.a, c)
    rep.value("S_barycenter", r.s_exact, c)
    rep.value("S_curve", r.s_curve, c)
    rep.value("tau", r.tau, c)
    for m, value in r.s_m_table.items():
        rep.value(f"S_{m}", value, c)
    rep.value("A/S", r.ratio, c)
    rep.emit()
    return 0 if r.s_exact == r.s_curve else 3

def cmd_sm(cfg):
    inst, pair = load_pair(cfg)
    v, _scale = pick_valuation(cfg, pair)
    s = s_invariant(pair, v)
    rep = Report(inst.name)
    rows = []
    for m in cfg.m_schedule:
        value = s_m(pair, v, m)
        rep.records.append(Record(inst.name, v.label(), f"S_{m}", value))
        rows.append([str(m), str(section_count(pair, m)), value, abs(value - s)])
    rep.line(f"valuation {v.label()}, S = {format_rational(s)}")
    rep.table(["m", "N_m", "S_m", "|S_m-S|"], rows)
    rep.records.append(Record(inst.name, v.label(), "S", s))
    rep.emit()
    return 0

def cmd_delta(cfg):
    inst, pair = load_pair(cfg)
    rep = Report(inst.name)
    rows = []
    for v in candidate_valuations(pair.fan, cfg.radius):
        a, s = log_discrepancy(pair, v), s_invariant(pair, v)
        rows.append([v.label(), a, s, a / s])
        for quantity, value in (("A", a), ("S", s), ("A/S", a / s)):
            rep.records.append(Record(inst.name, v.label(), quantity, value))
    delta, witness = delta_upper(pair, cfg.radius)
    rep.table(["candidate", "A", "S", "A/S"], rows)
    rep.records.append(Record(inst.name, witness.label(), "delta_upper", delta))
    rep.line(f"{format_rational(delta)} witness {witness.label()}")
    rep.emit()
    return 0

def cmd_delta_m(cfg):
    inst, pair = load_pair(cfg)
    rep = Report(inst.name)
    for m in cfg.m_schedule:
        rep.value(f"delta_{m}_upper", delta_m_upper(pair, m))
    delta, witness = delta_upper(pair, cfg.radius)
    rep.value("delta_upper", delta, witness.label())
    rep.emit()
    return 0

def cmd_a(cfg):
    inst, pair = load_pair(cfg)
    a = a_invariant(pair, cfg.a_denominator)
    inv = invariant_report(pair, cfg.radius, cfg.m_schedule, cfg.a_denominator, a=a)
    rep = Report(inst.name)
    rep.value("vol", inv.volume)
    rep.value("a", a.value)
    if not a.is_infinite:
        rep.value("a_bracket_lo", a.lo)
        rep.value("a_bracket_hi", a.hi)
    rep.value("threshold", inv.threshold)
    for m, value in inv.delta_m.items():
        rep.value(f"delta_{m}_upper", value)
    rep.value("delta_upper", inv.delta_upper, inv.witness.label())
    for name, flag in inv.flags.items():
        if name != "gate":
            rep.line(f"{name}: {'yes' if flag else 'no'}")
    rep.line(f"gate: {inv.flags['gate']}")
    rep.emit()
    return 0

def cmd_model(cfg):
    inst, pair = load_pair(cfg)
    model, rows = s_decomposition_check(pair)
    rep = Report(inst.name)
    rep.line(f"Z rays: {' '.join(str(r) for r in model.target.fan.rays)}")
    table = []
    for row in rows:
        c = row.valuation.label()
        table.append([c, row.a_x, row.a_z, row.ord_b, row.s_x, row.s_z,
                      row.ratio, row.ratio_via_model, "PASS" if row.passed else "FAIL"])
        for quantity in ("a_x", "a_z", "ord_b", "s_x", "s_z", "ratio", "ratio_via_model"):
            rep.records.append(Record(inst.name, c, quantity, getattr(row, quantity)))
    rep.table(["ray", "A_X", "A_Z", "ord(B)", "S_X", "S_Z", "A/S", "via Z", "identity"], table)
    rep.value("model_constant", model_constant(pair, cfg.radius))
    rep.emit()
    return 0

def cmd_ample_s(cfg):
    inst, pair = load_pair(cfg)
    if cfg.args.divisor:
        divisors = [pair.divisor(cfg.args.divisor)]
    else:
        divisors = ample_test_divisors(pair)
    rep = Report(inst.name)
    failed = 0
    for A in divisors:
        result = ample_s_check(pair, A)
        rep.value("S(A)", result.s_value, A.name)
        rep.line(f"{'':>10}  >= {format_rational(result.bound)}: {'PASS' if result.passed else 'FAIL'}")
        failed += not result.passed
    rep.emit()
    return 1 if failed else 0

def cmd_threefold(cfg):
    p = ThreefoldParams(parse_rational(cfg.args.h2), parse_rational(cfg.args.hk))
    a0 = parse_rational(cfg.args.a0) if cfg.args.a0 else None
    r = ThreefoldReport(p, cfg.quad_nodes, a0)
    rep = Report("threefold")
    rep.value("vol(-K_X)", r.volume)
    rep.value("vol_fiber_integral", r.volume_fiber)
    rep.value("S_Y", r.s_value)
    rep.value("integral", r.integral)
    rep.line(f"quadrature relative error = {r.quadrature_error:.3g}")
    for (a, b), piece in zip(r.curve.chambers(), r.curve.pieces):
        for k, coeff in enumerate(piece):
            rep.records.append(Record("threefold", f"[{a},{b}]", f"t^{k}", coeff))
    rep.value("delta_bound", r.bound)
    rep.line(f"S_Y > 5/3: {'PASS' if r.checks['s-above-5/3'] else 'FAIL'}")
    rep.line(f"bound {format_rational(r.bound)} < 3/5: {'PASS' if r.checks['bound-below-3/5'] else 'FAIL'}")
    if r.gate is not None:
        rep.value("threshold", r.gate.threshold)
        rep.line(f"gate: {r.gate.status}")
    rep.emit()
    return 0 if r.passed else 1

def cmd_check(cfg):
    instances = None
    if cfg.args.instances:
        instances = [(inst, inst.pair()) for inst in map(library.resolve, cfg.args.instances)]
    results = run_checks(cfg, names=cfg.args.only, instances=instances)
    rep = Report("check")
    for r in results:
        rep.line(f"{'PASS' if r.passed else 'FAIL'} {r.name} ({r.count} cases, {r.seconds:.1f}s)")
        for failure in r.failures:
            rep.line(f"    {failure}")
        rep.records.append(Record("check", r.name, "failures", len(r.failures)))
    failed = sum(not r.passed for r in results)
    rep.line(f"{len(results) - failed}/{len(results)} checks passed")
    rep.emit()
    return 1 if failed else 0

COMMANDS = {
    "volume": cmd_volume,
    "s": cmd_s,
    "sm": cmd_sm,
    "delta": cmd_delta,
    "delta-m": cmd_delta_m,
    "a": cmd_a,
    "model": cmd_model,
    "lemma26": cmd_ample_s,
    "ample-s": cmd_ample_s,
    "example38": cmd_threefold,
    "threefold": cmd_threefold,
    "check": cmd_check,
}

def main(argv=None):
    try:
        cfg = pykstab(argv)
    except KStabError as e:
        sys.stderr.write(f"error: {e}\n")
        return e.exit_code
    if cfg.args.command is None:
        cfg.parser.print_help()
        return 2
    cfg.drift = []
    try:
        code = COMMANDS[cfg.args.command](cfg)
    except KStabError as e:
        sys.stderr.write(f"error: {e}\n")
        return e.exit_code
    for line in cfg.drift:
        sys.stderr.write(f"expected value drift: {line}\n")
    if cfg.drift and code == 0:
        return 1
    return code

def write_crash():
    now = datetime.datetime.now()
    datestr = now.strftime('%Y-%m-%d_%H%M%S')
    crash_path = os.path.join(os.path.expanduser('~'), ".pykstab-crash", datestr)
    os.makedirs(crash_path, exist_ok=True)
    with open(os.path.join(crash_path, "stackdump.txt"), "w") as f:
        f.write(traceback.format_exc())
    with open(os.path.join(crash_path, "platform.txt"), "w") as f:
        f.write(str(platform.uname()))
    sys.stderr.write(traceback.format_exc())

if __name__ == "__main__":
    try:
        sys.exit(main())
    except Exception:
        write_crash()
        sys.exit(3)
