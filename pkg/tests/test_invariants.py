#!/usr/bin/python3
# vim: tabstop=8 expandtab shiftwidth=4 softtabstop=4
"""
test_invariants.py
"""

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Rational

from libs.errors import KStabError
from libs.invariants import *

def val(pair, vector):
    return ToricValuation(pair.fan, vector)

def test_fano_rays_have_s_one(pairs):
    for name in ("p1", "p2", "p1xp1"):
        pair = pairs[name]
        for v in ray_valuations(pair.fan):
            assert s_invariant(pair, v) == 1

def test_blown_up_plane(pairs):
    pair = pairs["blp2"]
    assert s_invariant(pair, val(pair, (1, 1))) == Rational(7, 6)
    assert s_invariant(pair, val(pair, (1, 0))) == Rational(13, 12)
    assert s_invariant(pair, val(pair, (-1, -1))) == Rational(5, 6)
    delta, witness = delta_upper(pair, 1)
    assert delta == Rational(6, 7)
    assert witness.vector == (1, 1)

def test_f3_values(pairs):
    pair = pairs["f3"]
    v = val(pair, (0, 1))
    assert pseudoeffective_threshold(pair, v) == 2
    assert s_invariant_barycenter(pair, v) == Rational(13, 9)
    assert s_invariant_curve(pair, v) == Rational(13, 9)

def test_vol_curve_endpoints(pairs):
    pair = pairs["f3"]
    v = val(pair, (0, 1))
    curve = vol_curve(pair, v)
    assert curve.domain == (0, 2)
    assert curve(0) == Rational(25, 3)
    assert curve(2) == 0
    assert curve.is_nonincreasing()

def test_both_routes_agree_on_every_ray(pairs):
    for pair in pairs.values():
        for v in ray_valuations(pair.fan):
            assert s_invariant_barycenter(pair, v) == s_invariant_curve(pair, v)

def test_sections_of_p2(pairs):
    pair = pairs["p2"]
    v = val(pair, (1, 0))
    assert section_count(pair, 1) == 10
    assert section_count(pair, 2) == 28
    assert section_orders(pair, v, 1) == [(0, 4), (1, 3), (2, 2), (3, 1)]
    assert s_m(pair, v, 1) == 1
    for m in (4, 8):
        assert s_m(pair, v, m) == 1

def test_s_m_approaches_s(pairs):
    pair = pairs["blp2"]
    v = val(pair, (1, 1))
    s = s_invariant(pair, v)
    errors = [abs(s_m(pair, v, m) - s) for m in (4, 8, 16)]
    assert errors[-1] < Rational(1, 20)
    assert errors[2] <= errors[1]

def test_basis_type_divisor(pairs):
    D = basis_type_divisor(pairs["p2"], 4)
    assert D.coeffs == (1, 1, 1)
    assert D.name == "D_4"
    D = basis_type_divisor(pairs["blp2"], 8)
    assert D.coeffs[3] == s_m(pairs["blp2"], val(pairs["blp2"], (1, 1)), 8)

def test_delta_m(pairs):
    assert delta_m_upper(pairs["p2"], 4) == 1

def test_delta_m_approaches_delta_on_blown_up_plane(pairs):
    pair = pairs["blp2"]
    # the ray (1,1) is the minimizer with S_m = (7m+4)/(3(2m+1))
    schedule = (4, 8, 16, 24)
    values = [delta_m_upper(pair, m) for m in schedule]
    assert values == [Rational(3 * (2*m + 1), 7*m + 4) for m in schedule]
    gaps = [Rational(6, 7) - d for d in values]
    assert all(g > 0 for g in gaps)
    assert gaps == sorted(gaps, reverse=True)
    assert gaps[-1] < Rational(1, 20)

def test_s_raw_is_homogeneous(pairs):
    for name in ("blp2", "f3"):
        pair = pairs[name]
        for v in candidate_valuations(pair.fan, 2):
            assert s_invariant_raw(pair, v.vector) == s_invariant(pair, v)
            assert s_invariant_raw(pair, [3 * c for c in v.vector]) == 3 * s_invariant(pair, v)

@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["p2", "blp2", "f2", "f3"]),
       st.tuples(st.integers(-4, 4), st.integers(-4, 4)).filter(any))
def test_ratio_is_scale_invariant(pairs, name, vector):
    pair = pairs[name]
    v, scale = primitive(vector)
    ratio = log_discrepancy(pair, val(pair, v)) / s_invariant(pair, val(pair, v))
    assert log_discrepancy_raw(pair, vector) / s_invariant_raw(pair, vector) == ratio
    assert tuple(scale * c for c in v) == tuple(vector)

def test_ample_s_at_anticanonical_class(pairs):
    pair = pairs["p2"]
    result = ample_s_check(pair, pair.anticanonical())
    assert result.s_value == Rational(1, 3)
    assert result.bound == Rational(1, 3)
    assert result.passed
    assert result.tau == 1

def test_ample_s_half_class(pairs):
    pair = pairs["p2"]
    result = ample_s_check(pair, pair.anticanonical().scale(Rational(1, 2)))
    assert result.s_value == Rational(2, 3)
    assert result.tau == 2

def test_ample_s_preconditions(pairs):
    pair = pairs["p2"]
    with pytest.raises(KStabError) as e:
        ample_s_check(pair, ToricDivisor(pair.fan, [0, 0, 0]))
    assert e.value.kind == "precondition"
    with pytest.raises(KStabError) as e:
        ample_s_check(pair, pair.anticanonical().scale(2))
    assert e.value.kind == "precondition"

def test_ample_test_divisors(pairs):
    found = ample_test_divisors(pairs["p2"])
    assert [A.name for A in found] == ["-K-D", "1/2(-K-D)", "1/3(-K-D)", "H"]
    for A in found:
        assert ample_s_check(pairs["p2"], A).passed
    assert [A.name for A in ample_test_divisors(pairs["f3"])] == ["A"]
    assert ample_s_check(pairs["f3"], pairs["f3"].divisor("A")).passed

def test_valuation_report(pairs):
    pair = pairs["f3"]
    r = valuation_report(pair, val(pair, (0, 1)), (4, 8))
    assert r.a == 1
    assert r.s_exact == r.s_curve == Rational(13, 9)
    assert r.ratio == Rational(9, 13)
    assert r.tau == 2
    assert sorted(r.s_m_table) == [4, 8]
