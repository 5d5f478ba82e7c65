import cmath
import random

from helpers import rand_form
from properties import NumTau, float_points, shape_data

from tdualcalc.cli.parser import parse_form
from tdualcalc.coords import elliptic_chart, real_log_chart
from tdualcalc.forms import d
from tdualcalc.numeric import (
    agrees,
    coordinate_components,
    eval_coeff,
    numeric_contract,
    numeric_d,
    numeric_exp,
    random_points,
)
from tdualcalc.tduality import tau

C1 = elliptic_chart(1)


def test_points_are_seeded_and_open():
    a = random_points(C1, 5, 10)
    assert a == random_points(C1, 5, 10)
    assert all(p.values[0] > 0 for p in a)


def test_dlog_unwinds_to_dr_over_r():
    pt = float_points(C1, 1, 1)[0]
    comps = coordinate_components(parse_form("r1^2*dlr1", C1), pt.values)
    assert abs(comps[(0,)] - pt.values[0]) < 1e-12


def test_mode_evaluates_to_phase():
    pt = float_points(C1, 2, 1)[0]
    f = parse_form("E1[2]", C1).coeff(())
    assert abs(eval_coeff(f, C1, pt.values) - cmath.exp(2j * pt.values[1])) < 1e-12


def test_numeric_d_matches_exact():
    for ch in (elliptic_chart(2), elliptic_chart(1, m=1), real_log_chart(1, m=1)):
        rng = random.Random(3)
        for alpha in (rand_form(ch, rng) for _ in range(5)):
            for pt in float_points(ch, 4, 10):
                assert agrees(d(alpha), numeric_d(alpha, pt), pt)


def test_numeric_d_detects_a_wrong_answer():
    alpha = parse_form("r1^2*dth1", C1)
    wrong = parse_form("r1^2*dlr1^dth1", C1)
    pt = float_points(C1, 5, 1)[0]
    assert not agrees(wrong, numeric_d(alpha, pt), pt)


def test_exp_and_contract():
    two = {(0, 1): 1j}
    out = numeric_exp(two, 2)
    assert out == {(): 1, (0, 1): 1j}
    assert numeric_contract({(1,): 1.0}, two) == {(0,): -1j}


def test_numeric_transform_matches_exact():
    ch, data = shape_data("c2")
    rho = parse_form("exp(i*(dlr1^dth2 + dth1^dlr2))", ch)
    exact = tau(rho, data)
    for pt in random_points(data.corr.chart, 6, 10):
        nt = NumTau(data, pt.values)
        got = nt(lambda vals: coordinate_components(rho, vals))
        rv = nt.right_values()
        assert agrees(exact, got, type(pt)(tuple(rv)))


def test_numeric_transform_detects_a_wrong_pairing():
    ch, data = shape_data("c2")
    rho = parse_form("exp(i*(dlr1^dth2 + dth1^dlr2))", ch)
    wrong = tau(rho, data).conj()
    pt = random_points(data.corr.chart, 7, 1)[0]
    nt = NumTau(data, pt.values)
    got = nt(lambda vals: coordinate_components(rho, vals))
    assert not agrees(wrong, got, type(pt)(tuple(nt.right_values())))
