import random

import pytest

from helpers import rand_form
from properties import float_points

from tdualcalc.blowup import blowdown_chart
from tdualcalc.chart import TorusAction, standard_action
from tdualcalc.cli.parser import parse_form
from tdualcalc.coords import ChartError, elliptic_chart
from tdualcalc.forms import (
    Form,
    Multivector,
    contract,
    d,
    exp_form,
    from_polar,
    is_invariant,
    is_smooth_form,
    lie_derivative,
    proportionality,
    pullback,
    same_line,
    to_complex_frame,
    to_kind,
    to_polar,
)
from tdualcalc.gauss import QI
from tdualcalc.numeric import coordinate_components, max_diff

C1 = elliptic_chart(1)
C2 = elliptic_chart(2)


def f1(text):
    return parse_form(text, C1)


def f2(text):
    return parse_form(text, C2)


class TestWedge:
    def test_basis_order(self):
        assert f1("dlr1^dth1") == Form.basis(C1, 0, 1)

    def test_antisymmetry(self):
        assert f1("dth1^dlr1") == -f1("dlr1^dth1")

    def test_square_of_omega(self):
        omega = f2("dlr1^dth2 + dth1^dlr2")
        # (a + b)^2 = 2 a^b, and dlr1^dth2^dth1^dlr2 = dlr1^dth1^dlr2^dth2
        assert omega.wedge(omega) == f2("dlr1^dth1^dlr2^dth2").scale(2)

    def test_one_form_squares_to_zero(self):
        a = f2("r1^2*dlr1 + E2[1]*dth2")
        assert not a.wedge(a)


class TestExteriorDerivative:
    def test_r_squared(self):
        assert d(f1("r1^2")) == f1("2*r1^2*dlr1")

    def test_z1_z2(self):
        assert d(f2("z1*z2")) == f2("z1*z2*(dlr1 + i*dth1 + dlr2 + i*dth2)")

    def test_frame_is_closed(self):
        assert not d(f2("dlr1^dth2"))

    def test_leibniz(self):
        rng = random.Random(5)
        for _ in range(20):
            a = rand_form(C2, rng, [1])
            b = rand_form(C2, rng)
            assert d(a.wedge(b)) == d(a).wedge(b) - a.wedge(d(b))

    def test_spinor_from_complex_side(self):
        rho = f2("z1*z2 + dz1^dz2")
        assert d(rho) == f2("z1*z2*(dlr1 + i*dth1 + dlr2 + i*dth2)")


class TestContraction:
    def test_radial(self):
        X = Multivector.vec(C1, "r1")
        assert contract(X, f1("dlr1^dth1")) == f1("dth1")

    def test_bivector(self):
        X = Multivector.vec(C1, "r1").wedge(Multivector.vec(C1, "th1"))
        assert contract(X, f1("dlr1^dth1")) == f1("1")

    def test_no_matching_leg(self):
        assert not contract(Multivector.vec(C2, "th1"), f2("dlr1^dth2"))

    def test_lie_derivative_eigenform(self):
        X = Multivector.vec(C1, "th1")
        assert lie_derivative(X, f1("E1[1]*dlr1")) == f1("i*E1[1]*dlr1")

    def test_lie_derivative_degree(self):
        X = Multivector.vec(C1, "r1")
        assert lie_derivative(X, f1("r1^2*dth1")) == f1("2*r1^2*dth1")


class TestComplexFrame:
    def test_dlog_z(self):
        out = to_complex_frame(f1("dlr1 + i*dth1"))
        assert out.chart.kind == "complex"
        assert out == parse_form("z1^-1*dz1", out.chart)

    def test_area_form(self):
        out = to_complex_frame(f1("dlr1^dth1"))
        assert out == parse_form("i/2*z1^-1*zb1^-1*dz1^dzb1", out.chart)

    def test_area_form_numerically(self):
        out = to_complex_frame(f1("dlr1^dth1"))
        for pt in float_points(C1, 8, 10):
            r = pt.values[0]
            got = coordinate_components(out, pt.values)
            # dlog r ^ dtheta = dr ^ dtheta / r
            assert max_diff(got, {(0, 1): 1 / r}) < 1e-12

    def test_round_trip(self):
        rng = random.Random(6)
        for kind in ("complex", "complex-log"):
            for _ in range(20):
                alpha = rand_form(C2, rng)
                assert to_polar(to_kind(alpha, kind)) == alpha
                assert from_polar(alpha, kind) == to_kind(alpha, kind)


class TestSmoothForms:
    def test_area_form_is_not_smooth(self):
        assert not is_smooth_form(f1("dlr1^dth1"))

    def test_dz1_dz2(self):
        assert is_smooth_form(f2("z1*z2*(dlr1 + i*dth1)^(dlr2 + i*dth2)"))

    def test_constant(self):
        assert is_smooth_form(f1("1"))

    def test_r_squared_dlog(self):
        # 2 r^2 dlog r = d(x^2 + y^2)
        assert is_smooth_form(f1("r1^2*dlr1"))


class TestInvariance:
    def test_frame_form(self):
        assert is_invariant(f2("dlr1^dth2"), standard_action(C2))

    def test_mode(self):
        assert not is_invariant(f1("z1*dth1"), standard_action(C1))

    def test_anti_diagonal(self):
        act = TorusAction(C2, ((1, -1),))
        assert is_invariant(f2("z1*z2 + dz1^dz2"), act)
        assert not is_invariant(f2("z1*z2 + dz1^dz2"), standard_action(C2))


class TestPullback:
    def test_blowdown_dlog(self):
        bd = blowdown_chart(2, 2)
        out = pullback(parse_form("dlr1", bd.target), bd.map)
        assert out == parse_form("dlr2 + dlrv1", bd.source)

    def test_zero(self):
        bd = blowdown_chart(2, 1)
        assert not pullback(Form.zero(bd.target), bd.map)

    def test_commutes_with_d(self):
        bd = blowdown_chart(2, 1)
        rng = random.Random(7)
        for _ in range(10):
            alpha = rand_form(bd.target, rng)
            assert pullback(d(alpha), bd.map) == d(pullback(alpha, bd.map))


class TestExpAndLines:
    def test_exp(self):
        out = exp_form(f1("i*dlr1^dth1"))
        assert out == f1("1 + i*dlr1^dth1")

    def test_exp_needs_even_nilpotent(self):
        with pytest.raises(ValueError):
            exp_form(f1("dlr1"))

    def test_proportionality(self):
        a = f1("dlr1 + i*dth1")
        assert proportionality(a.scale(QI(0, -1)), a) == QI(0, -1)
        assert proportionality(f1("dlr1"), a) is None
        assert same_line(a.scale(3), a)

    def test_parameter_ratio(self):
        a = f1("dlr1")
        ratio = proportionality(f1("@lam*dlr1"), a)
        assert ratio is not None and not ratio.is_const()


def test_charts_must_match():
    with pytest.raises(ChartError):
        f1("dlr1") + f2("dlr1")
