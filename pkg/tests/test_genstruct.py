import pytest

from tdualcalc.cli.charts import resolve_chart
from tdualcalc.cli.parser import parse_fn, parse_form
from tdualcalc.coords import elliptic_chart
from tdualcalc.forms import Form, Multivector
from tdualcalc.genstruct import (
    GenSection,
    annihilator_rank,
    clifford,
    dH_closed,
    d_H,
    descends,
    dorfman,
    integrable_at_samples,
    is_pure,
    mukai_nondeg,
    pairing,
    spinor_samples,
    stable_check,
)

C1 = elliptic_chart(1)
C2 = elliptic_chart(2)
OMEGA = "dlr1^dth2 + dth1^dlr2"


def sec(chart, vec=None, cov=None):
    v = Multivector.vec(chart, vec) if vec else None
    c = parse_form(cov, chart) if cov else None
    return GenSection.of(chart, v, c)


def rho2(text):
    return parse_form(text, C2)


class TestPairing:
    def test_dual_pair(self):
        assert pairing(sec(C1, "r1"), sec(C1, cov="dlr1")) == parse_fn("1/2", C1)

    def test_orthogonal(self):
        assert not pairing(sec(C1, "th1"), sec(C1, cov="dlr1"))

    def test_self_pairing(self):
        assert pairing(sec(C1, "r1", "dlr1"), sec(C1, "r1", "dlr1")) == parse_fn("1", C1)


class TestDorfman:
    def test_commuting_frame(self):
        out = dorfman(sec(C1, "r1"), sec(C1, "th1"))
        assert not out.vec and not out.cov

    def test_lie_term(self):
        out = dorfman(sec(C1, "th1"), sec(C1, cov="E1[1]*dlr1"))
        assert out == sec(C1, cov="i*E1[1]*dlr1")

    def test_twist(self):
        ch = elliptic_chart(1, m=1)
        H = parse_form("dlr1^dth1^dx1", ch)
        out = dorfman(sec(ch, "r1"), sec(ch, "th1"), H)
        # iota_X iota_Y H with X = r d/dr, Y = d/dtheta
        assert out.cov == parse_form("-dx1", ch)

    def test_rejects_open_twist(self):
        ch = elliptic_chart(1, m=2)
        with pytest.raises(ValueError):
            dorfman(sec(ch, "r1"), sec(ch, "th1"), parse_form("x1*dlr1^dth1^dx2", ch))


class TestClifford:
    def test_contraction(self):
        assert clifford(sec(C1, "r1"), parse_form("dlr1^dth1", C1)) == parse_form("dth1", C1)

    def test_wedge(self):
        assert clifford(sec(C1, cov="dlr1"), parse_form("1", C1)) == parse_form("dlr1", C1)


class TestPurity:
    def test_symplectic(self):
        rho = rho2(f"exp(i*({OMEGA}))")
        assert all(annihilator_rank(rho, pt) == 4 for pt in spinor_samples(rho, 0, 3))

    def test_complex(self):
        assert is_pure(rho2("dlz1^dlz2"))

    def test_mixed_parity(self):
        rho = rho2("1 + dlr1^dth1^dlr2")
        assert all(annihilator_rank(rho, pt) < 4 for pt in spinor_samples(rho, 0, 3))
        assert not is_pure(rho)

    def test_mukai(self):
        for text, expected in [(f"exp(i*({OMEGA}))", True), ("dlz1^dlz2", True), ("dlz1", False)]:
            rho = rho2(text)
            assert all(mukai_nondeg(rho, pt) is expected for pt in spinor_samples(rho, 0, 3))


class TestClosedness:
    def test_symplectic(self):
        assert dH_closed(rho2(f"exp(i*({OMEGA}))"))

    def test_complex_spinor_is_not_closed_but_integrable(self):
        rho = rho2("z1*z2 + dz1^dz2")
        assert not dH_closed(rho)
        assert integrable_at_samples(rho)

    def test_not_closed(self):
        assert d_H(rho2("z1 + dz1^dz2")) == rho2("dz1")

    def test_twisted(self):
        ch = elliptic_chart(1, m=1)
        H = parse_form("dlr1^dth1^dx1", ch)
        assert d_H(parse_form("1", ch), H) == H


class TestStable:
    def test_complex_side(self):
        assert stable_check(rho2(OMEGA)).ok

    def test_real_side(self):
        assert stable_check(rho2("dlr1^dlr2 - dth1^dth2")).ok

    def test_unit_residue_fails(self):
        rep = stable_check(parse_form("dlr1^dth1 + dx1^dx2", resolve_chart("c1r2")))
        assert not rep.ok
        assert not rep.get("Res_q[1] = 0").verdict
        assert rep.get("Res_q[1] = 0").detail == "1"

    def test_not_closed(self):
        rep = stable_check(rho2("r1^2*dlr2^dth2 + dlr1^dth1"))
        assert not rep.get("closed").verdict


class TestDescent:
    def test_complex_structure(self):
        res = descends(rho2("dlz1^dlz2"))
        assert res.ok and res.factor == parse_fn("z1*z2", C2)

    def test_conjugate_chart(self):
        res = descends(rho2("dlz1^dlzb2"))
        assert res.ok and res.factor == parse_fn("z1*zb2", C2)

    def test_no_smooth_rescaling(self):
        res = descends(rho2("exp(i*(dlr1^dlr2 + dth1^dth2))"))
        assert not res.ok and res.reason

    def test_smooth_spinor_needs_no_rescaling(self):
        res = descends(rho2("z1*z2 + dz1^dz2"))
        assert res.ok and res.factor.is_const()

    def test_impure_input(self):
        with pytest.raises(ValueError):
            descends(rho2("1 + dlr1^dth1^dlr2"))

    def test_zero(self):
        assert not descends(Form.zero(C2))
