import pytest

from tdualcalc.chart import (
    CP2_WEIGHTS,
    ConnectionForm,
    TorusAction,
    atlas_check_global,
    check_connection,
    complex_log_divisor,
    cp2_zeta,
    curvature,
    elliptic_divisor,
    frame,
    im_star,
    is_basic,
    is_standard_matrix,
    product_atlas,
    projective_atlas,
    real_log_divisor,
    scale_radii,
    standard_action,
)
from tdualcalc.cli.charts import resolve_chart
from tdualcalc.cli.parser import parse_fn, parse_form
from tdualcalc.coords import ChartError, complex_log_chart, elliptic_chart, real_log_chart, smooth_chart
from tdualcalc.forms import Form, d


class TestFrames:
    def test_plane(self):
        assert frame(elliptic_chart(1)) == ["dlr1", "dth1"]

    def test_smooth(self):
        assert frame(smooth_chart(2)) == ["dx1", "dx2"]

    def test_c2(self):
        assert frame(elliptic_chart(2)) == ["dlr1", "dth1", "dlr2", "dth2"]

    def test_free_and_real_factors(self):
        assert frame(elliptic_chart(1, f=1, m=1)) == ["dlr1", "dth1", "dps1", "dx1"]

    def test_log_kinds(self):
        assert frame(complex_log_chart(1)) == ["dlz1", "dzb1"]
        assert frame(real_log_chart(2)) == ["dlx1", "dlx2"]


class TestDivisors:
    def test_elliptic(self):
        ch = elliptic_chart(2)
        assert elliptic_divisor(ch).generator == parse_fn("r1^2*r2^2", ch)

    def test_complex_log(self):
        ch = elliptic_chart(2)
        assert complex_log_divisor(ch).generator == parse_fn("z1*z2", ch)

    def test_real_log(self):
        ch = real_log_chart(1, m=1)
        assert real_log_divisor(ch).generator == parse_fn("x1", ch)


class TestActions:
    def test_standard(self):
        act = standard_action(elliptic_chart(2))
        assert act.rank == 2 and act.is_standard()

    def test_unimodular_change_of_basis(self):
        assert is_standard_matrix(((1, 1), (0, 1)))

    def test_anti_diagonal_circle_is_not_standard(self):
        # one circle rotating two planes is not a product of coordinate rotations
        assert not is_standard_matrix(((1, -1),))

    def test_non_unimodular(self):
        assert not is_standard_matrix(((2, 0),))


class TestConnections:
    def test_flat(self):
        ch = elliptic_chart(2)
        theta = ConnectionForm((parse_form("dth1", ch), parse_form("dth2", ch)))
        assert check_connection(theta, standard_action(ch))

    def test_cp2_chart(self):
        atlas = projective_atlas(2, CP2_WEIGHTS)
        for name in atlas.charts:
            theta = ConnectionForm(tuple(im_star(z) for z in cp2_zeta(name)))
            assert check_connection(theta, atlas.actions[name])

    def test_off_diagonal_fails(self):
        ch = elliptic_chart(2)
        theta = ConnectionForm((parse_form("dth1 + dth2", ch), parse_form("dth2", ch)))
        assert not check_connection(theta, standard_action(ch))

    def test_non_invariant_fails(self):
        ch = elliptic_chart(1)
        theta = ConnectionForm((parse_form("dth1 + r1^2*E1[1]*dlr1", ch),))
        assert not check_connection(theta, standard_action(ch))

    def test_flat_curvature(self):
        ch = elliptic_chart(1)
        assert curvature(ConnectionForm((parse_form("dth1", ch),))) == (Form.zero(ch),)

    def test_line_bundle_connection(self):
        ch = resolve_chart("complex-log:c1r2")
        theta = im_star(parse_form("dlz1 + i*x1*dx2", ch))
        (K,) = curvature(ConnectionForm((theta,)), standard_action(theta.chart))
        assert K == parse_form("dx1^dx2", theta.chart)
        assert is_basic(K, standard_action(theta.chart))

    def test_curvature_rejects_non_connection(self):
        ch = elliptic_chart(1)
        with pytest.raises(ValueError):
            curvature(ConnectionForm((parse_form("r1^2*E1[1]*dth1", ch),)), standard_action(ch))


class TestImStar:
    def test_dlog_z(self):
        ch = complex_log_chart(1)
        assert im_star(parse_form("dlz1", ch)) == parse_form("dth1", elliptic_chart(1))

    def test_difference(self):
        ch = complex_log_chart(2)
        assert im_star(parse_form("dlz1 - dlz2", ch)) == parse_form("dth1 - dth2", elliptic_chart(2))

    def test_rotation(self):
        ch = complex_log_chart(1)
        assert im_star(parse_form("i*dlz1", ch)) == parse_form("dlr1", elliptic_chart(1))

    def test_needs_complex_frame(self):
        with pytest.raises(ChartError):
            im_star(parse_form("dth1", elliptic_chart(1)))


class TestAtlases:
    def test_cp1_dlog(self):
        atlas = projective_atlas(1)
        ch = complex_log_chart(1)
        assert atlas.cocycle_ok()
        assert atlas_check_global(atlas, {"U0": parse_form("dlz1", ch), "U1": parse_form("-dlz1", ch)})

    def test_cp1_wrong_sign(self):
        atlas = projective_atlas(1)
        ch = complex_log_chart(1)
        assert not atlas_check_global(atlas, {"U0": parse_form("dlz1", ch), "U1": parse_form("dlz1", ch)})

    def test_s2xs2_poisson_spinor(self):
        atlas = product_atlas(projective_atlas(1), projective_atlas(1))
        forms = {}
        for name, ch in atlas.charts.items():
            a, b = (int(p[1:]) for p in name.split("x"))
            sign = "+" if (a + b) % 2 == 0 else "-"
            forms[name] = parse_form(f"dz1^dz2 {sign} z1*z2", ch)
        assert atlas.cocycle_ok()
        assert atlas_check_global(atlas, forms, "line")

    def test_cp2_zeta_glue(self):
        atlas = projective_atlas(2, CP2_WEIGHTS)
        assert atlas.cocycle_ok()
        for s in range(2):
            assert atlas_check_global(atlas, {k: cp2_zeta(k)[s] for k in atlas.charts})


def test_hopf_scaling_preserves_dlog_forms():
    ch = elliptic_chart(2)
    omega = parse_form("dlr1^dth2 + dth1^dlr2", ch)
    assert scale_radii(omega, {"r1": 2, "r2": 2}) == omega
    f = parse_form("r1^2*dth1", ch)
    assert scale_radii(f, {"r1": 2}) == f.scale(4)


def test_action_on_wrong_chart():
    ch = elliptic_chart(1)
    theta = ConnectionForm((parse_form("dth1", ch),))
    assert not check_connection(theta, TorusAction(elliptic_chart(2), ((1, 0),)))
    assert d(parse_form("dth1", ch)) == Form.zero(ch)
