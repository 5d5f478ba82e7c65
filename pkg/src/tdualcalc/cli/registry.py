"""Bundled worked examples and the machinery that replays them."""

from __future__ import annotations

import json
from fractions import Fraction
from dataclasses import dataclass, field
from importlib import resources

from ..blowup import blowdown_chart, blowup_duality, fiberwise_iso_check, induced_divisor, pullback_blowdown
from ..chart import (
    CP2_WEIGHTS,
    ConnectionForm,
    Divisor,
    atlas_check_global,
    check_connection,
    cp2_zeta,
    curvature,
    im_star,
    is_basic,
    product_atlas,
    projective_atlas,
)
from ..coeffring import FnElem, is_smooth_fn
from ..coords import ChartError, complex_log_chart
from ..forms import Form, d, proportionality, to_polar
from ..genstruct import descends, integrable_at_samples, is_pure, mukai_nondeg, stable_check, spinor_samples
from ..report import Report
from ..residues import res_point, res_q, res_r, res_r2
from ..tduality import DualityData, build_F_from_connections, check_F, make_correspondence, tau
from .charts import resolve_chart
from .parser import parse_fn, parse_form
from .printer import format_form, format_fn

MODES = ("exact", "projective-line", "verdict")


@dataclass
class ExampleCase:
    name: str
    ref: str
    op: str
    setup: dict
    inputs: dict
    expected: dict
    mode: str = "verdict"
    known_gap: str = ""
    tags: list = field(default_factory=list)

    @classmethod
    def from_dict(cls, data: dict) -> "ExampleCase":
        if data.get("mode", "verdict") not in MODES:
            raise ValueError(f"{data['name']}: unknown comparison mode {data['mode']!r}")
        return cls(
            data["name"], data["ref"], data["op"], data.get("setup", {}), data.get("inputs", {}),
            data.get("expected", {}), data.get("mode", "verdict"), data.get("known_gap", ""), data.get("tags", []),
        )


def load_registry() -> list[ExampleCase]:
    text = resources.files("tdualcalc.cli").joinpath("examples.json").read_text()
    return [ExampleCase.from_dict(c) for c in json.loads(text)["cases"]]


def find_case(name: str) -> ExampleCase:
    for c in load_registry():
        if c.name == name:
            return c
    raise KeyError(name)


# ---------------------------------------------------------------------------
# comparisons


def compare(result: Form, expected: Form, mode: str) -> tuple[bool, str]:
    result, expected = to_polar(result), to_polar(expected)
    if result.chart != expected.chart:
        return False, "results live on different charts"
    if mode == "exact":
        ok = result == expected
        return ok, "equal" if ok else f"got {format_form(result)}"
    c = proportionality(result, expected)
    if c is None or not c:
        return False, f"not on the line; got {format_form(result)}"
    return True, f"ratio {format_fn(c) if isinstance(c, FnElem) else c}"


def _expect_expr(rep: Report, case: ExampleCase, result: Form, key: str = "expr", chart=None):
    if key not in case.expected:
        return
    target = parse_form(case.expected[key], chart or result.chart)
    ok, detail = compare(result, target, case.mode if case.mode != "verdict" else "exact")
    rep.add(f"{key} matches {case.expected[key]}", ok, detail)


def _descent_checks(rep: Report, case: ExampleCase, rho: Form):
    exp = case.expected
    if "descends" not in exp:
        return
    res = descends(rho, gauge=bool(case.setup.get("gauge", False)))
    rep.add("descends" if exp["descends"] else "does not descend", res.ok == exp["descends"],
            res.reason or ("witness " + format_fn(res.factor, rho.chart.polar()) if res.ok else ""))
    if res.ok and "witness" in exp:
        want = parse_fn(exp["witness"], rho.chart.polar())
        ratio = res.factor * want.inverse()
        rep.add(f"witness {exp['witness']}", ratio.is_const() and bool(ratio), format_fn(res.factor, rho.chart.polar()))


# ---------------------------------------------------------------------------
# handlers


def _charts(case: ExampleCase):
    left = resolve_chart(case.setup.get("chart", "c1"))
    right = resolve_chart(case.setup.get("right", case.setup.get("chart", "c1")))
    return left, right


def _duality(case: ExampleCase) -> DualityData:
    left, right = _charts(case)
    corr = make_correspondence(left, right)
    F = parse_form(case.inputs["F"], corr.chart)
    H = parse_form(case.inputs["H"], left) if "H" in case.inputs else None
    Hh = parse_form(case.inputs["Hhat"], right) if "Hhat" in case.inputs else None
    return DualityData.build(left, right, F=F, H=H, Hhat=Hh, corr=corr)


def run_tau(case: ExampleCase) -> Report:
    rep = Report(case.name)
    data = _duality(case)
    rho = parse_form(case.inputs["rho"], data.corr.left)
    out = tau(rho, data)
    rep.add("transform", True, format_form(out))
    _expect_expr(rep, case, out)
    _descent_checks(rep, case, out)
    return rep


def run_descends(case: ExampleCase) -> Report:
    rep = Report(case.name)
    chart, _ = _charts(case)
    _descent_checks(rep, case, parse_form(case.inputs["rho"], chart))
    return rep


def run_stable(case: ExampleCase) -> Report:
    chart, _ = _charts(case)
    got = stable_check(parse_form(case.inputs["omega"], chart))
    rep = Report(case.name)
    rep.add("stable" if case.expected["verdict"] else "not stable", got.ok == case.expected["verdict"],
            "; ".join(f"{c.name}: {'ok' if c.verdict else 'fails'} {c.detail}".strip() for c in got.checks))
    for name in case.expected.get("failing", []):
        try:
            rep.add(f"{name} fails", not got.get(name).verdict, got.get(name).detail)
        except KeyError:
            rep.add(f"{name} fails", False, "no such check")
    return rep


def run_check_F(case: ExampleCase) -> Report:
    got = check_F(_duality(case))
    rep = Report(case.name)
    rep.add("valid" if case.expected["verdict"] else "invalid", got.ok == case.expected["verdict"],
            "; ".join(f"{c.name}: {'ok' if c.verdict else 'fails'} {c.detail}".strip() for c in got.checks))
    return rep


def run_build_F(case: ExampleCase) -> Report:
    left, right = _charts(case)
    corr = make_correspondence(left, right)
    theta = ConnectionForm(tuple(parse_form(t, left) for t in case.inputs["theta"]))
    theta_hat = ConnectionForm(tuple(parse_form(t, right) for t in case.inputs["thetahat"]))
    F = build_F_from_connections(theta, theta_hat, corr)
    rep = Report(case.name)
    rep.add("F", True, format_form(F))
    _expect_expr(rep, case, F)
    return rep


def run_d(case: ExampleCase) -> Report:
    chart, _ = _charts(case)
    out = d(parse_form(case.inputs["expr"], chart))
    rep = Report(case.name)
    _expect_expr(rep, case, out)
    return rep


_RESIDUES = {
    "q": lambda w, i, j: res_q(w, i),
    "r": lambda w, i, j: res_r(w, i),
    "r2": lambda w, i, j: res_r2(w, i, j),
}


def run_residue(case: ExampleCase) -> Report:
    chart, _ = _charts(case)
    omega = parse_form(case.inputs["omega"], chart)
    kind = case.inputs["kind"]
    i, j = case.inputs.get("i", 1), case.inputs.get("j", 2)
    rep = Report(case.name)
    if kind in _RESIDUES:
        value = _RESIDUES[kind](omega, i, j).value
        _expect_expr(rep, case, value)
    else:
        value = res_point(omega, kind, i, j).value
        want = FnElem.const(value.sig, Fraction(case.expected["expr"]))
        rep.add(f"Res_{kind}({i},{j}) = {case.expected['expr']}", value == want, format_fn(value))
    return rep


def run_smooth_fn(case: ExampleCase) -> Report:
    chart, _ = _charts(case)
    f = parse_fn(case.inputs["f"], chart)
    rep = Report(case.name)
    got = is_smooth_fn(f, chart.polar())
    rep.add("smooth" if case.expected["verdict"] else "not smooth", got == case.expected["verdict"], format_fn(f, chart.polar()))
    return rep


def run_spinor(case: ExampleCase) -> Report:
    chart, _ = _charts(case)
    rho = parse_form(case.inputs["rho"], chart)
    exp = case.expected
    rep = Report(case.name)
    if "pure" in exp:
        rep.add("pure" if exp["pure"] else "not pure", is_pure(rho) == exp["pure"], "3 sample points")
    if "mukai" in exp:
        got = all(mukai_nondeg(rho, pt) for pt in spinor_samples(rho, 0, 3))
        rep.add("Mukai nondegenerate" if exp["mukai"] else "Mukai degenerate", got == exp["mukai"], "3 sample points")
    if "integrable" in exp:
        got = integrable_at_samples(rho)
        rep.add("integrable" if exp["integrable"] else "not integrable", got == exp["integrable"], "3 sample points")
    return rep


def run_blowup(case: ExampleCase) -> Report:
    bd = blowdown_chart(case.setup["l"], case.setup["i"], case.setup.get("m", 0))
    rep = Report(case.name)
    alpha = parse_form(case.inputs["expr"], bd.target)
    pulled = pullback_blowdown(alpha, bd)
    rep.add("pullback", True, format_form(pulled))
    _expect_expr(rep, case, pulled, "pullback")
    if "divisor" in case.inputs:
        div = Divisor(bd.target, parse_fn(case.inputs["divisor"], bd.target), "elliptic")
        ind = induced_divisor(div, bd)
        if "induced" in case.expected:
            want = parse_fn(case.expected["induced"], bd.source)
            rep.add(f"induced divisor {case.expected['induced']}", ind.generator == want, format_fn(ind.generator, bd.source))
        if "fiberwise" in case.expected:
            rep.add("fibrewise isomorphism", fiberwise_iso_check(bd, div) == case.expected["fiberwise"], "")
    return rep


def run_blowup_tau(case: ExampleCase) -> Report:
    data = _duality(case)
    bd = blowdown_chart(case.setup["l"], case.setup["i"], case.setup.get("m", 0))
    if bd.target != data.corr.left:
        raise ChartError("blow-down target must be the duality chart")
    blown, Q = blowup_duality(data, bd, bd)
    rep = Report(case.name)
    rep.add("Q*F", True, format_form(blown.F))
    got = check_F(blown)
    rep.add("Q*F passes check-F", got.ok, "; ".join(f"{c.name}: {c.verdict}" for c in got.checks))
    rho = parse_form(case.inputs["rho"], data.corr.left)
    lhs = tau(pullback_blowdown(rho, bd), blown)
    rhs = pullback_blowdown(tau(rho, data), bd)
    rep.add("tau_blown(p* rho) = p^*(tau(rho))", lhs == rhs, format_form(lhs))
    return rep


def _s2s2_spinors(atlas) -> dict[str, Form]:
    out = {}
    for name, ch in atlas.charts.items():
        a, b = (int(part[1:]) for part in name.split("x"))
        sign = "+" if (a + b) % 2 == 0 else "-"
        out[name] = parse_form(f"dz1^dz2 {sign} z1*z2", ch)
    return out


def run_atlas(case: ExampleCase) -> Report:
    which = case.setup["atlas"]
    rep = Report(case.name)
    if which == "cp1":
        atlas = projective_atlas(1)
        ch = complex_log_chart(1)
        forms = {k: parse_form(case.inputs[k], ch) for k in atlas.charts}
    elif which == "s2xs2":
        atlas = product_atlas(projective_atlas(1), projective_atlas(1))
        forms = _s2s2_spinors(atlas)
    elif which == "cp2-zeta":
        atlas = projective_atlas(2, CP2_WEIGHTS)
        forms = None
    else:
        raise ValueError(f"unknown atlas {which!r}")
    mode = "line" if case.mode == "projective-line" else "exact"
    if forms is not None:
        got = atlas_check_global(atlas, forms, mode)
        rep.add("glues" if case.expected["verdict"] else "does not glue", got == case.expected["verdict"], mode)
        return rep
    for s in range(2):
        forms = {k: cp2_zeta(k)[s] for k in atlas.charts}
        rep.add(f"zeta_{s + 1} glues", atlas_check_global(atlas, forms, mode), mode)
    return rep


def run_cp2_connection(case: ExampleCase) -> Report:
    atlas = projective_atlas(2, CP2_WEIGHTS)
    rep = Report(case.name)
    for name in sorted(atlas.charts):
        theta = ConnectionForm(tuple(im_star(z) for z in cp2_zeta(name)))
        action = atlas.actions[name]
        rep.add(f"{name}: connection", check_connection(theta, action), ", ".join(format_form(t) for t in theta.theta))
        for s, (t, K) in enumerate(zip(theta.theta, curvature(theta, action)), start=1):
            rep.add(f"{name}: dTheta_{s} basic", is_basic(K, action), format_form(K))
            for i in range(1, t.chart.l + 1):
                lhs = res_r(K, i).value
                rhs = d(res_r(t, i).value)
                rep.add(f"{name}: Res_r[{i}](dTheta_{s}) = -d Res_r[{i}](Theta_{s})", lhs == -rhs, format_form(lhs))
            rep.add(f"{name}: Res_r2(dTheta_{s}) = 0", not res_r2(K, 1, 2).value, "")
    return rep


HANDLERS = {
    "tau": run_tau,
    "descends": run_descends,
    "check-stable": run_stable,
    "check-F": run_check_F,
    "build-F": run_build_F,
    "d": run_d,
    "residue": run_residue,
    "smooth-fn": run_smooth_fn,
    "check-spinor": run_spinor,
    "blowup": run_blowup,
    "blowup-tau": run_blowup_tau,
    "atlas": run_atlas,
    "cp2-connection": run_cp2_connection,
}


@dataclass
class CaseResult:
    case: ExampleCase
    report: Report
    status: str  # pass, fail, xfail, xpass, error

    @property
    def ok(self) -> bool:
        return self.status in ("pass", "xfail")

    def as_dict(self) -> dict:
        out = self.report.as_dict()
        out.update({"status": self.status, "ref": self.case.ref, "mode": self.case.mode})
        if self.case.known_gap:
            out["known_gap"] = self.case.known_gap
        return out


def run_case(case: ExampleCase) -> CaseResult:
    try:
        rep = HANDLERS[case.op](case)
    except Exception as exc:  # a case that cannot run is a failure, not a crash
        rep = Report(case.name)
        rep.add("runs", False, f"{type(exc).__name__}: {exc}")
        return CaseResult(case, rep, "error")
    if case.known_gap:
        status = "xpass" if rep.ok else "xfail"
    else:
        status = "pass" if rep.ok else "fail"
    return CaseResult(case, rep, status)


__all__ = ["CaseResult", "ExampleCase", "HANDLERS", "find_case", "load_registry", "run_case"]
