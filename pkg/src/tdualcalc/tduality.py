"""Correspondence charts, duality data and the transform tau."""

from __future__ import annotations

from dataclasses import dataclass

from .chart import ConnectionForm, TorusAction, check_connection, standard_action
from .coeffring import FnElem, torus_average
from .coords import ANGLE, RADIAL, REAL, Chart, ChartError, Coord, MonomialMap
from .forms import Form, contract, d, exp_form, is_invariant, proportionality, pullback, reinterpret_form, to_polar
from .gauss import QI
from .genstruct import d_H
from .linalg import det
from .report import Report


@dataclass(frozen=True)
class CorrChart:
    """Fibre product of two charts over their common base.

    Radii and real coordinates are shared; left angles keep their names and
    right angles get an ``h`` suffix (``th1 -> thh1``, ``ps1 -> psh1``).
    """

    left: Chart
    right: Chart
    chart: Chart
    to_left: MonomialMap
    to_right: MonomialMap
    right_names: dict[str, str]  # right chart name -> correspondence name

    @property
    def left_angles(self) -> list[str]:
        return [self.left.coords[k].name for k in self.left.angles]

    @property
    def right_angles(self) -> list[str]:
        return [self.right_names[self.right.coords[k].name] for k in self.right.angles]


def hat(name: str) -> str:
    if name.startswith("th"):
        return "thh" + name[2:]
    if name.startswith("ps"):
        return "psh" + name[2:]
    return name + "h"


def _shape(ch: Chart) -> tuple[int, int, int]:
    free = sum(1 for k in ch.angles if ch.coords[k].pair is None)
    return ch.l, free, len(ch.indices(REAL))


def make_correspondence(left: Chart, right: Chart) -> CorrChart:
    left, right = left.polar(), right.polar()
    if _shape(left) != _shape(right):
        raise ChartError(f"charts do not share a base: {left} vs {right}")
    lr = [left.coords[k] for k in left.radials]
    rr = [right.coords[k] for k in right.radials]
    coords: list[Coord] = []
    right_names: dict[str, str] = {}
    for a, b in zip(lr, rr):
        coords.append(Coord(a.name, RADIAL, cname=a.cname))
        right_names[b.name] = a.name
        for j in left.pairs[left.index(a.name)]:
            coords.append(Coord(left.coords[j].name, ANGLE, pair=a.name))
        for j in right.pairs[right.index(b.name)]:
            nm = hat(right.coords[j].name)
            coords.append(Coord(nm, ANGLE, pair=a.name))
            right_names[right.coords[j].name] = nm
    lfree = [left.coords[k] for k in left.angles if left.coords[k].pair is None]
    rfree = [right.coords[k] for k in right.angles if right.coords[k].pair is None]
    coords += [Coord(c.name, ANGLE) for c in lfree]
    for c in rfree:
        right_names[c.name] = hat(c.name)
        coords.append(Coord(hat(c.name), ANGLE))
    lx = [left.coords[k] for k in left.indices(REAL)]
    rx = [right.coords[k] for k in right.indices(REAL)]
    for a, b in zip(lx, rx):
        coords.append(Coord(a.name, REAL))
        right_names[b.name] = a.name
    corr = Chart(tuple(coords), "correspondence", "corr")
    to_left = MonomialMap.from_dict(corr, left, {c.name: {c.name: 1} for c in left.coords})
    to_right = MonomialMap.from_dict(corr, right, {c.name: {right_names[c.name]: 1} for c in right.coords})
    return CorrChart(left, right, corr, to_left, to_right, right_names)


def lift_action(action: TorusAction, corr: CorrChart, side: str) -> TorusAction:
    base = corr.left if side == "left" else corr.right
    if action.chart.polar() != base:
        raise ChartError("action does not live on that side of the correspondence")
    names = [base.coords[k].name for k in base.angles]
    if side == "right":
        names = [corr.right_names[n] for n in names]
    corr_angles = [corr.chart.coords[k].name for k in corr.chart.angles]
    rows = []
    for row in action.matrix:
        full = [0] * len(corr_angles)
        for a, n in zip(row, names):
            full[corr_angles.index(n)] = a
        rows.append(tuple(full))
    return TorusAction(corr.chart, tuple(rows))


@dataclass
class DualityData:
    corr: CorrChart
    F: Form
    H: Form
    Hhat: Form
    left_action: TorusAction
    right_action: TorusAction

    @classmethod
    def build(cls, left: Chart, right: Chart, F: Form | None = None, H: Form | None = None,
              Hhat: Form | None = None, left_action: TorusAction | None = None,
              right_action: TorusAction | None = None, corr: CorrChart | None = None) -> "DualityData":
        corr = corr or make_correspondence(left, right)
        return cls(
            corr,
            to_polar(F) if F is not None else Form.zero(corr.chart),
            to_polar(H) if H is not None else Form.zero(corr.left),
            to_polar(Hhat) if Hhat is not None else Form.zero(corr.right),
            left_action or standard_action(corr.left),
            right_action or standard_action(corr.right),
        )

    @property
    def k(self) -> int:
        return self.left_action.rank

    def lifted(self) -> tuple[TorusAction, TorusAction]:
        return lift_action(self.left_action, self.corr, "left"), lift_action(self.right_action, self.corr, "right")

    def swapped(self) -> "DualityData":
        """The same data read from the right: ``(M^, M, -F)``."""
        swapped = make_correspondence(self.corr.right, self.corr.left)
        mapping = {cname: rname for rname, cname in self.corr.right_names.items()}
        for lname in self.corr.left_angles:
            mapping[lname] = swapped.right_names[lname]
        F = reinterpret_form(self.F, swapped.chart, mapping)
        return DualityData(swapped, -F, self.Hhat, self.H, self.right_action, self.left_action)


def fiber_matrix(data: DualityData) -> list[list[FnElem]]:
    """``F(X_i, X^_j)`` for the lifted fibre generators."""
    left, right = data.lifted()
    out = []
    for X in left.generators():
        row = []
        for Y in right.generators():
            row.append(contract(Y, contract(X, data.F)).coeff(()))
        out.append(row)
    return out


def check_F(data: DualityData) -> Report:
    rep = Report("check-F")
    F = data.F
    if F.chart != data.corr.chart:
        raise ChartError("F must live on the correspondence chart")
    left, right = data.lifted()
    inv = is_invariant(F, left) and is_invariant(F, right)
    rep.add("invariant", inv, "F is invariant under both torus actions")
    pH = pullback(data.H, data.corr.to_left)
    pHh = pullback(data.Hhat, data.corr.to_right)
    rep.add("dF = p*H - p^*H^", d(F) == pH - pHh, "")
    mat = fiber_matrix(data)
    if len(mat) != data.right_action.rank:
        rep.add("nondegenerate", False, "torus ranks differ")
        return rep
    ok = all(f.is_const() for row in mat for f in row)
    detail = ""
    if ok:
        value = det([[f.const_value() for f in row] for row in mat])
        ok = bool(value)
        detail = f"det = {value}"
    else:
        detail = "fibre pairing is not constant"
    rep.add("nondegenerate", ok, detail)
    return rep


def _contract_fibres(alpha: Form, action: TorusAction) -> Form:
    for X in action.generators():
        alpha = contract(X, alpha)
    return alpha


def tau(rho: Form, data: DualityData) -> Form:
    """``iota_{X_k} ... iota_{X_1} (e^F ^ p*rho)``, read on the right chart."""
    rho = to_polar(rho)
    if rho.chart != data.corr.left:
        raise ChartError("rho must live on the left chart")
    if not is_invariant(rho, data.left_action):
        raise ValueError("rho is not invariant under the left torus action")
    left, right = data.lifted()
    lifted = exp_form(data.F).wedge(pullback(rho, data.corr.to_left)) if data.F else pullback(rho, data.corr.to_left)
    out = _contract_fibres(lifted, left)
    back = {v: k for k, v in data.corr.right_names.items()}
    for c in data.corr.left_angles:
        back[c] = c
    try:
        return reinterpret_form(out, data.corr.right, back)
    except ChartError as exc:
        raise RuntimeError("transform kept left fibre data") from exc


def tau_hat(rho_hat: Form, data: DualityData) -> Form:
    return tau(rho_hat, data.swapped())


def cochain_verify(data: DualityData, samples: list[Form]) -> Report:
    """``tau(d_H rho) = (-1)^k d_H^ tau(rho)`` and ``tau^ tau = c id``."""
    rep = Report("cochain")
    sign = -1 if data.k % 2 else 1
    hat_data = data.swapped()
    ratios = set()
    for n, rho in enumerate(samples):
        lhs = tau(d_H(rho, data.H), data)
        rhs = d_H(tau(rho, data), data.Hhat).scale(sign)
        rep.add(f"sample {n}: cochain", to_polar(lhs) == to_polar(rhs), "")
        back = tau(tau(rho, data), hat_data)
        c = proportionality(back, to_polar(rho)) if rho else QI(1)
        ok = c is not None
        if ok:
            ratios.add(str(c))
        rep.add(f"sample {n}: round trip", ok, f"ratio {c}")
    rep.add("global sign", True, f"{sign:+d}")
    rep.add("round-trip scalar is uniform", len(ratios) <= 1, ", ".join(sorted(ratios)))
    return rep


def build_F_from_connections(theta: ConnectionForm, theta_hat: ConnectionForm, corr: CorrChart,
                             left_action: TorusAction | None = None,
                             right_action: TorusAction | None = None) -> Form:
    """``F = -sum_i p*Theta_i ^ p^*Theta^_i``."""
    if len(theta) != len(theta_hat):
        raise ValueError("connections of different rank")
    if left_action is not None and not check_connection(theta, left_action):
        raise ValueError("Theta is not a connection for the left action")
    if right_action is not None and not check_connection(theta_hat, right_action):
        raise ValueError("Theta^ is not a connection for the right action")
    F = Form.zero(corr.chart)
    for a, b in zip(theta.theta, theta_hat.theta):
        F = F - pullback(a, corr.to_left).wedge(pullback(b, corr.to_right))
    return F


def average_form(alpha: Form, action: TorusAction) -> Form:
    alpha = to_polar(alpha)
    return Form(alpha.chart, {k: torus_average(f, action) for k, f in alpha.terms.items()})


__all__ = [
    "CorrChart",
    "DualityData",
    "build_F_from_connections",
    "check_F",
    "cochain_verify",
    "fiber_matrix",
    "lift_action",
    "make_correspondence",
    "tau",
    "tau_hat",
]
