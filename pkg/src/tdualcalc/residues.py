"""Residue maps of elliptic and real log forms.

Contraction follows the package-wide order ``iota_{X^Y} = iota_Y iota_X``,
so ``Res_{a b} omega = omega(X_a, X_b)`` for the named frame vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .coeffring import FnElem, RingError, signature
from .coords import LOGREAL, RADIAL, Chart, ChartError
from .forms import Form, Multivector, contract, to_polar


class ResidueError(ValueError):
    """Raised when a restriction is singular or not basic along the stratum."""


@dataclass(frozen=True)
class ResidueReport:
    kind: str
    locus: tuple[str, ...]
    value: object  # Form, or FnElem for point residues
    chart: object = None  # stratum chart of a point residue

    def is_zero(self) -> bool:
        return not self.value


def _restricted_chart(chart: Chart, vanishing: Sequence[str], keep_angles: bool) -> tuple[Chart, list[str]]:
    drop = list(vanishing)
    free = []
    for name in vanishing:
        k = chart.index(name)
        if chart.coords[k].kind == RADIAL:
            angs = [chart.coords[j].name for j in chart.pairs[k]]
            if keep_angles:
                free += angs
            else:
                drop += angs
    return chart.remove(drop, free=tuple(free)), drop


def _restrict(f: FnElem, chart: Chart, vanishing: Sequence[str], target: Chart, keep_angles: bool) -> FnElem:
    van = [chart.index(n) for n in vanishing]
    normal_angles = []
    if not keep_angles:
        for k in van:
            if chart.coords[k].kind == RADIAL:
                normal_angles += list(chart.pairs[k])
    pos = [target.index(c.name) if target.has(c.name) else None for c in chart.coords]
    out = FnElem.zero(signature(target))
    for (exps, params), c in f.terms.items():
        dead = False
        for k in van:
            e = exps[k]
            if e < 0:
                raise ResidueError(
                    f"coefficient is singular along {{{chart.coords[k].name} = 0}}"
                )
            if e > 0:
                dead = True
        if dead:
            continue
        if any(exps[j] for j in normal_angles):
            raise ResidueError("not basic along D: restriction depends on a normal angle")
        new = [0] * target.n
        for e, p in zip(exps, pos):
            if e and p is not None:
                new[p] += e
        out = out + FnElem.mono(signature(target), new, c, params)
    return out


def restrict_to_stratum(f: FnElem, chart: Chart, vanishing: Sequence[str], keep_angles: bool = False):
    """Restrict a function to ``{vanishing = 0}``; returns ``(value, chart)``."""
    if f.sig != signature(chart):
        raise RingError("function does not live on this chart")
    target, _ = _restricted_chart(chart, vanishing, keep_angles)
    return _restrict(f, chart, vanishing, target, keep_angles), target


def _restrict_form(alpha: Form, vanishing: Sequence[str], keep_angles: bool) -> Form:
    chart = alpha.chart
    target, drop = _restricted_chart(chart, vanishing, keep_angles)
    out = Form.zero(target)
    for idx, f in alpha.terms.items():
        names = [chart.coords[k].name for k in idx]
        if any(n in drop for n in names):
            raise ResidueError("form keeps a leg normal to the stratum")
        g = _restrict(f, chart, vanishing, target, keep_angles)
        if g:
            out = out + Form.basis(target, *[target.index(n) for n in names], coeff=g)
    return out


def _vec(chart: Chart, name: str) -> Multivector:
    return Multivector.vec(chart, name)


def _radial_name(chart: Chart, i: int) -> str:
    if not 1 <= i <= len(chart.radials):
        raise ChartError(f"no elliptic pair with index {i}")
    return chart.coords[chart.radials[i - 1]].name


def _angle_name(chart: Chart, i: int) -> str:
    k = chart.radials[i - 1]
    return chart.coords[chart.primary_angle(k)].name


def res_q(omega: Form, i: int) -> ResidueReport:
    """Coefficient of ``dlog r_i ^ dtheta_i`` restricted to ``{r_i = 0}``."""
    omega = to_polar(omega)
    ch = omega.chart
    r, th = _radial_name(ch, i), _angle_name(ch, i)
    inner = contract(_vec(ch, th), contract(_vec(ch, r), omega))
    return ResidueReport("q", (r,), _restrict_form(inner, [r], keep_angles=False))


def res_r(omega: Form, i: int) -> ResidueReport:
    """``iota_{r_i d/dr_i}`` restricted to ``{r_i = 0}``, keeping ``theta_i``."""
    omega = to_polar(omega)
    ch = omega.chart
    r = _radial_name(ch, i)
    inner = contract(_vec(ch, r), omega)
    return ResidueReport("r", (r,), _restrict_form(inner, [r], keep_angles=True))


def res_r2(omega: Form, i: int, j: int) -> ResidueReport:
    """Second radial residue ``Res_r^2``: contract ``r_i d/dr_i`` then ``r_j d/dr_j``."""
    omega = to_polar(omega)
    ch = omega.chart
    ri, rj = _radial_name(ch, i), _radial_name(ch, j)
    inner = contract(_vec(ch, rj), contract(_vec(ch, ri), omega))
    return ResidueReport("r2", (ri, rj), _restrict_form(inner, [ri, rj], keep_angles=True))


POINT_KINDS = ("rr", "rtheta", "thetar", "thetatheta")


def res_point(omega: Form, kind: str, i: int, j: int) -> ResidueReport:
    """``omega(X_i, Y_j)`` on ``{r_i = r_j = 0}``.

    ``kind`` names the pair of frame vectors: ``rtheta`` is
    ``omega(r_i d/dr_i, d/dtheta_j)``, ``thetar`` is
    ``omega(d/dtheta_i, r_j d/dr_j)``.
    """
    if kind not in POINT_KINDS:
        raise ValueError(f"unknown point residue {kind!r}")
    if i == j:
        raise ValueError("point residues need two distinct elliptic indices")
    omega = to_polar(omega).part(2)
    ch = omega.chart
    first = _radial_name(ch, i) if kind in ("rr", "rtheta") else _angle_name(ch, i)
    second = _radial_name(ch, j) if kind in ("rr", "thetar") else _angle_name(ch, j)
    val = contract(_vec(ch, second), contract(_vec(ch, first), omega)).coeff(())
    locus = [_radial_name(ch, i), _radial_name(ch, j)]
    value, stratum = restrict_to_stratum(val, ch, locus)
    return ResidueReport(kind, tuple(locus), value, stratum)


def _logreal_name(chart: Chart, i: int) -> str:
    idx = chart.indices(LOGREAL)
    if not 1 <= i <= len(idx):
        raise ChartError(f"no log coordinate with index {i}")
    return chart.coords[idx[i - 1]].name


def _restrict_log(alpha: Form, names: Sequence[str]) -> Form:
    ch = alpha.chart
    target = ch.remove(names)
    cols = [ch.index(n) for n in names]
    out = Form.zero(target)
    for idx, f in alpha.terms.items():
        legs = [ch.coords[k].name for k in idx]
        if any(n in names for n in legs):
            raise ResidueError("form keeps a leg normal to the hypersurface")
        keep = {}
        for (exps, params), c in f.terms.items():
            if any(exps[k] for k in cols):
                continue
            new = tuple(e for k, e in enumerate(exps) if k not in cols)
            keep[(new, params)] = c
        g = FnElem(signature(target), keep)
        if g:
            out = out + Form.basis(target, *[target.index(n) for n in legs], coeff=g)
    return out


def res_log(omega: Form, i: int) -> ResidueReport:
    """``iota_{x_i d/dx_i}`` restricted to ``{x_i = 0}``."""
    ch = omega.chart
    if ch.kind != "real-log":
        raise ChartError("real log residues need a real-log chart")
    x = _logreal_name(ch, i)
    inner = contract(_vec(ch, x), omega)
    return ResidueReport("log", (x,), _restrict_log(inner, [x]))


def res_log2(omega: Form, i: int, j: int) -> ResidueReport:
    """``omega(x_i d/dx_i, x_j d/dx_j)`` on ``{x_i = x_j = 0}``."""
    ch = omega.chart
    if ch.kind != "real-log":
        raise ChartError("real log residues need a real-log chart")
    xi, xj = _logreal_name(ch, i), _logreal_name(ch, j)
    inner = contract(_vec(ch, xj), contract(_vec(ch, xi), omega.part(2)))
    val = _restrict_log(inner.part(0), [xi, xj])
    return ResidueReport("log2", (xi, xj), val.coeff(()))


__all__ = [
    "POINT_KINDS",
    "ResidueError",
    "ResidueReport",
    "res_log",
    "res_log2",
    "res_point",
    "res_q",
    "res_r",
    "res_r2",
    "restrict_to_stratum",
]
