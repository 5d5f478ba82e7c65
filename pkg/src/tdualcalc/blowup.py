"""Blow-down charts of C^l, pulled-back forms and the induced elliptic divisor."""

from __future__ import annotations

from dataclasses import dataclass

from .chart import Divisor, TorusAction
from .coeffring import FnElem, signature, substitute
from .coords import ANGLE, RADIAL, REAL, Chart, ChartError, Coord, MonomialMap, elliptic_chart
from .forms import Form, frame_volume, pullback
from .linalg import int_inverse
from .tduality import DualityData, make_correspondence


@dataclass(frozen=True)
class BlowdownMap:
    l: int
    i: int
    source: Chart
    target: Chart
    map: MonomialMap


def blowdown_chart(l: int, i: int, m: int = 0) -> BlowdownMap:
    """Chart ``i`` of the blow-up of the origin in ``C^l`` (times ``R^m``).

    Source coordinates are ``z_i`` (``r{i}, th{i}``) and ``v_j``
    (``rv{j}, thv{j}``) for ``j != i``; the map is ``z_j = z_i v_j``.
    """
    if not 1 <= i <= l:
        raise ChartError(f"chart index {i} outside 1..{l}")
    coords = []
    for j in range(1, l + 1):
        if j == i:
            coords += [Coord(f"r{j}", RADIAL, cname=f"z{j}"), Coord(f"th{j}", ANGLE, pair=f"r{j}")]
        else:
            coords += [Coord(f"rv{j}", RADIAL, cname=f"v{j}"), Coord(f"thv{j}", ANGLE, pair=f"rv{j}")]
    coords += [Coord(f"x{s}", REAL) for s in range(1, m + 1)]
    source = Chart(tuple(coords), "elliptic", f"blowup{i}")
    target = elliptic_chart(l, m=m, name="base")
    table: dict[str, dict[str, int]] = {}
    for j in range(1, l + 1):
        if j == i:
            table[f"r{j}"] = {f"r{i}": 1}
            table[f"th{j}"] = {f"th{i}": 1}
        else:
            table[f"r{j}"] = {f"r{i}": 1, f"rv{j}": 1}
            table[f"th{j}"] = {f"th{i}": 1, f"thv{j}": 1}
    for s in range(1, m + 1):
        table[f"x{s}"] = {f"x{s}": 1}
    return BlowdownMap(l, i, source, target, MonomialMap.from_dict(source, target, table))


def pullback_blowdown(alpha: Form, bd: BlowdownMap) -> Form:
    return pullback(alpha, bd.map)


def radical(gen: FnElem, chart: Chart) -> FnElem:
    """Monomial radical of an elliptic generator: positive radial powers become 2."""
    m = gen.single()
    vec = []
    for c, e in zip(chart.coords, m.exps):
        if c.kind == RADIAL:
            if e < 0 or e % 2:
                raise ChartError("elliptic generators have even nonnegative radial powers")
            vec.append(2 if e > 0 else 0)
        elif c.kind == ANGLE:
            if e:
                raise ChartError("elliptic generators carry no angular modes")
            vec.append(0)
        else:
            vec.append(e)
    return FnElem.mono(gen.sig, vec)


def induced_divisor(div: Divisor, bd: BlowdownMap) -> Divisor:
    if div.kind != "elliptic":
        raise ChartError("only elliptic divisors are pulled back here")
    if div.chart.polar() != bd.target:
        raise ChartError("divisor does not live on the blow-down target")
    return Divisor(bd.source, radical(substitute(div.generator, bd.map), bd.source), "elliptic")


def divisor_volume(div: Divisor) -> Form:
    """Frame volume of the algebroid of ``div``: pairs off the divisor carry ``r^2``."""
    ch = div.chart
    exps = div.exps()
    vec = [0] * ch.n
    for k in ch.radials:
        if not exps[k]:
            vec[k] = 2
    return frame_volume(ch).scale(FnElem.mono(signature(ch), vec))


def fiberwise_iso_check(bd: BlowdownMap, div: Divisor, induced: Divisor | None = None) -> bool:
    """The pulled-back volume is a constant multiple of the source volume."""
    induced = induced or induced_divisor(div, bd)
    pulled = pullback_blowdown(divisor_volume(div), bd)
    src = divisor_volume(induced)
    coeff = pulled.top()
    base = src.top()
    if not coeff or not base.is_monomial():
        return False
    ratio = coeff * base.inverse()
    return ratio.is_const() and bool(ratio)


def lift_action(action: TorusAction, bd: BlowdownMap) -> TorusAction:
    """The torus action on the blown-up chart covering ``action``.

    Target angles are ``M`` times source angles, so a generator ``a`` on the
    target is ``M^-1 a`` on the source.
    """
    tgt, src = bd.target, bd.source
    M = [[bd.map.rows[t][s] for s in src.angles] for t in tgt.angles]
    Minv = int_inverse(M)
    rows = []
    for a in action.matrix:
        rows.append(tuple(sum(Minv[s][t] * a[t] for t in range(len(a))) for s in range(len(Minv))))
    return TorusAction(src, tuple(rows))


def blowup_duality(data: DualityData, bd_left: BlowdownMap, bd_right: BlowdownMap) -> tuple[DualityData, MonomialMap]:
    """Duality data on the blown-up charts, with ``Q`` to the old correspondence."""
    if bd_left.target != data.corr.left or bd_right.target != data.corr.right:
        raise ChartError("blow-down targets must be the two sides of the duality")
    corr = make_correspondence(bd_left.source, bd_right.source)
    old = data.corr
    table: dict[str, dict[str, int]] = {}
    for c, row in zip(bd_left.target.coords, bd_left.map.rows):
        table[c.name] = {s.name: e for s, e in zip(bd_left.source.coords, row) if e}
    for c, row in zip(bd_right.target.coords, bd_right.map.rows):
        name = old.right_names[c.name]
        entry = {corr.right_names[s.name]: e for s, e in zip(bd_right.source.coords, row) if e}
        if name in table and table[name] != entry:
            raise ChartError("blow-downs disagree on the shared base coordinates")
        table[name] = entry
    Q = MonomialMap.from_dict(corr.chart, old.chart, table)
    new = DualityData(
        corr,
        pullback(data.F, Q),
        pullback(data.H, bd_left.map),
        pullback(data.Hhat, bd_right.map),
        lift_action(data.left_action, bd_left),
        lift_action(data.right_action, bd_right),
    )
    return new, Q


__all__ = [
    "BlowdownMap",
    "blowdown_chart",
    "blowup_duality",
    "divisor_volume",
    "fiberwise_iso_check",
    "induced_divisor",
    "lift_action",
    "pullback_blowdown",
    "radical",
]
