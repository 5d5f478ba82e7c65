"""Torus actions, divisors, connection one-forms and small monomial atlases."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .coeffring import FnElem, signature, torus_average
from .coords import (
    ANGLE,
    RADIAL,
    Chart,
    ChartError,
    Coord,
    MonomialMap,
    complex_log_chart,
    elliptic_chart,
)
from .forms import Form, Multivector, contract, d, pullback, to_polar
from .gauss import QI
from .linalg import int_det


def frame(chart: Chart) -> list[str]:
    return list(chart.frame)


# ---------------------------------------------------------------------------
# torus actions


@dataclass(frozen=True)
class TorusAction:
    """``a(e_j) = sum_i matrix[j][i] d/d(angle_i)`` over the chart's angles."""

    chart: Chart
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        width = len(self.chart.angles)
        if any(len(row) != width for row in self.matrix):
            raise ChartError(f"action matrix rows must have {width} entries")

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def generator(self, j: int) -> Multivector:
        terms = {}
        sig = signature(self.chart.polar())
        for a, k in zip(self.matrix[j], self.chart.angles):
            if a:
                terms[(k,)] = FnElem.const(sig, a)
        return Multivector(self.chart.polar(), terms)

    def generators(self) -> list[Multivector]:
        return [self.generator(j) for j in range(self.rank)]

    def is_standard(self) -> bool:
        return is_standard_matrix(self.matrix)


def standard_action(chart: Chart, angles: Sequence[str] | None = None) -> TorusAction:
    """Each listed angle (default: all) rotated by its own circle factor."""
    names = [chart.coords[k].name for k in chart.angles]
    chosen = list(angles) if angles is not None else names
    rows = []
    for a in chosen:
        rows.append(tuple(int(n == a) for n in names))
    return TorusAction(chart, tuple(rows))


def is_standard_matrix(matrix) -> bool:
    """GL(k,Z)-equivalent to a selection of k distinct angles.

    ``V A = S`` forces ``A = V^-1 S``: exactly k nonzero columns forming a
    unimodular block.
    """
    k = len(matrix)
    if k == 0:
        return True
    cols = [j for j in range(len(matrix[0])) if any(row[j] for row in matrix)]
    if len(cols) != k:
        return False
    block = [[row[j] for j in cols] for row in matrix]
    return abs(int_det(block)) == 1


# ---------------------------------------------------------------------------
# divisors


@dataclass(frozen=True)
class Divisor:
    chart: Chart
    generator: FnElem
    kind: str = "elliptic"

    def __post_init__(self):
        if self.kind not in ("elliptic", "complex-log", "real-log"):
            raise ChartError(f"unknown divisor kind {self.kind!r}")
        if not self.generator.is_monomial():
            raise ChartError("divisor generators are monomials")

    def exps(self) -> tuple[int, ...]:
        return self.generator.single().exps

    def components(self) -> list[str]:
        return [c.name for c, e in zip(self.chart.coords, self.exps()) if e and c.kind != ANGLE]

    def __eq__(self, other):
        if not isinstance(other, Divisor):
            return NotImplemented
        return self.kind == other.kind and self.chart == other.chart and self.generator == other.generator

    def __hash__(self):
        return hash((self.kind, self.chart, self.generator))


def elliptic_divisor(chart: Chart, radials: Sequence[str] | None = None) -> Divisor:
    names = radials if radials is not None else [chart.coords[k].name for k in chart.radials]
    vec = [0] * chart.n
    for n in names:
        k = chart.index(n)
        if chart.coords[k].kind != RADIAL:
            raise ChartError(f"{n} is not a radial coordinate")
        vec[k] = 2
    return Divisor(chart, FnElem.mono(signature(chart), vec), "elliptic")


def complex_log_divisor(chart: Chart, radials: Sequence[str] | None = None) -> Divisor:
    names = radials if radials is not None else [chart.coords[k].name for k in chart.radials]
    vec = [0] * chart.n
    for n in names:
        k = chart.index(n)
        vec[k] = 1
        vec[chart.primary_angle(k)] = 1
    return Divisor(chart, FnElem.mono(signature(chart), vec), "complex-log")


def real_log_divisor(chart: Chart) -> Divisor:
    vec = [int(c.kind == "logreal") for c in chart.coords]
    return Divisor(chart, FnElem.mono(signature(chart), vec), "real-log")


# ---------------------------------------------------------------------------
# connections


@dataclass(frozen=True)
class ConnectionForm:
    theta: tuple[Form, ...]

    def __post_init__(self):
        object.__setattr__(self, "theta", tuple(to_polar(t) for t in self.theta))
        charts = {t.chart for t in self.theta}
        if len(charts) > 1:
            raise ChartError("connection components live on different charts")
        for t in self.theta:
            if t.degrees() - {1}:
                raise ValueError("connection components are one-forms")

    @property
    def chart(self) -> Chart:
        return self.theta[0].chart

    def __len__(self):
        return len(self.theta)


def connection_matrix(theta: ConnectionForm, action: TorusAction) -> list[list[FnElem]]:
    """Entries ``iota_{a(e_j)} Theta_i``."""
    return [[contract(X, t).part(0).coeff(()) for X in action.generators()] for t in theta.theta]


def check_connection(theta: ConnectionForm, action: TorusAction) -> bool:
    if len(theta) != action.rank or theta.chart != action.chart.polar():
        return False
    mat = connection_matrix(theta, action)
    for i, row in enumerate(mat):
        for j, v in enumerate(row):
            if v != FnElem.const(v.sig, int(i == j)):
                return False
    return all(torus_average(f, action) == f for t in theta.theta for f in t.terms.values())


def is_basic(alpha: Form, action: TorusAction) -> bool:
    alpha = to_polar(alpha)
    if any(contract(X, alpha) for X in action.generators()):
        return False
    return all(torus_average(f, action) == f for f in alpha.terms.values())


def curvature(theta: ConnectionForm, action: TorusAction | None = None) -> tuple[Form, ...]:
    """``d Theta`` componentwise; with an action, also certify basic-ness."""
    out = tuple(d(t) for t in theta.theta)
    if action is not None:
        for k in out:
            if not is_basic(k, action):
                raise ValueError("curvature is not basic: the input is not a connection")
    return out


def im_star(zeta: Form) -> Form:
    """Imaginary part of a complex log form, as an elliptic form."""
    if zeta.chart.kind not in ("complex-log", "complex"):
        raise ChartError("im_star expects a form in a complex frame")
    return zeta.imag_part()


# ---------------------------------------------------------------------------
# atlases


@dataclass
class Atlas:
    """Charts glued by monomial transitions.

    ``transitions[(a, b)]`` has domain chart ``a`` and codomain chart ``b``:
    it writes ``b``'s coordinates in terms of ``a``'s.
    """

    charts: dict[str, Chart]
    transitions: dict[tuple[str, str], MonomialMap] = field(default_factory=dict)
    nonzero: dict[tuple[str, str], frozenset[str]] = field(default_factory=dict)
    actions: dict[str, TorusAction] = field(default_factory=dict)

    def cocycle_ok(self) -> bool:
        for (a, b), t_ab in self.transitions.items():
            back = self.transitions.get((b, a))
            if back is not None and not back.after(t_ab).is_identity():
                return False
            for (b2, c), t_bc in self.transitions.items():
                if b2 != b or c == a:
                    continue
                t_ac = self.transitions.get((a, c))
                if t_ac is None:
                    continue
                t_ca = self.transitions.get((c, a))
                comp = t_bc.after(t_ab)
                if comp.rows != t_ac.rows:
                    return False
                if t_ca is not None and not t_ca.after(comp).is_identity():
                    return False
        return True


def monomial_unit_ratio(a: Form, b: Form):
    """A monomial unit ``u`` with ``a = u*b``, or None."""
    a, b = to_polar(a), to_polar(b)
    if set(a.terms) != set(b.terms):
        return None
    if not a.terms:
        return FnElem.const(a.sig, 1)
    for idx, g in sorted(b.terms.items()):
        if g.is_monomial():
            u = a.terms[idx] * g.inverse()
            if u.is_monomial() and a == b.scale(u):
                return u
            return None
    return None


def atlas_check_global(atlas: Atlas, forms: dict[str, Form], mode: str = "exact") -> bool:
    """Each form on chart ``b`` pulls back to the form on chart ``a``.

    ``mode='line'`` accepts agreement up to a monomial unit (spinor lines).
    """
    if not atlas.cocycle_ok():
        raise ChartError("atlas transitions violate the cocycle condition")
    for (a, b), t in atlas.transitions.items():
        pulled = pullback(forms[b], t)
        here = to_polar(forms[a])
        if mode == "exact":
            if pulled != here:
                return False
        elif mode == "line":
            if monomial_unit_ratio(pulled, here) is None:
                return False
        else:
            raise ValueError(f"unknown comparison mode {mode!r}")
    return True


def projective_atlas(n: int, weights: Sequence[Sequence[int]] | None = None) -> Atlas:
    """CP^n with affine charts ``U0..Un``; ``U_k`` has coordinates ``z_j/z_k``.

    Chart ``U_k`` uses coordinates ``r1,th1,...`` for the quotients in
    increasing homogeneous order.  ``weights[j]`` is the circle weight
    vector of ``z_j``; the induced action on ``U_k`` has weights
    ``w_j - w_k``.
    """
    names = [f"U{k}" for k in range(n + 1)]
    charts = {name: elliptic_chart(n, name=name) for name in names}
    others = {k: [j for j in range(n + 1) if j != k] for k in range(n + 1)}

    def vec(a: int, j: int) -> list[int]:
        # z_j / z_a as a vector over U_a's homogeneous slots (z_a itself -> 0)
        out = [0] * n
        if j != a:
            out[others[a].index(j)] = 1
        return out

    transitions = {}
    for a in range(n + 1):
        for b in range(n + 1):
            if a == b:
                continue
            dom = charts[names[a]]
            rows = []
            for j in others[b]:
                v = [x - y for x, y in zip(vec(a, j), vec(a, b))]
                full_r = [0] * dom.n
                full_t = [0] * dom.n
                for s, e in enumerate(v):
                    full_r[2 * s] = e
                    full_t[2 * s + 1] = e
                rows.append(tuple(full_r))
                rows.append(tuple(full_t))
            transitions[(names[a], names[b])] = MonomialMap(dom, charts[names[b]], tuple(rows))
    atlas = Atlas(charts, transitions)
    if weights is not None:
        for k in range(n + 1):
            rows = []
            for g in range(len(weights[0])):
                rows.append(tuple(weights[j][g] - weights[k][g] for j in others[k]))
            atlas.actions[names[k]] = TorusAction(charts[names[k]], tuple(rows))
    return atlas


def homogeneous_log_form(atlas_chart: str, n: int, coeffs: Sequence[int], log: bool = True) -> Form:
    """``sum_j c_j dlog z_j`` on ``U_k`` (requires ``sum c_j = 0``)."""
    if sum(coeffs) != 0:
        raise ValueError("homogeneous log forms need coefficients summing to zero")
    k = int(atlas_chart[1:])
    others = [j for j in range(n + 1) if j != k]
    ch = complex_log_chart(n, name=atlas_chart)
    out = Form.zero(ch)
    for s, j in enumerate(others):
        if coeffs[j]:
            out = out + Form.basis(ch, 2 * s, coeff=coeffs[j])
    return out


def cp2_zeta(chart_name: str) -> tuple[Form, Form]:
    """``zeta_1 = dlog z0 - dlog z2``, ``zeta_2 = dlog z1 - dlog z2``."""
    return (
        homogeneous_log_form(chart_name, 2, (1, 0, -1)),
        homogeneous_log_form(chart_name, 2, (0, 1, -1)),
    )


CP2_WEIGHTS = ((1, 0), (0, 1), (0, 0))


def product_atlas(first: Atlas, second: Atlas) -> Atlas:
    """Product of two one-dimensional elliptic atlases (e.g. S^2 x S^2).

    The second factor's coordinates are renamed ``r2, th2``.
    """
    def merge(c1: Chart, c2: Chart, name: str) -> Chart:
        coords = list(c1.coords)
        for c in c2.coords:
            if c.kind == RADIAL:
                coords.append(Coord(c.name[:-1] + "2", RADIAL, cname="z2"))
            else:
                coords.append(Coord(c.name[:-1] + "2", ANGLE, pair=c.pair[:-1] + "2"))
        return Chart(tuple(coords), "elliptic", name)

    charts = {}
    for n1, c1 in first.charts.items():
        for n2, c2 in second.charts.items():
            charts[f"{n1}x{n2}"] = merge(c1, c2, f"{n1}x{n2}")

    def block(t1: MonomialMap | None, t2: MonomialMap | None, n1: int, n2: int):
        rows = []
        eye1 = tuple(tuple(int(i == j) for j in range(n1)) for i in range(n1))
        eye2 = tuple(tuple(int(i == j) for j in range(n2)) for i in range(n2))
        r1 = t1.rows if t1 is not None else eye1
        r2 = t2.rows if t2 is not None else eye2
        for row in r1:
            rows.append(tuple(row) + (0,) * n2)
        for row in r2:
            rows.append((0,) * n1 + tuple(row))
        return tuple(rows)

    transitions = {}
    for a1, ca1 in first.charts.items():
        for a2 in second.charts:
            for b1 in first.charts:
                for b2 in second.charts:
                    if (a1, a2) == (b1, b2):
                        continue
                    t1 = first.transitions.get((a1, b1)) if a1 != b1 else None
                    t2 = second.transitions.get((a2, b2)) if a2 != b2 else None
                    if (a1 != b1 and t1 is None) or (a2 != b2 and t2 is None):
                        continue
                    n1 = ca1.n
                    n2 = second.charts[a2].n
                    dom = charts[f"{a1}x{a2}"]
                    cod = charts[f"{b1}x{b2}"]
                    transitions[(dom.name, cod.name)] = MonomialMap(dom, cod, block(t1, t2, n1, n2))
    return Atlas(charts, transitions)


def scale_radii(alpha: Form, factors: dict[str, object]) -> Form:
    """Pull back along ``r_i -> c_i r_i`` (angles fixed), e.g. a Hopf scaling."""
    alpha = to_polar(alpha)
    ch = alpha.chart
    mult = {ch.index(n): QI.coerce(c) for n, c in factors.items()}

    def fix(f: FnElem) -> FnElem:
        out = {}
        for (exps, params), c in f.terms.items():
            for k, m in mult.items():
                c = c * m ** exps[k]
            out[(exps, params)] = c
        return FnElem(f.sig, out)

    return alpha.map_coeffs(fix)
