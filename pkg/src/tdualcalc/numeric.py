"""Floating-point oracle: forms as honest coordinate differentials.

Frames are unwound to ``dr``, ``dtheta`` and ``dx`` (``dlog r = dr / r``),
coefficients are evaluated with ``cmath``, and ``d`` is recomputed by central
finite differences.  Used only to cross-check the exact engine.
"""

from __future__ import annotations

import cmath
import random
from dataclasses import dataclass, field

from .coeffring import FnElem
from .coords import ANGLE, LOGREAL, RADIAL, Chart
from .forms import Form, merge_sign, to_polar


@dataclass(frozen=True)
class FloatPoint:
    values: tuple[float, ...]
    params: dict[str, float] = field(default_factory=dict, compare=False, hash=False)


def random_point(chart: Chart, rng: random.Random, params=()) -> FloatPoint:
    """A point of the open dense locus: positive radii, any angle."""
    vals = []
    for c in chart.coords:
        if c.kind == RADIAL:
            vals.append(rng.uniform(0.5, 2.0))
        elif c.kind == ANGLE:
            vals.append(rng.uniform(0.0, 2 * cmath.pi))
        elif c.kind == LOGREAL:
            vals.append(rng.choice((-1, 1)) * rng.uniform(0.5, 2.0))
        else:
            vals.append(rng.uniform(-2.0, 2.0))
    return FloatPoint(tuple(vals), {p: rng.uniform(-2.0, 2.0) for p in sorted(params)})


def random_points(chart: Chart, seed: int, count: int = 10, params=()) -> list[FloatPoint]:
    rng = random.Random(seed)
    return [random_point(chart, rng, params) for _ in range(count)]


def eval_coeff(f: FnElem, chart: Chart, values, params=None) -> complex:
    params = params or {}
    total = 0j
    for (exps, pars), c in f.terms.items():
        v = complex(c)
        for coord, e, q in zip(chart.coords, exps, values):
            if not e:
                continue
            if coord.kind == ANGLE:
                v *= cmath.exp(1j * e * q)
            else:
                v *= q**e
        for name, e in pars:
            v *= params[name] ** e
        total += v
    return total


def coordinate_components(alpha: Form, values, params=None) -> dict[tuple[int, ...], complex]:
    """Components of ``alpha`` on ``dq_I`` at the given coordinate values."""
    alpha = to_polar(alpha)
    ch = alpha.chart
    out: dict[tuple[int, ...], complex] = {}
    for idx, f in alpha.terms.items():
        v = eval_coeff(f, ch, values, params)
        for k in idx:
            if ch.coords[k].kind in (RADIAL, LOGREAL):
                v /= values[k]
        if v:
            out[idx] = out.get(idx, 0j) + v
    return out


def _insert(j: int, idx: tuple[int, ...]) -> tuple[int, tuple[int, ...]] | None:
    if j in idx:
        return None
    pos = sum(1 for k in idx if k < j)
    return (-1) ** pos, tuple(sorted(idx + (j,)))


def numeric_d_of(func, values, h: float = 1e-5) -> dict[tuple[int, ...], complex]:
    """``d`` of a component-valued function of the coordinates, by central differences."""
    out: dict[tuple[int, ...], complex] = {}
    for j in range(len(values)):
        up = list(values)
        dn = list(values)
        up[j] += h
        dn[j] -= h
        cu = func(up)
        cd = func(dn)
        for idx in set(cu) | set(cd):
            ins = _insert(j, idx)
            if ins is None:
                continue
            s, key = ins
            der = (cu.get(idx, 0j) - cd.get(idx, 0j)) / (2 * h)
            out[key] = out.get(key, 0j) + s * der
    return out


def numeric_d(alpha: Form, pt: FloatPoint, h: float = 1e-5) -> dict[tuple[int, ...], complex]:
    """``d alpha`` at ``pt`` by central differences of coordinate components."""
    return numeric_d_of(lambda vals: coordinate_components(alpha, vals, pt.params), pt.values, h)


def vector_components(X, values, params=None) -> dict[tuple[int, ...], complex]:
    """Components of a multivector on the coordinate frame ``d/dq``."""
    ch = X.chart
    out: dict[tuple[int, ...], complex] = {}
    for idx, f in X.terms.items():
        v = eval_coeff(f, ch, values, params)
        for k in idx:
            if ch.coords[k].kind in (RADIAL, LOGREAL):
                v *= values[k]
        if v:
            out[idx] = out.get(idx, 0j) + v
    return out


def numeric_contract(vec: dict, alpha: dict) -> dict[tuple[int, ...], complex]:
    """``iota_X alpha`` for a vector ``X`` given by its components."""
    out: dict[tuple[int, ...], complex] = {}
    for (j,), xj in vec.items():
        for idx, v in alpha.items():
            if j not in idx:
                continue
            pos = idx.index(j)
            key = idx[:pos] + idx[pos + 1:]
            out[key] = out.get(key, 0j) + (-1) ** pos * xj * v
    return out


def numeric_exp(alpha: dict, n: int) -> dict[tuple[int, ...], complex]:
    """``exp`` of an even form in ``n`` variables."""
    out: dict[tuple[int, ...], complex] = {(): 1 + 0j}
    power = {(): 1 + 0j}
    for k in range(1, n // 2 + 1):
        power = {i: v / k for i, v in numeric_wedge(power, alpha).items()}
        for i, v in power.items():
            out[i] = out.get(i, 0j) + v
    return out


def max_diff(a: dict, b: dict) -> float:
    keys = set(a) | set(b)
    return max((abs(a.get(k, 0j) - b.get(k, 0j)) for k in keys), default=0.0)


def numeric_wedge(a: dict, b: dict) -> dict[tuple[int, ...], complex]:
    out: dict[tuple[int, ...], complex] = {}
    for ia, va in a.items():
        for ib, vb in b.items():
            s, idx = merge_sign(ia, ib)
            if idx is not None:
                out[idx] = out.get(idx, 0j) + s * va * vb
    return out


def agrees(exact: Form, approx: dict, pt: FloatPoint, tol: float = 1e-6) -> bool:
    """Exact form at ``pt`` matches ``approx`` up to a relative tolerance."""
    ref = coordinate_components(exact, pt.values, pt.params)
    scale = max([1.0] + [abs(v) for v in ref.values()])
    return max_diff(ref, approx) <= tol * scale


__all__ = [
    "FloatPoint",
    "agrees",
    "coordinate_components",
    "eval_coeff",
    "max_diff",
    "numeric_contract",
    "numeric_d",
    "numeric_d_of",
    "numeric_exp",
    "numeric_wedge",
    "random_point",
    "random_points",
    "vector_components",
]
