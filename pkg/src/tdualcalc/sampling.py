"""Exact evaluation at rational sample points of the open dense locus.

Angles are represented by exact unit Gaussian rationals
``e^{i theta} = (a^2 - b^2 + 2abi) / (a^2 + b^2)``, so evaluating a
monomial never leaves Q(i).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .coeffring import FnElem
from .coords import ANGLE, RADIAL, Chart
from .forms import _Alt, to_polar
from .gauss import QI


@dataclass(frozen=True)
class SamplePoint:
    values: tuple[QI, ...]  # r, e^{i theta}, or x per coordinate
    params: dict[str, Fraction] = field(default_factory=dict, compare=False, hash=False)


def pythagorean_unit(rng: random.Random) -> QI:
    while True:
        a, b = rng.randint(-9, 9), rng.randint(-9, 9)
        if a and b and abs(a) != abs(b):
            n = a * a + b * b
            return QI(Fraction(a * a - b * b, n), Fraction(2 * a * b, n))


def _rand_rational(rng: random.Random, positive=False) -> Fraction:
    while True:
        v = Fraction(rng.randint(-30, 30), rng.randint(1, 7))
        if v and (v > 0 or not positive):
            return v


def sample_point(chart: Chart, rng: random.Random, params=()) -> SamplePoint:
    vals = []
    for c in chart.coords:
        if c.kind == RADIAL:
            vals.append(QI(_rand_rational(rng, positive=True)))
        elif c.kind == ANGLE:
            vals.append(pythagorean_unit(rng))
        else:
            vals.append(QI(_rand_rational(rng)))
    pvals = {p: _rand_rational(rng) for p in sorted(params)}
    return SamplePoint(tuple(vals), pvals)


def sample_points(chart: Chart, seed: int, count: int = 3, params=()) -> list[SamplePoint]:
    rng = random.Random(seed)
    return [sample_point(chart, rng, params) for _ in range(count)]


def eval_fn(f: FnElem, pt: SamplePoint) -> QI:
    total = QI(0)
    for (exps, params), c in f.terms.items():
        v = c
        for e, x in zip(exps, pt.values):
            if e:
                v = v * x**e
        for name, e in params:
            if name not in pt.params:
                raise KeyError(f"no sample value for parameter @{name}")
            v = v * QI(pt.params[name]) ** e
        total = total + v
    return total


def eval_at(alpha: _Alt, pt: SamplePoint) -> _Alt:
    """The element with constant coefficients equal to ``alpha`` at ``pt``."""
    if hasattr(alpha, "chart") and not alpha.chart.is_polar:
        alpha = to_polar(alpha)
    out = {}
    for idx, f in alpha.terms.items():
        v = eval_fn(f, pt)
        if v:
            out[idx] = FnElem.const(alpha.sig, v)
    return alpha._new(out)
