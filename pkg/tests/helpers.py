"""Seeded generators shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from tdualcalc.coeffring import FnElem, signature
from tdualcalc.coords import ANGLE, RADIAL, Chart
from tdualcalc.forms import Form, Multivector
from tdualcalc.gauss import QI


def rand_qi(rng: random.Random) -> QI:
    return QI(Fraction(rng.randint(-5, 5), rng.randint(1, 3)), Fraction(rng.randint(-3, 3), rng.randint(1, 2)))


def rand_fn(chart: Chart, rng: random.Random, terms: int = 2, invariant: bool = False, span: int = 2) -> FnElem:
    sig = signature(chart)
    out = FnElem.zero(sig)
    for _ in range(terms):
        exps = []
        for c in chart.coords:
            if c.kind == RADIAL:
                exps.append(rng.randint(-span, span))
            elif c.kind == ANGLE:
                exps.append(0 if invariant else rng.randint(-span, span))
            else:
                exps.append(rng.randint(0, span))
        out = out + FnElem.mono(sig, exps, rand_qi(rng))
    return out


def rand_form(chart: Chart, rng: random.Random, degrees=None, terms: int = 3, invariant: bool = False) -> Form:
    n = chart.n
    degrees = list(range(n + 1)) if degrees is None else list(degrees)
    out = Form.zero(chart)
    for _ in range(terms):
        deg = rng.choice(degrees)
        idx = tuple(sorted(rng.sample(range(n), deg)))
        out = out + Form.basis(chart, *idx, coeff=rand_fn(chart, rng, 1, invariant))
    return out


def rand_vec(chart: Chart, rng: random.Random, terms: int = 2) -> Multivector:
    out = Multivector.zero(chart)
    for _ in range(terms):
        k = rng.randrange(chart.n)
        out = out + Multivector.basis(chart, k, coeff=rand_fn(chart, rng, 1))
    return out


def all_indices(n: int):
    for k in range(n + 1):
        yield from combinations(range(n), k)
