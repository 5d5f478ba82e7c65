"""Canonical text for functions and forms, readable back by the parser."""

from __future__ import annotations

from ..coeffring import FnElem
from ..coords import ANGLE, Chart, mode_token
from ..forms import _Alt
from ..gauss import QI, format_qi


def _factor(name: str, e: int) -> str:
    return name if e == 1 else f"{name}^{e}"


def format_monomial(coeff: QI, exps, params, chart: Chart | None) -> str:
    factors = []
    for k, e in enumerate(exps):
        if not e:
            continue
        if chart is None:
            factors.append(f"q{k}[{e}]")
            continue
        c = chart.coords[k]
        if c.kind == ANGLE:
            factors.append(f"{mode_token(c.name)}[{e}]")
        else:
            factors.append(_factor(c.name, e))
    factors += [_factor("@" + name, e) for name, e in params]
    if not factors:
        return format_qi(coeff)
    if coeff == QI(1):
        return "*".join(factors)
    if coeff == QI(-1):
        return "-" + "*".join(factors)
    return format_qi(coeff) + "*" + "*".join(factors)


def _join(parts: list[str]) -> str:
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def format_fn(f: FnElem, chart: Chart | None = None) -> str:
    return _join([format_monomial(m.coeff, m.exps, m.params, chart) for m in f.monomials()])


def format_form(alpha: _Alt) -> str:
    """``2*r1^2*dlr1``, ``dlr1^dth2 + dth1^dlr2``, ``(r1 + x1)*dth1``."""
    parts = []
    for idx, f in alpha.sorted_terms():
        legs = "^".join(alpha._label(k) for k in idx)
        if not idx:
            parts.append(format_fn(f, alpha.chart))
            continue
        if f.is_monomial():
            m = f.single()
            head = format_monomial(m.coeff, m.exps, m.params, alpha.chart)
            if head == "1":
                parts.append(legs)
            elif head == "-1":
                parts.append("-" + legs)
            else:
                parts.append(f"{head}*{legs}")
        else:
            parts.append(f"({format_fn(f, alpha.chart)})*{legs}")
    return _join(parts)


def format_chart(chart: Chart) -> str:
    return f"{chart.kind}[{', '.join(chart.frame)}]"
