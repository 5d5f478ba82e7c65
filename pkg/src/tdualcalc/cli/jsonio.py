"""JSON encodings of charts, functions, forms and reports."""

from __future__ import annotations

import json
from fractions import Fraction

from ..coeffring import FnElem, signature
from ..coords import Chart, Coord
from ..forms import Form, _Alt
from ..gauss import QI
from ..report import Report
from .printer import format_form

MONOMIAL_SCHEMA = {
    "type": "object",
    "required": ["coeff", "exps"],
    "properties": {
        "coeff": {
            "type": "object",
            "required": ["re", "im"],
            "properties": {"re": {"type": "string"}, "im": {"type": "string"}},
        },
        "exps": {"type": "object", "additionalProperties": {"type": "integer"}},
        "params": {"type": "object", "additionalProperties": {"type": "integer"}},
    },
}

CHART_SCHEMA = {
    "type": "object",
    "required": ["kind", "frame", "coords"],
    "properties": {
        "kind": {"type": "string"},
        "name": {"type": "string"},
        "frame": {"type": "array", "items": {"type": "string"}},
        "coords": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "kind"],
                "properties": {
                    "name": {"type": "string"},
                    "kind": {"enum": ["radial", "angle", "real", "logreal"]},
                    "pair": {"type": ["string", "null"]},
                    "cname": {"type": ["string", "null"]},
                },
            },
        },
    },
}

FORM_SCHEMA = {
    "type": "object",
    "required": ["chart", "terms"],
    "properties": {
        "chart": CHART_SCHEMA,
        "text": {"type": "string"},
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["frame", "coeff"],
                "properties": {
                    "frame": {"type": "array", "items": {"type": "string"}},
                    "coeff": {
                        "type": "object",
                        "required": ["monomials"],
                        "properties": {"monomials": {"type": "array", "items": MONOMIAL_SCHEMA}},
                    },
                },
            },
        },
    },
}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["case", "checks"],
    "properties": {
        "case": {"type": "string"},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "verdict", "detail"],
                "properties": {
                    "name": {"type": "string"},
                    "verdict": {"type": "boolean"},
                    "detail": {"type": "string"},
                },
            },
        },
    },
}


def chart_to_json(chart: Chart) -> dict:
    return {
        "kind": chart.kind,
        "name": chart.name,
        "frame": list(chart.frame),
        "coords": [{"name": c.name, "kind": c.kind, "pair": c.pair, "cname": c.cname} for c in chart.coords],
    }


def chart_from_json(data: dict) -> Chart:
    coords = tuple(Coord(c["name"], c["kind"], c.get("pair"), c.get("cname")) for c in data["coords"])
    return Chart(coords, data["kind"], data.get("name", ""))


def fn_to_json(f: FnElem, chart: Chart) -> dict:
    mons = []
    for m in f.monomials():
        mons.append({
            "coeff": {"re": str(m.coeff.re), "im": str(m.coeff.im)},
            "exps": {chart.coords[k].name: e for k, e in enumerate(m.exps) if e},
            "params": {name: e for name, e in m.params},
        })
    return {"monomials": mons}


def fn_from_json(data: dict, chart: Chart) -> FnElem:
    sig = signature(chart)
    out = FnElem.zero(sig)
    for m in data["monomials"]:
        vec = [0] * chart.n
        for name, e in m["exps"].items():
            vec[chart.index(name)] = e
        c = QI(Fraction(m["coeff"]["re"]), Fraction(m["coeff"]["im"]))
        out = out + FnElem.mono(sig, vec, c, tuple(m.get("params", {}).items()))
    return out


def form_to_json(alpha: _Alt) -> dict:
    ch = alpha.chart
    return {
        "chart": chart_to_json(ch),
        "text": format_form(alpha),
        "terms": [
            {"frame": [alpha._label(k) for k in idx], "coeff": fn_to_json(f, ch)}
            for idx, f in alpha.sorted_terms()
        ],
    }


def form_from_json(data: dict) -> Form:
    ch = chart_from_json(data["chart"])
    out = Form.zero(ch)
    for t in data["terms"]:
        idx = [ch.frame.index(lbl) for lbl in t["frame"]]
        out = out + Form.basis(ch, *idx, coeff=fn_from_json(t["coeff"], ch))
    return out


def report_to_json(rep: Report) -> dict:
    out = rep.as_dict()
    out["ok"] = rep.ok
    return out


def dumps(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2)


__all__ = [
    "CHART_SCHEMA",
    "FORM_SCHEMA",
    "REPORT_SCHEMA",
    "chart_from_json",
    "chart_to_json",
    "dumps",
    "fn_from_json",
    "fn_to_json",
    "form_from_json",
    "form_to_json",
    "report_to_json",
]
