"""``tdual-calc`` command-line entry point."""

from __future__ import annotations

import argparse
import sys

from ..blowup import blowdown_chart, fiberwise_iso_check, induced_divisor, pullback_blowdown
from ..chart import ConnectionForm, Divisor, elliptic_divisor
from ..coeffring import FnElem, RingError
from ..coords import ChartError
from ..forms import to_polar
from ..genstruct import d_H, descends, integrable_at_samples, is_pure, mukai_nondeg, stable_check, spinor_samples
from ..report import Report
from ..residues import ResidueError, res_log, res_log2, res_point, res_q, res_r, res_r2
from ..tduality import DualityData, build_F_from_connections, check_F, make_correspondence, tau
from .charts import resolve_chart
from .jsonio import chart_to_json, dumps, fn_to_json, form_to_json, report_to_json
from .parser import ParseError, parse_fn, parse_form
from .printer import format_chart, format_fn, format_form
from .registry import compare, find_case, load_registry, run_case

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(dumps(payload))
    else:
        print(text)


def _report_text(rep: Report) -> str:
    lines = [f"{rep.case}: {'PASS' if rep.ok else 'FAIL'}"]
    for c in rep.checks:
        lines.append(f"  [{'ok' if c.verdict else 'FAIL'}] {c.name}" + (f"  ({c.detail})" if c.detail else ""))
    return "\n".join(lines)


def _form_payload(command: str, alpha) -> dict:
    return {"command": command, "result": form_to_json(alpha)}


# ---------------------------------------------------------------------------
# subcommands


def cmd_d(args) -> int:
    chart = resolve_chart(args.chart)
    out = d_H(parse_form(args.expr, chart), parse_form(args.H, chart) if args.H else None)
    _emit(args, _form_payload("d", out), format_form(out))
    return EXIT_OK


def cmd_wedge(args) -> int:
    chart = resolve_chart(args.chart)
    if len(args.expr) < 2:
        raise UsageError("wedge needs at least two --expr arguments")
    out = parse_form(args.expr[0], chart)
    for text in args.expr[1:]:
        out = out.wedge(parse_form(text, chart))
    _emit(args, _form_payload("wedge", out), format_form(out))
    return EXIT_OK


_FORM_RESIDUES = {"q": res_q, "r": res_r, "log": res_log}


def cmd_residue(args) -> int:
    chart = resolve_chart(args.chart)
    omega = parse_form(args.expr, chart)
    if args.kind in _FORM_RESIDUES:
        rep = _FORM_RESIDUES[args.kind](omega, args.i)
    elif args.kind == "r2":
        rep = res_r2(omega, args.i, args.j)
    elif args.kind == "log2":
        rep = res_log2(omega, args.i, args.j)
    else:
        rep = res_point(omega, args.kind, args.i, args.j)
    value = rep.value
    payload = {"command": "residue", "kind": rep.kind, "locus": list(rep.locus)}
    if isinstance(value, FnElem):
        payload["result"] = fn_to_json(value, rep.chart)
        text = format_fn(value, rep.chart)
    else:
        payload["result"] = form_to_json(value)
        text = format_form(value)
    _emit(args, payload, text)
    return EXIT_OK


def cmd_check_stable(args) -> int:
    rep = stable_check(parse_form(args.expr, resolve_chart(args.chart)), seed=args.seed)
    _emit(args, {"command": "check-stable", "report": report_to_json(rep)}, _report_text(rep))
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_check_spinor(args) -> int:
    chart = resolve_chart(args.chart)
    rho = parse_form(args.expr, chart)
    H = parse_form(args.H, chart) if args.H else None
    rep = Report("check-spinor")
    pts = spinor_samples(rho, args.seed, args.samples)
    rep.add("pure", is_pure(rho, args.seed, args.samples), f"{args.samples} sample points")
    rep.add("Mukai nondegenerate", all(mukai_nondeg(rho, pt) for pt in pts), f"{args.samples} sample points")
    rep.add("integrable", integrable_at_samples(rho, H, args.seed, args.samples), "d_H rho = u . rho at the samples")
    _emit(args, {"command": "check-spinor", "report": report_to_json(rep)}, _report_text(rep))
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_descends(args) -> int:
    chart = resolve_chart(args.chart)
    rho = parse_form(args.expr, chart)
    res = descends(rho, gauge=args.gauge, seed=args.seed)
    pchart = to_polar(rho).chart
    payload = {"command": "descends", "verdict": res.ok, "reason": res.reason}
    if res.ok:
        payload["factor"] = fn_to_json(res.factor, pchart)
        payload["bfield"] = form_to_json(res.bfield)
        text = f"descends: rescale by {format_fn(res.factor, pchart)}"
        if res.bfield:
            text += f", B-field {format_form(res.bfield)}"
    else:
        text = f"does not descend: {res.reason}"
    _emit(args, payload, text)
    return EXIT_OK if res.ok else EXIT_FAIL


def _duality(args) -> DualityData:
    left = resolve_chart(args.chart)
    right = resolve_chart(args.right) if args.right else left
    corr = make_correspondence(left, right)
    F = parse_form(args.F, corr.chart)
    H = parse_form(args.H, left) if args.H else None
    Hh = parse_form(args.Hhat, right) if args.Hhat else None
    return DualityData.build(left, right, F=F, H=H, Hhat=Hh, corr=corr)


def cmd_check_F(args) -> int:
    rep = check_F(_duality(args))
    _emit(args, {"command": "check-F", "report": report_to_json(rep)}, _report_text(rep))
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_tau(args) -> int:
    data = _duality(args)
    out = tau(parse_form(args.rho, data.corr.left), data)
    payload = _form_payload("tau", out)
    text = format_form(out)
    code = EXIT_OK
    if args.expect:
        ok, detail = compare(out, parse_form(args.expect, out.chart), args.mode)
        payload["match"] = {"expected": args.expect, "mode": args.mode, "verdict": ok, "detail": detail}
        text += f"\n{args.mode} match with {args.expect}: {'PASS' if ok else 'FAIL'} ({detail})"
        code = EXIT_OK if ok else EXIT_FAIL
    _emit(args, payload, text)
    return code


def cmd_build_F(args) -> int:
    left = resolve_chart(args.chart)
    right = resolve_chart(args.right) if args.right else left
    corr = make_correspondence(left, right)
    theta = ConnectionForm(tuple(parse_form(t, left) for t in args.theta))
    theta_hat = ConnectionForm(tuple(parse_form(t, right) for t in args.thetahat))
    F = build_F_from_connections(theta, theta_hat, corr)
    _emit(args, _form_payload("build-F", F), format_form(F))
    return EXIT_OK


def cmd_blowup(args) -> int:
    bd = blowdown_chart(args.l, args.chart, args.m)
    pulled = pullback_blowdown(parse_form(args.expr, bd.target), bd)
    gen = parse_fn(args.divisor, bd.target) if args.divisor else None
    div = Divisor(bd.target, gen, "elliptic") if gen is not None else None
    if div is None:
        div = elliptic_divisor(bd.target)
    ind = induced_divisor(div, bd)
    iso = fiberwise_iso_check(bd, div, ind)
    payload = {
        "command": "blowup",
        "source": chart_to_json(bd.source),
        "map": bd.map.as_dict(),
        "pullback": form_to_json(pulled),
        "divisor": fn_to_json(div.generator, bd.target),
        "induced_divisor": fn_to_json(ind.generator, bd.source),
        "fiberwise_iso": iso,
    }
    text = "\n".join([
        f"source chart: {format_chart(bd.source)}",
        f"pullback: {format_form(pulled)}",
        f"induced divisor: <{format_fn(ind.generator, bd.source)}>",
        f"fibrewise isomorphism: {'yes' if iso else 'no'}",
    ])
    _emit(args, payload, text)
    return EXIT_OK if iso else EXIT_FAIL


def cmd_verify(args) -> int:
    cases = load_registry() if args.name == "all" else [_find(args.name)]
    results = [run_case(c) for c in cases]
    ok = all(r.ok for r in results)
    counts: dict[str, int] = {}
    for r in results:
        counts[r.status] = counts.get(r.status, 0) + 1
    payload = {"command": "verify-example", "ok": ok, "counts": counts, "cases": [r.as_dict() for r in results]}
    lines = []
    for r in results:
        lines.append(f"{r.status.upper():6} {r.case.name}  [{r.case.ref}]")
        if args.verbose or r.status not in ("pass", "xfail"):
            lines += ["    " + ln for ln in _report_text(r.report).splitlines()[1:]]
        if r.case.known_gap and (args.verbose or r.status != "xfail"):
            lines.append(f"    known gap: {r.case.known_gap}")
    lines.append(", ".join(f"{k}: {v}" for k, v in sorted(counts.items())))
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


def _find(name: str):
    try:
        return find_case(name)
    except KeyError:
        raise UsageError(f"no example named {name!r}; see list-examples") from None


def cmd_list(args) -> int:
    cases = load_registry()
    payload = {"command": "list-examples", "cases": [
        {"name": c.name, "ref": c.ref, "op": c.op, "mode": c.mode, "known_gap": c.known_gap} for c in cases]}
    width = max(len(c.name) for c in cases)
    text = "\n".join(f"{c.name:<{width}}  {c.op:<14} {c.ref}" for c in cases)
    _emit(args, payload, text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON document instead of text")
    common.add_argument("--seed", type=int, default=0, help="seed for sample points")

    p = argparse.ArgumentParser(prog="tdual-calc", description="Exact calculus on elliptic and log charts.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, chart=True):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        if chart:
            sp.add_argument("--chart", default="c1", help="chart name: c1, c2, c1r2, complex-log:c2, rl1r1, s2")
        sp.set_defaults(func=fn)
        return sp

    sp = add("d", cmd_d, "exterior derivative")
    sp.add_argument("--expr", required=True)
    sp.add_argument("--H", help="closed three-form; prints d rho + H ^ rho")

    sp = add("wedge", cmd_wedge, "wedge product of several forms")
    sp.add_argument("--expr", action="append", default=[], required=True)

    sp = add("residue", cmd_residue, "residue maps")
    sp.add_argument("--expr", required=True)
    sp.add_argument("--kind", default="q", choices=["q", "r", "r2", "rr", "rtheta", "thetar", "thetatheta", "log", "log2"])
    sp.add_argument("--i", type=int, default=1)
    sp.add_argument("--j", type=int, default=2)

    sp = add("check-stable", cmd_check_stable, "residue conditions for a stable structure")
    sp.add_argument("--expr", required=True)

    sp = add("check-spinor", cmd_check_spinor, "purity, Mukai pairing and integrability at samples")
    sp.add_argument("--expr", required=True)
    sp.add_argument("--H")
    sp.add_argument("--samples", type=int, default=3)

    sp = add("descends", cmd_descends, "search a smooth rescaling of a spinor")
    sp.add_argument("--expr", required=True)
    sp.add_argument("--gauge", action="store_true", help="also allow a constant B-field transform")

    for name, fn, help_text in (("check-F", cmd_check_F, "validate T-duality data"), ("tau", cmd_tau, "transform a form")):
        sp = add(name, fn, help_text)
        sp.add_argument("--right", help="right chart (defaults to --chart)")
        sp.add_argument("--F", required=True)
        sp.add_argument("--H")
        sp.add_argument("--Hhat")
        if name == "tau":
            sp.add_argument("--rho", required=True)
            sp.add_argument("--expect", help="expected image")
            sp.add_argument("--mode", default="projective-line", choices=["exact", "projective-line"])

    sp = add("build-F", cmd_build_F, "F from two connections")
    sp.add_argument("--right")
    sp.add_argument("--theta", action="append", required=True)
    sp.add_argument("--thetahat", action="append", required=True)

    sp = add("blowup", cmd_blowup, "blow-down chart pullback and induced divisor", chart=False)
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--chart", type=int, required=True, help="index i of the blow-up chart")
    sp.add_argument("--m", type=int, default=0, help="extra real coordinates")
    sp.add_argument("--expr", required=True)
    sp.add_argument("--divisor", help="monomial generator on the base (default: all r_j^2)")

    sp = add("verify-example", cmd_verify, "replay bundled examples", chart=False)
    sp.add_argument("name", help="example name or 'all'")
    sp.add_argument("-v", "--verbose", action="store_true")

    add("list-examples", cmd_list, "list bundled examples", chart=False)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ChartError, RingError, ResidueError, UsageError, ValueError, RuntimeError) as exc:
        print(f"tdual-calc {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
