"""Generalized geometry on the algebroid: sections of A + A*, spinors, checks."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from .cli.printer import format_fn, format_form
from .coeffring import FnElem, is_smooth_monomial, signature
from .coords import Chart, ChartError
from .forms import (
    Form,
    Multivector,
    bracket,
    contract,
    d,
    exp_form,
    from_polar,
    is_smooth_form,
    lie_derivative,
    sigma,
    to_complex_frame,
    to_polar,
)
from .gauss import QI
from .linalg import rank, solve
from .report import Report
from .residues import ResidueError, res_point, res_q
from .sampling import SamplePoint, eval_at, eval_fn, sample_points


@dataclass(frozen=True)
class GenSection:
    """``X + xi`` with X a vector field and xi a one-form."""

    vec: Multivector
    cov: Form

    def __post_init__(self):
        cov = to_polar(self.cov)
        object.__setattr__(self, "cov", cov)
        if self.vec.chart != cov.chart:
            raise ChartError("vector and form parts live on different charts")
        if self.vec.degrees() - {1} or cov.degrees() - {1}:
            raise ValueError("generalized sections have degree-one parts")

    @classmethod
    def of(cls, chart: Chart, vec: Multivector | None = None, cov: Form | None = None) -> "GenSection":
        chart = chart.polar()
        return cls(vec if vec is not None else Multivector.zero(chart), cov if cov is not None else Form.zero(chart))

    @property
    def chart(self) -> Chart:
        return self.vec.chart

    def __add__(self, other: "GenSection") -> "GenSection":
        return GenSection(self.vec + other.vec, self.cov + other.cov)

    def __sub__(self, other: "GenSection") -> "GenSection":
        return GenSection(self.vec - other.vec, self.cov - other.cov)

    def scale(self, c) -> "GenSection":
        return GenSection(self.vec.scale(c), self.cov.scale(c))

    def __eq__(self, other):
        return isinstance(other, GenSection) and self.vec == other.vec and self.cov == other.cov

    def __hash__(self):
        return hash((self.vec, self.cov))


def _scalar(alpha: Form) -> FnElem:
    return alpha.coeff(())


def pairing(u: GenSection, v: GenSection) -> FnElem:
    """``<X + xi, Y + eta> = (eta(X) + xi(Y)) / 2``."""
    if u.chart != v.chart:
        raise ChartError("pairing across charts")
    s = _scalar(contract(u.vec, v.cov)) + _scalar(contract(v.vec, u.cov))
    return s.scale(QI(1, 0) / 2)


def dorfman(u: GenSection, v: GenSection, H: Form | None = None) -> GenSection:
    """``[X,Y] + L_X eta - iota_Y d xi + iota_X iota_Y H``."""
    if u.chart != v.chart:
        raise ChartError("bracket across charts")
    vec = bracket(u.vec, v.vec)
    cov = lie_derivative(u.vec, v.cov) - contract(v.vec, d(u.cov))
    if H is not None:
        H = to_polar(H)
        if H.degrees() - {3}:
            raise ValueError("the twisting form must be a three-form")
        if d(H):
            raise ValueError("the twisting form is not closed")
        cov = cov + contract(u.vec, contract(v.vec, H))
    return GenSection(vec, cov)


def clifford(u: GenSection, rho: Form) -> Form:
    """``(X + xi) . rho = iota_X rho + xi ^ rho``."""
    kind = rho.chart.kind
    out = contract(u.vec, rho) + u.cov.wedge(to_polar(rho))
    if kind in ("complex", "complex-log"):
        return from_polar(out, kind)
    return out


def d_H(rho: Form, H: Form | None = None) -> Form:
    """Twisted differential ``d rho + H ^ rho``."""
    out = d(rho)
    if H is not None and H:
        out = to_polar(out) + to_polar(H).wedge(to_polar(rho))
    return out


def dH_closed(rho: Form, H: Form | None = None) -> bool:
    return not d_H(rho, H)


# ---------------------------------------------------------------------------
# pointwise spinor tests


def _basis_sections(chart: Chart) -> list[GenSection]:
    ch = chart.polar()
    out = []
    for k in range(ch.n):
        out.append(GenSection.of(ch, vec=Multivector.basis(ch, k)))
    for k in range(ch.n):
        out.append(GenSection.of(ch, cov=Form.basis(ch, k)))
    return out


def _index_order(n: int) -> list[tuple[int, ...]]:
    out = []
    for k in range(n + 1):
        out.extend(combinations(range(n), k))
    return out


def annihilator_rank(rho: Form, pt: SamplePoint) -> int:
    """Dimension of ``{u : u . rho = 0}`` at the sample point."""
    rho = eval_at(to_polar(rho), pt)
    ch = rho.chart
    order = _index_order(ch.n)
    cols = []
    for u in _basis_sections(ch):
        img = clifford(u, rho)
        cols.append([_scalar_at(img, idx) for idx in order])
    mat = [list(row) for row in zip(*cols)]
    return 2 * ch.n - rank(mat)


def _scalar_at(alpha: Form, idx) -> QI:
    f = alpha.terms.get(idx)
    return f.const_value() if f is not None else QI(0)


def mukai(rho: Form, other: Form) -> FnElem:
    """Top coefficient of ``rho ^ sigma(other)`` in the polar frame."""
    return to_polar(rho).wedge(sigma(to_polar(other))).top()


def mukai_nondeg(rho: Form, pt: SamplePoint) -> bool:
    val = to_polar(rho)
    return bool(eval_fn(mukai(val, val.conj()), pt))


def spinor_samples(rho: Form, seed: int, count: int):
    return sample_points(rho.chart.polar(), seed, count, rho.param_names())


def is_pure(rho: Form, seed: int = 0, count: int = 3) -> bool:
    n = rho.chart.n
    return all(annihilator_rank(rho, pt) == n for pt in spinor_samples(rho, seed, count))


def integrable_at_samples(rho: Form, H: Form | None = None, seed: int = 0, count: int = 3) -> bool:
    """``d_H rho = u . rho`` for some ``u`` at each sample point."""
    drho = to_polar(d_H(rho, H))
    for pt in spinor_samples(rho, seed, count):
        r = eval_at(to_polar(rho), pt)
        target = eval_at(drho, pt)
        order = _index_order(r.chart.n)
        cols = [[_scalar_at(clifford(u, r), idx) for idx in order] for u in _basis_sections(r.chart)]
        mat = [list(row) for row in zip(*cols)]
        rhs = [_scalar_at(target, idx) for idx in order]
        if solve(mat, rhs) is None:
            return False
    return True


# ---------------------------------------------------------------------------
# stable structures


def stable_check(omega: Form, seed: int = 0) -> Report:
    """Residue conditions for an elliptic symplectic form to induce a stable structure."""
    omega = to_polar(omega)
    rep = Report("stable-check")
    ch = omega.chart
    closed = not d(omega)
    rep.add("closed", closed, "d omega = 0" if closed else "d omega != 0")
    if not closed:
        return rep
    top = omega
    n2 = ch.n // 2
    for _ in range(n2 - 1):
        top = top.wedge(omega)
    pts = spinor_samples(omega, seed, 1)
    nondeg = ch.n % 2 == 0 and bool(eval_fn(top.top(), pts[0]))
    rep.add("nondegenerate", nondeg, "top power nonzero at a sample point")
    for i in range(1, ch.l + 1):
        try:
            val = res_q(omega, i).value
            rep.add(f"Res_q[{i}] = 0", not val, _fmt(val))
        except ResidueError as exc:
            rep.add(f"Res_q[{i}] = 0", False, str(exc))
    for i, j in combinations(range(1, ch.l + 1), 2):
        try:
            tr = res_point(omega, "thetar", i, j).value
            rt = res_point(omega, "rtheta", i, j).value
            rep.add(f"Res_theta{i}r{j} = Res_r{i}theta{j}", tr == rt, f"{_fmt(tr)} vs {_fmt(rt)}")
            tr2 = res_point(omega, "thetar", j, i).value
            rt2 = res_point(omega, "rtheta", j, i).value
            rep.add(f"Res_theta{j}r{i} = Res_r{j}theta{i}", tr2 == rt2, f"{_fmt(tr2)} vs {_fmt(rt2)}")
            rr = res_point(omega, "rr", i, j).value
            tt = res_point(omega, "thetatheta", i, j).value
            rep.add(f"Res_r{i}r{j} = -Res_theta{i}theta{j}", rr == -tt, f"{_fmt(rr)} vs {_fmt(tt)}")
        except ResidueError as exc:
            rep.add(f"point residues ({i},{j})", False, str(exc))
    return rep


def _fmt(v) -> str:
    if isinstance(v, FnElem):
        return format_fn(v, None)
    if isinstance(v, Form):
        return format_form(v)
    return str(v)


# ---------------------------------------------------------------------------
# descent


@dataclass
class DescentResult:
    ok: bool
    factor: FnElem | None = None
    bfield: Form | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def _complex_smooth(alpha: Form) -> bool:
    return is_smooth_form(alpha)


def _nonsmooth_keys(alpha: Form) -> set:
    ch = alpha.chart.polar()
    out = set()
    for idx, f in alpha.terms.items():
        for key in f.terms:
            if not is_smooth_monomial(key[0], ch):
                out.add((idx, key))
    return out


def _complex_top(alpha_top: Form) -> FnElem:
    return to_complex_frame(alpha_top).top()


def _monomial(ch: Chart, vec) -> FnElem:
    return FnElem.mono(signature(ch), vec)


def descends(rho: Form, gauge: bool = False, seed: int = 0, check_pure: bool = True) -> DescentResult:
    """Search a monomial rescaling making ``rho`` smooth.

    With ``gauge=True`` a constant real B-field transform is also allowed.

    The Mukai pairing is B-invariant and scales by ``|f|^2``, which fixes the
    radial part of ``f``; the angular part is searched in a box bounded by
    the exponents of ``rho`` and the B-field solves the linear smoothness
    conditions in the next degree.  The result is accepted only if the
    rescaled spinor is smooth and its Mukai pairing is nonzero along D.
    """
    rho = to_polar(rho)
    ch = rho.chart
    if not rho:
        return DescentResult(False, reason="zero spinor")
    if check_pure and not is_pure(rho, seed):
        raise ValueError("spinor is not pointwise pure on the open locus")
    if ch.l == 0:
        ok = _complex_smooth(rho) if ch.kind != "real-log" else False
        return DescentResult(ok, _monomial(ch, [0] * ch.n), Form.zero(ch), "" if ok else "not smooth")

    M = mukai(rho, rho.conj())
    if not M:
        return DescentResult(False, reason="Mukai pairing vanishes identically")
    Mc = _complex_top(Form.basis(ch, *range(ch.n), coeff=M))
    svec = [0] * ch.n
    for k in ch.radials:
        low = min(exps[k] for exps, _ in Mc.terms)
        if low % 2:
            return DescentResult(False, reason="Mukai pairing has odd order along D")
        svec[k] = -low // 2

    bound = 0
    crho = to_complex_frame(rho)
    for f in crho.terms.values():
        for exps, _ in f.terms:
            for rk in ch.radials:
                j = ch.primary_angle(rk)
                bound = max(bound, abs(exps[rk]) + abs(exps[j]))
    angles = list(ch.angles)
    box = range(-bound, bound + 1)
    low_deg = min(rho.degrees())
    basis2 = list(combinations(range(ch.n), 2)) if gauge else []
    for t in product(box, repeat=len(angles)):
        vec = list(svec)
        for j, e in zip(angles, t):
            vec[j] = e
        f = _monomial(ch, vec)
        scaled = rho.scale(f)
        bfield = Form.zero(ch)
        if not _complex_smooth(scaled):
            if not gauge:
                continue
            bfield = _solve_bfield(scaled, low_deg, basis2)
            if bfield is None:
                continue
        candidate = exp_form(bfield).wedge(scaled) if bfield else scaled
        if not _complex_smooth(candidate):
            continue
        Mf = _complex_top(Form.basis(ch, *range(ch.n), coeff=mukai(candidate, candidate.conj())))
        at_d = FnElem(Mf.sig, {k: c for k, c in Mf.terms.items() if all(k[0][r] == 0 for r in ch.radials)})
        if not at_d:
            continue
        return DescentResult(True, f, bfield, "")
    return DescentResult(False, reason="no monomial rescaling and constant B-field make the spinor smooth")


def _solve_bfield(scaled: Form, low_deg: int, basis2) -> Form | None:
    ch = scaled.chart
    base = scaled.part(low_deg)
    target = to_complex_frame(scaled.part(low_deg + 2))
    contribs = [to_complex_frame(Form.basis(ch, a, b).wedge(base)) for a, b in basis2]
    keys = _nonsmooth_keys(target)
    for c in contribs:
        keys |= _nonsmooth_keys(c)
    if not keys:
        return Form.zero(ch)
    rows, rhs = [], []
    for idx, key in sorted(keys):
        coeffs = []
        for c in contribs:
            f = c.terms.get(idx)
            coeffs.append(f.terms.get(key, QI(0)) if f is not None else QI(0))
        t = target.terms.get(idx)
        b = -(t.terms.get(key, QI(0)) if t is not None else QI(0))
        rows.append([QI(v.re) for v in coeffs])
        rhs.append(QI(b.re))
        rows.append([QI(v.im) for v in coeffs])
        rhs.append(QI(b.im))
    sol = solve(rows, rhs)
    if sol is None:
        return None
    out = Form.zero(ch)
    for (a, b), v in zip(basis2, sol):
        if v:
            out = out + Form.basis(ch, a, b, coeff=v)
    return out
