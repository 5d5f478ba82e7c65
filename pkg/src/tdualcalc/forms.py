"""Exterior algebra of Lie algebroid forms and multivectors over a chart frame.

Terms are keyed by strictly increasing tuples of frame indices.  All
calculus (d, contraction, Lie derivative) is done in the polar frame where
frame covectors are closed and frame vector fields commute; forms given in a
complex frame are converted on the way in and out.
"""

from __future__ import annotations

from typing import Iterable

from .coeffring import (
    FnElem,
    RingError,
    is_smooth_monomial,
    mul_params,
    pow_params,
    reinterpret,
    signature,
    substitute,
    torus_average,
)
from .coords import (
    ANGLE,
    COMPLEX_KINDS,
    LOGREAL,
    RADIAL,
    REAL,
    Chart,
    ChartError,
    MonomialMap,
)
from .gauss import QI

Index = tuple[int, ...]


def merge_sign(a: Index, b: Index) -> tuple[int, Index | None]:
    """Sign and index set of ``e_a ^ e_b`` (``None`` when they share a leg)."""
    if set(a) & set(b):
        return 0, None
    inversions = 0
    for x in a:
        for y in b:
            if x > y:
                inversions += 1
    return (-1 if inversions % 2 else 1), tuple(sorted(a + b))


def _remove_sign(idx: Index, k: int) -> tuple[int, Index | None]:
    """Contraction of the dual vector of leg ``k`` into ``e_idx``."""
    if k not in idx:
        return 0, None
    pos = idx.index(k)
    return (-1 if pos % 2 else 1), idx[:pos] + idx[pos + 1 :]


class _Alt:
    """Shared storage for forms and multivectors."""

    __slots__ = ("chart", "terms", "sig")

    def __init__(self, chart: Chart, terms: dict[Index, FnElem] | None = None):
        self.chart = chart
        self.sig = signature(chart)
        clean = {}
        for idx, f in (terms or {}).items():
            if not isinstance(f, FnElem):
                f = FnElem.const(self.sig, f)
            elif f.sig != self.sig:
                raise RingError("coefficient lives on a different chart")
            if f:
                idx = tuple(idx)
                if list(idx) != sorted(set(idx)) or any(k < 0 or k >= chart.n for k in idx):
                    raise ChartError(f"bad frame index set {idx}")
                clean[idx] = f
        self.terms = clean

    def _new(self, terms, chart=None):
        return type(self)(chart or self.chart, terms)

    # constructors --------------------------------------------------------

    @classmethod
    def zero(cls, chart: Chart):
        return cls(chart)

    @classmethod
    def scalar(cls, chart: Chart, f=1):
        if not isinstance(f, FnElem):
            f = FnElem.const(signature(chart), f)
        return cls(chart, {(): f})

    @classmethod
    def basis(cls, chart: Chart, *idx: int, coeff=1):
        sign, merged = 1, ()
        for k in idx:
            s, merged = merge_sign(merged, (k,))
            if merged is None:
                return cls(chart)
            sign *= s
        f = coeff if isinstance(coeff, FnElem) else FnElem.const(signature(chart), coeff)
        return cls(chart, {merged: f.scale(sign)})

    # algebra ---------------------------------------------------------------

    def _check(self, other):
        if self.chart != other.chart:
            raise ChartError(f"chart mismatch: {self.chart} vs {other.chart}")

    def __add__(self, other):
        if not isinstance(other, _Alt):
            return self + self.scalar(self.chart, other)
        self._check(other)
        out = dict(self.terms)
        for k, f in other.terms.items():
            out[k] = out[k] + f if k in out else f
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -f for k, f in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        if isinstance(c, FnElem):
            return self._new({k: f * c for k, f in self.terms.items()})
        c = QI.coerce(c)
        return self._new({k: f.scale(c) for k, f in self.terms.items()})

    def wedge(self, other):
        if not isinstance(other, _Alt):
            return self.scale(other)
        self._check(other)
        out: dict[Index, FnElem] = {}
        for a, f in self.terms.items():
            for b, g in other.terms.items():
                s, m = merge_sign(a, b)
                if not s:
                    continue
                h = f * g
                if s < 0:
                    h = -h
                out[m] = out[m] + h if m in out else h
        return self._new(out)

    def __mul__(self, other):
        if isinstance(other, _Alt):
            return self.wedge(other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __eq__(self, other):
        if isinstance(other, _Alt):
            return type(self) is type(other) and self.chart == other.chart and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.chart, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # grading -----------------------------------------------------------------

    def degrees(self) -> set[int]:
        return {len(k) for k in self.terms}

    def part(self, deg: int):
        return self._new({k: f for k, f in self.terms.items() if len(k) == deg})

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int:
        degs = self.degrees()
        if not degs:
            return 0
        if len(degs) > 1:
            raise ValueError("inhomogeneous element has no single degree")
        return degs.pop()

    def coeff(self, idx: Iterable[int]) -> FnElem:
        idx = tuple(idx)
        sign, merged = 1, ()
        for k in idx:
            s, merged = merge_sign(merged, (k,))
            if merged is None:
                return FnElem.zero(self.sig)
            sign *= s
        f = self.terms.get(merged)
        if f is None:
            return FnElem.zero(self.sig)
        return f if sign > 0 else -f

    def top(self) -> FnElem:
        return self.terms.get(tuple(range(self.chart.n)), FnElem.zero(self.sig))

    def map_coeffs(self, fn):
        return self._new({k: fn(f) for k, f in self.terms.items()})

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def param_names(self) -> set[str]:
        out = set()
        for f in self.terms.values():
            out |= f.param_names()
        return out

    def subs_params(self, values):
        return self.map_coeffs(lambda f: f.subs_params(values))

    def __repr__(self):
        body = " + ".join(
            f"({f!r})*{'^'.join(self._label(k) for k in idx) or '1'}" for idx, f in self.sorted_terms()
        )
        return f"{type(self).__name__}[{self.chart}]({body or '0'})"

    def _label(self, k):
        return self.chart.frame[k]


class Form(_Alt):
    """A (possibly inhomogeneous) form in the chart's frame."""

    __slots__ = ()

    @classmethod
    def cov(cls, chart: Chart, label: str, coeff=1) -> "Form":
        """The frame covector with the given label, e.g. ``dlr1`` or ``dth2``."""
        try:
            k = chart.frame.index(label)
        except ValueError:
            raise ChartError(f"{label!r} is not a frame covector of {chart}") from None
        return cls.basis(chart, k, coeff=coeff)

    def conj(self) -> "Form":
        if self.chart.kind in COMPLEX_KINDS:
            return from_polar(to_polar(self).conj(), self.chart.kind)
        return self.map_coeffs(FnElem.conj)

    def real_part(self) -> "Form":
        p = to_polar(self)
        return p.map_coeffs(FnElem.real_part)

    def imag_part(self) -> "Form":
        p = to_polar(self)
        return p.map_coeffs(FnElem.imag_part)


class Multivector(_Alt):
    """Polyvectors in the dual frame (``r d/dr``, ``d/dtheta``, ``d/dx``, ``x d/dx``)."""

    __slots__ = ()

    def __init__(self, chart: Chart, terms=None):
        if not chart.is_polar:
            raise ChartError("multivectors live in the polar frame")
        super().__init__(chart, terms)

    @classmethod
    def vec(cls, chart: Chart, name: str, coeff=1) -> "Multivector":
        """The dual frame vector of coordinate ``name``."""
        return cls.basis(chart, chart.index(name), coeff=coeff)

    def _label(self, k):
        return self.chart.vector_label(k)

    def apply(self, f: FnElem) -> FnElem:
        """A vector field acting on a function."""
        out = FnElem.zero(f.sig)
        for idx, g in self.terms.items():
            if len(idx) != 1:
                raise ValueError("only vector fields act on functions")
            out = out + g * f.deriv(idx[0])
        return out


# ---------------------------------------------------------------------------
# frame changes


def _images_to_polar(chart: Chart) -> tuple[Chart, dict[int, Form]]:
    polar = chart.polar()
    sig = signature(polar)
    images: dict[int, Form] = {}
    for k in range(chart.n):
        images[k] = Form.basis(polar, k)
    if chart.kind in COMPLEX_KINDS:
        for rk in chart.radials:
            j = chart.primary_angle(rk)
            vec_z = [0] * chart.n
            vec_z[rk], vec_z[j] = 1, 1
            vec_zb = list(vec_z)
            vec_zb[j] = -1
            if chart.kind == "complex":
                fz = FnElem.mono(sig, vec_z)
                fzb = FnElem.mono(sig, vec_zb)
            else:
                fz = fzb = FnElem.const(sig, 1)
            images[rk] = Form(polar, {(rk,): fz, (j,): fz.scale(QI(0, 1))})
            images[j] = Form(polar, {(rk,): fzb, (j,): fzb.scale(QI(0, -1))})
    return polar, images


def _images_from_polar(chart: Chart, kind: str) -> tuple[Chart, dict[int, Form]]:
    target = chart.with_kind(kind)
    sig = signature(target)
    images: dict[int, Form] = {k: Form.basis(target, k) for k in range(chart.n)}
    for rk in chart.radials:
        j = chart.primary_angle(rk)
        if kind == "complex":
            vz = [0] * chart.n
            vz[rk], vz[j] = -1, -1
            vzb = list(vz)
            vzb[j] = 1
            zi = FnElem.mono(sig, vz)
            zbi = FnElem.mono(sig, vzb)
        else:
            zi = zbi = FnElem.const(sig, 1)
        half = QI(1, 0) / 2
        images[rk] = Form(target, {(rk,): zi.scale(half), (j,): zbi.scale(half)})
        images[j] = Form(target, {(rk,): zi.scale(QI(0, -1) / 2), (j,): zbi.scale(QI(0, 1) / 2)})
    return target, images


def change_frame(alpha: Form, target: Chart, images: dict[int, Form]) -> Form:
    out = Form.zero(target)
    one = Form.scalar(target, 1)
    for idx, f in alpha.terms.items():
        term = one
        for k in idx:
            term = term.wedge(images[k])
        out = out + term.scale(f)
    return out


def to_polar(alpha: Form) -> Form:
    if alpha.chart.is_polar:
        return alpha
    polar, images = _images_to_polar(alpha.chart)
    return change_frame(alpha, polar, images)


def from_polar(alpha: Form, kind: str) -> Form:
    if kind == alpha.chart.kind:
        return alpha
    if not alpha.chart.is_polar:
        alpha = to_polar(alpha)
    if kind not in COMPLEX_KINDS:
        return Form(alpha.chart.with_kind(kind), alpha.terms)
    target, images = _images_from_polar(alpha.chart, kind)
    return change_frame(alpha, target, images)


def to_complex_frame(alpha: Form, log: bool = False) -> Form:
    """Rewrite in ``{dz, dzbar, ...}`` (or ``{dlog z, dlog zbar, ...}``)."""
    return from_polar(to_polar(alpha), "complex-log" if log else "complex")


def to_kind(alpha: Form, kind: str) -> Form:
    return from_polar(to_polar(alpha), kind)


# ---------------------------------------------------------------------------
# calculus


def _polar_op(fn):
    """Run a polar-frame operation and return in the input's frame."""

    def wrapper(alpha: Form, *args, **kw):
        kind = alpha.chart.kind
        out = fn(to_polar(alpha), *args, **kw)
        return from_polar(out, kind) if kind in COMPLEX_KINDS else out

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_polar_op
def d(alpha: Form) -> Form:
    """Exterior derivative; frame covectors are closed."""
    ch = alpha.chart
    out: dict[Index, FnElem] = {}
    for idx, f in alpha.terms.items():
        for k in range(ch.n):
            if k in idx:
                continue
            g = f.deriv(k)
            if not g:
                continue
            s, m = merge_sign((k,), idx)
            h = g if s > 0 else -g
            out[m] = out[m] + h if m in out else h
    return Form(ch, out)


def _contract_basis(k: int, alpha: Form) -> Form:
    out = {}
    for idx, f in alpha.terms.items():
        s, rest = _remove_sign(idx, k)
        if s:
            out[rest] = f if s > 0 else -f
    return Form(alpha.chart, out)


def _contract_polar(X: Multivector, alpha: Form) -> Form:
    if X.chart.polar() != alpha.chart:
        raise ChartError("contraction across different charts")
    out = Form.zero(alpha.chart)
    for idx, g in X.terms.items():
        part = alpha
        for k in idx:
            part = _contract_basis(k, part)
            if not part:
                break
        out = out + part.scale(g)
    return out


def contract(X: Multivector, alpha: Form) -> Form:
    """``iota_{X1^...^Xk} = iota_{Xk} o ... o iota_{X1}``."""
    kind = alpha.chart.kind
    out = _contract_polar(X, to_polar(alpha))
    return from_polar(out, kind) if kind in COMPLEX_KINDS else out


def lie_derivative(X: Multivector, alpha: Form) -> Form:
    """Cartan formula ``L_X = iota_X d + d iota_X``."""
    if any(len(k) != 1 for k in X.terms):
        raise ValueError("Lie derivative needs a vector field")
    return contract(X, d(alpha)) + d(contract(X, alpha))


def bracket(X: Multivector, Y: Multivector) -> Multivector:
    """Lie bracket of vector fields (frame fields commute)."""
    X._check(Y)
    out = Multivector.zero(X.chart)
    for (b,), g in Y.terms.items():
        out = out + Multivector.basis(X.chart, b, coeff=X.apply(g))
    for (b,), f in X.terms.items():
        out = out - Multivector.basis(X.chart, b, coeff=Y.apply(f))
    return out


def exp_form(alpha: Form) -> Form:
    """Finite exterior exponential of an even form without scalar part."""
    if () in alpha.terms:
        raise ValueError("exp of a form with a nonzero function part is not algebraic")
    if any(len(k) % 2 for k in alpha.terms):
        raise ValueError("exp is only defined here for even forms")
    out = Form.scalar(alpha.chart, 1)
    power = Form.scalar(alpha.chart, 1)
    n = 1
    while True:
        power = power.wedge(alpha).scale(QI(1) / n)
        if not power:
            return out
        out = out + power
        n += 1


def sigma(alpha: _Alt) -> _Alt:
    """Degree reversal: multiplies the degree-k part by (-1)^(k(k-1)/2)."""
    return alpha._new({k: (f if (len(k) * (len(k) - 1) // 2) % 2 == 0 else -f) for k, f in alpha.terms.items()})


def is_invariant(alpha: Form, action) -> bool:
    p = to_polar(alpha)
    return all(torus_average(f, action) == f for f in p.terms.values())


def average(alpha: Form, action) -> Form:
    kind = alpha.chart.kind
    p = to_polar(alpha)
    out = Form(p.chart, {k: torus_average(f, action) for k, f in p.terms.items()})
    return from_polar(out, kind) if kind in COMPLEX_KINDS else out


def is_smooth_form(alpha: Form) -> bool:
    """True iff the form extends smoothly across the divisor.

    Elliptic pairs are tested in the ``dz, dzbar`` frame; ``dlog x`` legs of a
    real-log chart must be absorbed by a power of ``x``.
    """
    ch = alpha.chart
    if ch.l:
        alpha = to_complex_frame(alpha)
    else:
        alpha = to_polar(alpha)
    logreals = set(ch.indices(LOGREAL))
    for idx, f in alpha.terms.items():
        lower = [0] * ch.n
        for k in idx:
            if k in logreals:
                lower[k] = 1
        for exps, _ in f.terms:
            shifted = tuple(e - s for e, s in zip(exps, lower))
            if not is_smooth_monomial(shifted, ch):
                return False
    return True


def pullback(alpha: Form, mp: MonomialMap) -> Form:
    """Pull a form on ``mp.codomain`` back to ``mp.domain`` (polar frames)."""
    src = mp.domain.polar()
    tgt = mp.codomain.polar()
    mp = MonomialMap(src, tgt, mp.rows)
    alpha = to_polar(alpha)
    if alpha.chart != tgt:
        raise ChartError("form does not live on the map's codomain")
    sig = signature(src)
    images: dict[int, Form] = {}
    for c, (coord, row) in enumerate(zip(tgt.coords, mp.rows)):
        if coord.kind == REAL:
            # d(prod x_j^e_j) = sum e_j (monomial / x_j) dx_j
            terms = {}
            for j, e in enumerate(row):
                if e:
                    low = list(row)
                    low[j] -= 1
                    terms[(j,)] = FnElem.mono(sig, low, e)
            images[c] = Form(src, terms)
        else:
            images[c] = Form(src, {(j,): FnElem.const(sig, e) for j, e in enumerate(row) if e})
    out = Form.zero(src)
    one = Form.scalar(src, 1)
    for idx, f in alpha.terms.items():
        term = one
        for k in idx:
            term = term.wedge(images[k])
            if not term:
                break
        if term:
            out = out + term.scale(substitute(f, mp))
    return out


def reinterpret_form(alpha: Form, dst: Chart, rename: dict[str, str] | None = None) -> Form:
    """Move a polar form to ``dst`` by matching coordinate names."""
    src = alpha.chart
    if not src.is_polar:
        raise ChartError("reinterpretation works on polar frames")
    rename = rename or {}
    pos = {}
    for k, c in enumerate(src.coords):
        name = rename.get(c.name, c.name)
        pos[k] = dst.index(name) if dst.has(name) else None
    out = Form.zero(dst.polar())
    for idx, f in alpha.terms.items():
        if any(pos[k] is None for k in idx):
            raise ChartError("form has a leg along a coordinate absent from the target chart")
        g = reinterpret(f, src, dst.polar(), rename)
        out = out + Form.basis(dst.polar(), *[pos[k] for k in idx], coeff=g)
    return out


def proportionality(a: _Alt, b: _Alt):
    """The constant ``c`` with ``a = c*b``, or ``None``.

    ``c`` must not depend on coordinates; formal parameters are allowed.
    """
    if isinstance(a, Form):
        a, b = to_polar(a), to_polar(b)
    if a.chart != b.chart:
        raise ChartError("comparison across charts")
    if not a and not b:
        return QI(1)
    if not a or not b or set(a.terms) != set(b.terms):
        return None
    idx, g = b.sorted_terms()[0]
    f = a.terms[idx]
    (exps, pb), cb = sorted(g.terms.items())[0]
    for (ea, pa), ca in sorted(f.terms.items()):
        if ea != exps:
            continue
        params = mul_params(pa, pow_params(pb, -1))
        ratio = FnElem.mono(g.sig, [0] * len(exps), ca / cb, params)
        if a == b.scale(ratio):
            return ratio.const_value() if ratio.is_const() else ratio
    return None


def same_line(a: _Alt, b: _Alt) -> bool:
    return proportionality(a, b) is not None


def frame_volume(chart: Chart) -> Form:
    return Form.basis(chart, *range(chart.n))


def from_terms(chart: Chart, items: Iterable[tuple[Iterable[str], FnElem]]) -> Form:
    """Build a form from ``(frame labels, coefficient)`` pairs."""
    out = Form.zero(chart)
    for labels, f in items:
        idx = [chart.frame.index(lbl) for lbl in labels]
        out = out + Form.basis(chart, *idx, coeff=f)
    return out


__all__ = [
    "ANGLE",
    "RADIAL",
    "Form",
    "Multivector",
    "bracket",
    "change_frame",
    "contract",
    "d",
    "exp_form",
    "from_polar",
    "from_terms",
    "frame_volume",
    "is_invariant",
    "is_smooth_form",
    "lie_derivative",
    "merge_sign",
    "proportionality",
    "pullback",
    "reinterpret_form",
    "same_line",
    "sigma",
    "to_complex_frame",
    "to_kind",
    "to_polar",
]
