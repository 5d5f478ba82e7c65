"""The coefficient ring: finite sums of monomials r^a e^{i b.theta} x^c (params).

A monomial stores one integer exponent per chart coordinate.  For a radial
coordinate the entry is the power of ``r``, for an angle it is the Fourier
mode, for a real coordinate the power of ``x``.  Formal parameters are kept
in a sorted tuple of ``(name, power)`` pairs and are treated as real.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .coords import ANGLE, LOGREAL, RADIAL, REAL, Chart, ChartError, MonomialMap
from .gauss import ONE, QI

Params = tuple[tuple[str, int], ...]
Key = tuple[tuple[int, ...], Params]


class RingError(ValueError):
    """Raised on signature mismatches or operations leaving the ring."""


def mul_params(p: Params, q: Params) -> Params:
    if not p:
        return q
    if not q:
        return p
    acc = dict(p)
    for name, e in q:
        acc[name] = acc.get(name, 0) + e
    return tuple(sorted((k, v) for k, v in acc.items() if v))


def pow_params(p: Params, n: int) -> Params:
    return tuple((k, v * n) for k, v in p) if n else ()


@dataclass(frozen=True)
class Monomial:
    coeff: QI
    exps: tuple[int, ...]
    params: Params = ()

    @property
    def key(self) -> Key:
        return (self.exps, self.params)


class FnElem:
    """An immutable finite sum of monomials over a fixed coordinate signature.

    ``sig`` is the tuple of coordinate kinds of the owning chart; it is all
    the ring needs to know (conjugation flips angle modes, smoothness reads
    radial/angle pairs from the chart itself).
    """

    __slots__ = ("sig", "_terms", "_hash")

    def __init__(self, sig: tuple[str, ...], terms: dict[Key, QI] | None = None, *, _clean=False):
        self.sig = sig
        if terms is None:
            terms = {}
        elif not _clean:
            terms = {k: QI.coerce(v) for k, v in terms.items() if v}
        self._terms = terms
        self._hash = None

    # construction ---------------------------------------------------------

    @classmethod
    def zero(cls, sig) -> "FnElem":
        return cls(tuple(sig))

    @classmethod
    def const(cls, sig, c=1) -> "FnElem":
        sig = tuple(sig)
        c = QI.coerce(c)
        if not c:
            return cls(sig)
        return cls(sig, {((0,) * len(sig), ()): c}, _clean=True)

    @classmethod
    def mono(cls, sig, exps, coeff=1, params: Iterable[tuple[str, int]] = ()) -> "FnElem":
        sig = tuple(sig)
        exps = tuple(int(e) for e in exps)
        if len(exps) != len(sig):
            raise RingError("exponent vector length does not match the chart")
        for kind, e in zip(sig, exps):
            if kind in (REAL, LOGREAL) and e < 0:
                raise RingError("negative exponent of a real coordinate")
        params = mul_params((), tuple(sorted(params)))
        coeff = QI.coerce(coeff)
        if not coeff:
            return cls(sig)
        return cls(sig, {(exps, params): coeff}, _clean=True)

    @classmethod
    def for_chart(cls, chart: Chart, coeff=1, **exps) -> "FnElem":
        """Convenience: ``FnElem.for_chart(ch, 2, r1=2, th1=1)``."""
        vec = [0] * chart.n
        for name, e in exps.items():
            vec[chart.index(name)] = e
        return cls.mono(signature(chart), vec, coeff)

    # inspection -----------------------------------------------------------

    @property
    def terms(self) -> dict[Key, QI]:
        return self._terms

    def monomials(self) -> Iterator[Monomial]:
        for (exps, params), c in sorted(self._terms.items(), key=lambda kv: kv[0]):
            yield Monomial(c, exps, params)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_const(self) -> bool:
        zero = (0,) * len(self.sig)
        return all(k == (zero, ()) for k in self._terms)

    def const_value(self) -> QI:
        if not self._terms:
            return QI(0)
        if not self.is_const():
            raise RingError("function is not constant")
        return next(iter(self._terms.values()))

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def single(self) -> Monomial:
        if len(self._terms) != 1:
            raise RingError("function is not a single monomial")
        (exps, params), c = next(iter(self._terms.items()))
        return Monomial(c, exps, params)

    def param_names(self) -> set[str]:
        return {name for (_, params) in self._terms for name, _ in params}

    # arithmetic -----------------------------------------------------------

    def _check(self, other: "FnElem"):
        if self.sig != other.sig:
            raise RingError(f"chart signature mismatch: {self.sig} vs {other.sig}")

    def _lift(self, other) -> "FnElem":
        if isinstance(other, FnElem):
            self._check(other)
            return other
        return FnElem.const(self.sig, other)

    def __add__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        if not o._terms:
            return self
        if not self._terms:
            return o
        out = dict(self._terms)
        for k, c in o._terms.items():
            v = out.get(k)
            if v is None:
                out[k] = c
            else:
                s = v + c
                if s:
                    out[k] = s
                else:
                    del out[k]
        return FnElem(self.sig, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return FnElem(self.sig, {k: -c for k, c in self._terms.items()}, _clean=True)

    def __sub__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "FnElem":
        c = QI.coerce(c)
        if not c:
            return FnElem(self.sig)
        if c == ONE:
            return self
        return FnElem(self.sig, {k: v * c for k, v in self._terms.items()}, _clean=True)

    def __mul__(self, other):
        if isinstance(other, FnElem):
            self._check(other)
        else:
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        if not self._terms or not other._terms:
            return FnElem(self.sig)
        out: dict[Key, QI] = {}
        for (e1, p1), c1 in self._terms.items():
            for (e2, p2), c2 in other._terms.items():
                k = (tuple(a + b for a, b in zip(e1, e2)), mul_params(p1, p2))
                v = out.get(k)
                out[k] = c1 * c2 if v is None else v + c1 * c2
        return FnElem(self.sig, {k: v for k, v in out.items() if v}, _clean=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, FnElem):
            return self * other.inverse()
        return self.scale(QI.coerce(other).inverse())

    def inverse(self) -> "FnElem":
        """Inverse of a monomial unit (the only invertible elements)."""
        m = self.single()
        exps = tuple(-e for e in m.exps)
        for kind, e in zip(self.sig, exps):
            if kind in (REAL, LOGREAL) and e < 0:
                raise RingError("cannot invert a function vanishing on a real hyperplane")
        return FnElem(self.sig, {(exps, pow_params(m.params, -1)): m.coeff.inverse()}, _clean=True)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = FnElem.const(self.sig, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conj(self) -> "FnElem":
        angle = [k == ANGLE for k in self.sig]
        out = {}
        for (exps, params), c in self._terms.items():
            e = tuple(-v if a else v for v, a in zip(exps, angle))
            out[(e, params)] = c.conj()
        return FnElem(self.sig, out, _clean=True)

    def real_part(self) -> "FnElem":
        return (self + self.conj()).scale(QI(1, 0) / 2)

    def imag_part(self) -> "FnElem":
        return (self - self.conj()).scale(QI(0, -1) / 2)

    def deriv(self, k: int) -> "FnElem":
        """Derivative along the k-th frame vector field.

        ``r d/dr`` and ``x d/dx`` (log reals) multiply by the exponent,
        ``d/dtheta`` by ``i`` times the mode, ``d/dx`` lowers the power.
        """
        kind = self.sig[k]
        out: dict[Key, QI] = {}
        for (exps, params), c in self._terms.items():
            e = exps[k]
            if not e:
                continue
            if kind in (RADIAL, LOGREAL):
                out[(exps, params)] = c * e
            elif kind == ANGLE:
                out[(exps, params)] = c * QI(0, e)
            else:
                lowered = exps[:k] + (e - 1,) + exps[k + 1 :]
                out[(lowered, params)] = out.get((lowered, params), QI(0)) + c * e
        return FnElem(self.sig, {k2: v for k2, v in out.items() if v}, _clean=True)

    def subs_params(self, values: dict[str, object]) -> "FnElem":
        """Replace named parameters by scalars."""
        out = FnElem(self.sig)
        for (exps, params), c in self._terms.items():
            keep = []
            for name, e in params:
                if name in values:
                    c = c * QI.coerce(values[name]) ** e
                else:
                    keep.append((name, e))
            out = out + FnElem(self.sig, {(exps, tuple(keep)): c})
        return out

    # comparison -----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, FnElem):
            return self.sig == other.sig and self._terms == other._terms
        try:
            return self._terms == FnElem.const(self.sig, other)._terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.sig, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        body = " + ".join(f"{c}*{list(e)}{list(p) if p else ''}" for (e, p), c in sorted(self._terms.items()))
        return f"FnElem({body or '0'})"


def signature(chart: Chart) -> tuple[str, ...]:
    return tuple(c.kind for c in chart.coords)


def fn_add(a: FnElem, b: FnElem) -> FnElem:
    return a + b


def fn_mul(a: FnElem, b: FnElem) -> FnElem:
    return a * b


def _radial_groups(chart: Chart) -> list[tuple[int, tuple[int, ...]]]:
    return [(k, chart.pairs[k]) for k in chart.radials]


def is_smooth_monomial(exps: tuple[int, ...], chart: Chart) -> bool:
    for rk, angs in _radial_groups(chart):
        a = exps[rk]
        if len(angs) <= 1:
            b = exps[angs[0]] if angs else 0
            if a < abs(b) or (a - b) % 2:
                return False
        else:
            # several angles rotating with one radius (a correspondence cone):
            # the monomial must be a product of the z-type generators
            bs = [exps[j] for j in angs]
            if a < sum(abs(b) for b in bs) or (a - sum(bs)) % 2:
                return False
    return all(e >= 0 for k, e in zip(chart.coords, exps) if k.kind in (REAL, LOGREAL))


def is_smooth_fn(f: FnElem, chart: Chart) -> bool:
    """True iff every monomial extends to a polynomial in cartesian coordinates."""
    if f.sig != signature(chart):
        raise RingError("function does not live on this chart")
    return all(is_smooth_monomial(exps, chart) for (exps, _) in f.terms)


def action_kills(exps: tuple[int, ...], action) -> bool:
    """True iff the monomial's Fourier vector is annihilated by the action."""
    angles = action.chart.angles
    for row in action.matrix:
        if sum(a * exps[j] for a, j in zip(row, angles)):
            return False
    return True


def torus_average(f: FnElem, action) -> FnElem:
    """Project onto invariant monomials (average over the acting torus)."""
    if f.sig != signature(action.chart):
        raise RingError("function does not live on the action's chart")
    keep = {k: c for k, c in f.terms.items() if action_kills(k[0], action)}
    return FnElem(f.sig, keep, _clean=True)


def substitute(f: FnElem, mp: MonomialMap) -> FnElem:
    """Pull ``f`` (over ``mp.codomain``) back to ``mp.domain``."""
    if f.sig != signature(mp.codomain):
        raise RingError("function does not live on the map's codomain")
    sig = signature(mp.domain)
    out: dict[Key, QI] = {}
    for (exps, params), c in f.terms.items():
        new = mp.map_exponents(exps)
        for kind, e in zip(sig, new):
            if kind in (REAL, LOGREAL) and e < 0:
                raise ChartError("substitution produced a negative real exponent")
        k = (new, params)
        out[k] = out.get(k, QI(0)) + c
    return FnElem(sig, {k: v for k, v in out.items() if v}, _clean=True)


def reinterpret(f: FnElem, src: Chart, dst: Chart, rename: dict[str, str] | None = None) -> FnElem:
    """Move ``f`` to chart ``dst`` by coordinate name (after ``rename``).

    Exponents on coordinates missing from ``dst`` must vanish.
    """
    rename = rename or {}
    idx = []
    for c in src.coords:
        name = rename.get(c.name, c.name)
        idx.append(dst.index(name) if dst.has(name) else None)
    sig = signature(dst)
    out: dict[Key, QI] = {}
    for (exps, params), c in f.terms.items():
        new = [0] * dst.n
        for e, j in zip(exps, idx):
            if e:
                if j is None:
                    raise ChartError("function depends on a coordinate absent from the target chart")
                new[j] += e
        k = (tuple(new), params)
        out[k] = out.get(k, QI(0)) + c
    return FnElem(sig, {k: v for k, v in out.items() if v}, _clean=True)
