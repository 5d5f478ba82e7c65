"""Coordinate layouts of local models and monomial maps between them.

A chart is an ordered tuple of coordinates.  Every coordinate carries one
frame covector, so the coordinate order is also the canonical frame order
and fixes every wedge sign.

Coordinate kinds:

* ``radial``  -- ``r`` of a polar pair; frame ``dlog r`` (or ``dz``/``dlog z``
  in the complex frames)
* ``angle``   -- ``theta`` (paired with a radial) or a free torus angle ``psi``;
  frame ``d theta``
* ``real``    -- ``x`` with frame ``dx``
* ``logreal`` -- ``x`` of a real log divisor with frame ``dlog x``
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from functools import cached_property

RADIAL = "radial"
ANGLE = "angle"
REAL = "real"
LOGREAL = "logreal"

POLAR_KINDS = ("elliptic", "correspondence", "real-log", "smooth")
COMPLEX_KINDS = ("complex", "complex-log")
CHART_KINDS = POLAR_KINDS + COMPLEX_KINDS


class ChartError(ValueError):
    """Raised on incompatible charts or malformed coordinate data."""


def bar_name(cname: str) -> str:
    """``z1`` -> ``zb1``, ``v2`` -> ``vb2``."""
    m = re.fullmatch(r"([A-Za-z]+)(\w*)", cname)
    if m is None:
        raise ChartError(f"bad complex coordinate name {cname!r}")
    return f"{m.group(1)}b{m.group(2)}"


def mode_token(angle_name: str) -> str:
    """Fourier-mode token of an angle: ``th1`` -> ``E1``, ``ps1`` -> ``Eps1``."""
    if angle_name.startswith("th"):
        return "E" + angle_name[2:]
    return "E" + angle_name


@dataclass(frozen=True)
class Coord:
    name: str
    kind: str
    pair: str | None = None
    cname: str | None = None


@dataclass(frozen=True)
class Chart:
    coords: tuple[Coord, ...]
    kind: str = "elliptic"
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.kind not in CHART_KINDS:
            raise ChartError(f"unknown chart kind {self.kind!r}")
        names = [c.name for c in self.coords]
        if len(set(names)) != len(names):
            raise ChartError(f"duplicate coordinate names in {names}")
        for c in self.coords:
            if c.kind == ANGLE and c.pair is not None and c.pair not in names:
                raise ChartError(f"angle {c.name} paired with unknown radial {c.pair}")

    @property
    def n(self) -> int:
        return len(self.coords)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {c.name: k for k, c in enumerate(self.coords)}

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ChartError(f"chart has no coordinate {name!r}") from None

    def has(self, name: str) -> bool:
        return name in self._index

    def indices(self, kind: str) -> tuple[int, ...]:
        return tuple(k for k, c in enumerate(self.coords) if c.kind == kind)

    @cached_property
    def radials(self) -> tuple[int, ...]:
        return self.indices(RADIAL)

    @cached_property
    def angles(self) -> tuple[int, ...]:
        return self.indices(ANGLE)

    @cached_property
    def pairs(self) -> dict[int, tuple[int, ...]]:
        """Radial index -> indices of the angles rotating with it."""
        out: dict[int, list[int]] = {k: [] for k in self.radials}
        for k, c in enumerate(self.coords):
            if c.kind == ANGLE and c.pair is not None:
                out[self.index(c.pair)].append(k)
        return {k: tuple(v) for k, v in out.items()}

    def primary_angle(self, radial: int) -> int:
        angs = self.pairs[radial]
        if len(angs) != 1:
            raise ChartError(
                f"radial {self.coords[radial].name} has {len(angs)} paired angles; "
                "complex frames need exactly one"
            )
        return angs[0]

    @property
    def l(self) -> int:
        return len(self.radials)

    @property
    def is_polar(self) -> bool:
        return self.kind in POLAR_KINDS

    def with_kind(self, kind: str) -> "Chart":
        return replace(self, kind=kind)

    def polar(self) -> "Chart":
        return self if self.is_polar else replace(self, kind="elliptic")

    def covector_label(self, k: int) -> str:
        c = self.coords[k]
        if self.kind in COMPLEX_KINDS:
            if c.kind == RADIAL:
                prefix = "dl" if self.kind == "complex-log" else "d"
                return prefix + c.cname
            if c.kind == ANGLE and c.pair is not None:
                return "d" + bar_name(self.coords[self.index(c.pair)].cname)
        if c.kind in (RADIAL, LOGREAL):
            return "dl" + c.name
        return "d" + c.name

    def vector_label(self, k: int) -> str:
        c = self.coords[k]
        if c.kind in (RADIAL, LOGREAL):
            return f"{c.name}*D{c.name}"
        return "D" + c.name

    @cached_property
    def frame(self) -> tuple[str, ...]:
        return tuple(self.covector_label(k) for k in range(self.n))

    def remove(self, names, free: tuple[str, ...] = ()) -> "Chart":
        """Drop ``names``; angles listed in ``free`` stay as unpaired angles."""
        drop = set(names)
        coords = []
        for c in self.coords:
            if c.name in drop:
                continue
            if c.name in free or (c.kind == ANGLE and c.pair in drop):
                c = replace(c, pair=None)
            coords.append(c)
        kind = self.kind
        if kind in COMPLEX_KINDS:
            kind = "elliptic"
        return Chart(tuple(coords), kind, self.name)

    def __str__(self):
        label = self.name or self.kind
        return f"{label}({', '.join(c.name for c in self.coords)})"


def _pairs_coords(l, prefix_r="r", prefix_th="th", prefix_z="z", start=1):
    out = []
    for i in range(start, start + l):
        r = f"{prefix_r}{i}"
        out.append(Coord(r, RADIAL, cname=f"{prefix_z}{i}"))
        out.append(Coord(f"{prefix_th}{i}", ANGLE, pair=r))
    return out


def elliptic_chart(l: int, f: int = 0, m: int = 0, name: str = "") -> Chart:
    """The local model C^l x T^f x R^m with frame
    ``[dlr1, dth1, ..., dps1, ..., dx1, ...]``."""
    coords = _pairs_coords(l)
    coords += [Coord(f"ps{j}", ANGLE) for j in range(1, f + 1)]
    coords += [Coord(f"x{s}", REAL) for s in range(1, m + 1)]
    return Chart(tuple(coords), "elliptic", name)


def complex_log_chart(l: int, f: int = 0, m: int = 0, name: str = "") -> Chart:
    return elliptic_chart(l, f, m, name).with_kind("complex-log")


def real_log_chart(l: int, m: int = 0, f: int = 0, name: str = "") -> Chart:
    """R^l x T^f x R^m with log coordinates ``x1..xl`` first."""
    coords = [Coord(f"x{s}", LOGREAL) for s in range(1, l + 1)]
    coords += [Coord(f"ps{j}", ANGLE) for j in range(1, f + 1)]
    coords += [Coord(f"x{s}", REAL) for s in range(l + 1, l + m + 1)]
    return Chart(tuple(coords), "real-log", name)


def smooth_chart(m: int, name: str = "") -> Chart:
    return Chart(tuple(Coord(f"x{s}", REAL) for s in range(1, m + 1)), "smooth", name)


# ---------------------------------------------------------------------------
# monomial maps


@dataclass(frozen=True)
class MonomialMap:
    """A map ``domain -> codomain`` given by monomial formulas.

    ``rows[c]`` expresses codomain coordinate ``c`` through domain
    coordinates: a radial is a product of domain radial powers, an angle an
    integer combination of domain angles, a real coordinate a monomial in
    domain reals with natural exponents.  Pulling back is then linear on
    exponent vectors: ``new_exp = old_exp @ rows``.
    """

    domain: Chart
    codomain: Chart
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.rows) != self.codomain.n or any(len(r) != self.domain.n for r in self.rows):
            raise ChartError("monomial map matrix has the wrong shape")
        allowed = {RADIAL: (RADIAL,), ANGLE: (ANGLE,), REAL: (REAL,), LOGREAL: (LOGREAL,)}
        for c, row in zip(self.codomain.coords, self.rows):
            for d, e in zip(self.domain.coords, row):
                if e and d.kind not in allowed[c.kind]:
                    raise ChartError(
                        f"map is not monomial: {c.name} depends on {d.kind} coordinate {d.name}"
                    )
                if e < 0 and c.kind == REAL:
                    raise ChartError(f"negative exponent of {d.name} in image of {c.name}")

    @classmethod
    def from_dict(cls, domain: Chart, codomain: Chart, table: dict[str, dict[str, int]]):
        rows = []
        for c in codomain.coords:
            if c.name not in table:
                raise ChartError(f"no image given for coordinate {c.name}")
            row = [0] * domain.n
            for dname, e in table[c.name].items():
                row[domain.index(dname)] += int(e)
            rows.append(tuple(row))
        return cls(domain, codomain, tuple(rows))

    @classmethod
    def identity(cls, chart: Chart) -> "MonomialMap":
        n = chart.n
        return cls(chart, chart, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def is_identity(self) -> bool:
        if self.domain != self.codomain:
            return False
        return all(e == int(i == j) for i, row in enumerate(self.rows) for j, e in enumerate(row))

    def map_exponents(self, exps: tuple[int, ...]) -> tuple[int, ...]:
        out = [0] * self.domain.n
        for e, row in zip(exps, self.rows):
            if e:
                for j, v in enumerate(row):
                    if v:
                        out[j] += e * v
        return tuple(out)

    def after(self, inner: "MonomialMap") -> "MonomialMap":
        """Composite ``self o inner`` (first ``inner``, then ``self``)."""
        if inner.codomain != self.domain:
            raise ChartError("cannot compose: chart mismatch")
        rows = tuple(inner.map_exponents(row) for row in self.rows)
        return MonomialMap(inner.domain, self.codomain, rows)

    def as_dict(self) -> dict[str, dict[str, int]]:
        return {
            c.name: {d.name: e for d, e in zip(self.domain.coords, row) if e}
            for c, row in zip(self.codomain.coords, self.rows)
        }
