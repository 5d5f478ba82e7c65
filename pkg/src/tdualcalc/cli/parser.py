"""Expression grammar for functions, forms and spinors on a chart.

Tokens: ``dlr1`` ``dth1`` ``dthh1`` ``dps1`` ``dx1`` ``dlx1`` ``dlz1`` ``dlzb1``
``dz1`` ``dzb1``, coordinates ``r1`` ``x1`` ``z1`` ``zb1``, Fourier modes
``E1[k]``, parameters ``@name``, ``i``, integers, ``exp(...)``.

``^`` is a power when it follows a power-able factor (coordinate, mode,
parameter, ``i`` or a parenthesised scalar) and is followed by an optional
``-`` and an integer; otherwise it is the wedge product.  ``*`` also wedges
(it is ordinary multiplication on functions) and ``/`` divides by an
invertible scalar monomial.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..coeffring import FnElem, RingError, signature
from ..coords import ANGLE, LOGREAL, RADIAL, REAL, Chart, bar_name, mode_token
from ..forms import Form, exp_form, from_polar
from ..gauss import QI


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0, expected=()):
        self.line = text.count("\n", 0, pos) + 1
        self.column = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.expected = tuple(sorted(set(expected)))
        self.message = message
        where = f"line {self.line}, column {self.column}"
        extra = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{where}: {message}{extra}")


@dataclass(frozen=True)
class Token:
    kind: str  # int, ident, param, op, end
    text: str
    pos: int


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(@[A-Za-z_][A-Za-z0-9_]*)|([-+*/^()\[\]]))")


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            bad = len(text) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", text, bad)
        start = m.start(m.lastindex)
        kind = ("int", "ident", "param", "op")[m.lastindex - 1]
        out.append(Token(kind, m.group(m.lastindex), start))
        pos = m.end()
    out.append(Token("end", "", len(text)))
    return out


class _Symbols:
    """Identifier table of a polar chart."""

    def __init__(self, chart: Chart):
        self.chart = chart
        self.sig = signature(chart)
        self.funcs: dict[str, FnElem] = {}
        self.covs: dict[str, Form] = {}
        self.modes: dict[str, int] = {}
        for k, c in enumerate(chart.coords):
            basis = Form.basis(chart, k)
            if c.kind == ANGLE:
                self.modes[mode_token(c.name)] = k
                self.covs["d" + c.name] = basis
                continue
            var = self._mono(k, 1)
            if c.kind == RADIAL:
                self.funcs[c.name] = var
                self.covs["dl" + c.name] = basis
                self.covs["d" + c.name] = basis.scale(var)
                if c.cname and len(chart.pairs[k]) == 1:
                    j = chart.primary_angle(k)
                    dth = Form.basis(chart, j)
                    z = var * self._mono(j, 1)
                    zb = var * self._mono(j, -1)
                    dlz = basis + dth.scale(QI(0, 1))
                    dlzb = basis - dth.scale(QI(0, 1))
                    bar = bar_name(c.cname)
                    self.funcs[c.cname] = z
                    self.funcs[bar] = zb
                    self.covs["dl" + c.cname] = dlz
                    self.covs["dl" + bar] = dlzb
                    self.covs["d" + c.cname] = dlz.scale(z)
                    self.covs["d" + bar] = dlzb.scale(zb)
            elif c.kind == LOGREAL:
                self.funcs[c.name] = var
                self.covs["dl" + c.name] = basis
                self.covs["d" + c.name] = basis.scale(var)
            elif c.kind == REAL:
                self.funcs[c.name] = var
                self.covs["d" + c.name] = basis

    def _mono(self, k: int, e: int) -> FnElem:
        vec = [0] * self.chart.n
        vec[k] = e
        return FnElem.mono(self.sig, vec)

    def mode(self, k: int, e: int) -> FnElem:
        return self._mono(k, e)

    def known(self) -> list[str]:
        return sorted(set(self.funcs) | set(self.covs) | {m + "[k]" for m in self.modes})


class _Parser:
    def __init__(self, text: str, chart: Chart):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0
        self.sym = _Symbols(chart.polar())
        self.chart = self.sym.chart

    # token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def advance(self) -> Token:
        t = self.tok
        self.pos += 1
        return t

    def error(self, msg: str, expected=(), tok: Token | None = None):
        tok = tok or self.tok
        return ParseError(msg, self.text, tok.pos, expected)

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind not in ("op", "ident"):
            raise self.error(f"unexpected {self.tok.text or 'end of input'!r}", (text,))
        return self.advance()

    def scalar(self, f) -> Form:
        if isinstance(f, FnElem):
            return Form.scalar(self.chart, f)
        return Form.scalar(self.chart, FnElem.const(self.sym.sig, f))

    # grammar

    def parse(self) -> Form:
        value = self.expr()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}", ("+", "-", "*", "^", "/", "end of input"))
        return value

    def expr(self) -> Form:
        sign = 1
        if self.tok.text in "+-" and self.tok.kind == "op":
            sign = -1 if self.advance().text == "-" else 1
        value = self.term()
        if sign < 0:
            value = -value
        while self.tok.kind == "op" and self.tok.text in ("+", "-"):
            op = self.advance().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Form:
        value = self.unary()
        while self.tok.kind == "op" and self.tok.text in ("*", "^", "/"):
            op_tok = self.advance()
            rhs = self.unary()
            if op_tok.text == "/":
                value = self._divide(value, rhs, op_tok)
            else:
                value = value.wedge(rhs)
        return value

    def _divide(self, num: Form, den: Form, tok: Token) -> Form:
        if set(den.terms) != {()} or not den.terms[()].is_monomial():
            raise self.error("can only divide by a nonzero scalar monomial", tok=tok)
        try:
            inv = den.terms[()].inverse()
        except RingError as exc:
            raise self.error(str(exc), tok=tok) from exc
        return num.scale(inv)

    def unary(self) -> Form:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            return -self.unary()
        return self.power()

    def _power_follows(self) -> bool:
        if not (self.tok.kind == "op" and self.tok.text == "^"):
            return False
        nxt = self.peek()
        if nxt.kind == "int":
            return True
        return nxt.text == "-" and self.peek(2).kind == "int"

    def power(self) -> Form:
        start = self.tok
        value, powerable = self.atom()
        if powerable and self._power_follows():
            self.advance()
            neg = False
            if self.tok.text == "-":
                self.advance()
                neg = True
            n = int(self.advance().text)
            if set(value.terms) - {()}:
                raise self.error("only scalars can be raised to a power", tok=start)
            f = value.terms.get((), FnElem.zero(self.sym.sig))
            try:
                value = self.scalar(f ** (-n if neg else n))
            except RingError as exc:
                raise self.error(str(exc), tok=start) from exc
        return value

    def atom(self) -> tuple[Form, bool]:
        t = self.tok
        if t.kind == "int":
            self.advance()
            return self.scalar(int(t.text)), False
        if t.kind == "param":
            self.advance()
            name = t.text[1:]
            return self.scalar(FnElem.mono(self.sym.sig, [0] * self.chart.n, 1, [(name, 1)])), True
        if t.kind == "op" and t.text == "(":
            self.advance()
            value = self.expr()
            self.expect(")")
            return value, set(value.terms) <= {()}
        if t.kind == "ident":
            return self.ident()
        raise self.error(f"unexpected {t.text or 'end of input'!r}", ("number", "identifier", "@param", "(", "-"))

    def ident(self) -> tuple[Form, bool]:
        t = self.advance()
        name = t.text
        sym = self.sym
        if name == "i":
            return self.scalar(QI(0, 1)), True
        if name == "exp":
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            try:
                return exp_form(arg), False
            except ValueError as exc:
                raise self.error(str(exc), tok=t) from exc
        if name in sym.funcs:
            return self.scalar(sym.funcs[name]), True
        if name in sym.covs:
            return sym.covs[name], False
        if name in sym.modes:
            self.expect("[")
            neg = False
            if self.tok.text == "-":
                self.advance()
                neg = True
            if self.tok.kind != "int":
                raise self.error("expected an integer mode", ("integer",))
            e = int(self.advance().text)
            self.expect("]")
            return self.scalar(sym.mode(sym.modes[name], -e if neg else e)), True
        raise self.error(self._why_unknown(name), sym.known(), tok=t)

    def _why_unknown(self, name: str) -> str:
        ch = self.chart
        if name.startswith("dl") and ch.has(name[2:]):
            kind = ch.coords[ch.index(name[2:])].kind
            return f"{name!r}: no log differential for a coordinate of kind {kind!r} on this chart"
        if ch.has(name) and ch.coords[ch.index(name)].kind == ANGLE:
            return f"{name!r} is an angle; use its Fourier mode {mode_token(name)}[k]"
        m = re.fullmatch(r"(d?l?)([A-Za-z]+)(\d+)", name)
        if m:
            return f"unknown coordinate index in {name!r} for chart {ch}"
        return f"unknown identifier {name!r}"


def parse_form(text: str, chart: Chart) -> Form:
    """Parse ``text`` into a form on ``chart`` (converted to its frame)."""
    value = _Parser(text, chart).parse()
    if not chart.is_polar:
        return from_polar(value, chart.kind)
    if value.chart != chart:
        return Form(chart, value.terms)
    return value


def parse_fn(text: str, chart: Chart) -> FnElem:
    value = parse_form(text, chart.polar())
    if set(value.terms) - {()}:
        raise ParseError("expected a function, got a form of positive degree", text, 0)
    return value.terms.get((), FnElem.zero(signature(chart)))


__all__ = ["ParseError", "Token", "parse_fn", "parse_form", "tokenize"]
