"""Expression grammar shared by the CLI and the JSON formats.

::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor | factor-starting-with-'[')*
    factor := '-' factor | atom ('^' ['-'] INT)?
    atom   := INT | 'q' | 'u' | 'y' | 'x[' INT ',' INT ']'
            | '[' INT (',' INT)* ']' | '(' expr ')'

Adjacent Plücker letters multiply (``[1,3][1,4]``).  A bracket holding a
single multi-digit integer is read digit by digit when n <= 9 (``[13]``).
Division is by scalars only.  The ring is chosen by the caller, never
inferred.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .grassmann import GrassShape, LocalizedElement, plucker_index
from .qmatrix import AlgebraShape, NCPoly, generator, quantum_minor
from .scalar import ONE, Q, QScalar

__all__ = ["ParseError", "RingContext", "parse_expr", "parse_scalar", "render"]


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.column = col
        self.message = message


@dataclass(frozen=True)
class RingContext:
    """Which ring an expression lives in: ``scalar``, ``qm``, ``grass`` or ``t``."""

    kind: str
    grass: GrassShape | None = None
    matrix: AlgebraShape | None = None

    @classmethod
    def scalar(cls):
        return cls("scalar")

    @classmethod
    def qm(cls, m: int, n: int):
        return cls("qm", matrix=AlgebraShape(m, n))

    @classmethod
    def grass_ring(cls, k: int, n: int):
        return cls("grass", grass=GrassShape(k, n))

    @classmethod
    def t(cls, k: int, n: int):
        g = GrassShape(k, n)
        return cls("t", grass=g, matrix=g.dehom_shape)

    @property
    def n_for_compact(self) -> int:
        if self.grass is not None:
            return self.grass.n
        if self.matrix is not None:
            return self.matrix.n
        return 0


_TOKEN = re.compile(r"\s*(?:(\d+)|(.))", re.S)


def _tokenize(text: str):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(1) is not None:
            toks.append(("INT", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            ch = m.group(2)
            if ch.isspace():
                pos = m.end()
                continue
            if ch not in "qxuy[](),+-*/^":
                raise ParseError(f"unexpected character {ch!r}", text, m.start(2))
            toks.append((ch, ch, m.start(2)))
        pos = m.end()
    toks.append(("EOF", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, ctx: RingContext):
        self.text = text
        self.ctx = ctx
        self.toks = _tokenize(text)
        self.i = 0

    # -- token helpers --

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            want = "end of input" if kind == "EOF" else repr(kind)
            got = "end of input" if tok[0] == "EOF" else repr(tok[1])
            raise ParseError(f"expected {want}, found {got}", self.text, tok[2])
        self.i += 1
        return tok

    def error(self, msg, pos):
        return ParseError(msg, self.text, pos)

    # -- grammar --

    def parse(self):
        val = self.expr()
        self.take("EOF")
        return val

    def expr(self):
        val = self.term()
        while self.peek()[0] in "+-":
            op, _, pos = self.take()
            rhs = self.term()
            val = self.combine(val, rhs, op, pos)
        return val

    def term(self):
        val = self.factor()
        while True:
            kind, _, pos = self.peek()
            if kind in "*/":
                self.take()
                rhs = self.factor()
                val = self.combine(val, rhs, kind, pos)
            elif kind == "[":
                rhs = self.factor()
                val = self.combine(val, rhs, "*", pos)
            else:
                return val

    def factor(self):
        if self.peek()[0] == "-":
            _, _, pos = self.take()
            return self.combine(ONE * -1, self.factor(), "*", pos)
        base_pos = self.peek()[2]
        val = self.atom()
        if self.peek()[0] == "^":
            _, _, pos = self.take()
            sign = 1
            if self.peek()[0] == "-":
                self.take()
                sign = -1
            e = sign * int(self.take("INT")[1])
            val = self.power(val, e, base_pos)
        return val

    def atom(self):
        kind, text, pos = self.take()
        ctx = self.ctx
        if kind == "INT":
            return ONE * int(text)
        if kind == "q":
            return Q
        if kind == "(":
            val = self.expr()
            self.take(")")
            return val
        if kind == "x":
            self.take("[")
            i = int(self.take("INT")[1])
            self.take(",")
            j = int(self.take("INT")[1])
            self.take("]")
            return self.wrap(lambda: self.gen_x(i, j), pos)
        if kind == "[":
            entries = [self.take("INT")]
            while self.peek()[0] == ",":
                self.take()
                entries.append(self.take("INT"))
            self.take("]")
            if len(entries) == 1 and len(entries[0][1]) > 1 and ctx.n_for_compact <= 9:
                cols = [int(ch) for ch in entries[0][1]]
            else:
                cols = [int(t[1]) for t in entries]
            return self.wrap(lambda: self.plucker(cols), pos)
        if kind == "u":
            return self.wrap(self.u_elem, pos)
        if kind == "y":
            if ctx.kind != "t":
                raise self.error(f"y is not available in ring {ctx.kind!r}", pos)
            from .dehom import TElement

            return TElement.y_power(ctx.matrix, 1)
        if kind == "EOF":
            raise self.error("unexpected end of input", pos)
        raise self.error(f"unexpected {text!r}", pos)

    # -- ring-specific atoms --

    def wrap(self, fn, pos):
        try:
            return fn()
        except ParseError:
            raise
        except (ValueError, IndexError) as exc:
            raise self.error(str(exc), pos) from None

    def gen_x(self, i, j):
        ctx = self.ctx
        if ctx.kind == "qm":
            return generator(ctx.matrix, i, j)
        if ctx.kind == "t":
            from .dehom import TElement

            return TElement.gen(ctx.matrix, i, j)
        if ctx.kind == "grass":
            from .dehom import minor_to_plucker

            L, e = minor_to_plucker((i,), (j,), ctx.grass)
            return LocalizedElement.word(ctx.grass, [L], e)
        raise ValueError("generators x[i,j] need a ring (qm, grass or t)")

    def plucker(self, cols):
        ctx = self.ctx
        if ctx.kind == "qm":
            shape = ctx.matrix
            if len(cols) != shape.m:
                raise ValueError(f"Plücker index in O_q(M({shape.m},{shape.n})) needs {shape.m} entries")
            return quantum_minor(range(1, shape.m + 1), cols, shape)
        if ctx.kind == "grass":
            return LocalizedElement.letter(ctx.grass, cols)
        if ctx.kind == "t":
            from .dehom import dehom_forward

            return dehom_forward(LocalizedElement.letter(ctx.grass, cols))
        raise ValueError("Plücker coordinates need a ring (qm, grass or t)")

    def u_elem(self):
        ctx = self.ctx
        if ctx.kind == "qm":
            shape = ctx.matrix
            if shape.m > shape.n:
                raise ValueError("u = [1..m] needs m <= n")
            idx = range(1, shape.m + 1)
            return quantum_minor(idx, idx, shape)
        if ctx.kind == "grass":
            return LocalizedElement.u_power(ctx.grass, 1)
        if ctx.kind == "t":
            from .dehom import TElement

            return TElement.y_power(ctx.matrix, 1)
        raise ValueError("u needs a ring (qm, grass or t)")

    # -- arithmetic --

    def promote(self, c: QScalar):
        ctx = self.ctx
        if ctx.kind == "qm":
            return NCPoly.constant(ctx.matrix, c)
        if ctx.kind == "grass":
            return LocalizedElement.scalar(ctx.grass, c)
        if ctx.kind == "t":
            from .dehom import TElement

            return TElement.scalar(ctx.matrix, c)
        return c

    def combine(self, a, b, op, pos):
        sa, sb = isinstance(a, QScalar), isinstance(b, QScalar)
        try:
            if op == "/":
                if not sb:
                    raise self.error("division is only by scalars", pos)
                return a * b.inverse() if not sa else a / b
            if op == "*":
                if sa and sb:
                    return a * b
                if sa:
                    return b.scale(a)
                if sb:
                    return a.scale(b)
                return a * b
            if sa != sb:
                a = self.promote(a) if sa else a
                b = self.promote(b) if sb else b
            return a + b if op == "+" else a - b
        except ZeroDivisionError:
            raise self.error("division by zero", pos) from None

    def power(self, val, e, pos):
        if isinstance(val, QScalar):
            if e < 0 and not val:
                raise self.error("division by zero", pos)
            return val ** e
        if e < 0 and isinstance(val, NCPoly):
            raise self.error("negative powers are not available in ring 'qm' (no u^-1)", pos)
        try:
            return val ** e
        except ValueError as exc:
            raise self.error(str(exc), pos) from None


def parse_expr(text: str, ctx: RingContext):
    """Parse ``text`` into an exact value of the ring ``ctx``."""
    val = _Parser(text, ctx).parse()
    if isinstance(val, QScalar) and ctx.kind != "scalar":
        val = _Parser(text, ctx).promote(val)
    return val


def parse_scalar(text: str) -> QScalar:
    return parse_expr(text, RingContext.scalar())


def render(value) -> str:
    if isinstance(value, QScalar):
        return value.human()
    return value.render()
