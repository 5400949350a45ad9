"""Exact arithmetic in the rational function field Q(q).

``q`` is a transcendental symbol, so it is never a root of unity.  Values are
stored as a reduced pair of integer polynomials ``num/den`` backed by FLINT's
``fmpz_poly``; the representation is canonical, so equality of field elements
is equality of stored coefficients.
"""

from __future__ import annotations

from fractions import Fraction

from flint import fmpz_poly

__all__ = ["QScalar", "qs_arith", "qs_qpow", "ZERO", "ONE", "Q"]

_P_ZERO = fmpz_poly([])
_P_ONE = fmpz_poly([1])


class QScalar:
    """An element of Q(q) in canonical ``num/den`` form.

    Invariants: ``den != 0``; ``gcd(num, den) == 1`` including integer content;
    the leading coefficient of ``den`` is positive; zero is ``0/1``.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1):
        num = _as_poly(num)
        den = _as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("QScalar with zero denominator")
        self.num, self.den = _reduce(num, den)
        self._hash = None

    @classmethod
    def _raw(cls, num, den):
        # caller guarantees canonical form
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @classmethod
    def qpow(cls, e: int) -> "QScalar":
        if e >= 0:
            return cls._raw(_monomial(e), _P_ONE)
        return cls._raw(_P_ONE, _monomial(-e))

    @classmethod
    def from_fraction(cls, value) -> "QScalar":
        value = Fraction(value)
        return cls(value.numerator, value.denominator)

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num == self.den

    def is_constant(self) -> bool:
        return self.num.degree() <= 0 and self.den.degree() == 0

    def as_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a rational constant")
        return Fraction(int(self.num.coeffs()[0]) if not self.num.is_zero() else 0,
                        int(self.den.coeffs()[0]))

    def laurent_terms(self) -> dict[int, int] | None:
        """Exponent -> integer coefficient when the value is a Laurent
        polynomial in q with integer coefficients, else None."""
        den = self.den.coeffs()
        shift = len(den) - 1
        if any(den[:-1]) or den[-1] != 1:
            return None
        return {i - shift: int(c) for i, c in enumerate(self.num.coeffs()) if c}

    def complexity(self) -> int:
        """Term count, used to choose elimination pivots."""
        return sum(1 for c in self.num.coeffs() if c) + sum(1 for c in self.den.coeffs() if c)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        if self.den == other.den:
            return _make(self.num + other.num, self.den)
        return _make(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return QScalar._raw(-self.num, self.den)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero() or other.num.is_zero():
            return ZERO
        if self.den.is_one() and other.den.is_one():
            return QScalar._raw(self.num * other.num, _P_ONE)
        return _make(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "QScalar":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(q)")
        num, den = self.den, self.num
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        return QScalar._raw(num, den)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        num, den = self.num ** e, self.den ** e
        return QScalar._raw(num, den)

    # -- comparison / hashing --------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(int(c) for c in self.num.coeffs()),
                               tuple(int(c) for c in self.den.coeffs())))
        return self._hash

    def __bool__(self):
        return not self.num.is_zero()

    def key(self) -> tuple:
        """Plain-int canonical key (stable across processes)."""
        return (tuple(int(c) for c in self.num.coeffs()),
                tuple(int(c) for c in self.den.coeffs()))

    # -- rendering --------------------------------------------------------

    def __repr__(self):
        return f"QScalar({self.exact()!r})"

    def __str__(self):
        return self.human()

    def human(self) -> str:
        """Readable form, e.g. ``q - q^-1`` or ``(q^2 + 1)/(q + 1)``."""
        if self.num.is_zero():
            return "0"
        lau = self.laurent_terms()
        if lau is not None:
            return _render_terms(lau, spaced=True)
        den = self.den.coeffs()
        shift = len(den) - 1
        if not any(den[:-1]):
            # den = c*q^shift with c > 1
            body = {i - shift: int(c) for i, c in enumerate(self.num.coeffs()) if c}
            text = _render_terms(body, spaced=True)
            if len(body) > 1:
                text = f"({text})"
            return f"{text}/{int(den[-1])}"
        return (f"({_render_terms(_poly_terms(self.num), spaced=True)})"
                f"/({_render_terms(_poly_terms(self.den), spaced=True)})")

    def exact(self) -> str:
        """Bracketed exact form ``(num)/(den)`` used in JSON reports."""
        return (f"({_render_terms(_poly_terms(self.num), spaced=False)})"
                f"/({_render_terms(_poly_terms(self.den), spaced=False)})")


def _as_poly(x):
    if isinstance(x, fmpz_poly):
        return x
    if isinstance(x, int):
        return fmpz_poly([x]) if x else _P_ZERO
    if isinstance(x, (list, tuple)):
        return fmpz_poly(list(x))
    raise TypeError(f"cannot build a polynomial from {type(x).__name__}")


def _monomial(e):
    return fmpz_poly([0] * e + [1])


def _reduce(num, den):
    if num.is_zero():
        return _P_ZERO, _P_ONE
    g = num.gcd(den)
    if not g.is_one():
        num = num // g
        den = den // g
    if den.leading_coefficient() < 0:
        num, den = -num, -den
    return num, den


def _make(num, den):
    if num.is_zero():
        return ZERO
    if den.is_one():
        return QScalar._raw(num, den)
    return QScalar._raw(*_reduce(num, den))


def _coerce(x):
    if isinstance(x, QScalar):
        return x
    if isinstance(x, int):
        return QScalar._raw(fmpz_poly([x]) if x else _P_ZERO, _P_ONE)
    if isinstance(x, Fraction):
        return QScalar.from_fraction(x)
    return NotImplemented


def _poly_terms(p):
    return {i: int(c) for i, c in enumerate(p.coeffs()) if c}


def _render_terms(terms: dict[int, int], spaced: bool) -> str:
    if not terms:
        return "0"
    out = []
    for e in sorted(terms, reverse=True):
        c = terms[e]
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            power = "q" if e == 1 else f"q^{e}"
            body = power if mag == 1 else f"{mag}*{power}"
        if not out:
            out.append(("-" if c < 0 else "") + body)
        elif spaced:
            out.append((" - " if c < 0 else " + ") + body)
        else:
            out.append(("-" if c < 0 else "+") + body)
    return "".join(out)


ZERO = QScalar._raw(_P_ZERO, _P_ONE)
ONE = QScalar._raw(_P_ONE, _P_ONE)
Q = QScalar._raw(fmpz_poly([0, 1]), _P_ONE)


def qs_arith(op: str, a: QScalar, b: QScalar) -> QScalar:
    """Field operation by name: ``add``, ``sub``, ``mul`` or ``div``."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def qs_qpow(e: int) -> QScalar:
    return QScalar.qpow(e)


def _split_sign(c: QScalar) -> tuple[bool, QScalar]:
    lead = c.num.leading_coefficient()
    return (lead < 0, -c if lead < 0 else c)


def render_linear(terms, sep: str = "*") -> str:
    """Render ``[(coeff, body), ...]`` as a signed sum.

    An empty ``body`` is a constant term.  Multi-term coefficients are
    parenthesised so the output parses back unchanged.
    """
    parts = []
    for coeff, body in terms:
        neg, mag = _split_sign(coeff)
        if not body:
            text = mag.human()
            if " " in text or "/" in text:
                text = f"({text})"
        elif mag.is_one():
            text = body
        else:
            text = mag.human()
            if " " in text or "/" in text:
                text = f"({text})"
            text = f"{text}{sep}{body}"
        if not parts:
            parts.append(("-" if neg else "") + text)
        else:
            parts.append((" - " if neg else " + ") + text)
    return "".join(parts) if parts else "0"
