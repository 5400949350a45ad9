"""The Laurent extension T = O_q(M(k,p))[y, y^-1; sigma] and its
identification with O_q(G(k,n))[[u]^-1].

``sigma`` scales every x_ij by q, so ``y x_ij = q x_ij y`` and a PBW
monomial m of degree d satisfies ``y m = q^d m y``.  TElement keeps y-powers
on the right of each term.
"""

from __future__ import annotations

from functools import lru_cache

from .grassmann import GrassShape, LocalizedElement, d_value, loc_mul, plucker_index
from .qmatrix import AlgebraShape, NCPoly, _acc, engine, quantum_minor, transpose_map
from .scalar import ONE, QScalar, render_linear

__all__ = [
    "TElement",
    "minor_to_plucker",
    "plucker_to_minor",
    "belongs_row",
    "belongs_col",
    "dehom_forward",
    "dehom_backward",
    "t_grading_y",
    "t_grading_minor",
    "membership_filter",
    "y_components",
    "minor_components",
    "distinguished_minor",
    "transpose_t",
]


class TElement:
    """Element of T: (PBW monomial over (k,p), y-power) -> coefficient."""

    __slots__ = ("shape", "terms")

    def __init__(self, shape: AlgebraShape, terms: dict | None = None):
        self.shape = shape
        self.terms = {key: c for key, c in (terms or {}).items() if c}

    @classmethod
    def from_ncpoly(cls, a: NCPoly, ypow: int = 0) -> "TElement":
        return cls(a.shape, {(m, ypow): c for m, c in a.terms.items()})

    @classmethod
    def y_power(cls, shape: AlgebraShape, e: int, coeff=ONE) -> "TElement":
        return cls(shape, {((), e): ONE * coeff})

    @classmethod
    def scalar(cls, shape: AlgebraShape, c) -> "TElement":
        return cls.y_power(shape, 0, c)

    @classmethod
    def gen(cls, shape: AlgebraShape, i: int, j: int) -> "TElement":
        return cls(shape, {((shape.flat(i, j),), 0): ONE})

    def items(self):
        return sorted(self.terms.items())

    def is_zero(self) -> bool:
        return not self.terms

    def x_part(self) -> NCPoly:
        """The O_q(M(k,p)) part; only valid when every y-power is zero."""
        if any(e for (_, e) in self.terms):
            raise ValueError("element has nonzero y-powers")
        return NCPoly(self.shape, {m: c for (m, _), c in self.terms.items()})

    def _check(self, other):
        if not isinstance(other, TElement):
            raise TypeError(f"expected TElement, got {type(other).__name__}")
        if other.shape != self.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")

    def __add__(self, other):
        if isinstance(other, (int, QScalar)):
            other = TElement.scalar(self.shape, other)
        self._check(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            _acc(out, key, c)
        return TElement(self.shape, out)

    __radd__ = __add__

    def __neg__(self):
        return TElement(self.shape, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TElement":
        c = ONE * c
        return TElement(self.shape, {k: c * v for k, v in self.terms.items()} if c else {})

    def __mul__(self, other):
        if isinstance(other, (int, QScalar)):
            return self.scale(other)
        self._check(other)
        eng = engine(self.shape)
        out: dict = {}
        for (m2, b), c2 in other.terms.items():
            deg2 = len(m2)
            for (m1, a), c1 in self.terms.items():
                c = c1 * c2
                if a and deg2:
                    c = c * QScalar.qpow(a * deg2)
                for m, cm in eng.mul_mono_mono(m1, m2).items():
                    _acc(out, (m, a + b), c * cm)
        return TElement(self.shape, out)

    def __rmul__(self, other):
        if isinstance(other, (int, QScalar)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            if len(self.terms) != 1:
                raise ValueError("only c * y^e is invertible here")
            (m, s), c = next(iter(self.terms.items()))
            if m:
                raise ValueError("only c * y^e is invertible here")
            return TElement(self.shape, {((), s * e): c ** e})
        out = TElement.scalar(self.shape, 1)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, QScalar)):
            other = TElement.scalar(self.shape, other)
        if not isinstance(other, TElement):
            return NotImplemented
        return self.shape == other.shape and self.terms == other.terms

    __hash__ = None

    def render(self) -> str:
        shape = self.shape
        items = []
        for (m, e), c in self.items():
            parts = ["x[{},{}]".format(*shape.unflat(g)) for g in m]
            if e:
                parts.append("y" if e == 1 else f"y^{e}")
            items.append((c, "*".join(parts)))
        return render_linear(items)

    __str__ = render

    def to_json(self) -> list:
        """(exponent vector, ypow, exact coefficient) triples."""
        vec = NCPoly(self.shape)
        return [[list(vec.exponents(m)), e, c.exact()] for (m, e), c in self.items()]

    def __repr__(self):
        return f"TElement({self.shape.m}x{self.shape.n}: {self.render()})"


def _check_minor(I, J, shape: GrassShape):
    I = tuple(sorted(I))
    J = tuple(sorted(J))
    if len(I) != len(J):
        raise ValueError(f"minor needs |I| = |J|, got {len(I)} and {len(J)}")
    if len(set(I)) != len(I) or len(set(J)) != len(J):
        raise ValueError("minor index sets must not repeat entries")
    if I and (I[0] < 1 or I[-1] > shape.k):
        raise IndexError(f"row set {list(I)} out of bounds 1..{shape.k}")
    if J and (J[0] < 1 or J[-1] > shape.p):
        raise IndexError(f"column set {list(J)} out of bounds 1..{shape.p}")
    return I, J


def minor_to_plucker(I, J, shape: GrassShape) -> tuple[tuple[int, ...], int]:
    """[I|J] = [{1..k} minus (k+1-I), together with k+J] * [u]^-1.

    Returns the Plücker index and the [u]-power (always -1).
    """
    I, J = _check_minor(I, J, shape)
    k = shape.k
    flipped = {k + 1 - i for i in I}
    L = sorted([i for i in range(1, k + 1) if i not in flipped] + [k + j for j in J])
    return tuple(L), -1


def plucker_to_minor(L, shape: GrassShape) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], int]:
    """[L] = [I|J] * y with I = (k+1) - ({1..k} minus L), J = L_{>k} - k.

    For L = u the minor is empty, i.e. the unit.  Returns ((I, J), 1).
    """
    L = plucker_index(L, shape)
    k = shape.k
    low = set(i for i in L if i <= k)
    I = tuple(sorted(k + 1 - i for i in range(1, k + 1) if i not in low))
    J = tuple(i - k for i in L if i > k)
    return (I, J), 1


def belongs_row(i: int, L, shape: GrassShape) -> bool:
    """Whether i is a row of the minor attached to [L]: (k+1) - i not in L."""
    return (shape.k + 1 - i) not in L


def belongs_col(j: int, L, shape: GrassShape) -> bool:
    """Whether j is a column of the minor attached to [L]: j + k in L."""
    return (j + shape.k) in L


@lru_cache(maxsize=None)
def _letter_image(rel, shape: GrassShape, L: tuple) -> TElement:
    (I, J), _ = plucker_to_minor(L, shape)
    minor = quantum_minor(I, J, shape.dehom_shape)
    return TElement.from_ncpoly(minor, 1)


def dehom_forward(a: LocalizedElement) -> TElement:
    """Letters [L] -> [I|J] y and [u] -> y, extended multiplicatively."""
    from .qmatrix import current_relations

    shape = a.shape
    rel = current_relations()
    ts = shape.dehom_shape
    out = TElement(ts)
    for (word, e), c in a.terms.items():
        t = TElement.y_power(ts, 0, c)
        for L in word:
            t = t * _letter_image(rel, shape, L)
        if e:
            t = t * TElement.y_power(ts, e)
        out = out + t
    return out


def dehom_backward(t: TElement, shape: GrassShape) -> LocalizedElement:
    """x_ij -> [L_ij][u]^-1 and y -> [u], extended multiplicatively."""
    if t.shape != shape.dehom_shape:
        raise ValueError(f"TElement shape {t.shape} does not match {shape}")
    gens = {}
    out = LocalizedElement(shape)
    for (m, s), c in t.terms.items():
        acc = LocalizedElement.scalar(shape, c)
        for g in m:
            img = gens.get(g)
            if img is None:
                i, j = t.shape.unflat(g)
                L, e = minor_to_plucker((i,), (j,), shape)
                img = gens[g] = LocalizedElement.word(shape, [L], e)
            acc = loc_mul(acc, img, shape)
        if s:
            acc = loc_mul(acc, LocalizedElement.u_power(shape, s), shape)
        out = out + acc
    return out


def t_grading_y(mono) -> int:
    """Weight i with y m y^-1 = q^i m: the total x-degree."""
    m, _ = mono
    return len(m)


def _require_minor_grading(shape: GrassShape):
    if 2 * shape.k > shape.n:
        raise ValueError(f"{shape}: the minor [1..k | p+1-k..p] needs 2k <= n")


def t_grading_minor(mono, shape: GrassShape) -> int:
    """Weight i with [I|J] m = q^-i m [I|J] for [I|J] = [1..k | p+1-k..p].

    Each x_ij with j < p+1-k contributes 1, columns j >= p+1-k contribute 0,
    and y contributes k.
    """
    _require_minor_grading(shape)
    m, s = mono
    cut = shape.p + 1 - shape.k
    ts = shape.dehom_shape
    return sum(1 for g in m if ts.unflat(g)[1] < cut) + s * shape.k


def distinguished_minor(shape: GrassShape) -> TElement:
    _require_minor_grading(shape)
    k, p = shape.k, shape.p
    minor = quantum_minor(range(1, k + 1), range(p + 1 - k, p + 1), shape.dehom_shape)
    return TElement.from_ncpoly(minor)


def y_components(t: TElement) -> dict[int, TElement]:
    parts: dict = {}
    for key, c in t.terms.items():
        parts.setdefault(t_grading_y(key), {})[key] = c
    return {w: TElement(t.shape, d) for w, d in sorted(parts.items())}


def minor_components(t: TElement, shape: GrassShape) -> dict[int, TElement]:
    parts: dict = {}
    for key, c in t.terms.items():
        parts.setdefault(t_grading_minor(key, shape), {})[key] = c
    return {w: TElement(t.shape, d) for w, d in sorted(parts.items())}


def membership_filter(t: TElement, shape: GrassShape) -> bool:
    """Whether t lies in (T^(0) u T^(1)) n T_1.

    When it does, every monomial has y-power zero, i.e. t is in O_q(M(k,p));
    this conclusion is checked here rather than assumed.
    """
    if shape.k < 2:
        raise ValueError("membership filter needs k >= 2")
    if t.is_zero():
        return True
    if set(y_components(t)) != {1}:
        return False
    weights = set(minor_components(t, shape))
    if weights not in ({0}, {1}):
        return False
    if any(s for (_, s) in t.terms):
        raise AssertionError(f"membership lemma violated by {t}")
    return True


def transpose_t(t: TElement) -> TElement:
    """Extend x_ij -> x'_ji to T(k,p) -> T(p,k), fixing y."""
    out = None
    for (m, s), c in t.terms.items():
        img = transpose_map(NCPoly(t.shape, {m: c}))
        piece = TElement.from_ncpoly(img, s)
        out = piece if out is None else out + piece
    return out if out is not None else TElement(t.shape.transposed())
