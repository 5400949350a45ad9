"""The algebra O_q(M(m,n)) of quantum matrices in its PBW basis.

A PBW monomial is stored as a nondecreasing tuple of flat generator indices,
``g = (i-1)*n + (j-1)``, so tuple order on the letters is the lexicographic
order on ``(i, j)``.  This carries the same information as an exponent vector
(see :meth:`NCPoly.exponents`) and is what the rewriting works on.

Two product engines share one table of pairwise rules:

* :func:`word_normal_form` rewrites a word by repeatedly fixing one
  out-of-order adjacent pair (leftmost by default);
* :func:`nc_mul` inserts generators into PBW monomials one at a time
  (memoised), which is the fast path used by everything downstream.

Comparing the two is how confluence gets tested instead of assumed.
"""

from __future__ import annotations

import contextlib
import contextvars
import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations

from .scalar import ONE, Q, ZERO, QScalar, render_linear

__all__ = [
    "AlgebraShape",
    "Relations",
    "DEFAULT_RELATIONS",
    "NCPoly",
    "use_relations",
    "current_relations",
    "word_normal_form",
    "nc_mul",
    "generator",
    "quantum_determinant",
    "quantum_minor",
    "transpose_map",
    "inversions",
]


@dataclass(frozen=True)
class AlgebraShape:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError(f"shape ({self.m},{self.n}) needs m, n >= 1")

    def flat(self, i: int, j: int) -> int:
        if not (1 <= i <= self.m and 1 <= j <= self.n):
            raise IndexError(f"x[{i},{j}] is out of bounds for shape ({self.m},{self.n})")
        return (i - 1) * self.n + (j - 1)

    def unflat(self, g: int) -> tuple[int, int]:
        i, j = divmod(g, self.n)
        return i + 1, j + 1

    @property
    def ngens(self) -> int:
        return self.m * self.n

    def transposed(self) -> "AlgebraShape":
        return AlgebraShape(self.n, self.m)


@dataclass(frozen=True)
class Relations:
    """Constants of the defining relations.

    ``row``:  x_ij x_il = row * x_il x_ij   (j < l)
    ``col``:  x_ij x_kj = col * x_kj x_ij   (i < k)
    ``diag``: x_ij x_kl - x_kl x_ij = diag * x_il x_kj   (i < k, j < l)

    Only the default values define O_q(M(m,n)); other values exist so the
    verification harness can prove it notices a broken relation.
    """

    row: QScalar = Q
    col: QScalar = Q
    diag: QScalar = Q - Q.inverse()


DEFAULT_RELATIONS = Relations()
_RELATIONS: contextvars.ContextVar[Relations] = contextvars.ContextVar(
    "qgrass_relations", default=DEFAULT_RELATIONS
)


def current_relations() -> Relations:
    return _RELATIONS.get()


@contextlib.contextmanager
def use_relations(rel: Relations):
    token = _RELATIONS.set(rel)
    try:
        yield rel
    finally:
        _RELATIONS.reset(token)


class _Engine:
    """Memoised rewriting tables for one (shape, relations) pair.

    Tables are only ever extended with deterministic values, so concurrent
    readers see either a miss or the final entry.
    """

    def __init__(self, shape: AlgebraShape, rel: Relations):
        self.shape = shape
        self.rel = rel
        self._row_inv = rel.row.inverse()
        self._col_inv = rel.col.inverse()
        self._rules: dict[tuple[int, int], tuple] = {}
        self._mono_gen: dict[tuple[tuple, int], dict] = {}
        self._mono_mono: dict[tuple[tuple, tuple], dict] = {}

    def rule(self, b: int, a: int) -> tuple:
        """Rewrite the out-of-order pair ``x_b x_a`` (b > a) into ordered words."""
        key = (b, a)
        hit = self._rules.get(key)
        if hit is not None:
            return hit
        n = self.shape.n
        i, j = divmod(a, n)
        k, l = divmod(b, n)
        if i == k:
            out = ((self._row_inv, (a, b)),)
        elif j == l:
            out = ((self._col_inv, (a, b)),)
        elif l < j:
            out = ((ONE, (a, b)),)
        else:
            # i < k, j < l: x_kl x_ij = x_ij x_kl - diag x_il x_kj, and
            # (i,l) < (k,j) so the correction term is already ordered.
            out = ((ONE, (a, b)), (-self.rel.diag, (i * n + l, k * n + j)))
        self._rules[key] = out
        return out

    def mul_mono_gen(self, m: tuple, g: int) -> dict:
        if not m or m[-1] <= g:
            return {m + (g,): ONE}
        key = (m, g)
        hit = self._mono_gen.get(key)
        if hit is not None:
            return hit
        rest = m[:-1]
        out: dict = {}
        for c, (a, b) in self.rule(m[-1], g):
            for m1, c1 in self.mul_mono_gen(rest, a).items():
                c1 = c * c1
                for m2, c2 in self.mul_mono_gen(m1, b).items():
                    _acc(out, m2, c1 * c2)
        self._mono_gen[key] = out
        return out

    def mul_mono_mono(self, ma: tuple, mb: tuple) -> dict:
        if not mb:
            return {ma: ONE}
        if not ma or ma[-1] <= mb[0]:
            return {ma + mb: ONE}
        key = (ma, mb)
        hit = self._mono_mono.get(key)
        if hit is not None:
            return hit
        cur = {ma: ONE}
        for g in mb:
            nxt: dict = {}
            for m, c in cur.items():
                for m2, c2 in self.mul_mono_gen(m, g).items():
                    _acc(nxt, m2, c * c2)
            cur = nxt
        self._mono_mono[key] = cur
        return cur

    def rewrite_word(self, word: tuple, pick) -> dict:
        # Termination: the diagonal rule's correction x_il x_kj is already
        # ordered and has fewer column inversions than x_kl x_ij, so the
        # multiset of column-index inversions decreases lexicographically;
        # the other rules are plain swaps that remove one inversion.
        pending = {word: ONE}
        done: dict = {}
        while pending:
            w, c = pending.popitem()
            if not c:
                continue
            pos = pick(w)
            if pos is None:
                _acc(done, w, c)
                continue
            for c2, pair in self.rule(w[pos], w[pos + 1]):
                nw = w[:pos] + pair + w[pos + 2:]
                _acc(pending, nw, c * c2)
        return {m: c for m, c in done.items() if c}


def _acc(d: dict, key, c: QScalar) -> None:
    prev = d.get(key)
    if prev is None:
        d[key] = c
    else:
        s = prev + c
        if s:
            d[key] = s
        else:
            del d[key]


@lru_cache(maxsize=None)
def _engine_for(shape: AlgebraShape, rel: Relations) -> _Engine:
    return _Engine(shape, rel)


def engine(shape: AlgebraShape) -> _Engine:
    return _engine_for(shape, _RELATIONS.get())


class NCPoly:
    """An element of O_q(M(m,n)): PBW monomial -> nonzero coefficient."""

    __slots__ = ("shape", "terms")

    def __init__(self, shape: AlgebraShape, terms: dict | None = None):
        self.shape = shape
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def constant(cls, shape: AlgebraShape, c) -> "NCPoly":
        c = ONE * c
        return cls(shape, {(): c} if c else {})

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=-1)

    def exponents(self, mono: tuple) -> tuple[int, ...]:
        """Exponent vector of a monomial over all x_ij in lexicographic order."""
        vec = [0] * self.shape.ngens
        for g in mono:
            vec[g] += 1
        return tuple(vec)

    def coefficient(self, mono: tuple) -> QScalar:
        return self.terms.get(mono, ZERO)

    def items(self):
        return sorted(self.terms.items())

    def _same(self, other: "NCPoly"):
        if not isinstance(other, NCPoly):
            raise TypeError(f"expected NCPoly, got {type(other).__name__}")
        if other.shape != self.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")

    def __add__(self, other):
        if isinstance(other, (int, QScalar)):
            other = NCPoly.constant(self.shape, other)
        self._same(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            _acc(out, m, c)
        return NCPoly(self.shape, out)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly(self.shape, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, QScalar)):
            return self.scale(other)
        return nc_mul(self, other, self.shape)

    def __rmul__(self, other):
        if isinstance(other, (int, QScalar)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("NCPoly powers must be nonnegative integers")
        out = NCPoly.constant(self.shape, 1)
        for _ in range(e):
            out = out * self
        return out

    def scale(self, c) -> "NCPoly":
        c = ONE * c
        if not c:
            return NCPoly(self.shape)
        return NCPoly(self.shape, {m: c * v for m, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, QScalar)):
            other = NCPoly.constant(self.shape, other)
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.shape == other.shape and self.terms == other.terms

    __hash__ = None

    def render(self) -> str:
        shape = self.shape

        def body(mono):
            return "*".join("x[{},{}]".format(*shape.unflat(g)) for g in mono)

        return render_linear([(c, body(m)) for m, c in self.items()])

    __str__ = render

    def __repr__(self):
        return f"NCPoly({self.shape.m}x{self.shape.n}: {self.render()})"


def generator(shape: AlgebraShape, i: int, j: int) -> NCPoly:
    return NCPoly(shape, {(shape.flat(i, j),): ONE})


def _leftmost(w):
    for p in range(len(w) - 1):
        if w[p] > w[p + 1]:
            return p
    return None


def _rightmost(w):
    for p in range(len(w) - 2, -1, -1):
        if w[p] > w[p + 1]:
            return p
    return None


def word_normal_form(word, shape: AlgebraShape, strategy: str = "leftmost",
                     seed: int | None = None) -> NCPoly:
    """PBW expansion of a product of generators.

    ``word`` is a sequence of ``(i, j)`` pairs.  ``strategy`` picks which
    out-of-order adjacent pair is rewritten next: ``leftmost`` (default),
    ``rightmost`` or ``random`` (seeded).
    """
    flat = tuple(shape.flat(i, j) for i, j in word)
    if strategy == "leftmost":
        pick = _leftmost
    elif strategy == "rightmost":
        pick = _rightmost
    elif strategy == "random":
        rng = random.Random(seed)

        def pick(w):
            spots = [p for p in range(len(w) - 1) if w[p] > w[p + 1]]
            return rng.choice(spots) if spots else None
    else:
        raise ValueError(f"unknown rewriting strategy {strategy!r}")
    return NCPoly(shape, engine(shape).rewrite_word(flat, pick))


def nc_mul(a: NCPoly, b: NCPoly, shape: AlgebraShape | None = None) -> NCPoly:
    """Product in the PBW basis (bilinear extension of generator insertion)."""
    shape = shape or a.shape
    if a.shape != shape or b.shape != shape:
        raise ValueError(f"shape mismatch: {a.shape}, {b.shape} vs {shape}")
    eng = engine(shape)
    out: dict = {}
    for mb, cb in b.terms.items():
        for ma, ca in a.terms.items():
            cab = ca * cb
            for m, c in eng.mul_mono_mono(ma, mb).items():
                _acc(out, m, cab * c)
    return NCPoly(shape, out)


def inversions(perm) -> int:
    return sum(1 for a, b in combinations(perm, 2) if a > b)


def _minor_terms(rows, cols, shape: AlgebraShape) -> dict:
    # rows increase along each word, so every word is already a PBW monomial
    out: dict = {}
    mq = -Q
    for perm in permutations(range(len(cols))):
        mono = tuple(shape.flat(r, cols[s]) for r, s in zip(rows, perm))
        _acc(out, mono, mq ** inversions(perm))
    return out


def quantum_determinant(shape: AlgebraShape) -> NCPoly:
    if shape.m != shape.n:
        raise ValueError(f"quantum determinant needs a square shape, got ({shape.m},{shape.n})")
    idx = tuple(range(1, shape.n + 1))
    return NCPoly(shape, _minor_terms(idx, idx, shape))


def quantum_minor(rows, cols, shape: AlgebraShape) -> NCPoly:
    """The quantum minor [rows | cols] expressed in the ambient PBW basis."""
    rows = tuple(sorted(rows))
    cols = tuple(sorted(cols))
    if len(rows) != len(cols):
        raise ValueError(f"minor needs |I| = |J|, got {len(rows)} and {len(cols)}")
    if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
        raise ValueError("minor index sets must not repeat entries")
    if not rows:
        return NCPoly.constant(shape, 1)
    for r in rows:
        if not 1 <= r <= shape.m:
            raise IndexError(f"row {r} out of bounds for shape ({shape.m},{shape.n})")
    for c in cols:
        if not 1 <= c <= shape.n:
            raise IndexError(f"column {c} out of bounds for shape ({shape.m},{shape.n})")
    return NCPoly(shape, _minor_terms(rows, cols, shape))


def transpose_map(a: NCPoly, shape: AlgebraShape | None = None) -> NCPoly:
    """x_ij -> x'_ji into O_q(M(n,m)); image monomials are re-normalised."""
    shape = shape or a.shape
    tshape = shape.transposed()
    out: dict = {}
    eng = engine(tshape)
    for mono, c in a.terms.items():
        word = tuple(tshape.flat(j, i) for i, j in map(shape.unflat, mono))
        for m, c2 in eng.rewrite_word(word, _leftmost).items():
            _acc(out, m, c * c2)
    return NCPoly(tshape, out)
