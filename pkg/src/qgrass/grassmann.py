"""The quantum grassmannian O_q(G(k,n)) and its localisation at [u].

Plücker coordinates are k-subsets of 1..n stored as sorted tuples.  Words
in them are formal; the only arbiter of equality is the embedding into
O_q(M(k,n)), where ``[J]`` is the maximal quantum minor ``[1..k | J]``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .linalg import LinearSystemError, rank, solve_unique
from .qmatrix import AlgebraShape, NCPoly, current_relations, nc_mul, quantum_minor
from .scalar import ONE, ZERO, QScalar, render_linear

__all__ = [
    "GrassShape",
    "LocalizedElement",
    "StraighteningError",
    "DEFAULT_MAX_DEGREE",
    "d_value",
    "plucker_index",
    "plucker_embed",
    "embed_word",
    "plucker_leq",
    "poset_covers",
    "enumerate_standard",
    "is_standard",
    "straighten",
    "standard_rank",
    "loc_mul",
    "loc_eq",
    "embed_localized",
]

DEFAULT_MAX_DEGREE = 3


@dataclass(frozen=True)
class GrassShape:
    k: int
    n: int

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise ValueError(f"G({self.k},{self.n}) needs 1 <= k <= n")

    @property
    def p(self) -> int:
        return self.n - self.k

    @property
    def u(self) -> tuple[int, ...]:
        return tuple(range(1, self.k + 1))

    @property
    def w(self) -> tuple[int, ...]:
        return tuple(range(self.n - self.k + 1, self.n + 1))

    @property
    def matrix_shape(self) -> AlgebraShape:
        return AlgebraShape(self.k, self.n)

    @property
    def dehom_shape(self) -> AlgebraShape:
        """Shape (k, p) of the quantum matrices inside the localisation."""
        return AlgebraShape(self.k, self.p)

    def pluckers(self) -> list[tuple[int, ...]]:
        return list(combinations(range(1, self.n + 1), self.k))

    def auto_ok(self) -> str | None:
        """Why automorphism-level operations do not apply, or None."""
        if self.k < 2:
            return "requires k > 1"
        if 2 * self.k > self.n:
            return "requires 2k <= n"
        return None

    def __str__(self):
        return f"G({self.k},{self.n})"


class StraighteningError(RuntimeError):
    """The standard-monomial system had no solution or several.

    Either outcome would contradict the basis theorem, so callers must not
    recover from it.
    """


def plucker_index(cols, shape: GrassShape) -> tuple[int, ...]:
    out = tuple(sorted(cols))
    if len(out) != shape.k or len(set(out)) != shape.k:
        raise ValueError(f"Plücker index {list(cols)} needs {shape.k} distinct entries")
    if out[0] < 1 or out[-1] > shape.n:
        raise IndexError(f"Plücker index {list(cols)} out of bounds for {shape}")
    return out


def d_value(I, shape: GrassShape) -> int:
    """Number of entries of I outside u = {1..k}."""
    return sum(1 for i in I if i > shape.k)


def plucker_leq(I, J) -> bool:
    return all(a <= b for a, b in zip(I, J))


def poset_covers(shape: GrassShape) -> set[tuple[tuple, tuple]]:
    """Cover pairs (lower, upper) of the Plücker poset, from the definition."""
    pl = shape.pluckers()
    below = {(a, b) for a in pl for b in pl if a != b and plucker_leq(a, b)}
    return {(a, b) for a, b in below
            if not any((a, c) in below and (c, b) in below for c in pl)}


@lru_cache(maxsize=None)
def _embed_letter(rel, shape: GrassShape, I: tuple) -> NCPoly:
    return quantum_minor(shape.u, I, shape.matrix_shape)


def plucker_embed(I, shape: GrassShape) -> NCPoly:
    """[I] as the quantum minor [1..k | I] of O_q(M(k,n))."""
    return _embed_letter(current_relations(), shape, tuple(I))


@lru_cache(maxsize=None)
def _embed_word(rel, shape: GrassShape, word: tuple) -> NCPoly:
    if not word:
        return NCPoly.constant(shape.matrix_shape, 1)
    if len(word) == 1:
        return _embed_letter(rel, shape, word[0])
    head = _embed_word(rel, shape, word[:-1])
    return nc_mul(head, _embed_letter(rel, shape, word[-1]))


def embed_word(word, shape: GrassShape) -> NCPoly:
    return _embed_word(current_relations(), shape, tuple(tuple(I) for I in word))


def is_standard(word) -> bool:
    return all(plucker_leq(a, b) for a, b in zip(word, word[1:]))


def enumerate_standard(shape: GrassShape, degree: int) -> list[tuple]:
    """All nondecreasing chains of the given length, in lexicographic order."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    pl = shape.pluckers()
    out = [()]
    for _ in range(degree):
        out = [w + (J,) for w in out for J in pl if not w or plucker_leq(w[-1], J)]
    return out


def _content(word) -> tuple:
    return tuple(sorted(i for I in word for i in I))


@lru_cache(maxsize=None)
def _standard_by_content(shape: GrassShape, degree: int) -> dict:
    blocks: dict = {}
    for w in enumerate_standard(shape, degree):
        blocks.setdefault(_content(w), []).append(w)
    return blocks


def max_degree() -> int:
    env = os.environ.get("QGRASS_MAX_DEGREE")
    return int(env) if env else DEFAULT_MAX_DEGREE


@lru_cache(maxsize=None)
def _straighten(rel, shape: GrassShape, word: tuple) -> tuple:
    if is_standard(word):
        return ((ONE, word),)
    # Embedded minors are homogeneous for the column-content grading, so the
    # system over all standard monomials of this degree splits into blocks;
    # only the block matching the word's content can carry nonzero unknowns.
    basis = _standard_by_content(shape, len(word)).get(_content(word), [])
    target = _embed_word(rel, shape, word)
    columns = [_embed_word(rel, shape, s).terms for s in basis]
    try:
        sol = solve_unique(columns, target.terms)
    except LinearSystemError as exc:
        raise StraighteningError(
            f"straightening {_render_word(word)} in {shape} failed: {exc}"
        ) from exc
    return tuple((c, s) for c, s in zip(sol, basis) if c)


def straighten(word, shape: GrassShape, degree_cap: int | None = None) -> list[tuple[QScalar, tuple]]:
    """Expand a Plücker word in the standard-monomial basis.

    Raises ValueError past the degree cap (default 3, or ``QGRASS_MAX_DEGREE``)
    and :class:`StraighteningError` if the exact solve is not uniquely
    solvable.
    """
    word = tuple(plucker_index(I, shape) for I in word)
    cap = max_degree() if degree_cap is None else degree_cap
    if len(word) > cap:
        raise ValueError(f"word of degree {len(word)} exceeds the straightening cap {cap}")
    return list(_straighten(current_relations(), shape, word))


def standard_rank(shape: GrassShape, degree: int) -> tuple[int, int]:
    """(rank, count) of the embedded standard monomials of one degree."""
    basis = enumerate_standard(shape, degree)
    rel = current_relations()
    return rank([_embed_word(rel, shape, s).terms for s in basis]), len(basis)


def _render_word(word) -> str:
    return "".join("[" + ",".join(map(str, I)) + "]" for I in word)


def _acc(d: dict, key, c: QScalar) -> None:
    prev = d.get(key)
    s = c if prev is None else prev + c
    if s:
        d[key] = s
    else:
        d.pop(key, None)


class LocalizedElement:
    """An element of O_q(G(k,n))[[u]^-1] as a sum of ``c * word * u^e``.

    Words never contain the letter u: every [u] is commuted to the right
    using ``[u][I] = q^d(I) [I][u]``.  Words are otherwise unstraightened,
    so ``==`` compares this canonical *form*; use :func:`loc_eq` for
    equality in the algebra.
    """

    __slots__ = ("shape", "terms")

    def __init__(self, shape: GrassShape, raw=()):
        self.shape = shape
        terms: dict = {}
        u = shape.u
        for c, word, e in raw:
            c = ONE * c
            if not c:
                continue
            kept = []
            for I in reversed(tuple(word)):
                I = tuple(I)
                if I == u:
                    e += 1
                    # this [u] passes every letter already kept to its right
                    c = c * QScalar.qpow(sum(d_value(J, shape) for J in kept))
                else:
                    kept.append(I)
            _acc(terms, (tuple(reversed(kept)), e), c)
        self.terms = terms

    @classmethod
    def _from_terms(cls, shape, terms):
        obj = object.__new__(cls)
        obj.shape = shape
        obj.terms = terms
        return obj

    @classmethod
    def letter(cls, shape: GrassShape, I) -> "LocalizedElement":
        return cls(shape, [(ONE, (plucker_index(I, shape),), 0)])

    @classmethod
    def word(cls, shape: GrassShape, word, upow: int = 0, coeff=ONE) -> "LocalizedElement":
        return cls(shape, [(coeff, tuple(plucker_index(I, shape) for I in word), upow)])

    @classmethod
    def u_power(cls, shape: GrassShape, e: int) -> "LocalizedElement":
        return cls._from_terms(shape, {((), e): ONE})

    @classmethod
    def scalar(cls, shape: GrassShape, c) -> "LocalizedElement":
        c = ONE * c
        return cls._from_terms(shape, {((), 0): c} if c else {})

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0][0]), kv[0][0], kv[0][1]))

    def is_zero(self) -> bool:
        return not self.terms

    def min_upow(self) -> int:
        return min((e for (_, e) in self.terms), default=0)

    def _check(self, other):
        if not isinstance(other, LocalizedElement):
            raise TypeError(f"expected LocalizedElement, got {type(other).__name__}")
        if other.shape != self.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")

    def __add__(self, other):
        if isinstance(other, (int, QScalar)):
            other = LocalizedElement.scalar(self.shape, other)
        self._check(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            _acc(out, key, c)
        return LocalizedElement._from_terms(self.shape, out)

    __radd__ = __add__

    def __neg__(self):
        return LocalizedElement._from_terms(self.shape, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "LocalizedElement":
        c = ONE * c
        if not c:
            return LocalizedElement(self.shape)
        return LocalizedElement._from_terms(self.shape, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, QScalar)):
            return self.scale(other)
        return loc_mul(self, other, self.shape)

    def __rmul__(self, other):
        if isinstance(other, (int, QScalar)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            if len(self.terms) != 1:
                raise ValueError("only c * u^e is invertible here")
            (word, upow), c = next(iter(self.terms.items()))
            if word:
                raise ValueError("only c * u^e is invertible here")
            return LocalizedElement._from_terms(self.shape, {((), upow * e): c ** e})
        out = LocalizedElement.scalar(self.shape, 1)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, QScalar)):
            other = LocalizedElement.scalar(self.shape, other)
        if not isinstance(other, LocalizedElement):
            return NotImplemented
        return self.shape == other.shape and self.terms == other.terms

    __hash__ = None

    def render(self) -> str:
        items = []
        for (word, e), c in self.items():
            parts = []
            if word:
                parts.append(_render_word(word))
            if e:
                parts.append("u" if e == 1 else f"u^{e}")
            items.append((c, " * ".join(parts)))
        return render_linear(items, sep=" * ")

    __str__ = render

    def __repr__(self):
        return f"LocalizedElement({self.shape}: {self.render()})"


def loc_mul(a: LocalizedElement, b: LocalizedElement, shape: GrassShape | None = None) -> LocalizedElement:
    """Product in the localisation; u^e1 moves right past b's word with
    ``[u]^e [I] = q^(e*d(I)) [I] [u]^e``."""
    shape = shape or a.shape
    if a.shape != shape or b.shape != shape:
        raise ValueError(f"shape mismatch: {a.shape}, {b.shape} vs {shape}")
    out: dict = {}
    dcache: dict = {}
    for (w2, e2), c2 in b.terms.items():
        d2 = dcache.get(w2)
        if d2 is None:
            d2 = dcache[w2] = sum(d_value(I, shape) for I in w2)
        for (w1, e1), c1 in a.terms.items():
            c = c1 * c2
            if e1 and d2:
                c = c * QScalar.qpow(e1 * d2)
            _acc(out, (w1 + w2, e1 + e2), c)
    return LocalizedElement._from_terms(shape, out)


def embed_localized(a: LocalizedElement, shift: int = 0) -> NCPoly:
    """Embed ``a * [u]^shift`` into O_q(M(k,n)); all powers must end up >= 0."""
    shape = a.shape
    rel = current_relations()
    u = shape.u
    out = NCPoly(shape.matrix_shape)
    for (word, e), c in a.terms.items():
        e += shift
        if e < 0:
            raise ValueError("negative power of [u] has no embedding; pass a larger shift")
        out = out + _embed_word(rel, shape, word + (u,) * e).scale(c)
    return out


def loc_eq(a: LocalizedElement, b: LocalizedElement, shape: GrassShape | None = None) -> bool:
    """Equality in O_q(G(k,n))[[u]^-1]: clear [u]-denominators on the right
    and compare embeddings exactly."""
    shape = shape or a.shape
    if a.shape != shape or b.shape != shape:
        raise ValueError(f"shape mismatch: {a.shape}, {b.shape} vs {shape}")
    diff = a - b
    if diff.is_zero():
        return True
    shift = max(0, -diff.min_upow())
    return embed_localized(diff, shift).is_zero()
