"""Automorphisms of O_q(G(k,n)): tori, the diagram automorphism, the
k <-> n-k isomorphism and the antiautomorphism theta.

Every map here sends each Plücker coordinate to a scalar multiple of a
Plücker coordinate, so all of them are instances of :class:`PluckerMap`.
Whether such a letterwise rule really extends to an algebra map is not
assumed: :func:`certify` compares the image of each straightened product
with the product of the images, exactly, through the embedding.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import product

from flint import fmpz

from .dehom import TElement, plucker_to_minor
from .grassmann import GrassShape, LocalizedElement, loc_eq, straighten
from .scalar import ONE, QScalar

__all__ = [
    "H0Element",
    "H1Element",
    "HCanonical",
    "AutoSpec",
    "PluckerMap",
    "H0Realization",
    "UnsupportedScope",
    "w0",
    "h0_map",
    "h1_map",
    "tau_map",
    "kn_map",
    "theta_map",
    "auto_map",
    "h0_apply",
    "h1_apply",
    "h0_to_h1",
    "h1_generator",
    "h0_from_root",
    "h1_canonicalize",
    "h1_swap",
    "kernel_element",
    "realize_in_h0",
    "diagram_tau",
    "kn_isomorphism",
    "theta_antiauto",
    "auto_apply",
    "compose_specs",
    "certify",
    "adjust",
    "extreme_scalars",
    "random_torus",
]


def _nonzero(values, what):
    out = tuple(ONE * v for v in values)
    if any(not v for v in out):
        raise ValueError(f"{what} entries must be nonzero")
    return out


@dataclass(frozen=True)
class H0Element:
    """Column scaling (a_1, ..., a_n) of O_q(M(k,n))."""

    a: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", _nonzero(self.a, "H0"))


@dataclass(frozen=True)
class H1Element:
    """(alpha0; alpha_1..alpha_k; beta_1..beta_p): rows, columns and y."""

    alpha0: QScalar
    alpha: tuple
    beta: tuple

    def __post_init__(self):
        object.__setattr__(self, "alpha0", _nonzero([self.alpha0], "H1")[0])
        object.__setattr__(self, "alpha", _nonzero(self.alpha, "H1"))
        object.__setattr__(self, "beta", _nonzero(self.beta, "H1"))

    def fits(self, shape: GrassShape) -> bool:
        return len(self.alpha) == shape.k and len(self.beta) == shape.p

    def __mul__(self, other: "H1Element") -> "H1Element":
        return H1Element(self.alpha0 * other.alpha0,
                         tuple(a * b for a, b in zip(self.alpha, other.alpha)),
                         tuple(a * b for a, b in zip(self.beta, other.beta)))

    def to_json(self) -> dict:
        return {"alpha0": self.alpha0.exact(),
                "alpha": [a.exact() for a in self.alpha],
                "beta": [b.exact() for b in self.beta]}


@dataclass(frozen=True)
class HCanonical(H1Element):
    """Representative of an element of H = H1 / kernel, with beta_p = 1."""

    def __post_init__(self):
        super().__post_init__()
        if not self.beta or not self.beta[-1].is_one():
            raise ValueError("canonical torus elements have beta_p = 1")


@dataclass(frozen=True)
class AutoSpec:
    torus: HCanonical
    diagram: bool = False

    def validate(self, shape: GrassShape) -> None:
        if not self.torus.fits(shape):
            raise ValueError(f"torus element does not fit {shape}")
        if self.diagram and shape.n != 2 * shape.k:
            raise ValueError(f"diagram automorphism requires n = 2k, got {shape}")

    def to_json(self) -> dict:
        return {**self.torus.to_json(), "diagram": self.diagram}

    @classmethod
    def from_json(cls, data) -> "AutoSpec":
        """Build from a dict or JSON text; scalar strings use the expression
        grammar (``"2"``, ``"q^-1"``, ``"(q^2-1)/(q)"``)."""
        from .expr import parse_scalar

        if isinstance(data, str):
            data = json.loads(data)

        def sc(v):
            return parse_scalar(v) if isinstance(v, str) else ONE * Fraction(v)

        f = H1Element(sc(data.get("alpha0", 1)),
                      tuple(sc(v) for v in data["alpha"]),
                      tuple(sc(v) for v in data["beta"]))
        return cls(h1_canonicalize(f), bool(data.get("diagram", False)))

    @classmethod
    def identity(cls, shape: GrassShape) -> "AutoSpec":
        return cls(HCanonical(ONE, (ONE,) * shape.k, (ONE,) * shape.p))


def w0(i: int, n: int) -> int:
    return n + 1 - i


@dataclass
class PluckerMap:
    """Letterwise map [L] -> c_L [L'] from src to dst, optionally reversing
    word order (an antihomomorphism)."""

    src: GrassShape
    dst: GrassShape
    images: dict
    anti: bool = False
    name: str = field(default="map")

    def letter(self, L) -> tuple[QScalar, tuple]:
        return self.images[tuple(L)]

    def apply(self, a: LocalizedElement) -> LocalizedElement:
        if a.shape != self.src:
            raise ValueError(f"{self.name} acts on {self.src}, got {a.shape}")
        uc, uimg = self.images[self.src.u]
        u_fixed = uimg == self.dst.u
        raw = []
        for (word, e), c in a.terms.items():
            if e < 0 and (self.anti or not u_fixed):
                raise ValueError(f"{self.name} is not defined on negative powers of [u]")
            letters = word + ((self.src.u,) * e if e > 0 and not u_fixed else ())
            coeff = c
            out_word = []
            for L in letters:
                s, L2 = self.images[L]
                coeff = coeff * s
                out_word.append(L2)
            upow = 0
            if u_fixed and e:
                coeff = coeff * uc ** e
                upow = e
            if self.anti:
                out_word.reverse()
                if upow:
                    # [u]^e sat at the right, so its image moves to the left
                    out_word = [uimg] * upow + out_word
                    upow = 0
            raw.append((coeff, tuple(out_word), upow))
        return LocalizedElement(self.dst, raw)

    def then(self, other: "PluckerMap") -> "PluckerMap":
        """``other`` after ``self``."""
        if other.src != self.dst:
            raise ValueError("maps do not compose")
        images = {}
        for L, (c, L2) in self.images.items():
            c2, L3 = other.images[L2]
            images[L] = (c * c2, L3)
        return PluckerMap(self.src, other.dst, images, self.anti != other.anti,
                          f"{other.name}*{self.name}")


def _prod(values):
    return reduce(lambda x, y: x * y, values, ONE)


def h0_map(g: H0Element, shape: GrassShape) -> PluckerMap:
    if len(g.a) != shape.n:
        raise ValueError(f"H0 element needs {shape.n} entries")
    images = {L: (_prod(g.a[i - 1] for i in L), L) for L in shape.pluckers()}
    return PluckerMap(shape, shape, images, name="h0")


def h1_map(f: H1Element, shape: GrassShape) -> PluckerMap:
    if not f.fits(shape):
        raise ValueError(f"H1 element does not fit {shape}")
    images = {}
    for L in shape.pluckers():
        (I, J), _ = plucker_to_minor(L, shape)
        s = f.alpha0 * _prod(f.alpha[i - 1] for i in I) * _prod(f.beta[j - 1] for j in J)
        images[L] = (s, L)
    return PluckerMap(shape, shape, images, name="h1")


def _complement_reverse(L, n: int) -> tuple:
    rest = set(range(1, n + 1)) - set(L)
    return tuple(sorted(w0(i, n) for i in rest))


def tau_map(shape: GrassShape) -> PluckerMap:
    if shape.n != 2 * shape.k:
        raise ValueError(f"diagram automorphism requires n = 2k, got {shape}")
    images = {L: (ONE, _complement_reverse(L, shape.n)) for L in shape.pluckers()}
    return PluckerMap(shape, shape, images, name="tau")


def kn_map(shape: GrassShape) -> PluckerMap:
    dst = GrassShape(shape.n - shape.k, shape.n)
    images = {L: (ONE, _complement_reverse(L, shape.n)) for L in shape.pluckers()}
    return PluckerMap(shape, dst, images, name="kn")


def theta_map(shape: GrassShape) -> PluckerMap:
    images = {L: (ONE, tuple(sorted(w0(i, shape.n) for i in L))) for L in shape.pluckers()}
    return PluckerMap(shape, shape, images, anti=True, name="theta")


def auto_map(spec: AutoSpec, shape: GrassShape) -> PluckerMap:
    """Torus part first, then tau when the diagram flag is set."""
    spec.validate(shape)
    m = h1_map(spec.torus, shape)
    return m.then(tau_map(shape)) if spec.diagram else m


def h0_apply(g: H0Element, a: LocalizedElement, shape: GrassShape | None = None) -> LocalizedElement:
    return h0_map(g, shape or a.shape).apply(a)


def h1_apply(f: H1Element, t, shape: GrassShape | None = None):
    """Act on a TElement (x_ij -> alpha_i beta_j x_ij, y -> alpha0 y) or on a
    LocalizedElement ([L] -> alpha0 alpha_I beta_J [L])."""
    if isinstance(t, LocalizedElement):
        return h1_map(f, shape or t.shape).apply(t)
    if not isinstance(t, TElement):
        raise TypeError(f"cannot apply a torus element to {type(t).__name__}")
    ts = t.shape
    if len(f.alpha) != ts.m or len(f.beta) != ts.n:
        raise ValueError("H1 element does not fit the T shape")
    out = {}
    for (m, s), c in t.terms.items():
        scale = c * f.alpha0 ** s
        for g in m:
            i, j = ts.unflat(g)
            scale = scale * f.alpha[i - 1] * f.beta[j - 1]
        out[(m, s)] = scale
    return TElement(ts, out)


def h0_to_h1(g: H0Element, shape: GrassShape) -> H1Element:
    """(a_1..a_n) -> (a_1...a_k; a_k^-1, ..., a_1^-1; a_{k+1}, ..., a_n)."""
    k = shape.k
    a = g.a
    return H1Element(_prod(a[:k]), tuple(a[i].inverse() for i in range(k - 1, -1, -1)), tuple(a[k:]))


def h1_generator(position, value, shape: GrassShape) -> H1Element:
    """Torus element equal to 1 everywhere except one slot.

    position is "alpha0", ("alpha", i) or ("beta", j).
    """
    value = ONE * value
    alpha, beta, alpha0 = [ONE] * shape.k, [ONE] * shape.p, ONE
    if position == "alpha0":
        alpha0 = value
    elif position[0] == "alpha":
        alpha[position[1] - 1] = value
    elif position[0] == "beta":
        beta[position[1] - 1] = value
    else:
        raise ValueError(f"unknown torus position {position!r}")
    return H1Element(alpha0, tuple(alpha), tuple(beta))


def h0_from_root(position, b, shape: GrassShape) -> tuple[H1Element, H0Element]:
    """Column scaling with the same action as a one-slot torus element.

    For a beta slot the entry b is used directly.  For the other slots b must
    be a k-th root of the entry, supplied by the caller, since roots are not
    extracted here.  Returns the torus element (b or b^k in its slot) and g.
    """
    k, b = shape.k, ONE * b
    g = [b] * shape.n
    if position == "alpha0":
        value = b ** k
    elif position[0] == "alpha":
        g[k - position[1]] = b.inverse() ** (k - 1)
        value = b ** k
    elif position[0] == "beta":
        g = [ONE] * shape.n
        g[position[1] + k - 1] = b
        value = b
    else:
        raise ValueError(f"unknown torus position {position!r}")
    return h1_generator(position, value, shape), H0Element(tuple(g))


def h1_canonicalize(f: H1Element) -> HCanonical:
    """Multiply by the kernel element with lambda = beta_p."""
    lam = f.beta[-1]
    inv = lam.inverse()
    return HCanonical(f.alpha0, tuple(a * lam for a in f.alpha),
                      tuple(b * inv for b in f.beta[:-1]) + (ONE,))


def h1_swap(f: H1Element) -> H1Element:
    """(alpha0; alpha; beta) -> (alpha0; beta; alpha), needs k = p."""
    if len(f.alpha) != len(f.beta):
        raise ValueError("swapping rows and columns needs k = p")
    return H1Element(f.alpha0, f.beta, f.alpha)


def kernel_element(lam, shape: GrassShape) -> H1Element:
    lam = ONE * lam
    return H1Element(ONE, (lam,) * shape.k, (lam.inverse(),) * shape.p)


# -- H0 realisability over Q -------------------------------------------------


class UnsupportedScope(ValueError):
    """Targets outside the rational solver's scope."""


@dataclass
class H0Realization:
    """Outcome of :func:`realize_in_h0`.

    ``element`` is a verified witness, or None.  On failure ``obstruction``
    names the subsystem that has no solution (``"prime 2"`` or ``"sign"``)
    and ``equations`` lists a minimal infeasible set of Plücker constraints.
    """

    element: H0Element | None
    obstruction: str | None = None
    equations: list = field(default_factory=list)

    def __bool__(self):
        return self.element is not None

    def describe(self) -> str:
        if self.element is not None:
            return "g = (" + ", ".join(a.human() for a in self.element.a) + ")"
        eqs = ", ".join("[" + ",".join(map(str, L)) + "]" for L in self.equations)
        return f"none returned; infeasible {self.obstruction} subsystem on {eqs}"


def _rational(v) -> Fraction:
    if isinstance(v, QScalar):
        if not v.is_constant():
            raise UnsupportedScope(f"target {v} is not a rational number")
        return v.as_fraction()
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    raise UnsupportedScope(f"target of type {type(v).__name__} is not rational")


def _solve_integer(rows, rhs):
    """Integer solution of A e = v via the Smith form, or None."""
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_decomp

    A = Matrix(rows)
    S, U, V = smith_normal_decomp(A, domain=ZZ)
    b = U * Matrix(rhs)
    z = []
    for i in range(A.cols):
        d = S[i, i] if i < S.rows else 0
        bi = b[i] if i < b.rows else 0
        if d == 0:
            if bi != 0:
                return None
            z.append(0)
        elif bi % d:
            return None
        else:
            z.append(bi // d)
    if any(b[i] != 0 for i in range(A.cols, b.rows)):
        return None
    return [int(x) for x in V * Matrix(z)]


def _solve_gf2(rows, rhs):
    n = len(rows[0])
    eqs = [list(r) + [b] for r, b in zip(rows, rhs)]
    where = [-1] * n
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(eqs)) if eqs[i][c]), None)
        if piv is None:
            continue
        eqs[r], eqs[piv] = eqs[piv], eqs[r]
        for i in range(len(eqs)):
            if i != r and eqs[i][c]:
                eqs[i] = [x ^ y for x, y in zip(eqs[i], eqs[r])]
        where[c] = r
        r += 1
    if any(e[-1] and not any(e[:-1]) for e in eqs):
        return None
    return [eqs[where[c]][-1] if where[c] >= 0 else 0 for c in range(n)]


def _minimal_infeasible(solver, rows, rhs, labels):
    keep = list(range(len(rows)))
    for i in list(keep):
        trial = [j for j in keep if j != i]
        if trial and solver([rows[j] for j in trial], [rhs[j] for j in trial]) is None:
            keep = trial
    return [labels[j] for j in keep]


def realize_in_h0(targets: dict, shape: GrassShape) -> H0Realization:
    """Find g in H0 over Q with prod_{i in L} a_i = target[L] for every L.

    Prime exponents are solved one integer system per prime and signs over
    GF(2); a found witness is verified by substitution.
    """
    pl = shape.pluckers()
    missing = [L for L in pl if tuple(L) not in targets]
    if missing:
        raise ValueError(f"targets missing for {missing}")
    vals = {L: _rational(targets[L]) for L in pl}
    if any(v == 0 for v in vals.values()):
        raise ValueError("targets must be nonzero")
    rows = [[1 if i in L else 0 for i in range(1, shape.n + 1)] for L in pl]

    primes = set()
    for v in vals.values():
        for part in (v.numerator, v.denominator):
            primes.update(int(p) for p, _ in fmpz(abs(part)).factor())
    mags = [Fraction(1)] * shape.n
    for p in sorted(primes):
        rhs = [_valuation(vals[L], p) for L in pl]
        sol = _solve_integer(rows, rhs)
        if sol is None:
            eqs = _minimal_infeasible(_solve_integer, rows, rhs, pl)
            return H0Realization(None, f"prime-{p}", eqs)
        mags = [m * Fraction(p) ** s for m, s in zip(mags, sol)]
    signs = [1 if vals[L] < 0 else 0 for L in pl]
    bits = _solve_gf2(rows, signs)
    if bits is None:
        eqs = _minimal_infeasible(_solve_gf2, rows, signs, pl)
        return H0Realization(None, "sign", eqs)
    a = tuple(QScalar.from_fraction(-m if b else m) for m, b in zip(mags, bits))
    g = H0Element(a)
    for L in pl:
        if _prod(g.a[i - 1] for i in L) != ONE * vals[L]:
            raise AssertionError(f"realisation witness fails on {L}")
    return H0Realization(g)


def _valuation(v: Fraction, p: int) -> int:
    def val(x):
        x = abs(x)
        c = 0
        while x and x % p == 0:
            x //= p
            c += 1
        return c

    return val(v.numerator) - val(v.denominator)


# -- letterwise maps applied to elements ------------------------------------


def diagram_tau(a: LocalizedElement, shape: GrassShape | None = None) -> LocalizedElement:
    return tau_map(shape or a.shape).apply(a)


def kn_isomorphism(a: LocalizedElement) -> LocalizedElement:
    if 2 * a.shape.k > a.shape.n:
        raise ValueError(f"{a.shape}: the k <-> n-k map is stated for 2k <= n")
    return kn_map(a.shape).apply(a)


def theta_antiauto(a: LocalizedElement, shape: GrassShape | None = None) -> LocalizedElement:
    return theta_map(shape or a.shape).apply(a)


def auto_apply(spec: AutoSpec, a: LocalizedElement, shape: GrassShape | None = None) -> LocalizedElement:
    return auto_map(spec, shape or a.shape).apply(a)


def compose_specs(first: AutoSpec, second: AutoSpec) -> AutoSpec:
    """The spec of ``first`` after ``second``, using tau h tau = swap(h)."""
    h1 = h1_swap(first.torus) if second.diagram else first.torus
    return AutoSpec(h1_canonicalize(h1 * second.torus), first.diagram != second.diagram)


# -- certification -----------------------------------------------------------


def _image_of_product(phi: PluckerMap, word) -> LocalizedElement:
    src = phi.src
    out = LocalizedElement(phi.dst)
    for c, s in straighten(word, src, degree_cap=len(word)):
        out = out + phi.apply(LocalizedElement.word(src, s, coeff=c))
    return out


def _product_of_images(phi: PluckerMap, word) -> LocalizedElement:
    return phi.apply(LocalizedElement.word(phi.src, word))


def certify(phi: PluckerMap, degree3_samples: int = 0, seed: int = 0,
            pairs: bool = True) -> dict:
    """Check that phi respects every product of two letters, and optionally
    a random sample of three-letter products.

    A product is straightened first and phi applied to the standard form, so
    the comparison is not a tautology of the letterwise definition.
    Returns failing words per degree (empty lists mean certified).  With
    ``pairs=False`` only the three-letter sample is run.
    """
    letters = phi.src.pluckers()
    bad2 = []
    for a, b in product(letters, repeat=2) if pairs else ():
        if not loc_eq(_image_of_product(phi, (a, b)), _product_of_images(phi, (a, b))):
            bad2.append((a, b))
    bad3 = []
    rng = random.Random(seed)
    for _ in range(degree3_samples):
        w = tuple(rng.choice(letters) for _ in range(3))
        if not loc_eq(_image_of_product(phi, w), _product_of_images(phi, w)):
            bad3.append(w)
    return {"degree2": bad2, "degree3": bad3, "pairs": len(letters) ** 2 if pairs else 0,
            "triples": degree3_samples}


def extreme_scalars(phi: PluckerMap) -> tuple[QScalar, QScalar]:
    """(lambda, mu) with phi([u]) = lambda [u] and phi([w]) = mu [w]."""
    shape = phi.src
    lam, U = phi.letter(shape.u)
    mu, W = phi.letter(shape.w)
    if U != shape.u or W != shape.w:
        raise ValueError(f"{phi.name} does not fix the extreme coordinates")
    return lam, mu


def adjust(phi: PluckerMap) -> PluckerMap:
    """Compose with h = (lambda^-1, 1, ..., 1, mu^-1) so [u] and [w] are fixed."""
    shape = phi.src
    lam, mu = extreme_scalars(phi)
    a = [ONE] * shape.n
    a[0] = lam.inverse()
    a[-1] = mu.inverse()
    return phi.then(h0_map(H0Element(tuple(a)), shape))


def random_torus(shape: GrassShape, rng: random.Random, canonical: bool = True) -> H1Element:
    """A random torus element with small nonzero rational entries."""

    def entry():
        num = rng.choice([-3, -2, -1, 1, 2, 3, 5])
        den = rng.choice([1, 1, 2, 3])
        return QScalar(num, den)

    f = H1Element(entry(), tuple(entry() for _ in range(shape.k)),
                  tuple(entry() for _ in range(shape.p)))
    return h1_canonicalize(f) if canonical else f
