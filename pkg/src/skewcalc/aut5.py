"""The automorphism group of A(5) and its sigma-invariant subring.

Elements are tau(a, u, lam) with a a nonzero scalar, u in R = k[T1, Y2]
(deg T1 = 1, deg Y2 = 2) and lam a scalar:

    t1 -> a t1,  t2 -> a (t2 + t1 u),  t3 -> a (t3 + w),
    w = u t2 + 1/2 (u - d(u) + u^2 - lam) t1,

where d multiplies the weighted-degree-k part by k.  R embeds in A(5) by
T1 -> t1, Y2 -> y2 = t2^2 + 2 t1 t2 - 2 t1 t3.  Images of generators lie in
the left R-module spanned by 1, t2, t3, which gives an exact symbolic
calculus for composition ("R-form") alongside normal forms in A(5).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import catalog
from .algebras import GradedMap, Presentation, check_morphism, eigenvectors_bounded, span_equal
from .ncpoly import Alphabet, NcPoly
from .parser import parse_expr
from .scalars import ParamRing, ZeroScalar, eq, fmt, is_zero

Y2_TEXT = "t2^2 + 2*t1*t2 - 2*t1*t3"


class ZeroScale(ZeroScalar):
    """The scale a of tau(a, u, lam) must be nonzero."""


# ------------------------------------------------------------ the ring R
class InvariantPoly:
    """Commutative polynomial sum c * T1^i * Y2^j, stored as {(i, j): c}."""

    __slots__ = ("terms", "ring")

    def __init__(self, terms, ring: ParamRing):
        self.ring = ring
        self.terms = {k: ring.coerce(c) for k, c in terms.items() if not is_zero(c)}

    # constructors
    @classmethod
    def const(cls, c, ring):
        return cls({(0, 0): c}, ring)

    @classmethod
    def T1(cls, ring):
        return cls({(1, 0): 1}, ring)

    @classmethod
    def Y2(cls, ring):
        return cls({(0, 1): 1}, ring)

    @classmethod
    def parse(cls, text: str, ring: ParamRing) -> "InvariantPoly":
        """Read an expression in T1, Y2 and the ring's parameters."""
        alg = Alphabet.build(ring, ["T1", "Y2"])
        f = parse_expr(alg, text)
        iT, iY = alg.index("T1"), alg.index("Y2")
        out: dict = {}
        for w, c in f.terms.items():
            k = (w.count(iT), w.count(iY))
            out[k] = out.get(k, ring.zero) + c
        return cls(out, ring)

    @classmethod
    def generic(cls, ring: ParamRing, prefix: str, degree: int):
        """u = sum prefix_k * monomial_k over all monomials of weighted degree <= degree.

        ``ring`` must already contain the coefficient parameters
        (see :func:`generic_names`).
        """
        terms = {}
        for k, mono in enumerate(monomials_upto(degree)):
            terms[mono] = ring.param(f"{prefix}{k}")
        return cls(terms, ring)

    # arithmetic
    def _coerce(self, o):
        if isinstance(o, InvariantPoly):
            return o
        return InvariantPoly.const(o, self.ring)

    def __add__(self, o):
        o = self._coerce(o)
        out = dict(self.terms)
        for k, c in o.terms.items():
            out[k] = out.get(k, self.ring.zero) + c
        return InvariantPoly(out, self.ring)

    __radd__ = __add__

    def __neg__(self):
        return InvariantPoly({k: -c for k, c in self.terms.items()}, self.ring)

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        if not isinstance(o, InvariantPoly):
            c = self.ring.coerce(o)
            return InvariantPoly({k: x * c for k, x in self.terms.items()}, self.ring)
        out: dict = {}
        for (i, j), c in self.terms.items():
            for (k, l), e in o.terms.items():
                key = (i + k, j + l)
                out[key] = out.get(key, self.ring.zero) + c * e
        return InvariantPoly(out, self.ring)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = InvariantPoly.const(1, self.ring)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, o):
        if not isinstance(o, InvariantPoly):
            o = InvariantPoly.const(o, self.ring)
        keys = set(self.terms) | set(o.terms)
        return all(eq(self.terms.get(k, self.ring.zero), o.terms.get(k, self.ring.zero)) for k in keys)

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        """Weighted degree (deg T1 = 1, deg Y2 = 2); -1 for zero."""
        return max((i + 2 * j for i, j in self.terms), default=-1)

    def grading(self) -> "InvariantPoly":
        """d(f): the weighted-degree-k part multiplied by k."""
        return InvariantPoly({(i, j): c * (i + 2 * j) for (i, j), c in self.terms.items()}, self.ring)

    def subs(self, t1: "InvariantPoly", y2: "InvariantPoly") -> "InvariantPoly":
        """Commutative substitution T1 -> t1, Y2 -> y2."""
        out = InvariantPoly({}, self.ring)
        pt: dict = {0: InvariantPoly.const(1, self.ring)}
        py: dict = {0: InvariantPoly.const(1, self.ring)}
        for (i, j), c in sorted(self.terms.items()):
            while max(pt) < i:
                pt[max(pt) + 1] = pt[max(pt)] * t1
            while max(py) < j:
                py[max(py) + 1] = py[max(py)] * y2
            out = out + pt[i] * py[j] * c
        return out

    def over(self, ring: ParamRing) -> "InvariantPoly":
        return InvariantPoly({k: ring.embed(c) for k, c in self.terms.items()}, ring)

    def embed(self, A: Presentation) -> NcPoly:
        """Image in A(5): T1 -> t1, Y2 -> y2 (normal form)."""
        t1 = A.gen("t1")
        y2 = A.nf(A.parse(Y2_TEXT))
        out = A.alg.scalar(0)
        powers_t = [A.alg.scalar(1)]
        powers_y = [A.alg.scalar(1)]
        for (i, j), c in sorted(self.terms.items()):
            while len(powers_t) <= i:
                powers_t.append(A.mul(powers_t[-1], t1))
            while len(powers_y) <= j:
                powers_y.append(A.mul(powers_y[-1], y2))
            out = out + A.mul(powers_t[i], powers_y[j]) * A.ring.embed(c)
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in sorted(self.terms.items(), key=lambda t: (-(t[0][0] + 2 * t[0][1]), -t[0][1])):
            mono = "*".join(x for x in (
                "" if i == 0 else ("T1" if i == 1 else f"T1^{i}"),
                "" if j == 0 else ("Y2" if j == 1 else f"Y2^{j}")) if x)
            s = fmt(c)
            neg = s.startswith("-")
            body = s[1:] if neg else s
            if not mono:
                term = body
            elif body == "1":
                term = mono
            elif " " in body:
                term = f"({body})*{mono}"
            else:
                term = f"{body}*{mono}"
            parts.append((neg, term))
        out = ("-" if parts[0][0] else "") + parts[0][1]
        for neg, term in parts[1:]:
            out += (" - " if neg else " + ") + term
        return out

    def __repr__(self):
        return f"InvariantPoly({self})"


def monomials_upto(degree: int) -> list:
    """Monomials (i, j) with i + 2j <= degree, by weighted degree then j."""
    return [(d - 2 * j, j) for d in range(degree + 1) for j in range(d // 2 + 1)]


def generic_names(prefix: str, degree: int) -> list:
    return [f"{prefix}{k}" for k in range(len(monomials_upto(degree)))]


@dataclass(frozen=True)
class GradingDerivation:
    """d on R: multiplication by the weighted degree on homogeneous parts."""

    def __call__(self, f: InvariantPoly) -> InvariantPoly:
        return f.grading()


# -------------------------------------------------------------- R-forms
@dataclass
class RForm:
    """f0 + f1 t2 + f2 t3 with f_i in R (left coefficients)."""

    f0: InvariantPoly
    f1: InvariantPoly
    f2: InvariantPoly

    def __add__(self, o):
        return RForm(self.f0 + o.f0, self.f1 + o.f1, self.f2 + o.f2)

    def scale(self, r: InvariantPoly) -> "RForm":
        return RForm(r * self.f0, r * self.f1, r * self.f2)

    def __eq__(self, o):
        return self.f0 == o.f0 and self.f1 == o.f1 and self.f2 == o.f2

    def embed(self, A: Presentation) -> NcPoly:
        return (self.f0.embed(A) + A.mul(self.f1.embed(A), A.gen("t2"))
                + A.mul(self.f2.embed(A), A.gen("t3")))

    def __str__(self):
        return f"{self.f0} + ({self.f1})*t2 + ({self.f2})*t3"


# ----------------------------------------------------------- the group
@lru_cache(maxsize=None)
def _a5(budget: int) -> Presentation:
    return catalog.entry("a5").presentation.with_budget(budget)


def a5(budget: int = 8) -> Presentation:
    """A(5) over the rationals with a given degree budget (completed work is shared)."""
    return _a5(budget)


def sigma(A: Presentation | None = None) -> GradedMap:
    """sigma: t_i -> sum_{j <= i} t_j."""
    A = A or a5()
    return GradedMap(A, A, {"t1": "t1", "t2": "t2 + t1", "t3": "t3 + t2 + t1"}, name="sigma")


@dataclass
class Aut5Element:
    """tau(a, u, lam); ``ring`` holds a, lam and the coefficients of u."""

    a: object
    u: InvariantPoly
    lam: object
    ring: ParamRing

    def __post_init__(self):
        self.a = self.ring.coerce(self.a)
        self.lam = self.ring.coerce(self.lam)
        if is_zero(self.a):
            raise ZeroScale("a must be nonzero")
        if self.u.ring != self.ring:
            self.u = self.u.over(self.ring)

    # images as R-forms
    def rform(self, gen: str) -> RForm:
        R = self.ring
        a, u, lam = self.a, self.u, self.lam
        zero = InvariantPoly({}, R)
        T1 = InvariantPoly.T1(R)
        if gen == "t1":
            return RForm(T1 * a, zero, zero)
        if gen == "t2":
            return RForm(T1 * u * a, InvariantPoly.const(a, R), zero)
        if gen == "t3":
            half = R.one / 2
            f0 = (u - u.grading() + u * u - lam) * T1 * (a * half)
            return RForm(f0, u * a, InvariantPoly.const(a, R))
        raise KeyError(gen)

    def on_R(self, f: InvariantPoly) -> InvariantPoly:
        """g(f) for f in R: f(a T1, a^2 (Y2 + lam T1^2))."""
        R = self.ring
        T1, Y2 = InvariantPoly.T1(R), InvariantPoly.Y2(R)
        return f.over(R).subs(T1 * self.a, (Y2 + T1 * T1 * self.lam) * (self.a * self.a))

    def apply_rform(self, F: RForm) -> RForm:
        """g(f0 + f1 t2 + f2 t3) = g(f0) + g(f1) g(t2) + g(f2) g(t3)."""
        out = RForm(self.on_R(F.f0), InvariantPoly({}, self.ring), InvariantPoly({}, self.ring))
        out = out + self.rform("t2").scale(self.on_R(F.f1))
        out = out + self.rform("t3").scale(self.on_R(F.f2))
        return out

    # images in A(5)
    def image_degree(self) -> int:
        return max(1, 2 * max(self.u.degree(), 0) + 1)

    def presentation(self, extra: int = 0) -> Presentation:
        need = 2 * self.image_degree() + extra
        A = a5(max(8, need))
        return A if A.ring == self.ring else A.over(self.ring)

    def images(self, A: Presentation | None = None) -> dict:
        A = A or self.presentation()
        return {g: self.rform(g).embed(A) for g in ("t1", "t2", "t3")}

    def map(self, A: Presentation | None = None) -> GradedMap:
        A = A or self.presentation()
        return GradedMap(A, A, self.images(A), graded=False, name="tau")

    def is_identity(self) -> bool:
        return eq(self.a, 1) and not self.u and is_zero(self.lam)

    def same(self, other: "Aut5Element") -> bool:
        return eq(self.a, self.ring.embed(other.a)) and self.u == other.u.over(self.ring) \
            and eq(self.lam, self.ring.embed(other.lam))

    def to_dict(self) -> dict:
        return {"a": fmt(self.a), "u": str(self.u), "lambda": fmt(self.lam)}

    def __str__(self):
        return f"tau({fmt(self.a)}, {self.u}, {fmt(self.lam)})"


def make_auto(a, u, lam, ring: ParamRing | None = None, check: bool = True) -> Aut5Element:
    """tau(a, u, lam); with ``check`` the images are certified to respect the relations of A(5)."""
    if ring is None:
        ring = u.ring if isinstance(u, InvariantPoly) else ParamRing()
    if isinstance(u, str):
        u = InvariantPoly.parse(u, ring)
    elif not isinstance(u, InvariantPoly):
        u = InvariantPoly.const(u, ring)
    g = Aut5Element(a, u, lam, ring)
    if check:
        mc = check_morphism(g.map())
        if not mc.ok:
            raise ArithmeticError(f"{g} is not a morphism: {mc.describe()}")
    return g


def compose_law(g: Aut5Element, h: Aut5Element) -> Aut5Element:
    """g o h = tau(a a', u + u'(a T1, a^2 (Y2 + lam T1^2)), lam + lam')."""
    R = g.ring
    return Aut5Element(g.a * R.embed(h.a), g.u + g.on_R(h.u.over(R)), g.lam + R.embed(h.lam), R)


def compose_rform(g: Aut5Element, h: Aut5Element) -> dict:
    """Generator images of g o h computed pointwise in R-form."""
    return {t: g.apply_rform(_over_rform(h.rform(t), g.ring)) for t in ("t1", "t2", "t3")}


def _over_rform(F: RForm, ring) -> RForm:
    return RForm(F.f0.over(ring), F.f1.over(ring), F.f2.over(ring))


def compose(g: Aut5Element, h: Aut5Element, verify: bool = True) -> Aut5Element:
    """g o h by the composition law, checked against pointwise composition of images."""
    out = compose_law(g, h)
    if verify:
        pointwise = compose_rform(g, h)
        for t, F in pointwise.items():
            if not F == out.rform(t):
                raise ArithmeticError(f"composition law disagrees with pointwise composition on {t}")
    return out


def inverse(g: Aut5Element, verify: bool = True) -> Aut5Element:
    """tau(1/a, -u(T1/a, (Y2 - lam T1^2)/a^2), -lam)."""
    R = g.ring
    T1, Y2 = InvariantPoly.T1(R), InvariantPoly.Y2(R)
    ia = R.one / g.a
    u_inv = -g.u.subs(T1 * ia, (Y2 - T1 * T1 * g.lam) * (ia * ia))
    out = Aut5Element(ia, u_inv, -g.lam, R)
    if verify:
        for t, F in compose_rform(g, out).items():
            if not F == identity(R).rform(t):
                raise ArithmeticError(f"inverse does not round-trip on {t}")
    return out


def identity(ring: ParamRing | None = None) -> Aut5Element:
    ring = ring or ParamRing()
    return Aut5Element(1, InvariantPoly({}, ring), 0, ring)


def pointwise_compose(g: Aut5Element, h: Aut5Element, A: Presentation | None = None) -> GradedMap:
    """Composition of the maps in A(5) normal forms (expensive: degrees multiply)."""
    A = A or a5(max(8, 2 * g.image_degree() * h.image_degree()))
    if A.ring != g.ring:
        A = A.over(g.ring)
    return g.map(A).compose(h.map(A))


def random_element(rng: random.Random, degree: int = 4, ring: ParamRing | None = None) -> Aut5Element:
    """tau(a, u, lam) with small random rational data and deg u <= degree."""
    ring = ring or ParamRing()

    def q():
        return Fraction(rng.randint(-5, 5), rng.randint(1, 4))

    a = q()
    while a == 0:
        a = q()
    u = InvariantPoly({m: q() for m in monomials_upto(degree) if rng.random() < 0.7}, ring)
    return Aut5Element(a, u, q(), ring)


# ------------------------------------------------- symbolic composition law
def verify_law_symbolic(degree: int = 4) -> bool:
    """The composition law with generic a, a', lam, lam', u, u' (deg <= degree), in R-form."""
    names = ["a", "b", "l", "m"] + generic_names("u", degree) + generic_names("v", degree)
    R = ParamRing(names)
    R.assume("nonzero", "a")
    R.assume("nonzero", "b")
    g = Aut5Element(R.param("a"), InvariantPoly.generic(R, "u", degree), R.param("l"), R)
    h = Aut5Element(R.param("b"), InvariantPoly.generic(R, "v", degree), R.param("m"), R)
    law = compose_law(g, h)
    pointwise = compose_rform(g, h)
    return all(pointwise[t] == law.rform(t) for t in ("t1", "t2", "t3"))


def verify_y2_image(g: Aut5Element) -> bool:
    """g(y2) = a^2 (y2 + lam t1^2) in A(5)."""
    A = g.presentation()
    y2 = A.nf(A.parse(Y2_TEXT))
    expected = InvariantPoly.Y2(g.ring) + InvariantPoly.T1(g.ring) ** 2 * g.lam
    return g.map(A).apply(y2) == (expected * (g.a * g.a)).embed(A)


# ------------------------------------------------------- commutation calculus
@dataclass
class CommutationCheck:
    v: str
    residues: dict

    @property
    def ok(self) -> bool:
        return all(not r.terms for r in self.residues.values())


def verify_commutation(v, A: Presentation | None = None) -> CommutationCheck:
    """t1 v = v t1, t2 v = v t2 - d(v) t1, t3 v = v t3 - d(v) t2 + 1/2 (d^2 - d)(v) t1."""
    if isinstance(v, str):
        v = InvariantPoly.parse(v, ParamRing())
    A = A or a5()
    if A.ring != v.ring:
        A = A.over(v.ring)
    t1, t2, t3 = A.gen("t1"), A.gen("t2"), A.gen("t3")
    V, dV = v.embed(A), v.grading().embed(A)
    ddV = v.grading().grading().embed(A)
    half = A.ring.one / 2
    res = {
        "t1": A.mul(t1, V) - A.mul(V, t1),
        "t2": A.mul(t2, V) - (A.mul(V, t2) - A.mul(dV, t1)),
        "t3": A.mul(t3, V) - (A.mul(V, t3) - A.mul(dV, t2) + A.mul((ddV - dV) * half, t1)),
    }
    return CommutationCheck(str(v), res)


# ------------------------------------------------------- invariant subring
def invariant_monomials(d: int, ring: ParamRing | None = None) -> list:
    ring = ring or ParamRing()
    return [InvariantPoly({(d - 2 * j, j): 1}, ring) for j in range(d // 2 + 1)]


@dataclass
class InvariantBasis:
    degree: int
    basis: list
    monomials: list
    matches: bool


def sigma_invariants(d: int, A: Presentation | None = None) -> InvariantBasis:
    """Basis of ker(sigma - id) in degree d, compared with the span of T1^i Y2^j, i + 2j = d."""
    A = A or a5(max(8, d))
    s = sigma(A)
    basis = eigenvectors_bounded(s, 1, d, degrees=[d])[d]
    monos = invariant_monomials(d, A.ring)
    embedded = [m.embed(A) for m in monos]
    return InvariantBasis(d, basis, embedded, span_equal(basis, embedded, A.ring))


def invariant_embedding_injective(d: int, A: Presentation | None = None) -> bool:
    """The embedded monomials of degree d are linearly independent."""
    from .linalg import rank

    A = A or a5(max(8, d))
    vecs = [m.embed(A).terms for m in invariant_monomials(d, A.ring)]
    return rank(vecs, A.ring) == len(vecs)
