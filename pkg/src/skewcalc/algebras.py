"""Presentations, graded maps and bounded-degree linear searches.

A :class:`Presentation` bundles an alphabet, homogeneous relations and a
lazily extended rewriting system.  A :class:`GradedMap` sends generators to
normal-form polynomials of another presentation.  The searches (centers,
normalizing maps, eigenvectors) are exact linear solves in the normal-word
basis of one degree at a time.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .linalg import Pivots, SingularMatrix, mat_inv, nullspace
from .ncpoly import Alphabet, DegreeBudgetExceeded, NcPoly, RewriteSystem
from .scalars import ParamRing, fmt, is_zero

DEFAULT_BUDGET = 8
DEFAULT_NILPOTENCY = 6
DEFAULT_CAP = 64


def default_budget() -> int:
    """Degree budget: ``SKEWCALC_BUDGET`` if set, else 8."""
    raw = os.environ.get("SKEWCALC_BUDGET", "").strip()
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise ValueError(f"SKEWCALC_BUDGET must be an integer, got {raw!r}") from None
        if value < 1:
            raise ValueError("SKEWCALC_BUDGET must be positive")
        return value
    return DEFAULT_BUDGET


class Presentation:
    """Generators, relations and a rewriting system completed on demand.

    ``budget`` is the largest degree to which the rewriting system may be
    completed automatically; asking for more raises DegreeBudgetExceeded.
    """

    def __init__(self, alg: Alphabet, relations: Sequence[NcPoly], label: str = "custom",
                 budget: int | None = None, cap: int = DEFAULT_CAP, description: str = ""):
        self.alg = alg
        self.relations = list(relations)
        self.label = label
        self.budget = default_budget() if budget is None else budget
        self.cap = cap
        self.description = description
        self._rs: RewriteSystem | None = None

    def __repr__(self):
        return f"Presentation({self.label}: {', '.join(str(r) for r in self.relations)})"

    @property
    def ring(self) -> ParamRing:
        return self.alg.ring

    def rewrite(self, degree: int | None = None) -> RewriteSystem:
        """The rewriting system, completed at least to ``degree`` (default: budget)."""
        degree = self.budget if degree is None else degree
        if degree > self.budget:
            raise DegreeBudgetExceeded(degree, self.budget)
        if self._rs is None:
            self._rs = RewriteSystem(self.alg, self.relations, cap=self.cap)
        if self._rs.completed_to < degree:
            self._rs.extend(degree)
        return self._rs

    def with_budget(self, budget: int) -> "Presentation":
        """Same presentation with another budget, sharing completed work."""
        other = Presentation(self.alg, self.relations, self.label, budget, self.cap, self.description)
        other._rs = self._rs
        return other

    def gen(self, name: str) -> NcPoly:
        return self.alg.gen(name)

    def gens(self) -> list:
        return self.alg.gens()

    def parse(self, text: str, extra: dict | None = None) -> NcPoly:
        from .parser import parse_expr

        return parse_expr(self.alg, text, extra=extra)

    def nf(self, f: NcPoly) -> NcPoly:
        return self.rewrite(f.degree()).normal_form(f)

    def mul(self, f: NcPoly, g: NcPoly) -> NcPoly:
        """Normal form of f*g for normal-form f, g."""
        return self.rewrite(f.degree() + g.degree()).multiply(f, g)

    def normal_words(self, degree: int) -> list:
        return self.rewrite(degree).normal_words(degree)

    def basis(self, degree: int) -> list:
        """Normal words of a degree as NcPoly values."""
        one = self.ring.one
        return [NcPoly({w: one}, self.alg) for w in self.normal_words(degree)]

    def quotient(self, z: NcPoly, label: str | None = None) -> "Presentation":
        """The presentation of A/(z)."""
        return Presentation(self.alg, self.relations + [z], label or f"{self.label}/(z)", self.budget,
                            self.cap)

    def over(self, ring: ParamRing, label: str | None = None) -> "Presentation":
        """The same presentation over a larger scalar ring (e.g. with family parameters)."""
        if ring == self.ring:
            return self
        alg = Alphabet(self.alg.names, self.alg.degrees, ring, self.alg.declared)
        return Presentation(alg, [transport(r, alg) for r in self.relations], label or self.label,
                            self.budget, self.cap, self.description)

    def specialize(self, values: Mapping[str, object], ring: ParamRing, label: str | None = None) -> "Presentation":
        """Substitute parameters; the result lives over ``ring``."""
        alg = Alphabet(self.alg.names, self.alg.degrees, ring, self.alg.declared)
        rels = [specialize_poly(r, values, alg) for r in self.relations]
        return Presentation(alg, [r for r in rels if r], label or self.label, self.budget, self.cap)


def specialize_poly(f: NcPoly, values: Mapping[str, object], alg: Alphabet) -> NcPoly:
    src = f.alg.ring
    out = {}
    for w, c in f.terms.items():
        out[w] = src.specialize(c, values, alg.ring) if hasattr(c, "ring") else alg.ring.coerce(c)
    return NcPoly(out, alg)


def transport(f: NcPoly, alg: Alphabet) -> NcPoly:
    """Reinterpret ``f`` over an alphabet with the same letters (and ring embedding)."""
    if f.alg is alg:
        return f
    if f.alg.names != alg.names:
        raise ValueError("alphabets have different generators")
    return NcPoly({w: alg.ring.embed(c) for w, c in f.terms.items()}, alg)


# ---------------------------------------------------------------- maps
class GradedMap:
    """Algebra morphism source -> target given by generator images.

    Images are stored in the target's normal form.  With ``graded`` set,
    every image must be homogeneous of its generator's multidegree.
    """

    def __init__(self, source: Presentation, target: Presentation, images: Mapping[str, NcPoly],
                 graded: bool = True, name: str = ""):
        self.source = source
        self.target = target
        self.graded = graded
        self.name = name
        imgs = {}
        for gname in source.alg.declared:
            if gname not in images:
                raise ValueError(f"no image for generator {gname}")
            f = images[gname]
            if isinstance(f, str):
                f = target.parse(f)
            f = transport(f, target.alg)
            f = target.nf(f)
            if graded and f.terms:
                want = source.alg.degrees[source.alg.index(gname)]
                if f.multidegrees() != {tuple(want)}:
                    raise ValueError(f"image of {gname} is not homogeneous of degree {want}")
            imgs[gname] = f
        extra = set(images) - set(source.alg.declared)
        if extra:
            raise ValueError(f"images given for unknown generators {sorted(extra)}")
        self.images = imgs

    @classmethod
    def identity(cls, A: Presentation) -> "GradedMap":
        return cls(A, A, {n: A.gen(n) for n in A.alg.declared}, name="id")

    @classmethod
    def scaling(cls, A: Presentation, factors: Sequence) -> "GradedMap":
        """xi_v: multiplies multidegree (d1..dr) by prod v_i^d_i."""
        images = {}
        for n in A.alg.declared:
            deg = A.alg.degrees[A.alg.index(n)]
            c = A.ring.one
            for v, d in zip(factors, deg):
                c = c * A.ring.coerce(v) ** d
            images[n] = A.gen(n) * c
        return cls(A, A, images, name="xi")

    @classmethod
    def from_matrix(cls, A: Presentation, M: Sequence[Sequence], name: str = "") -> "GradedMap":
        """Linear map t_i -> sum_j M[i][j] t_j (declared order)."""
        gens = A.gens()
        images = {}
        for i, n in enumerate(A.alg.declared):
            f = A.alg.scalar(0)
            for j, g in enumerate(gens):
                if M[i][j]:
                    f = f + g * M[i][j]
            images[n] = f
        return cls(A, A, images, name=name)

    # ------------------------------------------------------------ action
    def image_list(self) -> list:
        """Images indexed by source letter id."""
        return [self.images[n] for n in self.source.alg.names]

    def apply(self, f: NcPoly) -> NcPoly:
        """Normal form in the target of the image of ``f``."""
        f = transport(f, self.source.alg)
        imgs = self.image_list()
        if not f.terms:
            return NcPoly({}, self.target.alg)
        deg = max(sum(imgs[i].degree() for i in w) for w in f.terms)
        rs = self.target.rewrite(deg)
        return rs.substitute(f, imgs)

    def __call__(self, f):
        if isinstance(f, str):
            f = self.source.parse(f)
        return self.apply(f)

    def compose(self, other: "GradedMap") -> "GradedMap":
        """``self o other`` (apply ``other`` first)."""
        images = {n: self.apply(transport(other.images[n], self.source.alg)) for n in other.source.alg.declared}
        return GradedMap(other.source, self.target, images, self.graded and other.graded,
                         name=f"{self.name}o{other.name}")

    def power(self, k: int) -> "GradedMap":
        if k < 0:
            return self.inverse().power(-k)
        out = GradedMap.identity(self.source)
        for _ in range(k):
            out = self.compose(out)
        return out

    def matrix(self) -> list:
        """m[i][j] = coefficient of generator j in the image of generator i (declared order)."""
        A = self.source.alg
        B = self.target.alg
        out = []
        for n in A.declared:
            f = self.images[n]
            out.append([f.coefficient((B.index(m),)) for m in B.declared])
        return out

    def is_linear(self) -> bool:
        return all(len(w) == 1 for f in self.images.values() for w in f.terms)

    def inverse(self, pivots: Pivots | None = None) -> "GradedMap":
        """Inverse of a linear endomorphism via its generator matrix."""
        if self.source is not self.target and self.source.alg.names != self.target.alg.names:
            raise ValueError("inverse needs an endomorphism")
        if not self.is_linear():
            raise ValueError("only linear maps are inverted by matrix")
        W = mat_inv(self.matrix(), self.source.ring, pivots)
        return GradedMap.from_matrix(self.source, W, name=f"{self.name}^-1")

    def same_as(self, other: "GradedMap") -> bool:
        """Equal generator images (exact)."""
        return all(self.images[n] == transport(other.images[n], self.target.alg) for n in self.source.alg.declared)

    def differences(self, other: "GradedMap") -> dict:
        return {n: self.images[n] - transport(other.images[n], self.target.alg)
                for n in self.source.alg.declared
                if not self.images[n] == transport(other.images[n], self.target.alg)}

    def over(self, A: Presentation, B: Presentation | None = None) -> "GradedMap":
        """Move the map to presentations over a larger scalar ring."""
        B = A if B is None else B
        return GradedMap(A, B, {n: transport(f, B.alg) for n, f in self.images.items()}, self.graded, self.name)

    def fmt(self) -> str:
        return ", ".join(f"{n} -> {self.images[n]}" for n in self.source.alg.declared)

    def __repr__(self):
        return f"GradedMap({self.fmt()})"


@dataclass
class MorphismCheck:
    """Outcome of :func:`check_morphism`."""

    ok: bool
    index: int | None = None
    residue: NcPoly | None = None

    def __bool__(self):
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "well defined"
        return f"relation {self.index + 1} maps to {self.residue}"


def check_morphism(phi: GradedMap) -> MorphismCheck:
    """WellDefined iff every source relation maps to zero in the target."""
    for k, r in enumerate(phi.source.relations):
        res = phi.apply(r)
        if res.terms:
            return MorphismCheck(False, k, res)
    return MorphismCheck(True)


@dataclass
class AutomorphismCheck:
    ok: bool
    morphism: MorphismCheck
    inverse_matrix: list | None = None
    reason: str = ""
    pivots: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def is_graded_automorphism(phi: GradedMap) -> AutomorphismCheck:
    """Morphism check plus invertibility of the degree-one matrix (witness: inverse)."""
    mc = check_morphism(phi)
    if not mc.ok:
        return AutomorphismCheck(False, mc, reason=mc.describe())
    if not phi.is_linear():
        return AutomorphismCheck(False, mc, reason="images are not linear in the generators")
    piv = Pivots(phi.source.ring)
    try:
        W = mat_inv(phi.matrix(), phi.source.ring, piv)
    except SingularMatrix as e:
        return AutomorphismCheck(False, mc, reason=f"degree-one matrix is singular ({e})")
    return AutomorphismCheck(True, mc, W, pivots=piv.describe())


def commutes(f: GradedMap, g: GradedMap) -> dict:
    """Generator-wise differences of f o g and g o f (empty when they commute)."""
    return f.compose(g).differences(g.compose(f))


# ---------------------------------------------------------------- searches
def _vectors_to_polys(vectors, alg) -> list:
    return [NcPoly(v, alg) for v in vectors]


def center_bounded(A: Presentation, D: int, pivots: Pivots | None = None) -> dict:
    """Per degree 1..D, a basis of the homogeneous central elements."""
    A.rewrite(D + 1)
    out = {}
    gens = A.gens()
    for d in range(1, D + 1):
        words = A.normal_words(d)
        rows: dict = {}
        for w in words:
            f = NcPoly({w: A.ring.one}, A.alg)
            for i, t in enumerate(gens):
                comm = A.mul(f, t) - A.mul(t, f)
                for u, c in comm.terms.items():
                    rows.setdefault((i, u), {})[w] = c
        cols = sorted(words, key=A.alg.key, reverse=True)
        out[d] = _vectors_to_polys(nullspace(rows.values(), cols, A.ring, pivots), A.alg)
    return out


@dataclass
class NormalResult:
    """Outcome of :func:`normalizing_map`: ``tau`` is set when the element is normal."""

    normal: bool
    tau: GradedMap | None = None
    reason: str = ""

    def __bool__(self):
        return self.normal


def normalizing_map(f: NcPoly, A: Presentation, pivots: Pivots | None = None) -> NormalResult:
    """Solve f*t_i = g_i*f for degree-one g_i; Normal(tau: t_i -> g_i) if all exist."""
    if not f.terms:
        raise ValueError("the zero element is not considered normal")
    f = A.nf(f)
    d = f.degree()
    A.rewrite(d + max(A.alg._tdeg))
    images = {}
    for name in A.alg.declared:
        t = A.gen(name)
        deg = A.alg.degrees[A.alg.index(name)]
        cands = [g for g in A.basis(sum(deg)) if g.multidegree() == tuple(deg)]
        lhs = A.mul(f, t)
        cols = list(range(len(cands))) + ["rhs"]
        rows: dict = {}
        for k, g in enumerate(cands):
            for u, c in A.mul(g, f).terms.items():
                rows.setdefault(u, {})[k] = c
        for u, c in lhs.terms.items():
            rows.setdefault(u, {})["rhs"] = -c
        sols = nullspace(rows.values(), cols, A.ring, pivots)
        sol = [s for s in sols if s.get("rhs")]
        if not sol:
            return NormalResult(False, reason=f"no degree-{sum(deg)} g with f*{name} = g*f")
        s = sol[0]
        scale = A.ring.one / s["rhs"]
        g = A.alg.scalar(0)
        for k, cand in enumerate(cands):
            if s.get(k):
                g = g + cand * (s[k] * scale)
        images[name] = g
    tau = GradedMap(A, A, images, name="tau")
    mc = check_morphism(tau)
    if not mc.ok:
        return NormalResult(False, reason=f"solved map is not a morphism: {mc.describe()}")
    return NormalResult(True, tau)


def eigenvectors_bounded(phi: GradedMap, lam, D: int, pivots: Pivots | None = None,
                         degrees: Sequence[int] | None = None) -> dict:
    """Per degree, a basis of ker(phi - lam) on the degree component.

    ``lam`` is a scalar or a callable ``d -> scalar`` giving the eigenvalue
    to test in degree ``d``.
    """
    A = phi.source
    A.rewrite(D)
    out = {}
    for d in (degrees if degrees is not None else range(1, D + 1)):
        words = A.normal_words(d)
        lv = lam(d) if callable(lam) else A.ring.coerce(lam)
        rows: dict = {}
        for w in words:
            img = phi.apply(NcPoly({w: A.ring.one}, A.alg))
            img = img - NcPoly({w: lv}, A.alg)
            for u, c in img.terms.items():
                rows.setdefault(u, {})[w] = c
        cols = sorted(words, key=A.alg.key, reverse=True)
        out[d] = _vectors_to_polys(nullspace(rows.values(), cols, A.ring, pivots), A.alg)
    return out


def span_equal(F: Sequence[NcPoly], G: Sequence[NcPoly], ring: ParamRing) -> bool:
    """True if two lists of polynomials span the same space."""
    from .linalg import rank

    a = rank([f.terms for f in F], ring)
    b = rank([g.terms for g in G], ring)
    c = rank([f.terms for f in F] + [g.terms for g in G], ring)
    return a == b == c
