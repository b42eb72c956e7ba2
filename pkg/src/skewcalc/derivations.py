"""Derivations, bounded LND search, higher derivations and exponential automorphisms.

A derivation is given by generator images and extended by the Leibniz rule.
The search for homogeneous locally nilpotent derivations is exact: for each
shift the derivation space is a linear solve, and nilpotency on generators
becomes a homogeneous polynomial system in the coordinates of that space,
decided by a Groebner basis over the parameter field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial, lcm
from typing import Sequence

import sympy

from .algebras import GradedMap, Presentation, check_morphism, specialize_poly, transport
from .linalg import nullspace
from .ncpoly import DegreeBudgetExceeded, NcPoly, NonInvertibleLeadingCoefficient
from .scalars import ParamRing, ZeroDenominator, is_zero

VALID, FAILS = "valid", "fails"
GLOBAL_LIMIT = 4  # largest space handed to the joint nilpotency system
SCOPE = "relative to homogeneous LNDs with shift in {lo}..{hi}, nilpotency bound {N}"


class NotValidDerivation(ValueError):
    """The generator images do not extend to a derivation."""


class TruncationTooSmall(ValueError):
    """Some generator needs components beyond the truncation order."""


# ------------------------------------------------------------------ derivations
@dataclass
class DerivationSpec:
    """delta(t_i) = images[name]; ``shift`` is the degree shift or None if inhomogeneous."""

    algebra: Presentation
    images: dict
    shift: int | None = None
    name: str = "delta"

    def __post_init__(self):
        A = self.algebra
        imgs = {}
        for n in A.alg.declared:
            f = self.images.get(n, A.alg.scalar(0))
            if isinstance(f, str):
                f = A.parse(f)
            imgs[n] = A.nf(transport(f, A.alg)) if f.terms else NcPoly({}, A.alg)
        unknown = set(self.images) - set(A.alg.declared)
        if unknown:
            raise ValueError(f"images given for unknown generators {sorted(unknown)}")
        self.images = imgs
        if self.shift is None:
            shifts = set()
            for n, f in imgs.items():
                d = A.alg.total_degree((A.alg.index(n),))
                for w in f.terms:
                    shifts.add(A.alg.total_degree(w) - d)
            if len(shifts) == 1:
                self.shift = shifts.pop()

    @property
    def homogeneous(self) -> bool:
        return self.shift is not None

    def image_list(self) -> list:
        return [self.images[n] for n in self.algebra.alg.names]

    def apply(self, f: NcPoly) -> NcPoly:
        """Normal form of delta(f), by the Leibniz rule on each word."""
        A = self.algebra
        imgs = self.image_list()
        out = NcPoly({}, A.alg)
        for w, c in f.terms.items():
            for k, letter in enumerate(w):
                g = imgs[letter]
                if not g.terms:
                    continue
                pre = NcPoly({w[:k]: A.ring.one}, A.alg)
                post = NcPoly({w[k + 1:]: A.ring.one}, A.alg)
                out = out + pre * g * post * c
        if not out.terms:
            return out
        return A.nf(out)

    def power(self, k: int, f: NcPoly) -> NcPoly:
        for _ in range(k):
            if not f.terms:
                break
            f = self.apply(f)
        return f

    def nilpotency_indices(self, N: int) -> dict | None:
        """Smallest k <= N with delta^k(t_i) = 0 per generator, or None if some exceeds N."""
        out = {}
        for n in self.algebra.alg.declared:
            f = self.algebra.gen(n)
            k = 0
            while f.terms and k < N:
                f = self.apply(f)
                k += 1
            if f.terms:
                return None
            out[n] = k
        return out

    def fmt(self) -> str:
        return ", ".join(f"{n} -> {self.images[n]}" for n in self.algebra.alg.declared)

    def to_dict(self) -> dict:
        return {"images": {n: str(f) for n, f in self.images.items()}, "shift": self.shift}


@dataclass
class DerivationCheck:
    status: str
    index: int | None = None
    residue: NcPoly | None = None

    def __bool__(self):
        return self.status == VALID

    def describe(self) -> str:
        if self.status == VALID:
            return "valid derivation"
        return f"relation {self.index + 1} maps to {self.residue}"


def is_derivation(d: DerivationSpec) -> DerivationCheck:
    """Valid iff every defining relation maps to zero."""
    for k, r in enumerate(d.algebra.relations):
        res = d.apply(r)
        if res.terms:
            return DerivationCheck(FAILS, k, res)
    return DerivationCheck(VALID)


def commutes_with(d: DerivationSpec, mu: GradedMap) -> dict:
    """Generators where mu(delta(t)) and delta(mu(t)) differ (empty when they commute)."""
    out = {}
    for n in d.algebra.alg.declared:
        t = d.algebra.gen(n)
        diff = mu.apply(d.apply(t)) - d.apply(mu.apply(t))
        if diff.terms:
            out[n] = diff
    return out


# ---------------------------------------------------------------- LND search
def torus_weights(A: Presentation) -> dict:
    """Integer weights per generator making every relation homogeneous (a basis of all such gradings)."""
    alg = A.alg
    r = len(alg.names)
    diffs = []
    for rel in A.relations:
        counts = [tuple(w.count(i) for i in range(r)) for w in rel.terms]
        for c in counts[1:]:
            diffs.append([a - b for a, b in zip(c, counts[0])])
    if diffs:
        ker = sympy.Matrix(diffs).nullspace()
    else:
        ker = [sympy.Matrix([1 if i == j else 0 for i in range(r)]) for j in range(r)]
    cols = []
    for v in ker:
        den = lcm(*[x.q for x in v])
        cols.append([int(x * den) for x in v])
    return {alg.names[i]: tuple(c[i] for c in cols) for i in range(r)}


def _word_weight(w, alg, weights) -> tuple:
    k = len(next(iter(weights.values()), ()))
    out = [0] * k
    for letter in w:
        for j, x in enumerate(weights[alg.names[letter]]):
            out[j] += x
    return tuple(out)


def derivation_space(A: Presentation, shift: int, by_weight: bool = False):
    """Basis of the homogeneous derivations of a given shift (exact linear solve).

    With ``by_weight`` the result is a dict from torus weight to a basis of
    the derivations of that weight; relations are weight-homogeneous, so the
    linear system splits.
    """
    alg = A.alg
    one = A.ring.one
    weights = torus_weights(A)
    unknowns: dict = {}
    for n in alg.declared:
        d = alg.total_degree((alg.index(n),)) + shift
        if d < 0:
            continue
        words = [()] if d == 0 else A.normal_words(d)
        wn = weights[n]
        for w in words:
            ww = _word_weight(w, alg, weights)
            key = tuple(a - b for a, b in zip(ww, wn))
            unknowns.setdefault(key, []).append((n, w))
    out = {}
    for key in sorted(unknowns):
        us = unknowns[key]
        rows: dict = {}
        for u in us:
            d = DerivationSpec(A, {u[0]: NcPoly({u[1]: one}, alg)}, shift)
            for k, r in enumerate(A.relations):
                for w, c in d.apply(r).terms.items():
                    rows.setdefault((k, w), {})[u] = c
        basis = nullspace(rows.values(), us, A.ring)
        if basis:
            out[key] = [_spec_from_vector(A, v, shift) for v in basis]
    if by_weight:
        return out
    return [d for key in out for d in out[key]]


def required_budget(A: Presentation, shifts: Sequence[int], D: int, N: int) -> int:
    """Largest degree the search may need: D, and deg(t_i) + s*N for every shift."""
    top = max(A.alg.total_degree((i,)) for i in range(len(A.alg.names)))
    return max([D] + [top + s * N for s in shifts])


def _spec_from_vector(A, v, shift, name="delta"):
    images: dict = {}
    for (n, w), c in v.items():
        images[n] = images.get(n, A.alg.scalar(0)) + NcPoly({w: c}, A.alg)
    return DerivationSpec(A, images, shift, name)


@dataclass
class ShiftResult:
    """Outcome of the nilpotency analysis for one shift."""

    shift: int
    dimension: int
    status: str  # "none", "found" or "undetermined"
    lnds: list = field(default_factory=list)  # (DerivationSpec, indices)
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "shift": self.shift,
            "derivation_dimension": self.dimension,
            "status": self.status,
            "lnds": [{**d.to_dict(), "nilpotency": idx} for d, idx in self.lnds],
            "note": self.note,
        }


@dataclass
class LndSearch:
    algebra: str
    shifts: tuple
    N: int
    results: list

    @property
    def lnds(self) -> list:
        return [d for r in self.results for d, _ in r.lnds]

    @property
    def complete(self) -> bool:
        return all(r.status != "undetermined" for r in self.results)

    @property
    def scope(self) -> str:
        return SCOPE.format(lo=self.shifts[0], hi=self.shifts[-1], N=self.N)

    def to_dict(self) -> dict:
        return {"scope": self.scope, "complete": self.complete, "shifts": [r.to_dict() for r in self.results]}


def _sympy_field(ring: ParamRing):
    syms = [sympy.Symbol(n) for n in ring.params]
    return sympy.QQ.frac_field(*syms) if syms else sympy.QQ


def _nilpotent_subspace(A: Presentation, basis: list, N: int):
    """Decide which combinations of ``basis`` vanish on all generators after N steps.

    Returns (status, vectors, note): status "none" (only zero), "found"
    (every combination of ``vectors`` is nilpotent) or "undetermined".
    """
    ring = A.ring
    if ring.is_constrained:
        note = "parameter ring has constraints; polynomial system not decided"
    else:
        note = ""
    m = len(basis)
    current = [[ring.one if i == j else ring.zero for j in range(m)] for i in range(m)]
    while current:
        k = len(current)
        names = [f"_c{i}" for i in range(k)]
        ext = ring.extend(names)
        cs = [ext.param(nm) for nm in names]
        A_ext = A.over(ext)
        images = {}
        for n in A.alg.declared:
            f = A_ext.alg.scalar(0)
            for c, vec in zip(cs, current):
                g = sum((transport(basis[j].images[n], A_ext.alg) * ext.embed(vec[j]) for j in range(m) if not is_zero(vec[j])),
                        A_ext.alg.scalar(0))
                f = f + g * c
            images[n] = f
        generic = DerivationSpec(A_ext, images)
        eqs = []
        for n in A.alg.declared:
            f = generic.power(N, A_ext.gen(n))
            eqs.extend(f.terms.values())
        if not eqs:
            return "found", current, note
        if note:
            return "undetermined", current, note
        if k > GLOBAL_LIMIT:
            return "undetermined", current, f"{k} unknowns exceed the limit {GLOBAL_LIMIT} for the polynomial system"
        csyms = [sympy.Symbol(nm) for nm in names]
        polys = [sympy.together(ext.to_sympy(e)) for e in eqs]
        polys = [sympy.numer(p) for p in polys]
        G = sympy.groebner(polys, *csyms, domain=_sympy_field(ring), order="grevlex")
        if G.is_zero_dimensional:
            return "none", [], "nilpotency system has only the zero solution"
        linear = _linear_constraints(G, csyms)
        if not linear:
            return "undetermined", current, f"nonlinear nilpotency system: {[str(g) for g in G.exprs]}"
        # restrict to the common kernel of the linear constraints
        rows = []
        for lin in linear:
            row = {}
            for i, s in enumerate(csyms):
                coef = lin.coeff(s)
                if coef != 0:
                    row[i] = _from_sympy(ring, coef)
            rows.append(row)
        ker = nullspace(rows, list(range(k)), ring)
        if not ker:
            return "none", [], "nilpotency forces every coordinate to vanish"
        current = [[sum((v.get(i, ring.zero) * current[i][j] for i in range(k)), ring.zero) for j in range(m)]
                   for v in ker]
    return "none", [], ""


def _linear_constraints(G, csyms) -> list:
    """Linear forms l with a power of l in the ideal, read off factors of the basis elements."""
    out = []
    for g in G.exprs:
        f = sympy.factor_list(g, *csyms)
        factors = [b for b, _ in f[1] if sympy.Poly(b, *csyms).total_degree() > 0]
        if len(factors) == 1 and sympy.Poly(factors[0], *csyms).total_degree() == 1:
            out.append(sympy.expand(factors[0]))
    return out


def _from_sympy(ring: ParamRing, expr):
    from .parser import parse_scalar

    return parse_scalar(ring, str(sympy.together(expr)).replace("**", "^"))


SAMPLE_POINTS = ((Fraction(2, 3), Fraction(5, 7), Fraction(11, 13), Fraction(17, 19), Fraction(23, 29)),
                 (Fraction(3, 5), Fraction(7, 11), Fraction(13, 17), Fraction(19, 23), Fraction(29, 31)))


def _sample(A: Presentation, degree: int):
    """A rational specialization of A whose completed rules are the generic rules specialized.

    Returns (B, values) or None.  Normal forms computed with such a B are
    the specializations of the generic normal forms.
    """
    ring = A.ring
    if not ring.params or ring.is_constrained:
        return None
    generic = A.rewrite(degree).rule_list(degree)
    q = ParamRing()
    for point in SAMPLE_POINTS:
        values = dict(zip(ring.params, point))
        try:
            B = A.specialize(values, q).with_budget(A.budget)
            spec = [(lw, specialize_poly(t, values, B.alg)) for lw, t in generic]
            mine = B.rewrite(degree).rule_list(degree)
        except (ZeroDenominator, NonInvertibleLeadingCoefficient):
            continue
        if [lw for lw, _ in mine] == [lw for lw, _ in spec] and all(a == b for (_, a), (_, b) in zip(mine, spec)):
            return B, values
    return None


def _screen(A, sample, vb, N) -> str:
    """'none' when a good specialization already has no nonzero nilpotent element, else 'unknown'."""
    if sample is None:
        return "unknown"
    B, values = sample
    try:
        spec = [DerivationSpec(B, {n: specialize_poly(f, values, B.alg) for n, f in d.images.items()}, d.shift)
                for d in vb]
    except ZeroDenominator:
        return "unknown"
    if len(spec) == 1:
        return "none" if spec[0].nilpotency_indices(N) is None else "unknown"
    st, _, _ = _nilpotent_subspace(B, spec, N)
    return "none" if st == "none" else "unknown"


def _combine(A, basis, vec, s, name):
    images = {}
    for n in A.alg.declared:
        f = A.alg.scalar(0)
        for j, b in enumerate(basis):
            if not is_zero(vec[j]):
                f = f + b.images[n] * vec[j]
        images[n] = f
    return DerivationSpec(A, images, s, name=name)


def lnd_search(A: Presentation, shifts: Sequence[int], D: int, N: int) -> LndSearch:
    """Homogeneous LNDs with shift in ``shifts`` whose generator images die within N steps.

    For every shift the result is either exhaustive ("none" or "found", in
    which case every combination of the listed derivations is nilpotent on
    generators) or "undetermined".  Weight components are screened first:
    the top torus-weight component of a derivation nilpotent within N is
    again one, so when no weight space contains a nonzero such derivation
    the shift has none at all.
    """
    shifts = tuple(shifts)
    need = required_budget(A, shifts, D, N)
    if need > A.budget:
        raise DegreeBudgetExceeded(need, A.budget)
    sample = _sample(A, need)
    results = []
    for s in shifts:
        spaces = derivation_space(A, s, by_weight=True)
        basis = [d for key in spaces for d in spaces[key]]
        if not basis:
            results.append(ShiftResult(s, 0, "none", note="no derivations of this shift"))
            continue
        nilpotent_weights = []
        undecided = []
        screened = 0
        for key, vb in spaces.items():
            if _screen(A, sample, vb, N) == "none":
                screened += 1
                continue
            if len(vb) == 1:
                st = "found" if vb[0].nilpotency_indices(N) is not None else "none"
            else:
                st, _, _ = _nilpotent_subspace(A, vb, N)
            if st == "found":
                nilpotent_weights.append(key)
            elif st == "undetermined":
                undecided.append(key)
        if not nilpotent_weights and not undecided:
            how = " (checked at a rational specialization)" if screened else ""
            results.append(ShiftResult(s, len(basis), "none",
                                       note="no weight component is nilpotent on generators" + how))
            continue
        if len(basis) > GLOBAL_LIMIT:
            results.append(ShiftResult(s, len(basis), "undetermined",
                                       note=f"nilpotent weight components exist and the space has dimension "
                                            f"{len(basis)} > {GLOBAL_LIMIT}"))
            continue
        status, vecs, note = _nilpotent_subspace(A, basis, N)
        found = []
        if status == "found":
            for k, vec in enumerate(vecs):
                d = _combine(A, basis, vec, s, f"delta{s}_{k}")
                found.append((d, d.nilpotency_indices(N)))
        results.append(ShiftResult(s, len(basis), status, found, note))
    return LndSearch(A.label, shifts, N, results)


@dataclass
class MlBounded:
    """Per degree, a basis of the intersection of kernels of the LNDs found."""

    components: dict
    full: dict
    scope: str
    complete: bool

    def to_dict(self) -> dict:
        return {
            "scope": self.scope,
            "complete": self.complete,
            "dimensions": {str(d): len(b) for d, b in self.components.items()},
            "full_component": {str(d): v for d, v in self.full.items()},
            "basis": {str(d): [str(f) for f in b] for d, b in self.components.items()},
        }


def ml_bounded(A: Presentation, shifts: Sequence[int], D: int, N: int,
               search: LndSearch | None = None) -> MlBounded:
    """Intersection of the kernels of all LNDs found, degree by degree up to D."""
    search = search or lnd_search(A, shifts, D, N)
    lnds = search.lnds
    comps, full = {}, {}
    for d in range(1, D + 1):
        words = A.normal_words(d)
        rows: dict = {}
        for k, delta in enumerate(lnds):
            for w in words:
                img = delta.apply(NcPoly({w: A.ring.one}, A.alg))
                for u, c in img.terms.items():
                    rows.setdefault((k, u), {})[w] = c
        cols = sorted(words, key=A.alg.key, reverse=True)
        basis = nullspace(rows.values(), cols, A.ring)
        comps[d] = [NcPoly(v, A.alg) for v in basis]
        full[d] = len(basis) == len(words)
    return MlBounded(comps, full, search.scope, search.complete)


# ---------------------------------------------------------- higher derivations
@dataclass
class HigherDerivation:
    """Components d_0 = id, d_1, ..., d_N given on generators; extended by the Hasse-Schmidt rule."""

    algebra: Presentation
    components: list  # components[n][name] -> NcPoly
    N: int
    iterative: bool = False

    def on_generator(self, n: int, name: str) -> NcPoly:
        if n == 0:
            return self.algebra.gen(name)
        if n > self.N:
            raise TruncationTooSmall(f"component {n} beyond truncation {self.N}")
        return self.components[n][name]

    def apply(self, n: int, f: NcPoly) -> NcPoly:
        """d_n(f): sum over splittings n = n_1 + ... + n_k of products of component images."""
        A = self.algebra
        names = A.alg.names
        out = NcPoly({}, A.alg)
        for w, c in f.terms.items():
            for parts in _compositions(n, len(w)):
                term = NcPoly({(): c}, A.alg)
                for letter, k in zip(w, parts):
                    term = term * self.on_generator(k, names[letter])
                    if not term.terms:
                        break
                out = out + term
        return A.nf(out) if out.terms else out

    def check_iterative(self, words: Sequence[NcPoly] = ()) -> bool:
        """d_i d_j = C(i+j, i) d_{i+j} for i + j <= N, on generators and given elements."""
        A = self.algebra
        tests = list(A.gens()) + list(words)
        for i in range(1, self.N + 1):
            for j in range(1, self.N + 1 - i):
                for f in tests:
                    if self.apply(i, self.apply(j, f)) != self.apply(i + j, f) * comb(i + j, i):
                        return False
        return True

    def support(self) -> int:
        """Largest n with a nonzero component on some generator."""
        top = 0
        for n in range(1, self.N + 1):
            if any(f.terms for f in self.components[n].values()):
                top = n
        return top


def _compositions(n: int, k: int):
    """Tuples of k nonnegative integers summing to n."""
    if k == 0:
        if n == 0:
            yield ()
        return
    if k == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


def canonical_higher(d: DerivationSpec, N: int) -> HigherDerivation:
    """d_n = delta^n / n! on generators, extended by the Hasse-Schmidt rule."""
    chk = is_derivation(d)
    if not chk:
        raise NotValidDerivation(chk.describe())
    A = d.algebra
    comps: list = [None]
    cur = {n: A.gen(n) for n in A.alg.declared}
    for k in range(1, N + 1):
        cur = {n: d.apply(f) for n, f in cur.items()}
        inv = A.ring.one / factorial(k)
        comps.append({n: f * inv for n, f in cur.items()})
    h = HigherDerivation(A, comps, N)
    h.iterative = h.check_iterative()
    return h


@dataclass
class ExpResult:
    """G_{c d} on A, the generic G_{d,t} on A[t], and their certificates."""

    map: GradedMap
    generic: GradedMap
    morphism_ok: bool
    generic_morphism_ok: bool
    identity_at_zero: bool
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.morphism_ok and self.generic_morphism_ok and self.identity_at_zero


def _exp_images(h: HigherDerivation, c, alg) -> dict:
    A = h.algebra
    images = {}
    for n in A.alg.declared:
        f = transport(A.gen(n), alg)
        for k in range(1, h.N + 1):
            g = h.components[k][n]
            if g.terms:
                f = f + transport(g, alg) * c ** k
        images[n] = f
    return images


def exp_automorphism(h: HigherDerivation, c=1, t: str = "t") -> ExpResult:
    """G(a) = sum_i c^i d_i(a); also G_{d,t} with t a new central parameter."""
    A = h.algebra
    for n in A.alg.declared:
        if h.components[h.N][n].terms:
            raise TruncationTooSmall(f"d_{h.N}({n}) is nonzero; raise the truncation order")
    if isinstance(c, str):
        ring = A.ring.extend([c]) if c not in A.ring.params else A.ring
        c = ring.param(c)
    else:
        ring = getattr(c, "ring", A.ring)
        c = ring.coerce(c)
    B = A.over(ring)
    G = GradedMap(B, B, _exp_images(h, c, B.alg), graded=False, name="G")
    tname = t
    while tname in A.ring.params:
        tname += "_"
    tring = A.ring.extend([tname])
    T = A.over(tring)
    tt = tring.param(tname)
    Gt = GradedMap(T, T, _exp_images(h, tt, T.alg), graded=False, name="G_t")
    at_zero = all(
        specialize_poly(Gt.images[n], {tname: 0}, A.alg) == A.gen(n) for n in A.alg.declared
    )
    return ExpResult(G, Gt, bool(check_morphism(G)), bool(check_morphism(Gt)), at_zero,
                     note=f"morphism checked with components up to {h.N}")
