"""Graded twists, the Nakayama twist identity and the quotient rule.

A twisting system is one graded automorphism per grading coordinate.  The
twisted relations are obtained letterwise: under the left convention letter
k of a relation word is replaced by sigma_{-v}(x_k) where v is the
multidegree of the letters after it; under the right convention v is the
multidegree of the letters before it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import catalog
from .algebras import (GradedMap, Presentation, check_morphism, commutes, is_graded_automorphism,
                       normalizing_map, transport)
from .kernels import free_mul
from .linalg import det, rank
from .ncpoly import NcPoly
from .report import Check, Report, UNDETERMINED
from .scalars import fmt, is_zero

LEFT, RIGHT = "left", "right"


class ZeroHdetEntry(ValueError):
    """An hdet entry is zero, so xi_hdet is not invertible."""


class NotPolynomialSource(ValueError):
    """hdet can only be computed for twists of commutative polynomial rings."""


class NotNormal(ValueError):
    """The element is not normal (no normalizing automorphism in degree one)."""


class NotMuEigenvector(ValueError):
    """The Nakayama map does not send z to a scalar multiple of z."""


@dataclass
class TwistData:
    """A twisting system on ``source``: commuting graded automorphisms, one per coordinate."""

    source: Presentation
    system: list
    convention: str = LEFT

    def __post_init__(self):
        self.convention = self.convention.lower()
        if self.convention not in (LEFT, RIGHT):
            raise ValueError(f"convention must be left or right, got {self.convention!r}")
        if len(self.system) != self.source.alg.rank:
            raise ValueError(f"need {self.source.alg.rank} automorphisms, got {len(self.system)}")
        for k, s in enumerate(self.system):
            chk = is_graded_automorphism(s)
            if not chk.ok:
                raise ValueError(f"twisting map {k + 1} is not a graded automorphism: {chk.reason}")
        for i in range(len(self.system)):
            for j in range(i + 1, len(self.system)):
                if commutes(self.system[i], self.system[j]):
                    raise ValueError(f"twisting maps {i + 1} and {j + 1} do not commute")
        self._powers: dict = {}
        self._combined: dict = {}

    def power(self, i: int, k: int) -> GradedMap:
        key = (i, k)
        if key not in self._powers:
            self._powers[key] = self.system[i].power(k)
        return self._powers[key]

    def sigma(self, v: Sequence[int]) -> GradedMap:
        """sigma_v = prod_i sigma_i^{v_i}."""
        v = tuple(v)
        if v not in self._combined:
            m = GradedMap.identity(self.source)
            for i, k in enumerate(v):
                if k:
                    m = self.power(i, k).compose(m)
            self._combined[v] = m
        return self._combined[v]

    def inverse(self) -> "TwistData":
        return TwistData(self.source, [s.inverse() for s in self.system], self.convention)


def twist_relation(f: NcPoly, T: TwistData) -> NcPoly:
    """Rewrite one relation of the source in terms of the twisted product."""
    alg = f.alg
    ring = alg.ring
    zero = ring.zero
    out: dict = {}
    for w, c in f.terms.items():
        degs = [alg.degrees[i] for i in w]
        acc = {(): c}
        for k, letter in enumerate(w):
            rest = degs[k + 1:] if T.convention == LEFT else degs[:k]
            v = tuple(-sum(d[j] for d in rest) for j in range(alg.rank))
            img = T.sigma(v).images[alg.names[letter]]
            acc = free_mul(acc, transport(img, alg).terms, zero)
        for u, e in acc.items():
            out[u] = out.get(u, zero) + e
    return NcPoly(out, alg)


def twist_presentation(T: TwistData, label: str | None = None, budget: int | None = None,
                       complete: bool = False) -> Presentation:
    """The twisted algebra, on the same generators as the source."""
    src = T.source
    rels = [twist_relation(r, T) for r in src.relations]
    P = Presentation(src.alg, [r for r in rels if r.terms], label or f"{src.label}^sigma",
                     src.budget if budget is None else budget, src.cap)
    if complete:
        P.rewrite()
    return P


def is_polynomial_ring(A: Presentation) -> bool:
    """True if A is the commutative polynomial ring on its generators."""
    gens = A.gens()
    A.rewrite(2)
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if A.nf(gens[i] * gens[j] - gens[j] * gens[i]).terms:
                return False
    n = len(gens)
    return A.rewrite(2).hilbert_coeffs(2)[2] == n * (n + 1) // 2


def hdet(T: TwistData) -> tuple:
    """Determinants of the degree-one matrices; only for polynomial-ring sources."""
    if not is_polynomial_ring(T.source):
        raise NotPolynomialSource("hdet is only computed for twists of polynomial rings; supply it explicitly")
    return tuple(det(s.matrix(), T.source.ring) for s in T.system)


def twist_nakayama(mu: GradedMap, T: TwistData, l: Sequence[int], hdet_vec: Sequence | None = None,
                   target: Presentation | None = None) -> GradedMap:
    """Nakayama map of the twist from that of the source.

    Left convention: mu o sigma^l o xi_hdet^-1.  A right twist by sigma is
    isomorphic to the left twist by sigma^-1, so for it the result is
    mu o sigma^-l o xi_hdet (valid when mu commutes with sigma, which is
    checked).
    """
    A = T.source
    ring = A.ring
    l = tuple(l)
    if len(l) != A.alg.rank:
        raise ValueError("AS index must have one entry per grading coordinate")
    hv = tuple(hdet(T) if hdet_vec is None else (ring.coerce(h) for h in hdet_vec))
    for h in hv:
        if is_zero(h):
            raise ZeroHdetEntry("hdet entries must be nonzero")
    if T.convention == LEFT:
        s = T.sigma(l)
        xi = GradedMap.scaling(A, [ring.one / h for h in hv])
    else:
        for sg in T.system:
            if commutes(mu, sg):
                raise ValueError("right-convention formula needs mu to commute with the twisting maps")
        s = T.sigma(tuple(-k for k in l))
        xi = GradedMap.scaling(A, list(hv))
    m = mu.compose(s.compose(xi))
    target = target or twist_presentation(T)
    return GradedMap(target, target, {n: transport(f, target.alg) for n, f in m.images.items()}, name="mu")


# ------------------------------------------------------------------ quotients
@dataclass
class QuotientResult:
    quotient: Presentation
    mu: GradedMap
    tau: GradedMap
    eigenvalue: object
    regular_to: int

    def describe(self) -> str:
        return (f"tau: {self.tau.fmt()}; mu(z) = {fmt(self.eigenvalue)} z; "
                f"z is not a zero divisor through degree {self.regular_to}")


def regularity_degree(z: NcPoly, A: Presentation, up_to: int | None = None) -> int:
    """Largest D such that left and right multiplication by z are injective on A_d, d <= D.

    This is the partial regularity certificate: regularity itself is not
    decidable at bounded degree.
    """
    dz = z.degree()
    top = (A.budget if up_to is None else up_to) - dz
    good = -1
    for d in range(0, top + 1):
        basis = A.basis(d)
        for side in ("left", "right"):
            prods = [(A.mul(z, b) if side == "left" else A.mul(b, z)).terms for b in basis]
            if rank(prods, A.ring) != len(basis):
                return good
        good = d
    return good


def quotient_nakayama(mu_A: GradedMap, z: NcPoly, A: Presentation, regular_to: int | None = None) -> QuotientResult:
    """mu_A o tau on A/(z), where z a = tau(a) z."""
    z = A.nf(transport(z, A.alg))
    res = normalizing_map(z, A)
    if not res.normal:
        raise NotNormal(res.reason)
    tau = res.tau
    image = mu_A.apply(z)
    lw = z.leading_word()
    c = image.coefficient(lw) / z.leading_coefficient()
    if (image - z * c).terms:
        raise NotMuEigenvector(f"mu(z) = {image} is not a multiple of z")
    Q = A.quotient(z, f"{A.label}/({z})")
    m = mu_A.compose(tau)
    mu_Q = GradedMap(Q, Q, {n: transport(f, Q.alg) for n, f in m.images.items()}, name="mu")
    reg = regularity_degree(z, A, regular_to if regular_to is not None else min(A.budget, z.degree() + 4))
    return QuotientResult(Q, mu_Q, tau, c, reg)


# ------------------------------------------------------------------ records
@dataclass
class NakayamaRecord:
    algebra: str
    mu: GradedMap
    as_index: tuple | None = None
    hdet: tuple | None = None
    provenance: list = field(default_factory=list)
    eigenvalues: list | None = None

    def to_dict(self) -> dict:
        out = {
            "algebra": self.algebra,
            "mu": {n: str(f) for n, f in self.mu.images.items()},
            "provenance": list(self.provenance),
        }
        if self.as_index is not None:
            out["as_index"] = list(self.as_index)
        if self.hdet is not None:
            out["hdet"] = [fmt(h) for h in self.hdet]
        if self.eigenvalues is not None:
            out["eigenvalues"] = [fmt(x) for x in self.eigenvalues]
        return out


def recipe_data(recipe: "catalog.TwistRecipe") -> TwistData:
    return TwistData(recipe.source, list(recipe.sigmas), recipe.convention)


def _assumption_texts(ring) -> list:
    return [a.describe() for a in ring.assumptions]


def _guard(report: Report, name: str, fn):
    """Run a sub-check; exceptions become failures, never crashes."""
    try:
        return fn()
    except Exception as e:  # noqa: BLE001 - every sub-check failure is reported
        report.add(Check(name, "fail", f"{type(e).__name__}: {e}"))
        return None


def verify_catalog(ident: str, rules_degree: int = 6) -> Report:
    """Verify the stored Nakayama map of a catalog entry; see the README for the checks."""
    e = catalog.entry(ident)
    A = e.presentation
    mu = e.mu
    rep = Report(ident)
    record = NakayamaRecord(ident, mu, eigenvalues=e.eigenvalues, provenance=["stated formula"])
    assumptions = _assumption_texts(A.ring)

    def stated():
        mc = check_morphism(mu)
        rep.add(Check.of("mu well defined", mc.ok, mc.describe(), assumptions))
        auto = is_graded_automorphism(mu)
        rep.add(Check.of("mu graded automorphism", auto.ok,
                         auto.reason or "degree-one matrix invertible", auto.pivots))

    _guard(rep, "mu well defined", stated)

    for k, recipe in enumerate(e.twists):
        tag = f"twist[{recipe.convention}]"

        def twist_checks(recipe=recipe, tag=tag):
            T = recipe_data(recipe)
            P = twist_presentation(T, label=f"{ident}-twist")
            deg = min(rules_degree, P.budget, A.budget)
            same = P.rewrite(deg).same_rules(A.rewrite(deg), deg)
            rep.add(Check.of(f"{tag} relations", same,
                             f"completed rules agree through degree {deg}" if same else "rule sets differ"))
            hv = recipe.hdet if recipe.hdet is not None else hdet(T)
            src_mu = GradedMap.identity(recipe.source)
            derived = twist_nakayama(src_mu, T, recipe.index, hv, target=A)
            diff = derived.differences(mu)
            details = f"l={list(recipe.index)}, hdet={[fmt(h) for h in hv]}; derived {derived.fmt()}"
            if diff:
                details += "; differs on " + ", ".join(sorted(diff))
            rep.add(Check.of(f"{tag} twist identity", not diff, details))
            record.as_index = tuple(recipe.index)
            record.hdet = tuple(hv)
            record.provenance.append(f"twist identity ({recipe.convention})")

        _guard(rep, f"{tag} twist identity", twist_checks)

    if e.chain is not None:
        _guard(rep, "quotient chain", lambda: _chain_checks(e, rep, record))

    for fam in e.families:
        def fam_check(fam=fam):
            B, g, mu_B = catalog.family_instance(e, fam)
            mc = check_morphism(g)
            diff = commutes(mu_B, g) if mc.ok else {}
            ok = mc.ok and not diff
            if not mc.ok:
                det_ = f"family map not well defined: {mc.describe()}"
            elif diff:
                det_ = "mu o g - g o mu nonzero on " + ", ".join(sorted(diff))
            else:
                det_ = f"{g.fmt()} commutes with mu"
            rep.add(Check.of(f"commutes with {fam.name}", ok, det_, _assumption_texts(B.ring)))

        _guard(rep, f"commutes with {fam.name}", fam_check)

    rep.data["nakayama"] = record.to_dict()
    return rep


def _chain_checks(e, rep: Report, record: NakayamaRecord):
    ch = e.chain
    A = e.presentation
    ring = ch.ring or A.ring
    A2 = A.over(ring)
    mu_A = e.mu.over(A2)
    B = ch.other.over(ring)
    mu_B = ch.other_mu.over(B)
    qa = quotient_nakayama(mu_A, A2.parse(ch.z_text), A2)
    rep.add(Check.of("quotient rule on A/(z)", check_morphism(qa.mu).ok, qa.describe()))
    zb = B.nf(B.parse(ch.other_z_text))
    if zb.terms:
        qb = quotient_nakayama(mu_B, zb, B)
        QB, muQB, tauB = qb.quotient, qb.mu, qb.tau
    else:
        QB, muQB, tauB = B, mu_B, GradedMap.identity(B)
    deg = min(6, QB.budget, qa.quotient.budget)
    same = qa.quotient.rewrite(deg).same_rules(QB.rewrite(deg), deg)
    rep.add(Check.of("quotients coincide", same, f"completed rules agree through degree {deg}"))
    diff = qa.mu.differences(GradedMap(qa.quotient, qa.quotient,
                                       {n: transport(f, qa.quotient.alg) for n, f in muQB.images.items()}))
    rep.add(Check.of("chain mu_A o tau = mu of the other quotient", not diff,
                     f"mu_A o tau: {qa.mu.fmt()}; other side: {muQB.fmt()}"))
    # lift back: mu_A = mu_{B/(z)} o tau^-1 on generators
    lifted_images = muQB.compose(GradedMap(QB, QB, {n: transport(f, QB.alg)
                                                    for n, f in qa.tau.inverse().images.items()}))
    lifted = GradedMap(A2, A2, {n: transport(f, A2.alg) for n, f in lifted_images.images.items()})
    diff2 = lifted.differences(mu_A)
    rep.add(Check.of("quotient rule reproduces mu", not diff2, f"derived {lifted.fmt()}"))
    record.provenance.append("quotient rule")
    if tauB is not None:
        rep.data["chain"] = {"z": str(qa.quotient.relations[-1]), "tau": qa.tau.fmt(),
                             "regular_through_degree": qa.regular_to}


def verify_all(ids: Sequence[str] | None = None) -> list:
    return [verify_catalog(i) for i in (ids or catalog.IDS)]


__all__ = ["TwistData", "twist_presentation", "twist_relation", "twist_nakayama", "hdet", "quotient_nakayama",
           "QuotientResult", "NakayamaRecord", "verify_catalog", "ZeroHdetEntry", "NotNormal",
           "NotMuEigenvector", "NotPolynomialSource", "UNDETERMINED", "LEFT", "RIGHT"]
