"""Catalog of presentations with their Nakayama maps and verification data.

Each entry knows its presentation, the stated Nakayama automorphism, the
graded-automorphism families it should commute with, and (where one
exists) an independent derivation: a graded twist of a polynomial ring or a
chain through a quotient by a normal element.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from .algebras import GradedMap, Presentation
from .ncpoly import Alphabet
from .parser import parse_expr
from .scalars import ParamRing


def build(label: str, ring: ParamRing, declared, relations, precedence=None, degrees=None,
          budget: int | None = None, description: str = "") -> Presentation:
    """Presentation from relation strings (``lhs = rhs`` or bare expressions)."""
    alg = Alphabet.build(ring, declared, precedence, degrees)
    rels = []
    for r in relations:
        if "=" in r:
            lhs, rhs = r.split("=", 1)
            rels.append(parse_expr(alg, lhs) - parse_expr(alg, rhs))
        else:
            rels.append(parse_expr(alg, r))
    return Presentation(alg, rels, label, budget, description=description)


def linear_map(A: Presentation, spec: dict, name: str = "", target: Presentation | None = None) -> GradedMap:
    """GradedMap from ``{generator: expression string}``; unlisted generators are fixed."""
    target = target or A
    images = {}
    for n in A.alg.declared:
        text = spec.get(n, n)
        images[n] = parse_expr(target.alg, text) if isinstance(text, str) else text
    return GradedMap(A, target, images, name=name)


def polynomial_ring(n: int, ring: ParamRing | None = None, degrees=None, label: str | None = None) -> Presentation:
    """k[t1..tn] with t_n > ... > t1."""
    ring = ring or ParamRing()
    names = [f"t{i}" for i in range(1, n + 1)]
    rels = [f"{b}*{a} - {a}*{b}" for i, a in enumerate(names) for b in names[i + 1:]]
    return build(label or f"poly{n}", ring, names, rels, degrees=degrees,
                 description=f"commutative polynomial ring in {n} variables")


def skew_polynomial_ring(ring: ParamRing, names, p: dict, label: str) -> Presentation:
    """Skew polynomial ring with t_j t_i = p[(i, j)] t_i t_j for i < j (p given as strings)."""
    rels = []
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            c = p.get((i, j), "1")
            rels.append(f"{names[j]}*{names[i]} - ({c})*{names[i]}*{names[j]}")
    return build(label, ring, names, rels)


def skew_nakayama(A: Presentation, p: dict) -> GradedMap:
    """t_i -> (prod_s p_si) t_i with p_ji = p_ij^-1 (the skew polynomial formula)."""
    from .parser import parse_scalar

    names = A.alg.declared
    images = {}
    for i, n in enumerate(names):
        c = A.ring.one
        for s in range(len(names)):
            if s == i:
                continue
            if s < i:
                c = c * parse_scalar(A.ring, p.get((s, i), "1"))
            else:
                c = c / parse_scalar(A.ring, p.get((i, s), "1"))
        images[n] = A.gen(n) * c
    return GradedMap(A, A, images, name="mu")


# ------------------------------------------------------------------ entries
@dataclass
class TwistRecipe:
    """A graded twist of a polynomial ring that should reproduce an entry."""

    source: Presentation
    sigmas: list
    convention: str
    index: tuple
    hdet: tuple | None = None
    note: str = ""


@dataclass
class QuotientChain:
    """mu_A o tau on A/(z) compared with the Nakayama map of another algebra B with B/(z) = A/(z).

    ``ring`` (optional) is a larger scalar ring in which both sides live.
    """

    z_text: str
    other: Presentation
    other_mu: GradedMap
    other_z_text: str
    ring: ParamRing | None = None
    note: str = ""


@dataclass
class Family:
    """A symbolic family of graded automorphisms: builder receives the extended presentation."""

    name: str
    params: tuple
    build: Callable
    assumptions: tuple = ()


@dataclass
class Entry:
    id: str
    title: str
    presentation: Presentation
    mu: GradedMap
    formula: str = ""
    eigenvalues: list | None = None
    families: list = field(default_factory=list)
    twists: list = field(default_factory=list)
    chain: QuotientChain | None = None
    generic: list = field(default_factory=list)


def _family_ring(ring: ParamRing, names, nonzero=()) -> ParamRing:
    ext = ring.extend(names)
    for n in nonzero:
        ext.assume("nonzero", n)
    return ext


def diagonal_family(names, nonzero=True, constraint: Callable | None = None) -> Callable:
    """Builder for t_i -> c_i t_i; ``constraint`` may rewrite some c_i in terms of others."""

    def make(A: Presentation) -> GradedMap:
        cs = {n: A.ring.param(f"c{k + 1}") for k, n in enumerate(A.alg.declared)}
        if constraint is not None:
            cs = constraint(A, cs)
        return GradedMap(A, A, {n: A.gen(n) * cs[n] for n in A.alg.declared}, name="diag")

    return make


def scaling_family(A: Presentation) -> GradedMap:
    return GradedMap.scaling(A, [A.ring.param("c")] * A.alg.rank)


XI = Family("xi_c", ("c",), scaling_family)


def _a1() -> Entry:
    ring = ParamRing(["p12", "p13", "p23"])
    ring.assume("multiplicatively-independent", ("p12", "p13", "p23"))
    p = {(0, 1): "p12", (0, 2): "p13", (1, 2): "p23"}
    A = skew_polynomial_ring(ring, ["t1", "t2", "t3"], p, "a1")
    A.description = "skew polynomial ring t_j t_i = p_ij t_i t_j"
    mu = linear_map(A, {"t1": "p12^-1*p13^-1*t1", "t2": "p12*p23^-1*t2", "t3": "p13*p23*t3"}, "mu")
    fam = Family("diagonal", ("c1", "c2", "c3"), diagonal_family(3))
    ev = [ring.coerce(mu.images[n].coefficient((A.alg.index(n),))) for n in A.alg.declared]
    return Entry("a1", "skew polynomial ring in three variables", A, mu, "t1 -> p21*p31*t1, ...",
                 ev, [XI, fam], generic=["p12, p13, p23 multiplicatively independent"])


def corollary_family(n: int = 4, s: int = 2, label: str | None = None) -> Entry:
    """k<t1..tn>/(t_n t_{n-1} - p t_{n-1} t_n - sum_{i<=s} t_i^2, t_i central for i <= n-2)."""
    if not (n >= 3 and 1 <= s <= n - 2):
        raise ValueError("need n >= 3 and 1 <= s <= n-2")
    ring = ParamRing(["p"])
    ring.assume("not-root-of-unity", "p")
    names = [f"t{i}" for i in range(1, n + 1)]
    rels = []
    for i in range(n - 2):
        for j in range(i + 1, n):
            rels.append(f"{names[j]}*{names[i]} - {names[i]}*{names[j]}")
    omega = " + ".join(f"{names[i]}^2" for i in range(s))
    rels.append(f"{names[-1]}*{names[-2]} - p*{names[-2]}*{names[-1]} - ({omega})")
    label = label or ("a2" if (n, s) == (3, 1) else "c27")
    A = build(label, ring, names, rels, description=f"central extension family, n={n}, s={s}")
    mu = linear_map(A, {names[-2]: f"p^-1*{names[-2]}", names[-1]: f"p*{names[-1]}"}, "mu")
    B = skew_polynomial_ring(ring, names, {(n - 2, n - 1): "p"}, f"{label}-skew")
    mu_B = skew_nakayama(B, {(n - 2, n - 1): "p"})
    chain = QuotientChain(omega, B, mu_B, omega, note="Omega = sum of squares is central")

    def constrain(A2, cs):
        # c_i^2 must equal c_{n-1} c_n for i <= s; keep c1 free and set c_n accordingly
        cs = dict(cs)
        c1 = cs[names[0]]
        for i in range(1, s):
            cs[names[i]] = c1
        cs[names[-1]] = c1 * c1 / cs[names[-2]]
        return cs

    fam = Family("diagonal", tuple(f"c{k}" for k in range(1, n + 1)), diagonal_family(n, constraint=constrain))
    ev = [A.ring.one] * (n - 2) + [A.ring.param("p") ** -1, A.ring.param("p")]
    return Entry(label, f"central extension of a skew plane (n={n}, s={s})", A, mu,
                 f"t_{n - 1} -> p^-1 t_{n - 1}, t_{n} -> p t_{n}", ev, [XI, fam], chain=chain,
                 generic=["p not a root of unity"])


def _a3() -> Entry:
    ring = ParamRing(["q"])
    ring.assume("not-root-of-unity", "q")
    A = build("a3", ring, ["t1", "t2", "t3"],
              ["(t2+t1)*t1 - t1*t2", "t3*t1 - q*t1*t3", "t3*t2 - q*(t2+t1)*t3"],
              description="left twist of k[t1,t2,t3] by t2 -> t2-t1, t3 -> q t3")
    mu = linear_map(A, {"t1": "q^-1*t1", "t2": "q^-1*(t2-3*t1)", "t3": "q^2*t3"}, "mu")
    C = polynomial_ring(3, ring, label="poly3")
    sigma = linear_map(C, {"t2": "t2 - t1", "t3": "q*t3"}, "sigma")
    fam = Family("block_triangular", ("c1", "c2", "c3"), _block_triangular, ("c1", "c3"))
    return Entry("a3", "left twist with a unipotent block", A, mu, "t2 -> q^-1(t2-3t1)",
                 None, [XI, fam], [TwistRecipe(C, [sigma], "left", (3,))],
                 generic=["q not a root of unity"])


def _block_triangular(A: Presentation) -> GradedMap:
    return linear_map(A, {"t1": "c1*t1", "t2": "c1*t2 + c2*t1", "t3": "c3*t3"}, "g")


def _a4() -> Entry:
    ring = ParamRing(["p"])
    ring.assume("not-root-of-unity", "p")
    degs = {"t1": (1, 0), "t2": (1, 0), "t3": (0, 1)}
    A = build("a4", ring, ["t1", "t2", "t3"],
              ["(t2+t1)*t1 - t1*t2", "t3*t1 - p*t1*t3", "t3*t2 - p*t2*t3"], degrees=degs,
              description="Z^2-graded left twist of k[t1,t2,t3]")
    mu = linear_map(A, {"t1": "p^-1*t1", "t2": "p^-1*(t2-2*t1)", "t3": "p^2*t3"}, "mu")
    C = polynomial_ring(3, ring, degrees=degs, label="poly3-z2")
    s1 = linear_map(C, {"t2": "t2 - t1"}, "sigma1")
    s2 = linear_map(C, {"t1": "p^-1*t1", "t2": "p^-1*t2"}, "sigma2")
    fam = Family("block_triangular", ("c1", "c2", "c3"), _block_triangular, ("c1", "c3"))
    xi = Family("xi_c", ("c",), lambda B: GradedMap.scaling(B, [B.ring.param("c")] * 2))
    return Entry("a4", "Z^2-graded twist", A, mu, "t2 -> p^-1(t2-2t1)", None, [xi, fam],
                 [TwistRecipe(C, [s1, s2], "left", (2, 1))], generic=["p not a root of unity"])


def _a5() -> Entry:
    ring = ParamRing()
    A = build("a5", ring, ["t1", "t2", "t3"],
              ["(t2+t1)*t1 - t1*t2", "(t3+t2+t1)*t1 - t1*t3", "(t3+t2+t1)*t2 - (t2+t1)*t3"],
              description="twist of k[t1,t2,t3] by a full unipotent Jordan block")
    mu = linear_map(A, {"t2": "t2 - 3*t1", "t3": "t3 - 3*t2 + 3*t1"}, "mu")
    C = polynomial_ring(3, ring, label="poly3")
    left = linear_map(C, {"t2": "t2 - t1", "t3": "t3 - t2"}, "sigma")
    right = linear_map(C, {"t2": "t2 + t1", "t3": "t3 + t2 + t1"}, "sigma")
    fam = Family("upper_unipotent", ("a", "c1", "c2"), _upper_unipotent, ("a",))
    return Entry("a5", "twist by a full Jordan block", A, mu, "t2 -> t2-3t1, t3 -> t3-3t2+3t1", None,
                 [XI, fam], [TwistRecipe(C, [left], "left", (3,)),
                             TwistRecipe(C, [right], "right", (3,), note="sigma: t_i -> sum_{j<=i} t_j")])


def _upper_unipotent(A: Presentation) -> GradedMap:
    return linear_map(A, {"t1": "a*t1", "t2": "a*t2 + c1*t1", "t3": "a*t3 + c1*t2 + c2*t1"}, "g")


def down_up(alpha: str = "alpha", beta: str = "beta", ring: ParamRing | None = None, label: str = "a6") -> Presentation:
    ring = ring or ParamRing(["alpha", "beta"])
    return build(label, ring, ["x", "y"],
                 [f"x^2*y - ({alpha})*x*y*x - ({beta})*y*x^2", f"x*y^2 - ({alpha})*y*x*y - ({beta})*y^2*x"],
                 precedence=["x", "y"], description="graded down-up algebra")


def _a6() -> Entry:
    ring = ParamRing(["alpha", "beta"])
    ring.assume("not-root-of-unity", "beta")
    A = down_up(ring=ring)
    mu = linear_map(A, {"x": "-beta*x", "y": "-beta^-1*y"}, "mu")
    # w is a root of w^2 - alpha w - beta; either root works
    wring = ParamRing(["alpha", "beta", "w"], ["w^2 - alpha*w - beta"], order="lex",
                      precedence=["w", "alpha", "beta"])
    wring.assume("nonzero", "w")
    wring.assume("nonzero", "beta")
    B = build("a6-skew", wring, ["x", "y"], ["x*y - w*y*x"], precedence=["x", "y"])
    mu_B = linear_map(B, {"x": "w*x", "y": "w^-1*y"}, "mu")
    chain = QuotientChain("x*y - w*y*x", B, mu_B, "x*y - w*y*x", ring=wring,
                          note="Omega = xy - w yx with w^2 = alpha w + beta")
    fam = Family("diagonal", ("c1", "c2"), diagonal_family(2))
    ev = [-ring.param("beta"), -ring.param("beta") ** -1]
    return Entry("a6", "graded down-up algebra", A, mu, "x -> -beta x, y -> -beta^-1 y", ev, [XI, fam],
                 chain=chain, generic=["beta not a root of unity"])


def _a7() -> Entry:
    ring = ParamRing(["p"])
    ring.assume("not-root-of-unity", "p")
    A = build("a7", ring, ["x", "y"], ["x^2*y - p*y*x^2", "x*y^2 + p*y^2*x"], precedence=["x", "y"],
              description="non-Koszul algebra S(p)")
    mu = linear_map(A, {"x": "p*x", "y": "-p^-1*y"}, "mu")
    B = down_up("0", "p", ring, "a6(0,p)")
    mu_B = linear_map(B, {"x": "-p*x", "y": "-p^-1*y"}, "mu")
    chain = QuotientChain("y^2", B, mu_B, "y^2",
                          note="A(7)/(y^2) = A(6)/(y^2) at alpha=0, beta=p")
    fam = Family("diagonal", ("c1", "c2"), diagonal_family(2))
    ev = [ring.param("p"), -ring.param("p") ** -1]
    return Entry("a7", "the algebra S(p)", A, mu, "x -> p x, y -> -p^-1 y", ev, [XI, fam], chain=chain,
                 generic=["p not a root of unity"])


def d5_ring() -> ParamRing:
    ring = ParamRing(["p", "q"], ["2*p^4 - p^2*q + q^2"], order="lex", precedence=["q", "p"])
    ring.assume("nonzero", "p")
    ring.assume("nonzero", "q")
    return ring


def _d5() -> Entry:
    ring = d5_ring()
    A = build("d5", ring, ["x", "y"], [
        "x^3*y + p*x^2*y*x + q*x*y*x^2 - p*(2*p^2+q)*y*x^3",
        "x^2*y^2 - p*(p^2+q)*y*x*y*x - q^2*y^2*x^2 + (q-p^2)*x*y^2*x + (q-p^2)*y*x^2*y",
        "x*y^3 + p*y*x*y^2 + q*y^2*x*y - p*(2*p^2+q)*y^3*x",
    ], precedence=["x", "y"], description="five-dimensional family D")
    mu = linear_map(A, {"x": "p^-3*q^4*x", "y": "p^3*q^-4*y"}, "mu")
    fam = Family("diagonal", ("c1", "c2"), diagonal_family(2))
    ev = [ring.param("p") ** -3 * ring.param("q") ** 4, ring.param("p") ** 3 * ring.param("q") ** -4]
    return Entry("d5", "family D", A, mu, "x -> p^-3 q^4 x", ev, [XI, fam])


def g5_ring() -> ParamRing:
    ring = ParamRing(["p", "q", "s", "g"], ["p*s^3*g + q*s*g^2 + s^5 + g^3", "p^3*s - q^3"],
                     order="lex", precedence=["g", "s", "q", "p"])
    for n in ("p", "q", "s", "g"):
        ring.assume("nonzero", n)
    for e in ("p*s - q^2", "q*s + g", "q*s - g", "s^5 + g^3"):
        ring.assume("nonzero", e)
    return ring


def _g5() -> Entry:
    ring = g5_ring()
    l2 = "(-s^2*(q*s-g)/(g*(q*s+g)))"
    l3 = "(s - p*g*(p*s-q^2)/(q*(q*s+g)))"
    l4 = "(-g^2/s^2)"
    l5 = "((p*s^2+q*g)/(q*s+g))"
    A = build("g5", ring, ["x", "y"], [
        "x^3*y + p*x^2*y*x + q*x*y*x^2 + s*y*x^3",
        f"x^2*y^2 + {l2}*x*y*x*y + {l3}*y*x*y*x + {l4}*y^2*x^2 + {l5}*x*y^2*x + {l5}*y*x^2*y",
        "x*y^3 + p*y*x*y^2 + q*y^2*x*y + s*y^3*x",
    ], precedence=["x", "y"], description="five-dimensional family G")
    mu = linear_map(A, {"x": "g*x", "y": "g^-1*y"}, "mu")
    fam = Family("diagonal", ("c1", "c2"), diagonal_family(2))
    ev = [ring.param("g"), ring.param("g") ** -1]
    return Entry("g5", "family G", A, mu, "x -> g x, y -> g^-1 y", ev, [XI, fam])


def _poly(n: int) -> Callable:
    def make() -> Entry:
        A = polynomial_ring(n)
        mu = GradedMap.identity(A)
        mu.name = "mu"
        fam = Family("triangular", tuple(f"c{k}" for k in range(1, n + 1)) + ("b",), _triangular,
                     tuple(f"c{k}" for k in range(1, n + 1)))
        return Entry(f"poly{n}", f"polynomial ring in {n} variables", A, mu, "identity",
                     [A.ring.one] * n, [XI, fam])

    return make


def _triangular(A: Presentation) -> GradedMap:
    spec = {n: f"c{k + 1}*{n}" for k, n in enumerate(A.alg.declared)}
    if len(A.alg.declared) > 1:
        spec["t2"] = "c2*t2 + b*t1"
    return linear_map(A, spec, "g")


def _jordan() -> Entry:
    ring = ParamRing()
    A = build("jordan", ring, ["t1", "t2"], ["(t2+t1)*t1 - t1*t2"], description="Jordan plane")
    mu = linear_map(A, {"t2": "t2 - 2*t1"}, "mu")
    C = polynomial_ring(2, ring)
    sigma = linear_map(C, {"t2": "t2 - t1"}, "sigma")
    fam = Family("phi", ("a", "b"), lambda B: linear_map(B, {"t1": "a*t1", "t2": "a*t2 + b*t1"}, "phi"), ("a",))
    return Entry("jordan", "Jordan plane", A, mu, "t2 -> t2 - 2t1", None, [XI, fam],
                 [TwistRecipe(C, [sigma], "left", (2,))])


_BUILDERS = {
    "a1": _a1,
    "a2": lambda: corollary_family(3, 1, "a2"),
    "a3": _a3,
    "a4": _a4,
    "a5": _a5,
    "a6": _a6,
    "a7": _a7,
    "d5": _d5,
    "g5": _g5,
    "poly1": _poly(1),
    "poly2": _poly(2),
    "poly3": _poly(3),
    "poly4": _poly(4),
    "jordan": _jordan,
    "c27": lambda: corollary_family(4, 2, "c27"),
}

IDS = tuple(_BUILDERS)


@lru_cache(maxsize=None)
def entry(ident: str) -> Entry:
    """Catalog entry by id (cached; the entry's presentation completes lazily)."""
    try:
        return _BUILDERS[ident]()
    except KeyError:
        raise KeyError(f"unknown catalog id {ident!r}; known: {', '.join(IDS)}") from None


def get(ident: str) -> Presentation:
    return entry(ident).presentation


def family_instance(e: Entry, fam: Family):
    """The family map over the entry's algebra with family parameters adjoined."""
    ring = _family_ring(e.presentation.ring, fam.params, fam.assumptions)
    A = e.presentation.over(ring)
    return A, fam.build(A), e.mu.over(A)
