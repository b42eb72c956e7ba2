"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py -v`` (lines appear in the
terminal report) or ``python3 tests/test_acceptance.py``.  All comparisons are
exact: normal forms must reduce to zero, scalars must compare equal.
"""

import random
import sys

import pytest
from sympy import series, symbols

from skewcalc import aut5, catalog
from skewcalc.algebras import GradedMap, center_bounded, check_morphism, eigenvectors_bounded, span_equal, transport
from skewcalc.derivations import commutes_with, lnd_search, ml_bounded, required_budget
from skewcalc.hopf import IDENTITY, conjugation_map, derive_pattern, power_closed_form, verify_closed_form
from skewcalc.scalars import ParamRing
from skewcalc.twistnak import TwistData, hdet, quotient_nakayama, twist_nakayama, twist_presentation, verify_catalog

NAKAYAMA_IDS = ("a1", "a2", "a3", "a4", "a5", "a6", "a7", "d5", "g5")


@pytest.fixture
def verdict(request):
    """Collect named sub-checks, print one line for the criterion, then assert."""
    reporter = request.config.pluginmanager.getplugin("terminalreporter")

    def emit(number, checks):
        failed = [name for name, ok in checks.items() if not ok]
        status = "PASS" if not failed else "FAIL"
        detail = f"{len(checks)} checks" if not failed else "failed: " + "; ".join(failed)
        line = f"criterion {number}: {status} ({detail})"
        print(line)
        if reporter is not None:
            reporter.write_line(line)
        assert not failed, line

    return emit


def _series(expr, n):
    t = symbols("t")
    s = series(expr(t), t, 0, n + 1).removeO()
    return [int(s.coeff(t, k)) for k in range(n + 1)]


# ------------------------------------------------------------------ 1
def test_criterion_01_nakayama_catalog(verdict):
    checks = {}
    for ident in NAKAYAMA_IDS:
        checks[f"verify nakayama {ident}"] = verify_catalog(ident).status == "pass"
    for ident in ("a3", "a4", "a5"):
        e = catalog.entry(ident)
        for recipe in e.twists:
            T = TwistData(recipe.source, recipe.sigmas, recipe.convention)
            h = recipe.hdet or hdet(T)
            mu = twist_nakayama(GradedMap.identity(recipe.source), T, recipe.index, h)
            target = GradedMap(mu.source, mu.source, {n: transport(f, mu.source.alg) for n, f in e.mu.images.items()})
            checks[f"twist identity {ident} ({recipe.convention})"] = mu.same_as(target)
    A3 = catalog.entry("a3")
    (r3,) = A3.twists
    T = TwistData(r3.source, r3.sigmas, r3.convention)
    mu3 = twist_nakayama(GradedMap.identity(r3.source), T, r3.index, hdet(T))
    checks["A(3) t2 -> q^-1 (t2 - 3 t1)"] = str(mu3.images["t2"]) == "1/q*t2 - 3/q*t1"
    verdict(1, checks)


# ------------------------------------------------------------------ 2
def test_criterion_02_twist_constructions(verdict):
    checks = {}
    poly = _series(lambda t: 1 / (1 - t) ** 3, 6)
    for ident, convention in (("a3", "left"), ("a4", "left"), ("a5", "right")):
        e = catalog.entry(ident)
        recipe = next(r for r in e.twists if r.convention == convention)
        P = twist_presentation(TwistData(recipe.source, recipe.sigmas, convention), budget=6)
        rs = P.rewrite(6)
        checks[f"{ident} rules ({convention})"] = rs.same_rules(e.presentation.with_budget(6).rewrite(6), 6)
        checks[f"{ident} hilbert"] = rs.hilbert_coeffs(6) == poly == [1, 3, 6, 10, 15, 21, 28]
    verdict(2, checks)


# ------------------------------------------------------------------ 3
def test_criterion_03_quotient_rule(verdict):
    e = catalog.entry("a7")
    A = e.presentation
    qa = quotient_nakayama(e.mu, A.parse("y^2"), A)
    # the other route: A(6) at alpha = 0, beta = p, divided by the same y^2
    B = catalog.down_up("0", "p", A.ring, "a6(0,p)")
    mu_B = catalog.linear_map(B, {"x": "-p*x", "y": "-p^-1*y"}, "mu")
    qb = quotient_nakayama(mu_B, B.parse("y^2"), B)
    Q = qa.quotient
    other = GradedMap(Q, Q, {n: transport(f, Q.alg) for n, f in qb.mu.images.items()})
    lifted = qa.mu.compose(GradedMap(Q, Q, qa.tau.inverse().images))
    checks = {
        "quotients coincide": Q.rewrite(6).same_rules(qb.quotient.rewrite(6), 6),
        "tau of y^2 is x -> -p^-1 x": str(qa.tau.images["x"]) == "-1/p*x",
        "mu_A o tau on both quotients": qa.mu.same_as(other),
        "lift is x -> p x, y -> -p^-1 y": lifted.fmt() == "x -> p*x, y -> -1/p*y",
        "catalog map agrees": lifted.fmt() == GradedMap(Q, Q, {n: transport(f, Q.alg)
                                                               for n, f in e.mu.images.items()}).fmt(),
    }
    verdict(3, checks)


# ------------------------------------------------------------------ 4
def _map(R, spec):
    P = catalog.polynomial_ring(3, R)
    return conjugation_map(catalog.linear_map(P, spec, "m").matrix(), R)


def test_criterion_04_hopf_patterns(verdict):
    R1 = ParamRing(["a", "b"])
    R1.assume("not-root-of-unity", "a")
    R1.assume("nonzero", "b")
    C1 = _map(R1, {"t1": "a*t1", "t2": "a*t2+b*t1", "t3": "a^-2*t3"})
    R2 = ParamRing(["a"])
    R2.assume("nonzero", "a")
    C2 = _map(R2, {"t2": "t2+a*t1", "t3": "t3+a*t2+a^2*t1"})
    R3 = ParamRing(["p"])
    R3.assume("not-root-of-unity", "p")
    p = R3.param("p")
    C3 = conjugation_map([[p, 0, 0], [0, p ** 2, 0], [0, 0, p ** 5]], R3)

    pat1, pat1i, pat2, pat3 = derive_pattern(C1), derive_pattern(C1, IDENTITY), derive_pattern(C2), derive_pattern(C3)
    f11, f32 = power_closed_form(C1, (0, 0)), power_closed_form(C2, (2, 1))
    checks = {
        "block triangular: off-diagonal zero": pat1.off_diagonal_zero() and pat1i.off_diagonal_zero(),
        "block triangular: y11 = y22 only": pat1.equalities() == [["y11", "y22"], ["y33"]],
        "unipotent: off-diagonal zero": pat2.off_diagonal_zero(),
        "unipotent: all diagonal equal": pat2.equalities() == [["y11", "y22", "y33"]],
        "diagonal: grouplike, distinct classes": pat3.off_diagonal_zero() and len(pat3.equalities()) == 3,
        "f^n(y11) = y11 + n b/a y21": str(f11) == "y11 + b*n/a*y21",
        "f^n(y32) = y32 - n a y31": str(f32) == "-a*n*y31 + y32",
        "inductive identity f^n(y11)": verify_closed_form(C1, f11),
        "inductive identity f^n(y32)": verify_closed_form(C2, f32),
    }
    verdict(4, checks)


# ------------------------------------------------------------------ 5
def test_criterion_05_aut5_group(verdict):
    rng = random.Random(20240501)
    elements = [aut5.random_element(rng, degree=4) for _ in range(20)]
    morphisms = all(check_morphism(g.map()).ok for g in elements)
    y2 = all(aut5.verify_y2_image(g) for g in elements)
    law = True
    for g in elements:
        for h in elements:
            try:
                aut5.compose(g, h, verify=True)
            except ArithmeticError:
                law = False
    # normal-form route on a few pairs whose composite stays within a small budget
    small = [aut5.random_element(rng, degree=1) for _ in range(4)]
    A = aut5.a5(9)
    normal_forms = all(aut5.pointwise_compose(g, h, A).same_as(aut5.compose(g, h).map(A))
                       for g in small for h in small)
    inverses = all(aut5.compose(g, aut5.inverse(g)).is_identity() and aut5.compose(aut5.inverse(g), g).is_identity()
                   for g in elements)
    checks = {
        "20 random elements respect the relations": morphisms,
        "y2 -> a^2 (y2 + lambda t1^2)": y2,
        "law matches pointwise composition on all 400 pairs": law,
        "law matches composed normal forms": normal_forms,
        "inverse round-trips": inverses,
        "symbolic law for deg u, u' <= 4": aut5.verify_law_symbolic(4),
    }
    verdict(5, checks)


# ------------------------------------------------------------------ 6
def test_criterion_06_sigma_invariants(verdict):
    checks = {}
    for d in range(1, 9):
        ib = aut5.sigma_invariants(d)
        count = sum(1 for beta in range(d // 2 + 1) if d - 2 * beta >= 0)
        checks[f"degree {d} dimension {count}"] = len(ib.basis) == count and ib.matches
    A = aut5.a5()
    checks["degree 1 basis {t1}"] = span_equal(aut5.sigma_invariants(1).basis, [A.gen("t1")], A.ring)
    y2 = A.nf(A.parse("t2^2 + 2*t1*t2 - 2*t1*t3"))
    checks["degree 2 basis {t1^2, y2}"] = span_equal(aut5.sigma_invariants(2).basis, [A.parse("t1^2"), y2], A.ring)
    verdict(6, checks)


# ------------------------------------------------------------------ 7
def test_criterion_07_centers(verdict):
    checks = {}
    for ident in ("a3", "a4", "a1"):
        A = catalog.get(ident).with_budget(7)
        c = center_bounded(A, 6)
        checks[f"{ident} degrees 1-6"] = sorted(c) == list(range(1, 7)) and all(not b for b in c.values())
    verdict(7, checks)


# ------------------------------------------------------------------ 8
def test_criterion_08_jordan_eigenvectors(verdict):
    e = catalog.entry("jordan")
    fam = next(f for f in e.families if f.name == "phi")
    B, phi, _ = catalog.family_instance(e, fam)
    a = B.ring.param("a")
    ev = eigenvectors_bounded(phi, lambda d: a ** d, 5)
    checks = {f"degree {d} spanned by t1^{d}": span_equal(ev[d], [B.parse(f"t1^{d}")], B.ring) for d in range(1, 6)}
    verdict(8, checks)


# ------------------------------------------------------------------ 9
def test_criterion_09_lnd_ml(verdict):
    checks = {}
    shifts, D, N = range(-1, 4), 4, 6
    for ident in ("a1", "a2", "a6", "a7"):
        A = catalog.get(ident)
        A = A.with_budget(required_budget(A, shifts, D, N))
        s = lnd_search(A, shifts, D, N)
        checks[f"{ident} only zero"] = s.complete and not s.lnds
        m = ml_bounded(A, shifts, D, N, search=s)
        checks[f"{ident} ML full through degree 4"] = all(m.full[d] for d in range(1, D + 1))
    P = catalog.get("poly3")
    P = P.with_budget(required_budget(P, [-1], 2, N))
    s = lnd_search(P, [-1], 2, N)
    (res,) = s.results
    checks["polynomial ring: shift -1 space of dim 3"] = res.dimension == 3 and len(res.lnds) == 3
    mu = catalog.entry("poly3").mu.over(P)
    J = catalog.get("jordan")
    J = J.with_budget(required_budget(J, range(-1, 2), 3, 4))
    sj = lnd_search(J, range(-1, 2), 3, 4)
    mu_j = catalog.entry("jordan").mu.over(J)
    checks["found LNDs commute with mu"] = (all(not commutes_with(d, mu) for d in s.lnds)
                                            and all(not commutes_with(d, mu_j) for d in sj.lnds))
    verdict(9, checks)


# ------------------------------------------------------------------ 10
def test_criterion_10_hilbert_series(verdict):
    down_up = _series(lambda t: 1 / ((1 - t) ** 2 * (1 - t ** 2)), 8)
    poly = _series(lambda t: 1 / (1 - t) ** 3, 8)
    checks = {"a6 through degree 8": catalog.get("a6").with_budget(8).rewrite(8).hilbert_coeffs(8) == down_up}
    for ident in ("a1", "a2", "a5"):
        checks[f"{ident} through degree 8"] = catalog.get(ident).with_budget(8).rewrite(8).hilbert_coeffs(8) == poly
    verdict(10, checks)


# ------------------------------------------------------------------ 11
def test_criterion_11_commutation_calculus(verdict):
    checks = {f"v = {v}": aut5.verify_commutation(v).ok for v in ("1", "T1", "Y2", "T1*Y2", "Y2^2")}
    verdict(11, checks)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
