import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import series, symbols

from skewcalc import catalog
from skewcalc.ncpoly import (
    Alphabet,
    CompletionAborted,
    DegreeBudgetExceeded,
    NcPoly,
    NonHomogeneous,
    NonInvertibleLeadingCoefficient,
    complete,
)
from skewcalc.parser import parse_expr
from skewcalc.scalars import ParamRing


def series_coeffs(expr, n):
    t = symbols("t")
    s = series(expr(t), t, 0, n + 1).removeO()
    return [int(s.coeff(t, k)) for k in range(n + 1)]


def poly_ring_counts(nvars, n):
    return series_coeffs(lambda t: 1 / (1 - t) ** nvars, n)


def test_normal_forms(backend):
    A1 = catalog.get("a1")
    assert str(A1.nf(A1.parse("t2*t1"))) == "p12*t1*t2"
    A5 = catalog.get("a5")
    assert str(A5.nf(A5.parse("t2*t1"))) == "t1*t2 - t1^2"
    A6 = catalog.get("a6")
    assert str(A6.nf(A6.parse("x*x*y"))) == "alpha*x*y*x + beta*y*x^2"


def test_a1_completes_without_new_rules(backend):
    A = catalog.get("a1")
    rs = complete(A.relations, 6, A.alg)
    assert rs.new_rule_count == 0 and len(rs.rules) == 3


def test_commutative_relations_complete_as_given():
    A = catalog.polynomial_ring(3)
    rs = complete(A.relations, 6, A.alg)
    assert rs.new_rule_count == 0
    assert rs.hilbert_coeffs(6) == poly_ring_counts(3, 6)


def test_hilbert_coefficients(backend):
    assert catalog.get("a1").rewrite(4).hilbert_coeffs(4) == [1, 3, 6, 10, 15]
    assert catalog.get("a6").rewrite(5).hilbert_coeffs(5) == [1, 2, 4, 6, 9, 12]
    assert catalog.get("a5").rewrite(3).hilbert_coeffs(3) == [1, 3, 6, 10]
    down_up = series_coeffs(lambda t: 1 / ((1 - t) ** 2 * (1 - t ** 2)), 8)
    assert catalog.get("a6").rewrite(8).hilbert_coeffs(8) == down_up


def test_budget_enforced():
    A = catalog.get("a1")
    with pytest.raises(DegreeBudgetExceeded):
        A.nf(A.parse("t1^" + str(A.budget + 1)))


def test_non_invertible_leading_coefficient():
    R = ParamRing(["p", "q"])
    alg = Alphabet.build(R, ["x", "y"], precedence=["y", "x"])
    rel = parse_expr(alg, "(p - q)*y*x - x*y")
    with pytest.raises(NonInvertibleLeadingCoefficient):
        complete([rel], 4, alg, strict=True)
    # non-strict completion records the scalar it had to invert
    rs = complete([rel], 4, alg)
    assert [str(c) for c in rs.required_nonzero] == ["p - q"]
    R.assume("nonzero", "p - q")
    alg = Alphabet.build(R, ["x", "y"], precedence=["y", "x"])
    rs = complete([parse_expr(alg, "(p - q)*y*x - x*y")], 4, alg, strict=True)
    assert rs.hilbert_coeffs(4) == [1, 2, 3, 4, 5]


def test_non_homogeneous_rejected():
    alg = Alphabet.build(ParamRing(), ["x", "y"])
    with pytest.raises(NonHomogeneous):
        complete([parse_expr(alg, "y*x - x")], 3, alg)


def test_cap_aborts():
    # the braid relation has no finite completion for this order
    alg = Alphabet.build(ParamRing(), ["x", "y"], precedence=["y", "x"])
    rel = parse_expr(alg, "y*x*y - x*y*x")
    with pytest.raises(CompletionAborted):
        complete([rel], 30, alg, cap=3)


def test_free_algebra():
    alg = Alphabet.build(ParamRing(), ["x", "y"])
    assert complete([], 5, alg).hilbert_coeffs(5) == [2 ** k for k in range(6)]


CATALOG = ["a1", "a2", "a3", "a4", "a5", "a6", "a7", "jordan", "poly3", "c27"]


def random_poly(A, rng, degree):
    alg = A.alg
    words = alg.words(degree)
    terms = {}
    for _ in range(3):
        w = rng.choice(words)
        terms[w] = A.ring.coerce(rng.randint(-3, 3))
    return NcPoly(terms, alg)


@pytest.mark.parametrize("label", CATALOG)
def test_normal_form_is_multiplicative(label):
    A = catalog.get(label)
    rng = random.Random(label)
    for _ in range(50):
        f = random_poly(A, rng, rng.randint(1, 2))
        g = random_poly(A, rng, rng.randint(1, 2))
        assert A.nf(f * g) == A.nf(A.nf(f) * A.nf(g))


@pytest.mark.parametrize("label", CATALOG + ["d5", "g5"])
def test_relations_reduce_to_zero(label):
    A = catalog.get(label)
    for r in A.relations:
        assert not A.nf(r).terms


@pytest.mark.parametrize("label", ["a2", "a5", "a6", "a7", "jordan"])
def test_completion_is_degree_monotone(label):
    A = catalog.get(label)
    big = complete(A.relations, 8, A.alg)
    for d in range(2, 8):
        assert complete(A.relations, d, A.alg).same_rules(big, d)


@pytest.mark.parametrize("label", CATALOG)
def test_rules_are_inter_reduced_and_ordered(label):
    A = catalog.get(label)
    rs = A.rewrite(6)
    key = A.alg.key
    leads = list(rs.rules)
    for lw, r in rs.rules.items():
        assert all(key(w) < key(lw) for w in r.tail)
        for other in leads:
            if other != lw:
                assert not any(lw[i:i + len(other)] == other for i in range(len(lw) - len(other) + 1))


@given(st.lists(st.tuples(st.integers(0, 2), st.integers(-4, 4)), min_size=1, max_size=6))
def test_ncpoly_ring_laws(items):
    alg = Alphabet.build(ParamRing(["p"]), ["a", "b", "c"])
    p = alg.ring.param("p")
    f = NcPoly({(i,): p * c for i, c in items}, alg)
    g = NcPoly({(i, (i + 1) % 3): alg.ring.coerce(c) for i, c in items}, alg)
    h = alg.gen("a") + alg.gen("b") * Fraction(1, 2)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == alg.scalar(0)
    assert all(c for c in (f * g).terms.values())
