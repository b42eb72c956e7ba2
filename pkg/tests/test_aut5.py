import random

import pytest
from hypothesis import given, settings, strategies as st

from skewcalc import aut5, catalog
from skewcalc.algebras import GradedMap, check_morphism, normalizing_map, span_equal
from skewcalc.aut5 import (
    GradingDerivation,
    InvariantPoly,
    ZeroScale,
    compose,
    identity,
    inverse,
    make_auto,
    pointwise_compose,
    random_element,
    sigma,
    sigma_invariants,
    verify_commutation,
    verify_law_symbolic,
    verify_y2_image,
)
from skewcalc.ncpoly import NcPoly
from skewcalc.scalars import ParamRing


# ------------------------------------------------------------------ the ring R
def test_invariant_poly_arithmetic():
    R = ParamRing()
    f = InvariantPoly.parse("T1^2 + 3*Y2", R)
    assert f.degree() == 2
    assert f.grading() == f * 2
    assert (f - f) == InvariantPoly({}, R)
    assert not InvariantPoly({}, R)


def test_grading_derivation():
    R = ParamRing()
    d = GradingDerivation()
    T1, Y2 = InvariantPoly.T1(R), InvariantPoly.Y2(R)
    assert d(T1) == T1
    assert d(Y2) == Y2 * 2
    f, g = T1 * Y2 + T1, Y2 * Y2 - T1 * T1
    assert d(f * g) == d(f) * g + f * d(g)


def test_embedding_lands_in_invariants():
    A = aut5.a5()
    y2 = InvariantPoly.Y2(ParamRing()).embed(A)
    assert y2 == A.nf(A.parse("t2^2 + 2*t1*t2 - 2*t1*t3"))
    assert sigma(A).apply(y2) == y2


# ------------------------------------------------------------------ construction
def test_identity_element():
    g = make_auto(1, 0, 0)
    assert g.is_identity()
    assert g.map().fmt() == "t1 -> t1, t2 -> t2, t3 -> t3"


def test_lambda_only():
    assert make_auto(1, 0, 3).map().fmt() == "t1 -> t1, t2 -> t2, t3 -> t3 - 3/2*t1"


def test_u_equals_t1():
    g = make_auto(1, "T1", 0)
    assert g.map().fmt() == "t1 -> t1, t2 -> t1^2 + t2, t3 -> 1/2*t1^3 + t1*t2 + t3"


def test_zero_scale():
    with pytest.raises(ZeroScale):
        make_auto(0, "T1", 0)


def test_random_elements_are_morphisms():
    rng = random.Random(5)
    for _ in range(20):
        g = random_element(rng, degree=4)
        assert check_morphism(g.map()).ok
        assert verify_y2_image(g)


# ------------------------------------------------------------------ group law
def test_compose_constants():
    assert str(compose(make_auto(1, 1, 0), make_auto(1, 1, 0))) == "tau(1, 2, 0)"


def test_compose_identity():
    rng = random.Random(11)
    for _ in range(10):
        g = random_element(rng)
        assert compose(g, identity()).same(g)
        assert compose(identity(), g).same(g)


def test_associative():
    rng = random.Random(3)
    for _ in range(10):
        f, g, h = (random_element(rng, degree=3) for _ in range(3))
        assert compose(compose(f, g), h).same(compose(f, compose(g, h)))


def test_law_matches_pointwise_normal_forms():
    rng = random.Random(19)
    for _ in range(3):
        g, h = random_element(rng, degree=1), random_element(rng, degree=1)
        gh = compose(g, h)
        A = aut5.a5(8)
        assert pointwise_compose(g, h, A).same_as(gh.map(A))


def test_law_symbolic():
    assert verify_law_symbolic(2)


def test_inverse_examples():
    assert str(inverse(make_auto(1, 5, 0))) == "tau(1, -5, 0)"
    assert inverse(identity()).is_identity()
    R = ParamRing(["l"])
    g = make_auto(1, "Y2", R.param("l"), ring=R)
    inv = inverse(g)
    assert str(inv) == "tau(1, -Y2 + l*T1^2, -l)"
    assert compose(g, inv).is_identity() and compose(inv, g).is_identity()


def test_inverse_random():
    rng = random.Random(23)
    for _ in range(15):
        g = random_element(rng)
        assert compose(g, inverse(g)).is_identity()
        assert compose(inverse(g), g).is_identity()


@settings(max_examples=25)
@given(st.fractions(min_value=-4, max_value=4).filter(lambda x: x != 0),
       st.fractions(min_value=-4, max_value=4))
def test_scale_and_lambda_compose(a, lam):
    g = make_auto(a, 0, lam, check=False)
    h = compose(g, g)
    assert h.a == g.a * g.a and h.lam == g.lam * 2


# ------------------------------------------------------------------ sigma
def test_nakayama_is_sigma_minus_three():
    A = aut5.a5()
    s = sigma(A)
    mu = catalog.entry("a5").mu
    assert s.compose(s).compose(s).compose(mu).same_as(GradedMap.identity(A))


def test_elements_commute_with_sigma():
    rng = random.Random(29)
    A = aut5.a5(10)
    s = sigma(A)
    for _ in range(8):
        g = random_element(rng, degree=2).map(A)
        for name in ("t1", "t2", "t3"):
            t = A.gen(name)
            assert g.apply(s.apply(t)) == s.apply(g.apply(t))


def test_elements_preserve_t1_line():
    rng = random.Random(31)
    for _ in range(10):
        g = random_element(rng)
        img = g.images()["t1"]
        assert list(img.terms) == [(0,)]


# ------------------------------------------------------------------ commutation calculus
@pytest.mark.parametrize("v", ["1", "T1", "Y2", "T1^2*Y2 + 3*Y2^2", "T1^3 - 2*T1*Y2"])
def test_commutation_identities(v):
    chk = verify_commutation(v)
    assert chk.ok, chk.residues


# ------------------------------------------------------------------ invariants
@pytest.mark.parametrize("d", range(1, 9))
def test_sigma_invariant_dimensions(d):
    ib = sigma_invariants(d)
    assert len(ib.basis) == d // 2 + 1
    assert ib.matches
    assert aut5.invariant_embedding_injective(d)


def test_low_degree_invariants():
    A = aut5.a5()
    assert span_equal(sigma_invariants(1).basis, [A.gen("t1")], A.ring)
    two = [A.parse("t1^2"), A.nf(A.parse("t2^2 + 2*t1*t2 - 2*t1*t3"))]
    assert span_equal(sigma_invariants(2).basis, two, A.ring)


@pytest.mark.parametrize("d", range(1, 5))
def test_normal_elements_are_the_invariants(d):
    A = aut5.a5()
    inv = sigma_invariants(d).basis
    for f in inv:
        assert normalizing_map(f, A).normal
    rng = random.Random(d)
    words = A.normal_words(d)
    for _ in range(12):
        f = NcPoly({w: A.ring.coerce(rng.randint(-3, 3)) for w in words}, A.alg)
        if not f.terms:
            continue
        in_span = span_equal(inv + [f], inv, A.ring)
        assert normalizing_map(f, A).normal == in_span
        combo = sum((g * A.ring.coerce(rng.randint(1, 4)) for g in inv[1:]), inv[0])
        assert normalizing_map(A.nf(combo), A).normal
    assert not normalizing_map(A.nf(A.parse(f"t2*t1^{d - 1}")), A).normal
