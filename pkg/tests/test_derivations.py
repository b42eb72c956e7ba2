from math import comb

import pytest

from skewcalc import catalog
from skewcalc.derivations import (
    DerivationSpec,
    NotValidDerivation,
    TruncationTooSmall,
    canonical_higher,
    commutes_with,
    exp_automorphism,
    is_derivation,
    lnd_search,
    ml_bounded,
    required_budget,
    torus_weights,
)
from skewcalc.derivations import _word_weight
from skewcalc.ncpoly import DegreeBudgetExceeded


def jordan_delta():
    J = catalog.get("jordan")
    return DerivationSpec(J, {"t2": "t1"})


def _prepared(ident, shifts, D, N):
    A = catalog.get(ident)
    return A.with_budget(required_budget(A, shifts, D, N))


# ------------------------------------------------------------------ derivations
@pytest.mark.parametrize("ident", ["a1", "a2", "a3", "a5", "a6", "jordan", "poly3"])
def test_euler_derivation_valid(ident):
    A = catalog.get(ident)
    d = DerivationSpec(A, {n: n for n in A.alg.declared})
    assert d.shift == 0
    assert is_derivation(d)


def test_jordan_derivation_valid():
    d = jordan_delta()
    assert is_derivation(d).describe() == "valid derivation"
    assert d.shift == 0
    assert d.nilpotency_indices(4) == {"t1": 1, "t2": 2}


def test_a1_derivation_fails():
    d = DerivationSpec(catalog.get("a1"), {"t1": "t2"})
    chk = is_derivation(d)
    assert not chk
    assert chk.index == 0
    assert str(chk.residue) == "(-p12 + 1)*t2^2"


def test_unknown_generator():
    with pytest.raises(ValueError):
        DerivationSpec(catalog.get("poly2"), {"z": "t1"})


def test_inhomogeneous_shift():
    d = DerivationSpec(catalog.get("poly2"), {"t1": "1", "t2": "t1"})
    assert d.shift is None and not d.homogeneous


@pytest.mark.parametrize("ident,rank", [("a1", 3), ("a3", 2), ("a5", 1), ("a6", 2), ("jordan", 1), ("poly2", 2)])
def test_torus_weights_make_relations_homogeneous(ident, rank):
    A = catalog.get(ident)
    weights = torus_weights(A)
    assert {len(v) for v in weights.values()} == {rank}
    for r in A.relations:
        seen = {_word_weight(w, A.alg, weights) for w in r.terms}
        assert len(seen) == 1


# ------------------------------------------------------------------ LND search
def test_lnd_polynomial_ring_negative_shift():
    A = _prepared("poly3", [-1], 2, 2)
    s = lnd_search(A, [-1], 2, 2)
    (res,) = s.results
    assert res.dimension == 3 and res.status == "found"
    assert len(res.lnds) == 3
    for d, idx in res.lnds:
        assert sorted(idx.values()) == [1, 1, 2]
        assert all(str(f) in ("0", "1") for f in d.images.values())


def test_lnd_jordan_shift_zero():
    A = _prepared("jordan", [0], 2, 4)
    s = lnd_search(A, [0], 2, 4)
    assert [d.fmt() for d in s.lnds] == ["t1 -> 0, t2 -> t1"]
    assert s.results[0].lnds[0][1] == {"t1": 1, "t2": 2}


@pytest.mark.parametrize("ident", ["a1", "a2", "a6", "a7"])
def test_lnd_rigid_algebras(ident):
    shifts = range(-1, 4)
    A = _prepared(ident, shifts, 4, 6)
    s = lnd_search(A, shifts, 4, 6)
    assert [r.status for r in s.results] == ["none"] * 5
    assert s.lnds == [] and s.complete


def test_lnd_budget_guard():
    A = catalog.get("poly2")
    with pytest.raises(DegreeBudgetExceeded):
        lnd_search(A, range(-1, 3), 3, 4)


def test_required_budget():
    A = catalog.get("poly3")
    assert required_budget(A, range(-1, 4), 4, 6) == 19
    assert required_budget(A, [-1], 4, 6) == 4


@pytest.mark.parametrize("ident", ["jordan", "poly2", "a3", "a5"])
def test_lnds_commute_with_nakayama(ident):
    shifts = range(-1, 2)
    A = _prepared(ident, shifts, 3, 4)
    mu = catalog.entry(ident).mu.over(A)
    for d in lnd_search(A, shifts, 3, 4).lnds:
        assert commutes_with(d, mu) == {}


def test_search_to_dict():
    A = _prepared("jordan", [0], 2, 4)
    d = lnd_search(A, [0], 2, 4).to_dict()
    assert d["scope"] == "relative to homogeneous LNDs with shift in 0..0, nilpotency bound 4"
    assert d["shifts"][0]["lnds"][0]["images"] == {"t1": "0", "t2": "t1"}


# ------------------------------------------------------------------ ML
def test_ml_polynomial_ring_is_scalars():
    shifts = range(-1, 3)
    m = ml_bounded(_prepared("poly2", shifts, 3, 4), shifts, 3, 4)
    assert m.to_dict()["dimensions"] == {"1": 0, "2": 0, "3": 0}
    assert m.scope.startswith("relative to homogeneous LNDs")


@pytest.mark.parametrize("ident", ["a1", "a2"])
def test_ml_rigid_full(ident):
    shifts = range(-1, 4)
    m = ml_bounded(_prepared(ident, shifts, 4, 6), shifts, 4, 6)
    assert all(m.full.values()) and sorted(m.full) == [1, 2, 3, 4]
    assert m.complete


# ------------------------------------------------------------------ higher derivations
def test_canonical_higher_zero():
    A = catalog.get("poly2")
    h = canonical_higher(DerivationSpec(A, {}), 3)
    assert h.iterative and h.support() == 0
    for n in range(1, 4):
        assert all(not h.components[n][g].terms for g in A.alg.declared)
    assert str(h.apply(0, A.gen("t1"))) == "t1"


def test_canonical_higher_jordan():
    J = catalog.get("jordan")
    h = canonical_higher(jordan_delta(), 3)
    assert h.iterative and h.support() == 1
    assert str(h.apply(1, J.gen("t2"))) == "t1"
    assert str(h.apply(2, J.gen("t2"))) == "0"


def test_canonical_higher_univariate_binomial():
    P = catalog.polynomial_ring(1)
    h = canonical_higher(DerivationSpec(P, {"t1": "1"}), 6)
    t5 = P.parse("t1^5")
    assert str(h.apply(2, t5)) == "10*t1^3"
    for n in range(6):
        expect = P.parse(f"{comb(5, n)}*t1^{5 - n}")
        assert h.apply(n, t5) == expect
    assert h.check_iterative([t5])


def test_canonical_higher_rejects_invalid():
    with pytest.raises(NotValidDerivation):
        canonical_higher(DerivationSpec(catalog.get("a1"), {"t1": "t2"}), 2)


# ------------------------------------------------------------------ exponentials
def test_exp_translation():
    P = catalog.polynomial_ring(1)
    e = exp_automorphism(canonical_higher(DerivationSpec(P, {"t1": "1"}), 3), 1)
    assert e.map.fmt() == "t1 -> t1 + 1"
    assert e.ok


def test_exp_jordan():
    e = exp_automorphism(canonical_higher(jordan_delta(), 3), 1)
    assert e.map.fmt() == "t1 -> t1, t2 -> t2 + t1"
    assert e.generic.fmt() == "t1 -> t1, t2 -> t2 + t*t1"
    assert e.morphism_ok and e.generic_morphism_ok and e.identity_at_zero


def test_exp_at_zero_is_identity():
    e = exp_automorphism(canonical_higher(jordan_delta(), 3), 0)
    assert e.map.fmt() == "t1 -> t1, t2 -> t2"


def test_exp_additive_in_parameter():
    h = canonical_higher(jordan_delta(), 3)
    R = h.algebra.ring.extend(["c1", "c2"])
    c1, c2 = R.param("c1"), R.param("c2")
    g1 = exp_automorphism(h, c1).map
    g2 = exp_automorphism(h, c2).map
    g12 = exp_automorphism(h, c1 + c2).map
    assert g1.compose(g2).same_as(g12)
    assert g2.compose(g1).same_as(g12)


def test_exp_truncation_too_small():
    with pytest.raises(TruncationTooSmall):
        exp_automorphism(canonical_higher(jordan_delta(), 1), 1)
