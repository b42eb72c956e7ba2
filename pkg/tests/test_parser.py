from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skewcalc import catalog
from skewcalc.parser import (
    NonHomogeneousRelation,
    SyntaxError,
    UnknownSymbol,
    format_presentation_file,
    parse_expr,
    parse_presentation_file,
)

HEAD = "[params]\np\n[generators]\nt1 : 1\nt2 : 1\nt3 : 1\n[precedence]\nt3 > t2 > t1\n[relations]\n"


def test_third_relation_of_central_extension():
    pf = parse_presentation_file(HEAD + "t2*t1 - t1*t2\nt3*t1 - t1*t3\nt3*t2 - p*t2*t3 - t1^2 = 0\n")
    A = catalog.get("a2")
    assert [str(r) for r in pf.relations] == [str(r) for r in A.relations]


def test_power_in_relation():
    text = "[params]\np\n[generators]\nx : 1\ny : 1\n[precedence]\nx > y\n[relations]\nx^2*y - p*y*x^2\n"
    pf = parse_presentation_file(text)
    assert str(pf.relations[0]) == str(catalog.get("a7").relations[0])


def test_lhs_equals_rhs():
    pf = parse_presentation_file(HEAD + "t2*t1 = p*t1*t2\n")
    assert str(pf.relations[0]) == "t2*t1 - p*t1*t2"


def test_empty_relations_section_is_free():
    pf = parse_presentation_file("[generators]\nx : 1\ny : 1\n[relations]\n")
    assert pf.relations == []


def test_errors_carry_positions():
    with pytest.raises(UnknownSymbol) as e:
        parse_presentation_file("[generators]\nt1 : 1\nt2 : 1\n[relations]\nt2*t1 - q*t1*t2\n")
    assert (e.value.line, e.value.col) == (5, 9) and e.value.name == "q"
    with pytest.raises(SyntaxError) as e:
        parse_presentation_file("[generators]\nt1 : 1\n[relations]\nt1 t1\n")
    assert e.value.line == 4 and "'*'" in e.value.expected
    with pytest.raises(NonHomogeneousRelation) as e:
        parse_presentation_file("[generators]\nt1 : 1\nt2 : 2\n[relations]\nt2*t1 - t1*t1\n")
    assert e.value.line == 5


def test_missing_generators_section():
    with pytest.raises(SyntaxError):
        parse_presentation_file("[relations]\n")


def test_scalar_division_only():
    A = catalog.get("a1")
    with pytest.raises(SyntaxError):
        parse_expr(A.alg, "t1/t2")
    assert str(parse_expr(A.alg, "t1/p12")) == "1/p12*t1"


def test_comments_and_blank_lines():
    pf = parse_presentation_file("# header\n\n[generators]\nx : 1  # degree one\n\n[relations]\n# none\n")
    assert pf.generators == [("x", (1,))]


# ---------------------------------------------------------------- round trip
PARAMS = ["p", "q", "s"]


@st.composite
def presentation_texts(draw):
    params = draw(st.lists(st.sampled_from(PARAMS), unique=True, max_size=3))
    rank = draw(st.sampled_from([1, 2]))
    ngens = draw(st.integers(1, 3))
    names = [f"t{i}" for i in range(1, ngens + 1)]
    degs = []
    for _ in names:
        if rank == 1:
            degs.append((draw(st.integers(1, 2)),))
        else:
            degs.append(draw(st.sampled_from([(1, 0), (0, 1), (1, 1)])))
    lines = []
    if params:
        lines += ["[params]", ", ".join(params)]
        for p in params:
            kind = draw(st.sampled_from([None, "nonzero", "not-root-of-unity", "not-equal-one"]))
            if kind:
                lines.append(f"assume {p} {kind}")
        if len(params) > 1 and draw(st.booleans()):
            lines.append("assume {" + ", ".join(params) + "} independent")
    lines += ["[grading]", f"rank {rank}", "[generators]"]
    lines += [f"{n} : {', '.join(map(str, d))}" for n, d in zip(names, degs)]
    prec = draw(st.permutations(names))
    lines += ["[precedence]", " > ".join(prec), "[relations]"]
    coefs = ["1", "-1", "2", "1/3"] + params + [f"{p}^2" for p in params] + [f"-{p}" for p in params]
    for _ in range(draw(st.integers(0, 3))):
        # a homogeneous relation: letter permutations of one multiset of generators
        k = draw(st.integers(1, 3))
        letters = draw(st.lists(st.sampled_from(names), min_size=k, max_size=k))
        terms = []
        for _ in range(draw(st.integers(1, 3))):
            perm = draw(st.permutations(letters))
            terms.append(f"{draw(st.sampled_from(coefs))}*" + "*".join(perm))
        lines.append(" + ".join(f"({t})" for t in terms))
    if draw(st.booleans()):
        imgs = ", ".join(f"{n} -> {draw(st.sampled_from(coefs))}*{n}" for n in names)
        lines += ["[nakayama]", imgs]
    if draw(st.booleans()):
        lines += ["[budget]", f"degree {draw(st.integers(2, 9))}", f"cap {draw(st.integers(8, 64))}"]
    return "\n".join(lines) + "\n"


@settings(max_examples=100)
@given(presentation_texts())
def test_round_trip(text):
    pf = parse_presentation_file(text)
    printed = format_presentation_file(pf)
    again = parse_presentation_file(printed)
    assert pf.same(again)
    assert format_presentation_file(again) == printed


def test_round_trip_with_twists():
    text = (Path(__file__).parents[1] / "data" / "jordan_twist.pres").read_text()
    pf = parse_presentation_file(text)
    again = parse_presentation_file(format_presentation_file(pf))
    assert pf.same(again) and again.twist.index == (3,)
