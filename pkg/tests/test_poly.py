import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gencluster.errors import InexactDivision, Inhomogeneous, ParseError, TermLimitExceeded
from gencluster.poly import (
    Frac,
    LaurentPoly,
    Var,
    _canon,
    format_poly,
    lp_exact_div,
    lp_multidegree,
    lp_mul,
    lp_substitute,
    mono_mul,
    parse_poly,
    principal_grading,
    try_exact_div,
    xvar,
    yvar,
    zvar,
)

VARS = [xvar(1), xvar(2), yvar(1), yvar(2), zvar(1, 1)]

monomials = st.lists(st.tuples(st.sampled_from(VARS), st.integers(-3, 4)), max_size=3).map(lambda ps: _canon(dict(ps)))
polys = st.dictionaries(monomials, st.integers(-9, 9), max_size=6).map(LaurentPoly)


def naive_mul(a, b):
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = mono_mul(ma, mb)
            out[m] = out.get(m, 0) + ca * cb
    return LaurentPoly(out)


@given(polys, polys)
def test_product_matches_schoolbook(a, b):
    assert lp_mul(a, b) == naive_mul(a, b)


@given(polys, polys, polys)
@settings(max_examples=60)
def test_ring_laws(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(polys, polys)
def test_exact_division_recovers_factor(a, b):
    if not b:
        return
    assert lp_exact_div(a * b, b) == a


def test_large_products_agree_with_schoolbook():
    rng = random.Random(11)

    def rand(n, bits):
        terms = {}
        for _ in range(n):
            m = _canon({rng.choice(VARS): rng.randint(-3, 5) for _ in range(rng.randint(0, 3))})
            terms[m] = rng.choice([-1, 1]) * rng.randint(1, 1 << bits)
        return LaurentPoly(terms)

    for bits in (4, 61, 150):
        a, b = rand(300, bits), rand(250, 40)
        assert lp_mul(a, b) == naive_mul(a, b)


def test_inexact_division_raises():
    with pytest.raises(InexactDivision):
        lp_exact_div(parse_poly("1 + x1"), parse_poly("1 + x2"))
    assert try_exact_div(parse_poly("1 + x1"), parse_poly("x1 + x2")) is None


def test_monomial_division_is_a_shift():
    assert lp_exact_div(parse_poly("x1^3*y1 + x1"), parse_poly("x1^2")) == parse_poly("x1*y1 + x1^-1")


@given(polys)
def test_text_round_trip(p):
    assert parse_poly(format_poly(p)) == p


def test_format_uses_fixed_order():
    p = parse_poly("y1^3 + z1_1*y1 + 1 + y1^2*z1_2")
    assert format_poly(p) == "1 + y1*z1_1 + y1^2*z1_2 + y1^3"
    assert format_poly(parse_poly("1+y1"), sep=" ⊕ ") == "1 ⊕ y1"


def test_parse_accepts_juxtaposition_and_rejects_junk():
    assert parse_poly("2y1y2^2") == parse_poly("2*y1*y2^2")
    assert parse_poly("x1^(-2)") == parse_poly("x1^-2")
    with pytest.raises(ParseError):
        parse_poly("1 + w3")
    with pytest.raises(ParseError):
        parse_poly("z1")
    for junk in ("", "y1 +", "y1 ++ y2", "2*", "x1**x2"):
        with pytest.raises(ParseError):
            parse_poly(junk)


def test_substitution_composes():
    p = parse_poly("1 + y1 + y1^2*y2")
    images = {yvar(1): Frac(parse_poly("x1"), parse_poly("1 + x2")), yvar(2): 3}
    got = lp_substitute(p, images)
    assert got == Frac(parse_poly("1 + 2*x2 + x2^2 + x1 + x1*x2 + 3*x1^2"), parse_poly("1 + 2*x2 + x2^2"))


def test_partial_substitution_keeps_other_variables():
    p = parse_poly("x1*y1 + z1_1")
    got = lp_substitute(p, {zvar(1, 1): 0}, partial=True)
    assert got == Frac(parse_poly("x1*y1"))


def test_missing_image_is_an_error():
    with pytest.raises(KeyError):
        lp_substitute(parse_poly("x1 + y1"), {xvar(1): 2})


def test_principal_multidegree():
    B = [[0, -1], [1, 0]]
    deg = principal_grading(B)
    assert lp_multidegree(parse_poly("x1*x2^-3"), deg, 2) == (1, -3)
    # deg y1 = -(column 1 of B) = (0, -1), deg x2 = (0, 1): y1*x2 is homogeneous of degree 0
    assert lp_multidegree(parse_poly("1 + y1*x2 + z1_1*y1*x2"), deg, 2) == (0, 0)
    with pytest.raises(Inhomogeneous):
        lp_multidegree(parse_poly("1 + x1"), deg, 2)


def test_frac_arithmetic_is_field_arithmetic():
    a = Frac(parse_poly("1 + x1"), parse_poly("x2"))
    b = Frac(parse_poly("x2"), parse_poly("1 + x1"))
    assert a * b == 1
    assert a / a == 1
    assert (a + b) - b == a
    assert a**-2 == b**2
    with pytest.raises(ZeroDivisionError):
        a / Frac(0)


def test_term_cap(monkeypatch):
    monkeypatch.setenv("GCA_MAX_TERMS", "1500")
    a = LaurentPoly({_canon({Var(1, 1): i}): 1 for i in range(60)})
    b = LaurentPoly({_canon({Var(1, 2): i}): 1 for i in range(60)})
    with pytest.raises(TermLimitExceeded):
        lp_mul(a, b)
