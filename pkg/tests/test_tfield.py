"""Exact fields, polynomials in t, and the projective normalization helpers."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from extshift.tfield import QQ, TPoly, canonical_projective_rep, eval_at_zero, get_field, t_valuation

from conftest import FIELDS, fields, seeds


def P(text, F=QQ):
    return TPoly.parse(F, text)


def test_valuation_examples():
    assert t_valuation({1: P("t"), 2: P("t^2")}) == 1
    assert t_valuation({1: P("1")}) == 0
    assert t_valuation({2: P("t^3")}) == 3


def test_valuation_of_zero_vector_rejected():
    with pytest.raises(ValueError, match="zero vector has no valuation"):
        t_valuation({1: P("0")})
    with pytest.raises(ValueError):
        canonical_projective_rep({})


def test_canonical_rep_examples():
    assert canonical_projective_rep({1: P("t"), 2: P("t^2")}) == {1: P("1"), 2: P("t")}
    assert canonical_projective_rep({1: P("1"), 2: P("t")}) == {1: P("1"), 2: P("t")}
    assert canonical_projective_rep({3: P("t^2+t")}) == {3: P("t+1")}


def test_eval_at_zero_examples():
    assert eval_at_zero({1: P("1"), 2: P("t")}) == {1: 1}
    assert eval_at_zero({1: P("3"), 2: P("2+t^2")}) == {1: 3, 2: 2}
    assert eval_at_zero({1: P("t")}) == {}


def test_get_field():
    assert str(get_field("Q")) == "Q"
    assert str(get_field("GF(7)")) == "GF(7)"
    assert get_field(" GF( 7 ) ") == get_field("GF(7)")
    for bad in ("GF(4)", "GF(1)", "GF(2147483659)", "R", "GF(x)"):
        with pytest.raises(ValueError):
            get_field(bad)


def test_division_by_zero_rejected():
    for F in FIELDS:
        with pytest.raises(ZeroDivisionError):
            F.inv(F.zero)


def test_rational_parse_and_format():
    assert QQ.format(QQ.parse("-6/4")) == "-3/2"
    assert QQ.format(QQ.parse("5")) == "5"
    F = get_field("GF(7)")
    assert F.parse("3/2") == 5
    assert F.parse("-1") == 6


def test_tpoly_parse_and_print():
    for text in ("0", "1", "t", "-t", "t^2-3*t+1/2", "2*t^5+t"):
        p = P(text)
        assert P(str(p)) == p
    assert str(P("t + t")) == "2*t"
    assert P("t^2+t").valuation() == 1
    with pytest.raises(ValueError):
        P("t^")
    with pytest.raises(ValueError):
        P("")


def test_tpoly_divmod():
    q, r = P("t^3+2*t+1").divmod(P("t+1"))
    assert q * P("t+1") + r == P("t^3+2*t+1")
    assert r.degree < 1
    with pytest.raises(ZeroDivisionError):
        P("t").divmod(P("0"))


def test_tpoly_over_gf2_reduces_coefficients():
    F = get_field("GF(2)")
    assert P("t+t", F).is_zero()
    assert P("3*t^2+1", F) == P("t^2+1", F)


def _elem(F, rng):
    return F.random(rng, 50)


@given(fields, seeds)
def test_field_axioms(F, seed):
    rng = random.Random(seed)
    a, b, c = (_elem(F, rng) for _ in range(3))
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.zero) == a and F.mul(a, F.one) == a
    assert F.add(a, F.neg(a)) == F.zero
    assert F.sub(a, b) == F.add(a, F.neg(b))
    if a != 0:
        assert F.mul(a, F.inv(a)) == F.one
        assert F.div(b, a) == F.mul(b, F.inv(a))


@given(fields, seeds)
def test_format_parse_round_trip(F, seed):
    a = _elem(F, random.Random(seed))
    assert F.parse(F.format(a)) == a


@given(fields, seeds)
def test_row_kernels_match_scalar_ops(F, seed):
    rng = random.Random(seed)
    x = [_elem(F, rng) for _ in range(5)]
    y = [_elem(F, rng) for _ in range(5)]
    a = _elem(F, rng)
    assert F.axpy(y, a, x) == [F.sub(v, F.mul(a, u)) for u, v in zip(x, y)]
    assert F.scale(x, a) == [F.mul(a, u) for u in x]


def test_finite_field_elements():
    assert list(get_field("GF(3)").elements()) == [0, 1, 2]
    with pytest.raises(ValueError):
        list(QQ.elements())


tvectors = st.dictionaries(
    st.integers(1, 6),
    st.lists(st.integers(-4, 4), min_size=1, max_size=5),
    min_size=1,
    max_size=5,
)


def _tvec(F, raw):
    v = {key: TPoly(F, cs) for key, cs in raw.items()}
    return {key: p for key, p in v.items() if not p.is_zero()}


@settings(max_examples=200)
@given(fields, tvectors, st.integers(0, 3))
def test_canonical_rep_properties(F, raw, extra):
    v = _tvec(F, raw)
    if not v:
        return
    tm = TPoly.t(F, extra)
    v = {key: p * tm for key, p in v.items()}
    c = canonical_projective_rep(v)
    assert t_valuation(c) == 0
    assert eval_at_zero(c)
    assert canonical_projective_rep(c) == c
    assert t_valuation(v) >= extra


@settings(max_examples=200)
@given(fields, tvectors, st.lists(st.integers(-4, 4), min_size=1, max_size=4))
def test_unit_scalar_multiple_is_projectively_equal(F, raw, pcoeffs):
    v = _tvec(F, raw)
    p = TPoly(F, pcoeffs)
    if not v or p.constant_term() == 0:
        return
    base = eval_at_zero(canonical_projective_rep(v))
    scaled = eval_at_zero(canonical_projective_rep({key: p * q for key, q in v.items()}))
    c = p.constant_term()
    assert scaled == {key: F.mul(c, val) for key, val in base.items()}
