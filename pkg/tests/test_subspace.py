"""Echelon subspaces of k-forms: lattice operations, annihilation, colon spaces."""

from __future__ import annotations

import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from extshift.exterior import KForm, apply_operator, monomials, parse_form, wedge
from extshift.setfam import SetFamily, is_intersecting
from extshift.subspace import (Subspace, annihilator, annihilator_one_forms, change_basis, colon_by_one_form,
                               from_generators, has_monomial_basis, is_cross_annihilating, is_monomial_wrt,
                               is_nontrivial, is_self_annihilating, monomial_family_subspace)
from extshift.exterior import Operator
from extshift.tfield import QQ, get_field

from conftest import fields, random_form, random_operator, random_subspace, seeds

GF2, GF3 = get_field("GF(2)"), get_field("GF(3)")


def span(*texts, n=4, k=2, F=QQ):
    return from_generators(F, n, k, [parse_form(F, n, t, k) for t in texts])


def mono(*sets, n=4, F=QQ):
    return Subspace.from_monomials(F, n, len(sets[0]), sets)


def test_from_generators_examples():
    assert span("e{1,2}", "e{1,2}").dim == 1
    assert span("e{1,2}", "e{1,3}", "e{1,2} + e{1,3}").dim == 2
    assert from_generators(QQ, 4, 2, []).dim == 0


def test_from_generators_rejects_mixed_degrees():
    with pytest.raises(ValueError):
        from_generators(QQ, 4, 2, [parse_form(QQ, 4, "e{1}")])


def test_lattice_examples():
    assert span("e{1,2}").contains(parse_form(QQ, 4, "e{1,2}"))
    assert not span("e{1,2}").contains(parse_form(QQ, 4, "e{1,3}"))
    K = span("e{1,2}", "e{1,3}")
    L = span("e{1,3}", "e{2,3}")
    assert K.intersect(L) == span("e{1,3}")
    A = mono((1, 2), (1, 3), (2, 3))
    B = mono((1, 4), (2, 4), (3, 4))
    assert (A + B).dim == 6 and A + B == Subspace.full(QQ, 4, 2)


def test_mismatched_spaces_rejected():
    with pytest.raises(ValueError):
        span("e{1,2}") + span("e{1,2}", n=5)


def test_echelon_canonical_equality():
    assert span("e{1,2} + e{1,3}", "e{1,3}") == span("e{1,2}", "2*e{1,3}")
    assert span("e{1,2}").rows != span("e{1,3}").rows


def test_annihilation_examples():
    assert is_self_annihilating(mono((1, 2), (1, 3), (2, 3)))
    assert not is_cross_annihilating(span("e{1,2}"), span("e{3,4}"))
    star = Subspace.from_monomials(QQ, 5, 2, [S for S in monomials(5, 2) if 1 in S])
    assert is_self_annihilating(star)


def test_diagonal_products_are_checked():
    assert not is_self_annihilating(span("e{1,2} + e{3,4}"))
    assert is_self_annihilating(span("e{1,2} + e{3,4}", F=GF2))
    assert not is_self_annihilating(span("e{1,2}", "e{3,4}", F=GF2))


def test_annihilator_one_forms_examples():
    assert annihilator_one_forms(span("e{1,2}", "e{1,3}")) == span("e{1}", k=1)
    assert annihilator_one_forms(mono((1, 2), (1, 3), (2, 3))).dim == 0
    assert annihilator_one_forms(Subspace(QQ, 4, 2)) == Subspace.full(QQ, 4, 1)


def test_annihilator_general_degree():
    W = annihilator(span("e{1,2}"), 2)
    assert W == mono((1, 2), (1, 3), (1, 4), (2, 3), (2, 4))


def test_colon_examples():
    e1 = parse_form(QQ, 4, "e{1}")
    assert colon_by_one_form(span("e{1,2}", "e{1,3}"), e1, {1}) == span("e{2}", "e{3}", k=1)
    assert colon_by_one_form(span("e{1,2} + e{1,3}"), e1, {1}) == span("e{2} + e{3}", k=1)
    assert colon_by_one_form(span("e{2,3}"), e1, {1}).dim == 0


def test_monomial_wrt_examples():
    assert not is_monomial_wrt(span("e{1,2,3} - e{1,2,4}", k=3), 4)
    assert is_monomial_wrt(span("e{1,2,4}", k=3), 4)
    assert is_monomial_wrt(span("e{1,2,3}", "e{1,2,4}", k=3), 4)


def test_monomial_basis_examples():
    ok, fam = has_monomial_basis(span("e{1,2}", "e{1,3}"))
    assert ok and fam == SetFamily(4, 2, [(1, 2), (1, 3)])
    ok, _ = has_monomial_basis(span("e{1,2} + e{3,4}"))
    assert not ok
    ok, fam = has_monomial_basis(Subspace(QQ, 4, 2))
    assert ok and len(fam) == 0


def test_change_basis_examples():
    L = span("e{1,2} + 2*e{3,4}")
    assert change_basis(L, Operator.identity(QQ, 4)) == L
    perm = Operator.from_images(QQ, [parse_form(QQ, 4, f"e{{{h}}}") for h in (2, 3, 1, 4)])
    assert change_basis(mono((1, 2), (1, 4)), perm) == mono((2, 3), (2, 4))
    P = Operator.from_columns(QQ, [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    tilted = span("e{1,3} + e{2,3}")
    assert change_basis(tilted, P.inverse()) == span("e{1,3}")
    assert change_basis(change_basis(tilted, P.inverse()), P) == tilted


def test_change_basis_rejects_singular():
    P = Operator.from_columns(QQ, [[1, 0], [1, 0]])
    with pytest.raises(ValueError):
        change_basis(span("e{1}", n=2, k=1), P)


def test_degenerate_degrees():
    assert Subspace.full(QQ, 3, 0).dim == 1
    assert Subspace.full(QQ, 3, 3).dim == 1
    assert Subspace.full(QQ, 3, 4).dim == 0


def test_text_and_dict_export():
    L = span("e{1,2}", "e{1,3}")
    assert L.to_text() == "field Q\nn 4\nk 2\ne{1,2}\ne{1,3}\n"
    assert L.to_dict() == {"field": "Q", "n": 4, "k": 2, "dim": 2, "basis": ["e{1,2}", "e{1,3}"]}


small = st.tuples(st.integers(2, 5), st.integers(1, 3)).filter(lambda t: t[1] <= t[0])


@settings(max_examples=100)
@given(fields, seeds, small)
def test_dimension_formula(F, seed, nk):
    n, k = nk
    rng = random.Random(seed)
    A, B = random_subspace(F, n, k, rng), random_subspace(F, n, k, rng)
    assert A.dim + B.dim == (A + B).dim + A.intersect(B).dim
    assert (A + B).contains_subspace(A) and A.contains_subspace(A.intersect(B))


@settings(max_examples=100)
@given(fields, seeds, small)
def test_generators_order_insensitive(F, seed, nk):
    n, k = nk
    rng = random.Random(seed)
    gens = [random_form(F, n, k, rng) for _ in range(rng.randint(1, 4))]
    shuffled = gens[:]
    rng.shuffle(shuffled)
    assert from_generators(F, n, k, gens) == from_generators(F, n, k, shuffled)


@settings(max_examples=60)
@given(fields, seeds, st.sampled_from([(4, 2), (5, 2), (6, 3)]))
def test_self_annihilation_is_basis_free(F, seed, nk):
    n, k = nk
    rng = random.Random(seed)
    star = [S for S in monomials(n, k) if 1 in S]
    sets = rng.sample(star, rng.randint(1, min(4, len(star))))
    L = Subspace.from_monomials(F, n, k, sets)
    P = random_operator(F, n, rng)
    M = change_basis(L, P)
    assert is_self_annihilating(M)
    assert change_basis(M, P.inverse()) == L


@settings(max_examples=100)
@given(seeds, st.sampled_from([(4, 2), (5, 2), (6, 3), (6, 2)]))
def test_monomial_dictionary_for_annihilation(seed, nk):
    n, k = nk
    rng = random.Random(seed)
    fam = SetFamily(n, k, rng.sample(monomials(n, k), rng.randint(1, 5)))
    L = monomial_family_subspace(QQ, fam)
    assert is_self_annihilating(L) == is_intersecting(fam)
    common = set.intersection(*map(set, fam.sets))
    assert is_nontrivial(L) == (not common)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([GF2, GF3]), seeds, st.sampled_from([(3, 2), (4, 2)]))
def test_colon_is_the_maximal_solution(F, seed, nk):
    n, k = nk
    rng = random.Random(seed)
    L = random_subspace(F, n, k, rng)
    v = random_form(F, n, 1, rng, density=1.0)
    if v.is_zero():
        return
    avoid = {rng.randint(1, n)}
    K = colon_by_one_form(L, v, avoid)
    allowed = [S for S in monomials(n, k - 1) if not avoid & set(S)]
    for b in K.basis():
        assert all(not avoid & set(S) for S in b.terms)
        assert L.contains(wedge(v, b))
    # brute-force oracle over every element of the coordinate space
    for coeffs in product(list(F.elements()), repeat=len(allowed)):
        x = KForm(F, n, k - 1, dict(zip(allowed, coeffs)))
        assert K.contains(x) == L.contains(wedge(v, x))


@settings(max_examples=80)
@given(fields, seeds, small)
def test_monomial_wrt_matches_definition(F, seed, nk):
    n, k = nk
    rng = random.Random(seed)
    L = random_subspace(F, n, k, rng)
    j = rng.randint(1, n)
    free = L.intersect(Subspace.from_monomials(F, n, k, [S for S in monomials(n, k) if j not in S]))
    mult = L.intersect(Subspace.from_monomials(F, n, k, [S for S in monomials(n, k) if j in S]))
    assert is_monomial_wrt(L, j) == (free.dim + mult.dim == L.dim)


@settings(max_examples=80)
@given(fields, seeds, small)
def test_one_form_annihilator_is_a_kernel(F, seed, nk):
    n, k = nk
    rng = random.Random(seed)
    L = random_subspace(F, n, k, rng)
    A = annihilator_one_forms(L)
    for v in A.basis():
        assert all(wedge(v, b).is_zero() for b in L.basis())
    P = random_operator(F, n, rng)
    assert annihilator_one_forms(change_basis(L, P)).dim == A.dim


def test_apply_operator_agrees_with_change_basis():
    rng = random.Random(3)
    L = random_subspace(QQ, 5, 2, rng, dim=3)
    P = random_operator(QQ, 5, rng)
    assert change_basis(L, P) == from_generators(QQ, 5, 2, [apply_operator(P, b) for b in L.basis()])
