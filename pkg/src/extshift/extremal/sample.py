"""Seeded generator of nontrivially self-annihilating test subspaces."""

from __future__ import annotations

import random

from ..exterior import KForm, Operator, apply_operator, monomials, wedge
from ..setfam import SetFamily, is_intersecting, is_nontrivial as family_nontrivial
from ..subspace import Subspace, annihilator, annihilator_one_forms, from_generators, is_self_annihilating
from ..tfield import Field
from .. import linalg

__all__ = ["sample_nontrivial_selfann", "random_nontrivial_family"]


def random_nontrivial_family(n: int, k: int, rng: random.Random, tries: int = 50) -> SetFamily:
    """Greedy random intersecting family, thinned at random while staying nontrivial."""
    sets = list(monomials(n, k))
    for _ in range(tries):
        rng.shuffle(sets)
        chosen: list[tuple] = []
        for S in sets:
            if all(set(S) & set(T) for T in chosen):
                chosen.append(S)
        fam = SetFamily(n, k, chosen)
        if not family_nontrivial(fam):
            continue
        order = list(chosen)
        rng.shuffle(order)
        keep = set(order)
        for S in order:
            if rng.random() < 0.5 and len(keep) > 2:
                trial = SetFamily(n, k, keep - {S})
                if family_nontrivial(trial):
                    keep.discard(S)
        fam = SetFamily(n, k, keep)
        assert is_intersecting(fam)
        return fam
    raise ValueError(f"no nontrivial intersecting family found for n={n}, k={k}")


def _random_invertible(F: Field, n: int, rng: random.Random) -> Operator:
    while True:
        rows = [[F.random(rng, 1) if rng.random() < 0.4 or r == c else F.zero for c in range(n)]
                for r in range(n)]
        if linalg.rank(F, rows) == n:
            return Operator(F, rows)


def _two_frame_seed(F: Field, n: int, k: int, rng: random.Random) -> list[KForm]:
    """Forms ``e_a ^ x + e_b ^ y`` (plus optionally ``e_a ^ e_b ^ (k-2 forms)``) for random ``a, b``."""
    a, b, *rest = rng.sample(range(1, n + 1), n)
    ea, eb = KForm.monomial(F, n, (a,)), KForm.monomial(F, n, (b,))
    forms = []
    if rng.random() < 0.5:
        eab = wedge(ea, eb)
        forms += [wedge(eab, KForm.monomial(F, n, T)) for T in monomials(n, k - 2)]
    for _ in range(rng.randint(1, 4)):
        x = KForm.monomial(F, n, sorted(rng.sample(rest, k - 1)), F.random(rng, 2))
        y = KForm.monomial(F, n, sorted(rng.sample(rest, k - 1)), F.random(rng, 2))
        forms.append(wedge(ea, x) + wedge(eb, y))
    return forms


def sample_nontrivial_selfann(n: int, k: int, field: Field, seed: int, retries: int = 50,
                              extend: int = 3) -> Subspace:
    """Random nontrivially self-annihilating subspace of ``k``-forms on ``F^n``.

    Two kinds of seed configuration are drawn with equal odds: a random
    nontrivial intersecting family moved by a random invertible operator with
    small entries, or forms ``e_a ^ x + e_b ^ y`` split over a pair of
    variables (these are the inputs whose shifts run into 1-form
    annihilators).  The seed is then extended by up to ``extend`` random
    compatible forms.  Both defining properties are re-checked; after
    ``retries`` failed attempts ``ValueError`` is raised.
    """
    if not (2 <= k and 2 * k <= n):
        raise ValueError(f"need 2 <= k <= n/2, got n={n}, k={k}")
    rng = random.Random(seed)
    for _ in range(retries):
        if rng.random() < 0.5:
            fam = random_nontrivial_family(n, k, rng)
            P = _random_invertible(field, n, rng)
            forms = [apply_operator(P, KForm.monomial(field, n, S)) for S in fam]
        else:
            forms = _two_frame_seed(field, n, k, rng)
        L = from_generators(field, n, k, forms)
        if L.dim == 0 or not is_self_annihilating(L):
            continue
        for _ in range(extend):
            W = annihilator(L, k)
            if W.dim == L.dim:
                break
            coeffs = [field.random(rng, 2) for _ in range(W.dim)]
            x = KForm.from_dense(field, n, k, _combine(field, coeffs, W.rows))
            if x.is_zero() or L.contains(x) or not wedge(x, x).is_zero():
                continue
            L = L.add_forms([x])
        if is_self_annihilating(L) and annihilator_one_forms(L).dim == 0:
            return L
    raise ValueError(f"sampler gave up after {retries} attempts (n={n}, k={k}, seed={seed})")


def _combine(F: Field, coeffs, rows) -> list:
    out = [F.zero] * len(rows[0])
    for c, r in zip(coeffs, rows):
        if c != 0:
            out = F.axpy(out, F.neg(c), list(r))
    return out
