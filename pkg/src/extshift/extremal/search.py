"""Exhaustive search oracles over small finite fields.

Both searches walk subspaces of ``k``-forms depth first, one projective
vector at a time.  Candidate vectors are the echelon-normalized points of a
quotient space (leading coefficient 1, reduced modulo the current span), so
each subspace is reached only through genuinely new directions, and a memo
of canonical echelon bases stops repeated visits.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from math import comb

from ..exterior import KForm, wedge
from ..setfam import BudgetExceeded
from ..subspace import Subspace, annihilator, annihilator_one_forms
from ..tfield import Field, get_field
from .. import linalg

__all__ = ["max_selfann_search", "max_crossann_search", "projective_points", "DEFAULT_BUDGET"]

DEFAULT_BUDGET = 1024


def _check_budget(n: int, k: int, F: Field, budget: int) -> None:
    if not F.is_finite:
        raise ValueError("exhaustive search needs a finite field")
    size = F.characteristic ** comb(n, k)
    if size > budget:
        raise BudgetExceeded(f"q^C(n,k) = {F.characteristic}^{comb(n, k)} = {size} exceeds the budget {budget}")


def projective_points(F: Field, rows: list[list]):
    """Nonzero combinations of ``rows`` whose first nonzero coefficient is 1."""
    d = len(rows)
    elems = list(F.elements())
    width = len(rows[0]) if rows else 0
    for lead in range(d):
        for tail in product(elems, repeat=d - lead - 1):
            v = list(rows[lead])
            for c, r in zip(tail, rows[lead + 1:]):
                if c != 0:
                    v = F.axpy(v, F.neg(c), list(r))
            assert len(v) == width
            yield v


def _quotient_basis(F: Field, W: Subspace, L: Subspace) -> list[list]:
    res = [L.residual(list(r)) for r in W.rows]
    red, _ = linalg.rref(F, res, len(res[0])) if res else ([], [])
    return red


def _normalized(F: Field, v) -> tuple:
    lead = next(c for c in v if c != 0)
    return tuple(F.scale(list(v), F.inv(lead)))


@lru_cache(maxsize=8)
def _root_points(F: Field, n: int, k: int) -> list[list]:
    return list(projective_points(F, [list(r) for r in Subspace.full(F, n, k).rows]))


@lru_cache(maxsize=8)
def _point_order(F: Field, n: int, k: int) -> dict:
    return {_normalized(F, v): idx for idx, v in enumerate(_root_points(F, n, k))}


class _Branch:
    """Restriction of a walk to subspaces whose first point (in enumeration order) is ``root``.

    Every nonzero subspace has exactly one such first point, so the branches
    partition the search space; anything containing an earlier point, and
    hence all of its extensions, belongs to another branch.
    """

    def __init__(self, F: Field, n: int, k: int, root: int) -> None:
        self.F = F
        self.order = _point_order(F, n, k)
        self.root = root

    def owns(self, L: Subspace) -> bool:
        rows = [list(r) for r in L.rows]
        return all(self.order[_normalized(self.F, v)] >= self.root for v in projective_points(self.F, rows))


class _SelfAnnSearch:
    def __init__(self, F: Field, n: int, k: int, nontrivial: bool, shared=None, branch=None) -> None:
        self.F, self.n, self.k = F, n, k
        self.nontrivial = nontrivial
        self.best = 0
        self.witness = Subspace(F, n, k)
        self.seen: set = set()
        self.visited = 0
        self.shared = shared
        self.branch = branch

    def _bound(self) -> int:
        if self.shared is None:
            return self.best
        return max(self.best, self.shared.value)

    def run(self, L: Subspace) -> None:
        key = L.rows
        if key in self.seen:
            return
        self.seen.add(key)
        if self.branch is not None and not self.branch.owns(L):
            return
        self.visited += 1
        if L.dim > self.best and (not self.nontrivial or annihilator_one_forms(L).dim == 0):
            self.best = L.dim
            self.witness = L
            if self.shared is not None:
                with self.shared.get_lock():
                    self.shared.value = max(self.shared.value, L.dim)
        W = annihilator(L, self.k)
        if W.dim <= self._bound():
            return
        F, n, k = self.F, self.n, self.k
        for v in projective_points(F, _quotient_basis(F, W, L)):
            x = KForm.from_dense(F, n, k, v)
            if not wedge(x, x).is_zero():
                continue
            self.run(L.add_forms([x]))


def _selfann_branch(n: int, k: int, field: str, nontrivial: bool, root: int, shared):
    F = get_field(field)
    x = KForm.from_dense(F, n, k, _root_points(F, n, k)[root])
    if not wedge(x, x).is_zero():
        return 0, []
    search = _SelfAnnSearch(F, n, k, nontrivial, shared, _Branch(F, n, k, root))
    search.run(Subspace(F, n, k).add_forms([x]))
    return search.best, [[F.format(v) for v in r] for r in search.witness.rows]


def max_selfann_search(n: int, k: int, field: Field, require_nontrivial: bool = False,
                       budget: int = DEFAULT_BUDGET, jobs: int = 1) -> tuple[int, Subspace]:
    """Exact maximum dimension of a (nontrivially) self-annihilating subspace.

    Depth-first extension by vectors ``x`` with ``x ^ L = 0`` and ``x ^ x = 0``;
    a branch is cut once ``dim Ann_k(L)``, an upper bound on any extension,
    cannot beat the best found.  Returns the maximum and a witness.  With
    ``jobs > 1`` the subspaces are split by their first projective point and
    the parts are searched in separate processes sharing the best size.
    """
    _check_budget(n, k, field, budget)
    search = _SelfAnnSearch(field, n, k, require_nontrivial)
    if jobs > 1:
        from ..parallel import parallel_branch_max

        branches = range(len(_root_points(field, n, k)))
        best, rows = parallel_branch_max(_selfann_branch, (n, k, str(field), require_nontrivial), branches, jobs)
        rows = [[field.parse(v) for v in r] for r in rows or []]
        return best, Subspace(field, n, k, rows)
    search.run(Subspace(field, n, k))
    return search.best, search.witness


def max_crossann_search(n: int, k: int, field: Field,
                        budget: int = DEFAULT_BUDGET) -> tuple[int, tuple[Subspace, Subspace]]:
    """Exact maximum of ``dim K + dim L`` over nonzero cross-annihilating pairs.

    For fixed ``K`` the best partner is ``L = Ann_k(K)``, so it suffices to
    range over ``K``.  Replacing ``K`` by ``Ann_k(Ann_k(K))`` only grows it
    without changing its annihilator, so the walk extends ``K`` by vectors of
    ``Ann_k(Ann_k(K))`` for free and branches only on the rest.
    """
    _check_budget(n, k, field, budget)
    F = field
    best = 0
    witness = None
    seen: set = set()

    def run(K: Subspace) -> None:
        nonlocal best, witness
        if K.rows in seen:
            return
        seen.add(K.rows)
        L = annihilator(K, k)
        if L.dim == 0:
            return
        if K.dim and K.dim + L.dim > best:
            best = K.dim + L.dim
            witness = (K, L)
        closure = annihilator(L, k)
        if closure != K:
            run(closure)
            return
        for v in projective_points(F, _quotient_basis(F, Subspace.full(F, n, k), K)):
            run(K.add_forms([KForm.from_dense(F, n, k, v)]))

    run(Subspace(F, n, k))
    return best, witness
