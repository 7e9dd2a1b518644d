"""Subspaces of a graded piece of the exterior algebra.

A :class:`Subspace` stores the reduced row echelon basis of its span over the
colex monomial basis, so equal subspaces have identical ``rows``.
"""

from __future__ import annotations

import json
from math import comb
from typing import Iterable, Sequence

from . import linalg
from .exterior import KForm, Operator, apply_operator, monomial_index, monomials, wedge
from .tfield import Field

__all__ = [
    "Subspace",
    "from_generators",
    "is_self_annihilating",
    "is_cross_annihilating",
    "annihilator_one_forms",
    "is_nontrivial",
    "colon_by_one_form",
    "is_monomial_wrt",
    "has_monomial_basis",
    "change_basis",
    "coordinate_subspace",
    "wedge_span",
]


class Subspace:
    """Span of ``k``-forms on ``F^n`` in canonical echelon form.

    ``k > n`` (and ``k < 0``) give the zero-dimensional ambient space.
    """

    __slots__ = ("field", "n", "k", "rows", "pivots")

    def __init__(self, field: Field, n: int, k: int, rows: Sequence[Sequence] = (), *,
                 echelon: bool = False) -> None:
        self.field = field
        self.n = n
        self.k = k
        width = len(monomials(n, k))
        if echelon:
            red = [tuple(r) for r in rows]
            piv = [next(c for c, v in enumerate(r) if v != 0) for r in red]
        else:
            for r in rows:
                if len(r) != width:
                    raise ValueError(f"row of length {len(r)} in a space of dimension {width}")
            red, piv = linalg.rref(field, rows, width) if rows else ([], [])
            red = [tuple(r) for r in red]
        self.rows = tuple(red)
        self.pivots = tuple(piv)

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, field: Field, n: int, k: int) -> "Subspace":
        return cls(field, n, k)

    @classmethod
    def full(cls, field: Field, n: int, k: int) -> "Subspace":
        N = len(monomials(n, k))
        rows = [[field.one if r == c else field.zero for c in range(N)] for r in range(N)]
        return cls(field, n, k, rows, echelon=True)

    @classmethod
    def from_monomials(cls, field: Field, n: int, k: int, sets: Iterable[Sequence[int]]) -> "Subspace":
        return from_generators(field, n, k, [KForm.monomial(field, n, S) for S in sets])

    # -- basic data -------------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def ambient_dim(self) -> int:
        return len(monomials(self.n, self.k))

    def basis(self) -> list[KForm]:
        return [KForm.from_dense(self.field, self.n, self.k, r) for r in self.rows]

    def _check(self, other: "Subspace") -> None:
        if (self.n, self.k) != (other.n, other.k) or self.field != other.field:
            raise ValueError(
                f"subspaces of different ambient spaces: (n={self.n}, k={self.k}, {self.field}) "
                f"vs (n={other.n}, k={other.k}, {other.field})")

    def residual(self, x: KForm | Sequence) -> list:
        row = x.to_dense() if isinstance(x, KForm) else list(x)
        return linalg.reduce_vector(self.field, row, self.rows, self.pivots)

    def contains(self, x: KForm) -> bool:
        if isinstance(x, KForm):
            if (x.n, x.k) != (self.n, self.k):
                if x.is_zero():
                    return True
                raise ValueError("form and subspace live in different degrees")
        return not any(v != 0 for v in self.residual(x))

    __contains__ = contains

    def contains_subspace(self, other: "Subspace") -> bool:
        self._check(other)
        return all(self.contains(r) for r in other.rows)

    def equals(self, other: "Subspace") -> bool:
        self._check(other)
        return self.rows == other.rows

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return ((self.n, self.k, self.field) == (other.n, other.k, other.field)
                and self.rows == other.rows)

    def __hash__(self) -> int:
        return hash((self.n, self.k, self.rows))

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.field, self.n, self.k, list(self.rows) + list(other.rows))

    sum = __add__

    def intersect(self, other: "Subspace") -> "Subspace":
        """Intersection via the left kernel of the stacked bases."""
        self._check(other)
        if not self.rows or not other.rows:
            return Subspace(self.field, self.n, self.k)
        F = self.field
        kern = linalg.left_kernel(F, list(self.rows) + list(other.rows))
        d = self.dim
        vecs = []
        for c in kern:
            v = [F.zero] * self.ambient_dim
            for coef, row in zip(c[:d], self.rows):
                if coef != 0:
                    v = F.axpy(v, F.neg(coef), row)
            vecs.append(v)
        return Subspace(F, self.n, self.k, vecs)

    __and__ = intersect

    def add_forms(self, forms: Iterable[KForm]) -> "Subspace":
        return Subspace(self.field, self.n, self.k, list(self.rows) + [f.to_dense() for f in forms])

    def is_monomial_subspace(self) -> bool:
        return has_monomial_basis(self)[0]

    # -- text / json ------------------------------------------------------
    def to_text(self) -> str:
        lines = [f"field {self.field.name}", f"n {self.n}", f"k {self.k}"]
        lines += [str(b) for b in self.basis()]
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {"field": self.field.name, "n": self.n, "k": self.k, "dim": self.dim,
                "basis": [str(b) for b in self.basis()]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def __repr__(self) -> str:
        body = ", ".join(str(b) for b in self.basis())
        return f"Subspace(n={self.n}, k={self.k}, {self.field.name}, dim={self.dim}: [{body}])"


def from_generators(field: Field, n: int, k: int, forms: Iterable[KForm]) -> Subspace:
    """Echelonized span of ``forms`` (all of degree ``k`` on ``F^n``)."""
    rows = []
    for f in forms:
        if f.n != n or (f.k != k and not f.is_zero()):
            raise ValueError(f"generator of degree {f.k} on F^{f.n}; expected degree {k} on F^{n}")
        rows.append(f.to_dense() if f.k == k else [field.zero] * len(monomials(n, k)))
    return Subspace(field, n, k, rows)


def coordinate_subspace(field: Field, n: int, k: int, predicate) -> Subspace:
    """Span of the monomials ``e_S`` with ``predicate(S)`` true."""
    return Subspace.from_monomials(field, n, k, [S for S in monomials(n, k) if predicate(S)])


def _restrict_to_columns(L: Subspace, allowed: set[int]) -> Subspace:
    """``L`` intersected with the coordinate subspace on the ``allowed`` columns."""
    F = L.field
    if not L.rows:
        return L
    others = [c for c in range(L.ambient_dim) if c not in allowed]
    if not others:
        return L
    proj = [[r[c] for c in others] for r in L.rows]
    kern = linalg.left_kernel(F, proj, len(others))
    vecs = []
    for coeffs in kern:
        v = [F.zero] * L.ambient_dim
        for coef, row in zip(coeffs, L.rows):
            if coef != 0:
                v = F.axpy(v, F.neg(coef), row)
        vecs.append(v)
    return Subspace(F, L.n, L.k, vecs)


def wedge_span(K: Subspace, L: Subspace) -> Subspace:
    """Span of ``x ^ y`` for ``x`` in ``K`` and ``y`` in ``L``."""
    if K.n != L.n:
        raise ValueError("ambient dimension mismatch")
    F = K.field
    prods = [wedge(x, y) for x in K.basis() for y in L.basis()]
    return from_generators(F, K.n, K.k + L.k, prods)


def is_cross_annihilating(K: Subspace, L: Subspace) -> bool:
    """``K ^ L = 0``."""
    if K.n != L.n:
        raise ValueError("ambient dimension mismatch")
    kb = K.basis()
    lb = L.basis()
    for x in kb:
        for y in lb:
            if not wedge(x, y).is_zero():
                return False
    return True


def is_self_annihilating(L: Subspace) -> bool:
    """``L ^ L = 0``; every pair ``i <= j`` of basis forms is checked, diagonal included."""
    b = L.basis()
    for a in range(len(b)):
        for c in range(a, len(b)):
            if not wedge(b[a], b[c]).is_zero():
                return False
    return True


def _multiplication_rows(L: Subspace, degree: int) -> list[list]:
    """Row for each degree-``degree`` monomial ``e_U``: concatenated dense ``e_U ^ b_r``."""
    F = L.field
    n = L.n
    basis = L.basis()
    out_idx = monomial_index(n, degree + L.k)
    width = len(out_idx)
    rows = []
    for U in monomials(n, degree):
        eu = KForm.monomial(F, n, U)
        row = []
        for b in basis:
            block = [F.zero] * width
            for S, c in wedge(eu, b).terms.items():
                block[out_idx[S]] = c
            row.extend(block)
        rows.append(row)
    return rows


def annihilator(L: Subspace, degree: int) -> Subspace:
    """All ``degree``-forms ``w`` with ``w ^ L = 0``."""
    F = L.field
    if L.dim == 0:
        return Subspace.full(F, L.n, degree)
    if degree + L.k > L.n:
        return Subspace.full(F, L.n, degree)
    rows = _multiplication_rows(L, degree)
    kern = linalg.left_kernel(F, rows, len(rows[0]))
    return Subspace(F, L.n, degree, kern) if kern else Subspace(F, L.n, degree)


def annihilator_one_forms(L: Subspace) -> Subspace:
    """1-forms ``v`` with ``v ^ L = 0`` (a subspace of ``V``)."""
    return annihilator(L, 1)


def is_nontrivial(L: Subspace) -> bool:
    """No nonzero 1-form annihilates ``L``."""
    return annihilator_one_forms(L).dim == 0


def colon_by_one_form(L: Subspace, v: KForm, avoid: Iterable[int] = ()) -> Subspace:
    """Largest ``K`` of ``(k-1)``-forms avoiding ``avoid`` with ``v ^ K`` inside ``L``."""
    if v.k != 1 or v.is_zero():
        raise ValueError("colon needs a nonzero 1-form")
    F = L.field
    avoid = set(avoid)
    cand = [S for S in monomials(L.n, L.k - 1) if not avoid.intersection(S)]
    if not cand:
        return Subspace(F, L.n, L.k - 1)
    idx = monomial_index(L.n, L.k - 1)
    res = [L.residual(wedge(v, KForm.monomial(F, L.n, S))) for S in cand]
    kern = linalg.left_kernel(F, res, len(res[0]))
    vecs = []
    width = len(idx)
    for coeffs in kern:
        row = [F.zero] * width
        for c, S in zip(coeffs, cand):
            row[idx[S]] = c
        vecs.append(row)
    return Subspace(F, L.n, L.k - 1, vecs)


def is_monomial_wrt(L: Subspace, j: int) -> bool:
    """``L`` splits into its ``e_j``-free part plus its ``e_j``-multiple part."""
    if not 1 <= j <= L.n:
        raise ValueError(f"index {j} out of range")
    mons = monomials(L.n, L.k)
    free = {c for c, S in enumerate(mons) if j not in S}
    mult = {c for c in range(len(mons)) if c not in free}
    return _restrict_to_columns(L, free).dim + _restrict_to_columns(L, mult).dim == L.dim


def has_monomial_basis(L: Subspace):
    """``(True, family)`` if ``L`` is spanned by monomials, else ``(False, None)``.

    A monomial ``e_S`` lies in an echelon span iff some echelon row is the
    unit vector at ``S``; so the test reads the rows directly.
    """
    from .setfam import SetFamily

    mons = monomials(L.n, L.k)
    sets = []
    for row, p in zip(L.rows, L.pivots):
        if any(v != 0 for c, v in enumerate(row) if c != p):
            return False, None
        sets.append(mons[p])
    return True, SetFamily(L.n, L.k, sets)


def change_basis(L: Subspace, P: Operator) -> Subspace:
    """Span of ``P b`` over the basis ``b`` of ``L``; ``P`` must be invertible."""
    if P.n != L.n:
        raise ValueError("operator dimension mismatch")
    if not P.is_invertible():
        raise ValueError("change of basis matrix is singular")
    images = [apply_operator(P, b) for b in L.basis()]
    return from_generators(L.field, L.n, L.k, images)


def monomial_family_subspace(field: Field, family) -> Subspace:
    return Subspace.from_monomials(field, family.n, family.k, family.sets)


def dim_full(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0
