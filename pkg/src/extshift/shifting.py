"""Limit actions of parameterised operators and slow shifting.

A ``TMatrix`` is an operator over ``F[t]``.  Its limit action on a subspace
is computed by saturating the polynomial basis ``N(t) L`` until its values
at ``t = 0`` are independent.  Slow shifting (the limit of ``e_j -> e_i +
t e_j``) also has a direct one-pass kernel, :func:`slow_shift`, which is
cross-checked against the generic route in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Sequence

from . import linalg
from .exterior import KForm, Monomial, Operator, merge_sign, monomial_index, monomials, wedge
from .subspace import (Subspace, annihilator_one_forms, colon_by_one_form, from_generators)
from .tfield import QQ, Field, TPoly, canonical_projective_rep, eval_at_zero

__all__ = [
    "TMatrix",
    "apply_tmatrix",
    "n_matrix",
    "m_matrix",
    "o_matrix",
    "limit_action",
    "slow_shift",
    "slow_shift_element",
    "ShiftStep",
    "ShiftLog",
    "stabilize",
    "is_stable",
    "stable_structure",
    "decompose_stable",
    "lex_last_bound",
    "split_first_two",
    "unannihilated_witness",
]


class TMatrix:
    """``n x n`` matrix over ``F[t]``, nonsingular over ``F(t)``.

    ``entries[r][c]`` is the coefficient of ``e_{r+1}`` in the image of
    ``e_{c+1}``.
    """

    __slots__ = ("field", "n", "entries", "kind")

    def __init__(self, field: Field, entries: Sequence[Sequence[TPoly]], kind: str = "custom",
                 *, check: bool = True) -> None:
        n = len(entries)
        if any(len(r) != n for r in entries):
            raise ValueError("TMatrix must be square")
        self.field = field
        self.n = n
        self.entries = tuple(tuple(p if isinstance(p, TPoly) else TPoly.constant(field, p) for p in r)
                             for r in entries)
        self.kind = kind
        if check and self.determinant().is_zero():
            raise ValueError("TMatrix is singular over F(t)")

    def determinant(self) -> TPoly:
        """Fraction-free (Bareiss) determinant over ``F[t]``."""
        F = self.field
        n = self.n
        a = [list(r) for r in self.entries]
        sign = 1
        prev = TPoly.constant(F, 1)
        for c in range(n - 1):
            if a[c][c].is_zero():
                swap = next((r for r in range(c + 1, n) if not a[r][c].is_zero()), None)
                if swap is None:
                    return TPoly(F, [])
                a[c], a[swap] = a[swap], a[c]
                sign = -sign
            for r in range(c + 1, n):
                for s in range(c + 1, n):
                    num = a[r][s] * a[c][c] - a[r][c] * a[c][s]
                    q, rem = num.divmod(prev)
                    assert rem.is_zero(), "Bareiss division must be exact"
                    a[r][s] = q
            prev = a[c][c]
        det = a[n - 1][n - 1] if n else TPoly.constant(F, 1)
        return det if sign > 0 else -det

    def column(self, c: int) -> dict[Monomial, TPoly]:
        return {(r + 1,): self.entries[r][c] for r in range(self.n) if not self.entries[r][c].is_zero()}

    def __matmul__(self, other: "TMatrix") -> "TMatrix":
        F = self.field
        n = self.n
        zero = TPoly(F, [])
        out = []
        for r in range(n):
            row = []
            for c in range(n):
                acc = zero
                for m in range(n):
                    acc = acc + self.entries[r][m] * other.entries[m][c]
                row.append(acc)
            out.append(row)
        return TMatrix(F, out, kind=f"{self.kind}*{other.kind}", check=False)

    def at_zero(self) -> Operator:
        return Operator(self.field, [[p.constant_term() for p in r] for r in self.entries])

    def is_constant(self) -> bool:
        return all(p.degree <= 0 for r in self.entries for p in r)

    def __repr__(self) -> str:
        return f"TMatrix({self.kind}, {[[str(p) for p in r] for r in self.entries]})"


def _twedge(x: Mapping[Monomial, TPoly], y: Mapping[Monomial, TPoly]) -> dict[Monomial, TPoly]:
    out: dict = {}
    for S, a in x.items():
        for T, b in y.items():
            sign, U = merge_sign(S, T)
            if not sign:
                continue
            c = a * b if sign > 0 else -(a * b)
            prev = out.get(U)
            v = c if prev is None else prev + c
            if v.is_zero():
                out.pop(U, None)
            else:
                out[U] = v
    return out


def apply_tmatrix(N: TMatrix, x: KForm) -> dict[Monomial, TPoly]:
    """``N(t) x`` as a vector over ``F[t]`` keyed by monomials."""
    if N.n != x.n:
        raise ValueError("dimension mismatch")
    F = N.field
    cols = [N.column(c) for c in range(N.n)]
    acc: dict = {}
    for S, c in x.terms.items():
        img = {(): TPoly.constant(F, F.one)}
        for s in S:
            img = _twedge(img, cols[s - 1])
        for U, p in img.items():
            v = p * c
            prev = acc.get(U)
            v = v if prev is None else prev + v
            if v.is_zero():
                acc.pop(U, None)
            else:
                acc[U] = v
    return acc


def _poly(F: Field, *coeffs) -> TPoly:
    return TPoly(F, list(coeffs))


def _check_pair(j: int, i: int, n: int) -> None:
    if i == j or not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"need distinct indices in [1, {n}], got j={j}, i={i}")


def n_matrix(j: int, i: int, n: int, field: Field = QQ) -> TMatrix:
    """``e_j -> e_i + t e_j``, other basis vectors fixed."""
    _check_pair(j, i, n)
    ent = [[_poly(field, 1 if r == c else 0) for c in range(n)] for r in range(n)]
    ent[i - 1][j - 1] = _poly(field, 1)
    ent[j - 1][j - 1] = _poly(field, 0, 1)
    return TMatrix(field, ent, kind=f"N({j}->{i})", check=False)


def m_matrix(i: int, n: int, field: Field = QQ) -> TMatrix:
    """``e_i -> t e_i``, other basis vectors fixed."""
    if not 1 <= i <= n:
        raise ValueError(f"index {i} out of range [1, {n}]")
    ent = [[_poly(field, 1 if r == c else 0) for c in range(n)] for r in range(n)]
    ent[i - 1][i - 1] = _poly(field, 0, 1)
    return TMatrix(field, ent, kind=f"M({i})", check=False)


def o_matrix(j: int, i: int, n: int, field: Field = QQ) -> TMatrix:
    """``e_j -> e_i + t e_j`` and ``e_h -> t e_h`` for ``h != j``."""
    _check_pair(j, i, n)
    ent = [[_poly(field, 0, 1) if r == c else _poly(field) for c in range(n)] for r in range(n)]
    ent[i - 1][j - 1] = _poly(field, 1)
    return TMatrix(field, ent, kind=f"O({j}->{i})", check=False)


def limit_action(N: TMatrix, L: Subspace) -> Subspace:
    """Limit as ``t -> 0`` of ``N(t) L`` on the Grassmannian.

    Columns ``w_c(t) = N(t) b_c`` are divided by their ``t``-content and
    evaluated at zero.  While the values are dependent, a dependency ``c``
    gives ``u = sum c_s w_s`` with ``u(0) = 0``; ``u`` replaces a column with
    ``c_s != 0``.  Each round lowers the ``t``-adic valuation of the maximal
    minors, so the loop ends.
    """
    if N.n != L.n or N.field != L.field:
        raise ValueError("TMatrix and subspace live over different spaces")
    if L.dim == 0:
        return L
    F = L.field
    idx = monomial_index(L.n, L.k)
    width = len(idx)
    cols = [apply_tmatrix(N, b) for b in L.basis()]
    while True:
        for pos, w in enumerate(cols):
            if not w:
                raise ValueError("TMatrix is singular over F(t)")
            cols[pos] = canonical_projective_rep(w)
        values = []
        for w in cols:
            row = [F.zero] * width
            for S, c in eval_at_zero(w).items():
                row[idx[S]] = c
            values.append(row)
        kern = linalg.left_kernel(F, values, width)
        if not kern:
            return Subspace(F, L.n, L.k, values)
        dep = kern[0]
        target = next(s for s, c in enumerate(dep) if c != 0)
        u: dict = {}
        for c, w in zip(dep, cols):
            if c == 0:
                continue
            for S, p in w.items():
                v = p * c
                prev = u.get(S)
                v = v if prev is None else prev + v
                if v.is_zero():
                    u.pop(S, None)
                else:
                    u[S] = v
        if not u:
            raise ValueError("TMatrix is singular over F(t)")
        cols[target] = u


@lru_cache(maxsize=None)
def _shift_tables(n: int, k: int, j: int, i: int):
    """Per-column data for ``m = x + e_j ^ y``.

    ``phi[c]`` is ``(target, sign)`` for the image of column ``c`` in
    ``x + e_i ^ y`` (``None`` if it vanishes); ``jcols`` lists the columns
    whose monomial contains ``j``.
    """
    mons = monomials(n, k)
    idx = monomial_index(n, k)
    phi = []
    jcols = []
    for c, S in enumerate(mons):
        if j not in S:
            phi.append((c, 1))
            continue
        jcols.append(c)
        if i in S:
            phi.append(None)
            continue
        rest = tuple(s for s in S if s != j)
        parity = sum(1 for s in S if s < j) + sum(1 for s in rest if s < i)
        T = tuple(sorted(rest + (i,)))
        phi.append((idx[T], -1 if parity & 1 else 1))
    return tuple(phi), tuple(jcols)


def slow_shift(L: Subspace, j: int, i: int) -> Subspace:
    """Limit of ``N_{j->i}(t)`` on ``L``.

    Writing each element as ``m = x + e_j ^ y``, ``N(t) m = phi(m) + t psi(m)``
    with ``phi(m) = x + e_i ^ y`` and ``psi(m) = e_j ^ y``.  The images of
    ``phi`` and ``psi`` lie in complementary coordinate spaces, so the limit is
    ``phi(L) + psi(ker phi|L)``.
    """
    _check_pair(j, i, L.n)
    if L.dim == 0:
        return L
    F = L.field
    phi, jcols = _shift_tables(L.n, L.k, j, i)
    width = len(phi)
    images = []
    for row in L.rows:
        out = [F.zero] * width
        for c, v in enumerate(row):
            if v != 0:
                tgt = phi[c]
                if tgt is not None:
                    t, s = tgt
                    out[t] = F.add(out[t], v) if s > 0 else F.sub(out[t], v)
        images.append(out)
    d = len(images)
    aug = [images[r] + [F.one if s == r else F.zero for s in range(d)] for r in range(d)]
    red, piv = linalg.rref(F, aug, width + d, pivot_limit=width)
    if len(piv) == d:
        return Subspace(F, L.n, L.k, [r[:width] for r in red], echelon=True)
    jset = set(jcols)
    extra = []
    for r in red[len(piv):]:
        coeffs = r[width:]
        m = [F.zero] * width
        for c, row in zip(coeffs, L.rows):
            if c != 0:
                m = F.axpy(m, F.neg(c), row)
        extra.append([v if col in jset else F.zero for col, v in enumerate(m)])
    ered, epiv = linalg.rref(F, extra, width)
    merged = sorted(zip(piv + epiv, [r[:width] for r in red[:len(piv)]] + ered))
    return Subspace(F, L.n, L.k, [r for _, r in merged], echelon=True)


def slow_shift_element(m: KForm, j: int, i: int) -> KForm:
    """Projective image of a single form: ``x + e_i ^ y`` unless that vanishes, else ``e_j ^ y``."""
    if m.is_zero():
        raise ValueError("slow shift of the zero form is undefined")
    _check_pair(j, i, m.n)
    F = m.field
    x = {}
    y = {}
    for S, c in m.terms.items():
        if j in S:
            rest = tuple(s for s in S if s != j)
            sign = -1 if sum(1 for s in S if s < j) & 1 else 1
            y[rest] = c if sign > 0 else F.neg(c)
        else:
            x[S] = c
    xf = KForm(F, m.n, m.k, x, check=False)
    yf = KForm(F, m.n, m.k - 1, y, check=False)
    cand = xf + wedge(KForm.monomial(F, m.n, (i,)), yf)
    if not cand.is_zero():
        return cand
    return wedge(KForm.monomial(F, m.n, (j,)), yf)


@dataclass
class ShiftStep:
    """One slow shift ``N_{j->i}`` considered by :func:`stabilize`."""

    kind: str
    j: int
    i: int
    fixing: bool
    dim_before: int
    dim_after: int
    annihilator: KForm | None = None
    applied: bool = True

    def to_dict(self) -> dict:
        return {"kind": self.kind, "j": self.j, "i": self.i, "fixing": self.fixing,
                "dim_before": self.dim_before, "dim_after": self.dim_after,
                "annihilator": None if self.annihilator is None else str(self.annihilator),
                "applied": self.applied}


@dataclass
class ShiftLog:
    indices: list[int]
    strategy: str
    steps: list[ShiftStep] = dc_field(default_factory=list)
    trigger: ShiftStep | None = None
    stable: bool = False

    @property
    def non_fixing(self) -> int:
        return sum(1 for s in self.steps if not s.fixing)

    @property
    def bound(self) -> int:
        return lex_last_bound(len(self.indices))

    @property
    def within_bound(self) -> bool:
        return self.non_fixing <= self.bound

    def to_dict(self) -> dict:
        return {"indices": list(self.indices), "strategy": self.strategy,
                "steps": [s.to_dict() for s in self.steps],
                "trigger": None if self.trigger is None else self.trigger.to_dict(),
                "stable": self.stable, "non_fixing": self.non_fixing, "bound": self.bound}


def lex_last_bound(size: int) -> int:
    """Upper bound ``|I| - 1 + C(|I|, 2)`` on non-fixing steps under lex-last."""
    return max(size - 1, 0) + comb(size, 2)


_STRATEGIES = ("lex-last", "first-found", "given-sequence")


def _ordered_pairs(I: Iterable[int], strategy: str) -> list[tuple[int, int]]:
    idx = sorted(set(I))
    pairs = [(j, i) for j in idx for i in idx if i < j]
    return pairs[::-1] if strategy == "lex-last" else pairs


def stabilize(L: Subspace, I: Iterable[int] | None = None, strategy: str = "lex-last",
              stop_on_trivializing: bool = False,
              sequence: Sequence[tuple[int, int]] | None = None) -> tuple[Subspace, ShiftLog]:
    """Apply non-fixing slow shifts over pairs ``i < j`` in ``I`` until none is left.

    ``lex-last`` always takes the lexicographically last non-fixing ``(j, i)``;
    ``first-found`` the first in ascending order; ``given-sequence`` replays
    ``sequence`` verbatim (fixing steps included).  With
    ``stop_on_trivializing`` a shift whose result is annihilated by a nonzero
    1-form is not applied: the pre-shift subspace is returned and the log's
    ``trigger`` records the pair and the annihilator.
    """
    if strategy not in _STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {_STRATEGIES}")
    I = sorted(set(range(1, L.n + 1) if I is None else I))
    if any(not 1 <= h <= L.n for h in I):
        raise ValueError(f"indices {I} not inside [1, {L.n}]")
    log = ShiftLog(indices=I, strategy=strategy)

    def attempt(j: int, i: int, cand: Subspace) -> bool:
        """Record a non-fixing step; False when it was blocked as trivializing."""
        ann = None
        if stop_on_trivializing:
            A = annihilator_one_forms(cand)
            if A.dim:
                ann = A.basis()[0]
                log.trigger = ShiftStep("N", j, i, False, L.dim, cand.dim, ann, applied=False)
                return False
        log.steps.append(ShiftStep("N", j, i, False, L.dim, cand.dim))
        return True

    if strategy == "given-sequence":
        if sequence is None:
            raise ValueError("given-sequence needs an explicit sequence of (j, i) pairs")
        for j, i in sequence:
            cand = slow_shift(L, j, i)
            if cand == L:
                log.steps.append(ShiftStep("N", j, i, True, L.dim, cand.dim))
                continue
            if not attempt(j, i, cand):
                return L, log
            L = cand
        log.stable = is_stable(L, I)
        return L, log

    pairs = _ordered_pairs(I, strategy)
    while True:
        for j, i in pairs:
            cand = slow_shift(L, j, i)
            if cand != L:
                if not attempt(j, i, cand):
                    return L, log
                L = cand
                break
        else:
            log.stable = True
            return L, log


def is_stable(L: Subspace, I: Iterable[int] | None = None) -> bool:
    """Every ``N_{j->i}`` with ``i < j`` in ``I`` fixes ``L``."""
    I = range(1, L.n + 1) if I is None else I
    return all(slow_shift(L, j, i) == L for j, i in _ordered_pairs(I, "lex-last"))


def stable_structure(L: Subspace, I: Iterable[int]) -> list[tuple[KForm, Monomial]]:
    """Basis of a stable ``L`` as pairs ``(x, T)`` with element ``x ^ e_T``.

    ``T`` is a monomial in the indices of ``I`` other than ``min I`` and ``x``
    avoids those indices.  A stable ``L`` is invariant under the coordinate
    projections separating each such ``e_h``, so projecting onto each pattern
    ``S & H = T`` splits ``L`` into pieces that each factor through ``e_T``.
    """
    I = sorted(set(I))
    if not is_stable(L, I):
        raise ValueError("subspace is not stable under slow shifting over the given indices")
    if L.dim == 0:
        return []
    F = L.field
    H = frozenset(I[1:])
    mons = monomials(L.n, L.k)
    groups: dict[Monomial, list[int]] = {}
    for c, S in enumerate(mons):
        groups.setdefault(tuple(s for s in S if s in H), []).append(c)
    out = []
    for T, cols in sorted(groups.items()):
        colset = set(cols)
        proj = [[v if c in colset else F.zero for c, v in enumerate(r)] for r in L.rows]
        piece = Subspace(F, L.n, L.k, proj)
        for row in piece.rows:
            if not L.contains(row):
                raise AssertionError("stable subspace is not monomial in the shifted indices")
            terms = {}
            for c in cols:
                v = row[c]
                if v == 0:
                    continue
                S = mons[c]
                R = tuple(s for s in S if s not in H)
                sign, _ = merge_sign(R, T)
                terms[R] = v if sign > 0 else F.neg(v)
            x = KForm(F, L.n, L.k - len(T), terms, check=False)
            out.append((x, T))
    if from_generators(F, L.n, L.k, [wedge(x, KForm.monomial(F, L.n, T)) for x, T in out]) != L:
        raise AssertionError("structure basis does not span the subspace")
    return out


def _two_form_part(F: Field, n: int, k: int) -> Subspace:
    return Subspace.from_monomials(F, n, k, [S for S in monomials(n, k) if S[:2] == (1, 2)])


def decompose_stable(L: Subspace) -> list[tuple[KForm, Subspace]]:
    """Split ``L = e1^e2^(...) + sum w ^ K_w`` with ``w`` in ``span{e1, e2}``.

    Requires ``e1^e2^(k-2 forms)`` inside ``L``, ``e1^e2 ^ L = 0`` and
    stability over ``{3..n}``.  Each ``K_w`` is the largest subspace of forms
    in ``e3..en`` with ``w ^ K_w`` inside ``L``.  The ``w`` are the distinct
    projective ``e1, e2``-factors of the structure basis.
    """
    F = L.field
    n, k = L.n, L.k
    if k < 2:
        raise ValueError("decomposition needs k >= 2")
    A = _two_form_part(F, n, k)
    e12 = KForm.monomial(F, n, (1, 2))
    problems = []
    if not L.contains_subspace(A):
        problems.append("L does not contain e1^e2^(k-2 forms)")
    if any(not wedge(e12, b).is_zero() for b in L.basis()):
        problems.append("e1^e2 does not annihilate L")
    if not problems and not is_stable(L, range(3, n + 1)):
        problems.append("L is not stable over {3..n}")
    if problems:
        raise ValueError("; ".join(problems))
    seen: dict[tuple, KForm] = {}
    for x, T in stable_structure(L, range(3, n + 1)):
        z = wedge(x, KForm.monomial(F, n, T))
        rest = {S: c for S, c in z.terms.items() if S[:2] != (1, 2)}
        if not rest:
            continue
        lam = [F.zero, F.zero]
        m_terms: dict = {}
        for S, c in rest.items():
            h = S[0]
            if h not in (1, 2) or (len(S) > 1 and S[1] == 2):
                raise AssertionError(f"structure element {z} is not of the form w ^ y")
            m_terms.setdefault(h, {})[S[1:]] = c
        # z' = e1 ^ p + e2 ^ q with p, q proportional to one monomial form
        ref = next(iter(m_terms.values()))
        base_key = next(iter(ref))
        for h, terms in m_terms.items():
            if set(terms) != set(ref):
                raise AssertionError(f"structure element {z} is not of the form w ^ y")
            lam[h - 1] = F.div(terms[base_key], ref[base_key])
            for key in terms:
                if F.mul(terms[key], ref[base_key]) != F.mul(ref[key], terms[base_key]):
                    raise AssertionError(f"structure element {z} is not of the form w ^ y")
        lead = lam[0] if lam[0] != 0 else lam[1]
        lam = tuple(F.div(v, lead) for v in lam)
        if lam not in seen:
            seen[lam] = KForm.one_form(F, list(lam) + [F.zero] * (n - 2))
    out = []
    for w in seen.values():
        out.append((w, colon_by_one_form(L, w, avoid=(1, 2))))
    return out


def split_first_two(z: KForm) -> tuple[KForm, KForm, KForm]:
    """``(x, y, w)`` with ``z = e1 ^ x + e2 ^ y + w`` and ``x, y, w`` free of ``e1, e2``.

    Raises ``ValueError`` when ``z`` has an ``e1 ^ e2`` term.
    """
    F, n, k = z.field, z.n, z.k
    x, y, w = {}, {}, {}
    for S, c in z.terms.items():
        if S[:2] == (1, 2):
            raise ValueError("form has an e1 ^ e2 term")
        if S[0] == 1:
            x[S[1:]] = c
        elif S[0] == 2:
            y[S[1:]] = c
        else:
            w[S] = c
    return (KForm(F, n, k - 1, x, check=False), KForm(F, n, k - 1, y, check=False),
            KForm(F, n, k, w, check=False))


def unannihilated_witness(n: int, k: int, field: Field = QQ, seed: int = 0,
                          tries: int = 200) -> KForm:
    """Random ``z = e1 ^ x + e2 ^ y + w`` (``x, y, w`` free of ``e1, e2``, ``y != 0``)
    such that neither ``z`` nor its slow shift ``N_{2->1} z`` is annihilated by a
    nonzero 2-form.

    Only possible once ``C(n, 2) <= C(n, k + 2)``; ``ValueError`` after
    ``tries`` misses.
    """
    import random

    from .subspace import annihilator

    rng = random.Random(seed)
    rest = list(monomials(n - 2, k - 1))
    restw = list(monomials(n - 2, k))
    up = lambda S, shift=2: tuple(s + shift for s in S)  # noqa: E731
    for _ in range(tries):
        y = {up(S): field.random(rng, 2) for S in rest}
        if all(v == 0 for v in y.values()):
            continue
        terms = {}
        for S in rest:
            terms[(1,) + up(S)] = field.random(rng, 2)
            terms[(2,) + up(S)] = y[up(S)]
        for S in restw:
            terms[up(S)] = field.random(rng, 2)
        z = KForm(field, n, k, {S: c for S, c in terms.items() if c != 0})
        for m in (z, slow_shift_element(z, 2, 1)):
            if annihilator(from_generators(field, n, k, [m]), 2).dim:
                break
        else:
            return z
    raise ValueError(f"no witness found in {tries} tries for n={n}, k={k}")
