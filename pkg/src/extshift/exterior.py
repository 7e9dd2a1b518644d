"""Exterior algebra over an exact field.

Monomials ``e_S`` are sorted tuples of 1-based indices.  The degree-``k``
monomials of an ``n``-dimensional space are ordered colexicographically; that
order fixes the column layout of every dense row used elsewhere.
"""

from __future__ import annotations

import re
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from . import linalg
from .tfield import Field

__all__ = [
    "Monomial",
    "monomials",
    "monomial_index",
    "colex_rank",
    "merge_sign",
    "KForm",
    "wedge",
    "Operator",
    "apply_operator",
    "divide_by_one_form",
    "parse_form",
    "complete_basis",
    "compound_rows",
    "format_form",
    "FormSyntaxError",
]

Monomial = tuple


@lru_cache(maxsize=None)
def monomials(n: int, k: int) -> tuple[Monomial, ...]:
    """All ``k``-subsets of ``[n]`` in colex order."""
    if k < 0 or k > n:
        return ()
    return tuple(sorted(combinations(range(1, n + 1), k), key=lambda s: s[::-1]))


@lru_cache(maxsize=None)
def monomial_index(n: int, k: int) -> dict[Monomial, int]:
    return {s: c for c, s in enumerate(monomials(n, k))}


def colex_rank(S: Sequence[int]) -> int:
    from math import comb

    return sum(comb(s - 1, pos) for pos, s in enumerate(S, start=1))


def merge_sign(S: Monomial, T: Monomial) -> tuple[int, Monomial | None]:
    """``e_S ^ e_T = sign * e_U``; sign 0 when the index sets meet.

    The sign is ``(-1)^#{(s, t) : s > t}``, counted by a merge.
    """
    out = []
    inv = 0
    a = b = 0
    la, lb = len(S), len(T)
    while a < la and b < lb:
        s, t = S[a], T[b]
        if s == t:
            return 0, None
        if s < t:
            out.append(s)
            a += 1
        else:
            out.append(t)
            inv += la - a
            b += 1
    out.extend(S[a:])
    out.extend(T[b:])
    return (-1 if inv & 1 else 1), tuple(out)


def _check_monomial(S: Monomial, n: int, k: int | None = None) -> None:
    if k is not None and len(S) != k:
        raise ValueError(f"monomial {S} does not have degree {k}")
    for a, b in zip(S, S[1:]):
        if a >= b:
            raise ValueError(f"monomial indices must be strictly increasing: {S}")
    if S and (S[0] < 1 or S[-1] > n):
        raise ValueError(f"monomial {S} out of range [1, {n}]")


class KForm:
    """Homogeneous element of degree ``k`` in the exterior algebra on ``F^n``.

    ``terms`` maps monomials to nonzero coefficients.  Instances are treated
    as immutable.
    """

    __slots__ = ("field", "n", "k", "terms")

    def __init__(self, field: Field, n: int, k: int, terms: Mapping[Monomial, object] | None = None,
                 *, check: bool = True) -> None:
        self.field = field
        self.n = n
        self.k = k
        clean = {}
        if terms:
            for S, c in terms.items():
                S = tuple(S)
                if check:
                    _check_monomial(S, n, k)
                    c = field(c)
                if c != 0:
                    clean[S] = c
        self.terms = clean

    @classmethod
    def zero(cls, field: Field, n: int, k: int) -> "KForm":
        return cls(field, n, k)

    @classmethod
    def monomial(cls, field: Field, n: int, S: Iterable[int], coeff=1) -> "KForm":
        S = tuple(S)
        return cls(field, n, len(S), {S: coeff})

    @classmethod
    def one_form(cls, field: Field, coeffs: Sequence) -> "KForm":
        """1-form ``sum_h coeffs[h-1] e_h``."""
        n = len(coeffs)
        return cls(field, n, 1, {(h + 1,): c for h, c in enumerate(coeffs)})

    @classmethod
    def from_dense(cls, field: Field, n: int, k: int, row: Sequence) -> "KForm":
        mons = monomials(n, k)
        return cls(field, n, k, {mons[c]: v for c, v in enumerate(row) if v != 0}, check=False)

    def to_dense(self) -> list:
        idx = monomial_index(self.n, self.k)
        row = [self.field.zero] * len(idx)
        for S, c in self.terms.items():
            row[idx[S]] = c
        return row

    def one_form_coeffs(self) -> list:
        if self.k != 1:
            raise ValueError("not a 1-form")
        out = [self.field.zero] * self.n
        for (h,), c in self.terms.items():
            out[h - 1] = c
        return out

    # -- predicates ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def support(self) -> frozenset:
        return frozenset(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, KForm):
            return NotImplemented
        return (self.n, self.k, self.field, self.terms) == (other.n, other.k, other.field, other.terms)

    def __hash__(self) -> int:
        return hash((self.n, self.k, frozenset(self.terms.items())))

    # -- arithmetic ---------------------------------------------------
    def _compatible(self, other: "KForm") -> None:
        if self.n != other.n or self.field != other.field:
            raise ValueError("forms live in different ambient spaces")

    def __add__(self, other: "KForm") -> "KForm":
        self._compatible(other)
        if self.k != other.k and self.terms and other.terms:
            raise ValueError("cannot add forms of different degree")
        F = self.field
        out = dict(self.terms)
        for S, c in other.terms.items():
            v = F.add(out.get(S, F.zero), c)
            if v != 0:
                out[S] = v
            else:
                out.pop(S, None)
        k = self.k if self.terms else other.k
        return KForm(F, self.n, k, out, check=False)

    def __neg__(self) -> "KForm":
        F = self.field
        return KForm(F, self.n, self.k, {S: F.neg(c) for S, c in self.terms.items()}, check=False)

    def __sub__(self, other: "KForm") -> "KForm":
        return self + (-other)

    def scale(self, c) -> "KForm":
        F = self.field
        c = F(c)
        if c == 0:
            return KForm(F, self.n, self.k)
        return KForm(F, self.n, self.k, {S: F.mul(c, v) for S, v in self.terms.items()}, check=False)

    def __rmul__(self, c) -> "KForm":
        return self.scale(c)

    def __xor__(self, other: "KForm") -> "KForm":
        return wedge(self, other)

    def __repr__(self) -> str:
        return f"KForm(n={self.n}, k={self.k}, {self})"

    def __str__(self) -> str:
        return format_form(self)


def wedge(x: KForm, y: KForm) -> KForm:
    """Exterior product of homogeneous forms."""
    x._compatible(y)
    F = x.field
    out: dict = {}
    for S, a in x.terms.items():
        for T, b in y.terms.items():
            sign, U = merge_sign(S, T)
            if not sign:
                continue
            c = F.mul(a, b)
            if sign < 0:
                c = F.neg(c)
            v = F.add(out.get(U, F.zero), c)
            if v != 0:
                out[U] = v
            else:
                out.pop(U, None)
    return KForm(F, x.n, x.k + y.k, out, check=False)


def _key(S: Monomial) -> tuple:
    return S[::-1]


def format_form(x: KForm) -> str:
    if not x.terms:
        return "0"
    F = x.field
    parts = []
    for S in sorted(x.terms, key=_key):
        cs = F.format(x.terms[S])
        neg = cs.startswith("-")
        if neg:
            cs = cs[1:]
        mono = "e{" + ",".join(map(str, S)) + "}"
        body = mono if cs == "1" else f"{cs}*{mono}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


_TERM_RE = re.compile(r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*\s*)?e\{\s*([\d\s,]*)\}\s*")


class FormSyntaxError(ValueError):
    """Malformed form text; ``column`` is 1-based."""

    def __init__(self, message: str, column: int) -> None:
        super().__init__(f"column {column}: {message}")
        self.column = column


def parse_form(field: Field, n: int, text: str, k: int | None = None) -> KForm:
    """Parse ``[coeff*]e{i,j,...}`` terms joined by ``+``/``-``; ``0`` is the zero form."""
    stripped = text.strip()
    if stripped == "0":
        if k is None:
            raise FormSyntaxError("degree of the zero form is unknown", 1)
        return KForm(field, n, k)
    pos = 0
    terms: dict = {}
    deg = k
    first = True
    while pos < len(text):
        if not text[pos:].strip():
            break
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos:
            raise FormSyntaxError(f"expected a term like 3*e{{1,2}} near {text[pos:pos + 12]!r}", pos + 1)
        sign, coeff, idx = m.groups()
        if sign is None and not first:
            raise FormSyntaxError("missing '+' or '-' between terms", pos + 1)
        first = False
        try:
            S = tuple(int(tok) for tok in idx.replace(" ", "").split(",") if tok)
            _check_monomial(S, n)
        except ValueError as exc:
            raise FormSyntaxError(str(exc), m.start(3) + 1) from None
        if deg is None:
            deg = len(S)
        elif len(S) != deg:
            raise FormSyntaxError(f"term of degree {len(S)} in a form of degree {deg}", m.start(3) + 1)
        try:
            c = field.parse(coeff) if coeff else field.one
        except (ValueError, ZeroDivisionError) as exc:
            raise FormSyntaxError(str(exc), m.start(2) + 1) from None
        if sign == "-":
            c = field.neg(c)
        terms[S] = field.add(terms.get(S, field.zero), c)
        pos = m.end()
    if deg is None:
        raise FormSyntaxError("empty form", 1)
    return KForm(field, n, deg, terms, check=False)


class Operator:
    """Linear operator on ``F^n``; ``rows[r][c]`` is the coefficient of ``e_{r+1}`` in ``M e_{c+1}``."""

    __slots__ = ("field", "n", "rows")

    def __init__(self, field: Field, rows: Sequence[Sequence]) -> None:
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("operator matrix must be square")
        self.field = field
        self.n = n
        self.rows = tuple(tuple(field(v) for v in r) for r in rows)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Operator":
        return cls(field, [[1 if r == c else 0 for c in range(n)] for r in range(n)])

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence]) -> "Operator":
        n = len(columns)
        return cls(field, [[columns[c][r] for c in range(n)] for r in range(n)])

    @classmethod
    def from_images(cls, field: Field, images: Sequence[KForm]) -> "Operator":
        """Operator sending ``e_h`` to ``images[h-1]`` (1-forms)."""
        return cls.from_columns(field, [v.one_form_coeffs() for v in images])

    def column(self, c: int) -> list:
        """Image of ``e_{c+1}`` as a coefficient list."""
        return [self.rows[r][c] for r in range(self.n)]

    def image(self, h: int) -> KForm:
        return KForm.one_form(self.field, self.column(h - 1))

    def inverse(self) -> "Operator":
        return Operator(self.field, linalg.inverse(self.field, self.rows))

    def is_invertible(self) -> bool:
        return linalg.rank(self.field, self.rows) == self.n

    def __matmul__(self, other: "Operator") -> "Operator":
        F = self.field
        n = self.n
        out = []
        for r in range(n):
            row = []
            for c in range(n):
                acc = F.zero
                for m in range(n):
                    acc = F.add(acc, F.mul(self.rows[r][m], other.rows[m][c]))
                row.append(acc)
            out.append(row)
        return Operator(F, out)

    def __eq__(self, other) -> bool:
        return isinstance(other, Operator) and self.rows == other.rows and self.field == other.field

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"Operator({[list(map(self.field.format, r)) for r in self.rows]})"


def _monomial_images(M: Operator, k: int) -> dict[Monomial, KForm]:
    """Images of all degree-``k`` monomials, built from shared prefixes."""
    cols = [M.image(h) for h in range(1, M.n + 1)]
    cache: dict[Monomial, KForm] = {(): KForm(M.field, M.n, 0, {(): M.field.one}, check=False)}

    def img(S: Monomial) -> KForm:
        got = cache.get(S)
        if got is None:
            got = wedge(img(S[:-1]), cols[S[-1] - 1])
            cache[S] = got
        return got

    return {S: img(S) for S in monomials(M.n, k)}


def apply_operator(M: Operator, x: KForm) -> KForm:
    """Action of ``M`` on ``x`` through ``e_S -> M e_{s1} ^ ... ^ M e_{sk}``."""
    if M.n != x.n:
        raise ValueError(f"operator on F^{M.n} applied to a form on F^{x.n}")
    F = x.field
    cols = [M.image(h) for h in range(1, M.n + 1)]
    acc = KForm(F, x.n, x.k)
    prefix_cache: dict = {}
    for S, c in x.terms.items():
        img = prefix_cache.get(S)
        if img is None:
            img = KForm(F, x.n, 0, {(): F.one}, check=False)
            for s in S:
                img = wedge(img, cols[s - 1])
            prefix_cache[S] = img
        acc = acc + img.scale(c)
    if acc.is_zero():
        return KForm(F, x.n, x.k)
    return acc


def compound_rows(M: Operator, k: int) -> list[list]:
    """Dense images of the colex monomial basis under ``M`` (one row per monomial)."""
    return [img.to_dense() if not img.is_zero() else [M.field.zero] * len(monomials(M.n, k))
            for img in _monomial_images(M, k).values()]


def divide_by_one_form(v: KForm, x: KForm) -> KForm | None:
    """Some ``x'`` with ``x = v ^ x'``, or ``None`` when ``v ^ x != 0``.

    A change of basis sends ``v`` to ``e_1``; there the quotient is read off
    monomially and mapped back.
    """
    if v.k != 1:
        raise ValueError("divisor must be a 1-form")
    if v.is_zero():
        raise ValueError("cannot divide by zero form")
    F = x.field
    if x.is_zero():
        return KForm(F, x.n, max(x.k - 1, 0))
    if not wedge(v, x).is_zero():
        return None
    P = complete_basis(F, [v.one_form_coeffs()])
    y = apply_operator(P.inverse(), x)
    quot = {}
    for S, c in y.terms.items():
        # v ^ x = 0 forces every monomial to contain index 1 in the new frame
        assert S[0] == 1, "division invariant violated"
        quot[S[1:]] = c
    return apply_operator(P, KForm(F, x.n, x.k - 1, quot, check=False))


def complete_basis(F: Field, vectors: Sequence[Sequence]) -> Operator:
    """Columns: ``vectors`` followed by the standard vectors ``e_h`` (increasing
    ``h``) that keep the family independent."""
    if not vectors:
        raise ValueError("need at least one vector")
    n = len(vectors[0])
    cols = [list(F(c) for c in v) for v in vectors]
    if linalg.rank(F, cols) < len(cols):
        raise ValueError("vectors to complete are dependent")
    for h in range(n):
        if len(cols) == n:
            break
        e = [F.zero] * n
        e[h] = F.one
        if linalg.rank(F, cols + [e]) > len(cols):
            cols.append(e)
    return Operator.from_columns(F, cols)
