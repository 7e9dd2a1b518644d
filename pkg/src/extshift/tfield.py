"""Exact base fields and polynomials in a transcendental ``t``.

Field elements are plain Python values so that the linear-algebra kernels
stay cheap: :class:`gmpy2.mpq` for the rationals and ``int`` in ``[0, p)``
for a prime field.  A :class:`Field` object carries the arithmetic.

Vectors over ``F[t]`` (``TVector``) are ordinary mappings from basis keys to
:class:`TPoly`.  Only the ``t``-power content is ever divided out when taking
canonical projective representatives; a leftover common factor ``p(t)`` with
``p(0) != 0`` only rescales the value at ``t = 0``.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

import gmpy2
from gmpy2 import mpq

__all__ = [
    "Field",
    "Rationals",
    "PrimeField",
    "QQ",
    "get_field",
    "TPoly",
    "t_valuation",
    "canonical_projective_rep",
    "eval_at_zero",
]

_P_MAX = 2**31


class Field:
    """Arithmetic for one exact field; elements are raw Python values."""

    name: str
    characteristic: int
    zero: object
    one: object

    def __repr__(self) -> str:
        return f"<Field {self.name}>"

    def __str__(self) -> str:
        return self.name

    # scalar ops -------------------------------------------------------
    def __call__(self, value) -> object:
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == 0

    # row ops used by the elimination kernels ---------------------------
    def axpy(self, y: list, a, x: list) -> list:
        """Return ``y - a*x`` elementwise."""
        raise NotImplementedError

    def scale(self, x: list, a) -> list:
        raise NotImplementedError

    # text ---------------------------------------------------------------
    def parse(self, text: str):
        """Parse an integer or ``p/q`` literal."""
        text = text.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            return self.div(self(int(num)), self(int(den)))
        return self(int(text))

    def format(self, a) -> str:
        return str(a)

    def random(self, rng, bound: int = 3):
        """A random element; over Q the numerator is drawn from ``[-bound, bound]``."""
        raise NotImplementedError

    @property
    def is_finite(self) -> bool:
        return self.characteristic != 0

    def elements(self) -> Iterator:
        raise ValueError(f"{self.name} is infinite")


class Rationals(Field):
    name = "Q"
    characteristic = 0

    def __init__(self) -> None:
        self.zero = mpq(0)
        self.one = mpq(1)

    def __eq__(self, other) -> bool:
        return isinstance(other, Rationals)

    def __hash__(self) -> int:
        return hash("Q")

    def __reduce__(self):
        return (get_field, ("Q",))

    def __call__(self, value):
        if isinstance(value, str):
            return self.parse(value)
        return mpq(value)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero in Q")
        return 1 / a

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in Q")
        return a / b

    def axpy(self, y, a, x):
        return [u - a * v for u, v in zip(y, x)]

    def scale(self, x, a):
        return [a * v for v in x]

    def parse(self, text: str):
        try:
            return mpq(text.strip())
        except ValueError as exc:
            raise ValueError(f"bad rational literal {text!r}") from exc

    def format(self, a) -> str:
        return str(mpq(a))

    def random(self, rng, bound: int = 3):
        return mpq(rng.randint(-bound, bound))


class PrimeField(Field):
    """GF(p) for a prime ``p < 2**31``."""

    def __init__(self, p: int) -> None:
        p = int(p)
        if p < 2 or p >= _P_MAX or not gmpy2.is_prime(p):
            raise ValueError(f"GF(p) needs a prime p < 2^31, got {p}")
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"
        self.zero = 0
        self.one = 1

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("GF", self.p))

    def __reduce__(self):
        return (get_field, (self.name,))

    def __call__(self, value):
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, int):
            return value % self.p
        value = mpq(value)
        return self.div(int(value.numerator) % self.p, int(value.denominator) % self.p)

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"division by zero in {self.name}")
        return pow(a, -1, self.p)

    def axpy(self, y, a, x):
        p = self.p
        return [(u - a * v) % p for u, v in zip(y, x)]

    def scale(self, x, a):
        p = self.p
        return [(a * v) % p for v in x]

    def random(self, rng, bound: int = 3):
        return rng.randrange(self.p)

    def elements(self) -> Iterator[int]:
        return iter(range(self.p))


QQ = Rationals()

_FIELD_RE = re.compile(r"^\s*GF\(\s*(\d+)\s*\)\s*$")


@lru_cache(maxsize=None)
def get_field(name: str) -> Field:
    """Field from its CLI name: ``Q`` or ``GF(p)``."""
    if name.strip() in ("Q", "QQ"):
        return QQ
    m = _FIELD_RE.match(name)
    if not m:
        raise ValueError(f"unknown field {name!r}; expected Q or GF(p)")
    return PrimeField(int(m.group(1)))


class TPoly:
    """Univariate polynomial in ``t`` over a :class:`Field` (immutable)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Iterable = ()) -> None:
        cs = [field(c) if not isinstance(c, type(field.zero)) else c for c in coeffs]
        if isinstance(field, PrimeField):
            cs = [c % field.p for c in cs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def _raw(cls, field: Field, coeffs: list) -> "TPoly":
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        obj = cls.__new__(cls)
        obj.field = field
        obj.coeffs = tuple(coeffs)
        return obj

    @classmethod
    def constant(cls, field: Field, c) -> "TPoly":
        return cls(field, [c])

    @classmethod
    def t(cls, field: Field, power: int = 1) -> "TPoly":
        return cls._raw(field, [field.zero] * power + [field.one])

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def valuation(self) -> int:
        """Largest ``m`` with ``t^m`` dividing self."""
        if not self.coeffs:
            raise ValueError("zero polynomial has no valuation")
        for m, c in enumerate(self.coeffs):
            if c != 0:
                return m
        raise AssertionError("unreachable")

    def constant_term(self):
        return self.coeffs[0] if self.coeffs else self.field.zero

    def shift_down(self, m: int) -> "TPoly":
        """Divide by ``t^m``; the low coefficients must vanish."""
        if any(c != 0 for c in self.coeffs[:m]):
            raise ValueError(f"t^{m} does not divide {self}")
        return TPoly._raw(self.field, list(self.coeffs[m:]))

    def __eq__(self, other) -> bool:
        if isinstance(other, TPoly):
            return self.field == other.field and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "TPoly") -> "TPoly":
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for d, c in enumerate(b):
            out[d] = F.add(out[d], c)
        return TPoly._raw(F, out)

    def __neg__(self) -> "TPoly":
        F = self.field
        return TPoly._raw(F, [F.neg(c) for c in self.coeffs])

    def __sub__(self, other: "TPoly") -> "TPoly":
        return self + (-other)

    def __mul__(self, other) -> "TPoly":
        F = self.field
        if not isinstance(other, TPoly):
            c = F(other) if not isinstance(other, type(F.zero)) else other
            return TPoly._raw(F, [F.mul(c, a) for a in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return TPoly._raw(F, [])
        out = [F.zero] * (len(a) + len(b) - 1)
        for d1, c1 in enumerate(a):
            if c1 == 0:
                continue
            for d2, c2 in enumerate(b):
                out[d1 + d2] = F.add(out[d1 + d2], F.mul(c1, c2))
        return TPoly._raw(F, out)

    __rmul__ = __mul__

    def divmod(self, other: "TPoly") -> tuple["TPoly", "TPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return TPoly._raw(F, []), self
        quo = [F.zero] * (dq + 1)
        lead_inv = F.inv(other.coeffs[-1])
        for d in range(dq, -1, -1):
            c = F.mul(rem[d + len(other.coeffs) - 1], lead_inv)
            quo[d] = c
            if c != 0:
                for e, b in enumerate(other.coeffs):
                    rem[d + e] = F.sub(rem[d + e], F.mul(c, b))
        return TPoly._raw(F, quo), TPoly._raw(F, rem[: len(other.coeffs) - 1])

    def __call__(self, x):
        F = self.field
        acc = F.zero
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def __repr__(self) -> str:
        return f"TPoly({self})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        F = self.field
        parts = []
        for d in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[d]
            if c == 0:
                continue
            mono = "" if d == 0 else ("t" if d == 1 else f"t^{d}")
            cs = F.format(c)
            neg = cs.startswith("-")
            if neg:
                cs = cs[1:]
            if mono and cs == "1":
                body = mono
            elif mono:
                body = f"{cs}*{mono}"
            else:
                body = cs
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("-" if neg else "+") + body)
        return "".join(parts)

    @classmethod
    def parse(cls, field: Field, text: str) -> "TPoly":
        """Parse e.g. ``t^2-3*t+1/2``; no embedded whitespace is required."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty polynomial")
        terms = re.findall(r"[+-]?[^+-]+", s)
        if "".join(terms) != s:
            raise ValueError(f"bad polynomial {text!r}")
        acc = cls._raw(field, [])
        for term in terms:
            sign = -1 if term.startswith("-") else 1
            body = term.lstrip("+-")
            m = re.fullmatch(r"(?:(\d+(?:/\d+)?)\*?)?(t(?:\^(\d+))?)?", body)
            if not m or (m.group(1) is None and m.group(2) is None):
                raise ValueError(f"bad polynomial term {term!r} in {text!r}")
            coeff = field.parse(m.group(1)) if m.group(1) else field.one
            power = 0
            if m.group(2):
                power = int(m.group(3)) if m.group(3) else 1
            if sign < 0:
                coeff = field.neg(coeff)
            acc = acc + cls._raw(field, [field.zero] * power + [coeff])
        return acc


# --- TVector helpers: mappings key -> TPoly -------------------------------


def t_valuation(v: Mapping[object, TPoly]) -> int:
    """Largest ``m`` such that ``t^m`` divides every entry of ``v``."""
    vals = [p.valuation() for p in v.values() if not p.is_zero()]
    if not vals:
        raise ValueError("zero vector has no valuation")
    return min(vals)


def canonical_projective_rep(v: Mapping[object, TPoly]) -> dict:
    """Divide ``v`` by its ``t``-power content."""
    m = t_valuation(v)
    return {key: p.shift_down(m) for key, p in v.items() if not p.is_zero()}


def eval_at_zero(v: Mapping[object, TPoly]) -> dict:
    """Constant terms of the entries; zero entries are dropped."""
    out = {}
    for key, p in v.items():
        c = p.constant_term()
        if c != 0:
            out[key] = c
    return out
