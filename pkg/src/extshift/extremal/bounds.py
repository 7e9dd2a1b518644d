"""Closed-form extremal bounds and arithmetic inequality records."""

from __future__ import annotations

from math import comb

__all__ = ["ekr_bound", "hm_bound", "cross_bound", "binom", "value", "inequality", "check_inequality",
           "evaluate_terms"]


def _check_range(n: int, k: int) -> None:
    if not (1 <= k and 2 * k <= n):
        raise ValueError(f"need 1 <= k <= n/2, got n={n}, k={k}")


def ekr_bound(n: int, k: int) -> int:
    """Largest intersecting family of ``k``-sets: ``C(n-1, k-1)``."""
    _check_range(n, k)
    return comb(n - 1, k - 1)


def hm_bound(n: int, k: int) -> int:
    """Largest nontrivial intersecting family: ``C(n-1, k-1) - C(n-k-1, k-1) + 1``."""
    _check_range(n, k)
    return comb(n - 1, k - 1) - comb(n - k - 1, k - 1) + 1


def cross_bound(n: int, k: int) -> int:
    """Largest ``|F| + |G|`` for nonempty cross-intersecting families: ``C(n, k) - C(n-k, k) + 1``."""
    _check_range(n, k)
    return comb(n, k) - comb(n - k, k) + 1


# Inequality records are plain JSON: each side is a list of terms
#   {"coef": c, "binom": [a, b]}   meaning c * C(a, b)
#   {"coef": c, "value": v, "what": "..."}   meaning c * v
# and the relation is "<=" or "=".

def binom(a: int, b: int, coef: int = 1) -> dict:
    return {"coef": coef, "binom": [a, b]}


def value(v: int, what: str, coef: int = 1) -> dict:
    return {"coef": coef, "value": v, "what": what}


def evaluate_terms(terms: list[dict]) -> int:
    total = 0
    for t in terms:
        c = int(t["coef"])
        if "binom" in t:
            a, b = (int(x) for x in t["binom"])
            total += c * (comb(a, b) if 0 <= b <= a else 0)
        elif "value" in t:
            total += c * int(t["value"])
        else:
            raise ValueError(f"malformed inequality term {t!r}")
    return total


def inequality(label: str, lhs: list[dict], relation: str, rhs: list[dict]) -> dict:
    rec = {"label": label, "lhs": lhs, "relation": relation, "rhs": rhs}
    rec["holds"] = check_inequality(rec)
    return rec


def check_inequality(rec: dict) -> bool:
    lhs = evaluate_terms(rec["lhs"])
    rhs = evaluate_terms(rec["rhs"])
    rel = rec["relation"]
    if rel == "<=":
        return lhs <= rhs
    if rel == "=":
        return lhs == rhs
    raise ValueError(f"unknown relation {rel!r}")
