"""Joint slow shifting of cross-annihilating pairs down to monomial pairs."""

from __future__ import annotations

from ..setfam import are_cross_intersecting, is_shifted
from ..shifting import ShiftLog, ShiftStep, slow_shift
from ..subspace import Subspace, has_monomial_basis, is_cross_annihilating
from .bounds import cross_bound

__all__ = ["reduce_pair_to_monomial", "verify_cross"]


def reduce_pair_to_monomial(K: Subspace, L: Subspace) -> tuple[Subspace, Subspace, ShiftLog]:
    """Shift ``K`` and ``L`` by the same operators until both are stable over ``[n]``.

    The pair ``(j, i)`` taken at each round is the lexicographically last one
    moving at least one of the two spaces.  Limits preserve cross-annihilation
    and dimension, and stable spaces are monomial, so the outputs are a
    monomial cross-annihilating pair of the input dimensions.
    """
    if (K.field, K.n, K.k) != (L.field, L.n, L.k):
        raise ValueError("K and L must live in the same space")
    if K.dim == 0 or L.dim == 0:
        raise ValueError("K and L must both be nonzero")
    if not is_cross_annihilating(K, L):
        raise ValueError("K and L are not cross-annihilating")
    n = K.n
    log = ShiftLog(indices=list(range(1, n + 1)), strategy="lex-last")
    pairs = [(j, i) for j in range(n, 0, -1) for i in range(j - 1, 0, -1)]
    while True:
        for j, i in pairs:
            K2 = slow_shift(K, j, i)
            L2 = slow_shift(L, j, i)
            if K2 != K or L2 != L:
                log.steps.append(ShiftStep("N", j, i, False, K.dim + L.dim, K2.dim + L2.dim))
                K, L = K2, L2
                break
        else:
            log.stable = True
            return K, L, log


def verify_cross(K: Subspace, L: Subspace) -> dict:
    """Reduce a cross-annihilating pair and check the set-level bound on the result.

    Returns a JSON-ready report; ``verified`` is true when every check passes.
    """
    checks: dict[str, bool] = {}
    out: dict = {"dim_K": K.dim, "dim_L": L.dim}
    checks["cross_annihilating"] = is_cross_annihilating(K, L)
    checks["nonzero"] = K.dim > 0 and L.dim > 0
    if not all(checks.values()):
        out["checks"] = checks
        out["verified"] = False
        return out
    K2, L2, log = reduce_pair_to_monomial(K, L)
    okK, famK = has_monomial_basis(K2)
    okL, famL = has_monomial_basis(L2)
    checks["monomial"] = okK and okL
    checks["dims_preserved"] = (K2.dim, L2.dim) == (K.dim, L.dim)
    checks["still_cross_annihilating"] = is_cross_annihilating(K2, L2)
    if okK and okL:
        checks["families_cross_intersecting"] = are_cross_intersecting(famK, famL)
        checks["families_shifted"] = is_shifted(famK) and is_shifted(famL)
        out["family_K"] = famK.to_list()
        out["family_L"] = famL.to_list()
    n, k = K.n, K.k
    if 1 <= k and 2 * k <= n:
        out["bound"] = cross_bound(n, k)
        checks["within_bound"] = K.dim + L.dim <= out["bound"]
    out["log"] = log.to_dict()
    out["checks"] = checks
    out["verified"] = all(checks.values())
    return out

