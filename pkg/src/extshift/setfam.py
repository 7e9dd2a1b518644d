"""Uniform set families: combinatorial shifting and extremal searches."""

from __future__ import annotations

from math import comb
from typing import Iterable, Sequence

from .exterior import monomials

__all__ = [
    "SetFamily",
    "comb_shift",
    "is_shifted",
    "shift_until_shifted",
    "is_intersecting",
    "is_nontrivial",
    "are_cross_intersecting",
    "max_intersecting_search",
    "hm_extremal_family",
    "BudgetExceeded",
    "parse_family",
]


class BudgetExceeded(ValueError):
    pass


class SetFamily:
    """Distinct ``k``-subsets of ``[n]``, stored as sorted tuples."""

    __slots__ = ("n", "k", "sets")

    def __init__(self, n: int, k: int, sets: Iterable[Sequence[int]] = ()) -> None:
        out = set()
        for s in sets:
            t = tuple(sorted(s))
            if len(t) != k or len(set(t)) != k:
                raise ValueError(f"set {tuple(s)} is not a {k}-subset")
            if t and (t[0] < 1 or t[-1] > n):
                raise ValueError(f"set {t} not inside [1, {n}]")
            if t in out:
                raise ValueError(f"duplicate set {t}")
            out.add(t)
        self.n = n
        self.k = k
        self.sets = frozenset(out)

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self):
        return iter(sorted(self.sets, key=lambda s: s[::-1]))

    def __contains__(self, s) -> bool:
        return tuple(sorted(s)) in self.sets

    def __eq__(self, other) -> bool:
        if not isinstance(other, SetFamily):
            return NotImplemented
        return (self.n, self.k, self.sets) == (other.n, other.k, other.sets)

    def __hash__(self) -> int:
        return hash((self.n, self.k, self.sets))

    def __repr__(self) -> str:
        return f"SetFamily(n={self.n}, k={self.k}, {[set(s) for s in self]})"

    def to_text(self) -> str:
        lines = [f"n {self.n}", f"k {self.k}"] + [",".join(map(str, s)) for s in self]
        return "\n".join(lines) + "\n"

    def to_list(self) -> list[list[int]]:
        return [list(s) for s in self]


def parse_family(text: str) -> SetFamily:
    """Read the ``n``/``k`` header plus one comma-separated set per line."""
    n = k = None
    sets = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split()
        try:
            if head[0] == "n" and len(head) == 2:
                n = int(head[1])
            elif head[0] == "k" and len(head) == 2:
                k = int(head[1])
            else:
                sets.append(tuple(int(tok) for tok in line.split(",")))
        except ValueError:
            raise ValueError(f"line {lineno}: cannot parse {raw.strip()!r}") from None
    if n is None or k is None:
        raise ValueError("family file needs 'n <int>' and 'k <int>' header lines")
    return SetFamily(n, k, sets)


def comb_shift(F: SetFamily, j: int, i: int) -> SetFamily:
    """Replace ``j`` by ``i`` in each member unless the result is already present."""
    if not i < j:
        raise ValueError(f"combinatorial shift needs i < j, got j={j}, i={i}")
    if not (1 <= i and j <= F.n):
        raise ValueError(f"indices out of range [1, {F.n}]")
    out = []
    for s in F.sets:
        if j in s and i not in s:
            t = tuple(sorted((set(s) - {j}) | {i}))
            out.append(s if t in F.sets else t)
        else:
            out.append(s)
    return SetFamily(F.n, F.k, out)


def is_shifted(F: SetFamily, I: Iterable[int] | None = None) -> bool:
    idx = sorted(range(1, F.n + 1) if I is None else set(I))
    return all(comb_shift(F, j, i) == F for a, i in enumerate(idx) for j in idx[a + 1:])


def shift_until_shifted(F: SetFamily, I: Iterable[int] | None = None) -> tuple[SetFamily, list[tuple[int, int]]]:
    """Apply the lexicographically last moving shift until none moves.

    Each moving shift strictly lowers the total of all elements, which bounds
    the number of rounds.
    """
    idx = sorted(range(1, F.n + 1) if I is None else set(I))
    pairs = [(j, i) for j in reversed(idx) for i in reversed(idx) if i < j]
    applied = []
    while True:
        for j, i in pairs:
            G = comb_shift(F, j, i)
            if G != F:
                F = G
                applied.append((j, i))
                break
        else:
            return F, applied


def is_intersecting(F: SetFamily) -> bool:
    sets = list(F.sets)
    return all(set(a) & set(b) for x, a in enumerate(sets) for b in sets[x + 1:])


def is_nontrivial(F: SetFamily) -> bool:
    """The members have empty common intersection (false for the empty family)."""
    if not F.sets:
        return False
    common = set(range(1, F.n + 1))
    for s in F.sets:
        common &= set(s)
    return not common


def are_cross_intersecting(F: SetFamily, G: SetFamily) -> bool:
    return all(set(a) & set(b) for a in F.sets for b in G.sets)


def hm_extremal_family(n: int, k: int) -> SetFamily:
    """All ``k``-sets through 1 meeting ``{2..k+1}``, plus ``{2..k+1}`` itself."""
    if not (2 <= k and 2 * k <= n):
        raise ValueError(f"need 2 <= k <= n/2, got n={n}, k={k}")
    block = set(range(2, k + 2))
    sets = [S for S in monomials(n, k) if 1 in S and block & set(S)]
    sets.append(tuple(sorted(block)))
    return SetFamily(n, k, sets)


def _mask(S: Sequence[int]) -> int:
    m = 0
    for s in S:
        m |= 1 << s
    return m


def max_intersecting_search(n: int, k: int, require_nontrivial: bool = False,
                            budget: int = 25, jobs: int = 1) -> tuple[int, SetFamily]:
    """Exact maximum size of an intersecting family of ``k``-subsets of ``[n]``.

    Branch and bound over candidates in colex order; the bound is the current
    size plus the number of still-compatible candidates.  By symmetry the
    colex-first set ``{1..k}`` may be assumed present.  With
    ``require_nontrivial`` a branch is cut as soon as some element of the
    running intersection is contained in every remaining candidate.

    Returns the size and *a* maximizing family.
    """
    if not (1 <= k and 2 * k <= n):
        raise ValueError(f"need 1 <= k <= n/2, got n={n}, k={k}")
    total = comb(n, k)
    if total > budget:
        raise BudgetExceeded(f"C({n},{k}) = {total} candidates exceeds the budget {budget}; "
                             f"lower n or k or raise the budget")
    cands = list(monomials(n, k))
    masks = [_mask(S) for S in cands]
    N = len(cands)
    compat = [0] * N
    for a in range(N):
        for b in range(N):
            if a != b and masks[a] & masks[b]:
                compat[a] |= 1 << b
    # contains[x]: bitmask of candidates containing element x
    contains = {x: sum(1 << c for c in range(N) if masks[c] >> x & 1) for x in range(1, n + 1)}

    if jobs > 1:
        from .parallel import parallel_branch_max
        branches = [-1] + list(range(1, N))
        best, witness = parallel_branch_max(_family_branch, (n, k, require_nontrivial), branches, jobs)
        return best, SetFamily(n, k, [cands[c] for c in witness or []])

    state = _FamilySearch(masks, compat, contains, n, require_nontrivial)
    first = 0
    state.expand([first], compat[first] & ~((1 << (first + 1)) - 1), masks[first])
    return state.best, SetFamily(n, k, [cands[c] for c in state.witness])


class _FamilySearch:
    def __init__(self, masks, compat, contains, n, nontrivial, best: int = 0):
        self.masks = masks
        self.compat = compat
        self.contains = contains
        self.n = n
        self.nontrivial = nontrivial
        self.best = best
        self.witness: list[int] = []

    def _feasible(self, common: int, cand: int) -> bool:
        x = common
        while x:
            low = x & -x
            elem = low.bit_length() - 1
            # every remaining candidate contains elem: the final family would too
            if cand & ~self.contains[elem] == 0:
                return False
            x ^= low
        return True

    def expand(self, chosen: list[int], cand: int, common: int) -> None:
        size = len(chosen)
        if (not self.nontrivial or common == 0) and size > self.best:
            self.best = size
            self.witness = list(chosen)
        if size + bin(cand).count("1") <= self.best:
            return
        if self.nontrivial and common and not self._feasible(common, cand):
            return
        while cand:
            if size + bin(cand).count("1") <= self.best:
                return
            low = cand & -cand
            c = low.bit_length() - 1
            cand ^= low
            chosen.append(c)
            self.expand(chosen, cand & self.compat[c], common & self.masks[c])
            chosen.pop()
            if self.nontrivial and common and not self._feasible(common, cand):
                return


def _family_branch(n: int, k: int, nontrivial: bool, second: int, shared_best) -> tuple[int, list[int]]:
    """Subtree of the family search whose second chosen candidate is ``second``."""
    cands = list(monomials(n, k))
    masks = [_mask(S) for S in cands]
    N = len(cands)
    compat = [0] * N
    for a in range(N):
        for b in range(N):
            if a != b and masks[a] & masks[b]:
                compat[a] |= 1 << b
    contains = {x: sum(1 << c for c in range(N) if masks[c] >> x & 1) for x in range(1, n + 1)}
    state = _SharedFamilySearch(masks, compat, contains, n, nontrivial, shared_best)
    if second == -1:
        # the singleton branch {first}
        if not nontrivial or masks[0] == 0:
            state.record([0])
        return state.best, state.witness
    if not compat[0] >> second & 1:
        return 0, []
    cand = compat[0] & compat[second] & ~((1 << (second + 1)) - 1)
    state.expand([0, second], cand, masks[0] & masks[second])
    return state.best, state.witness


class _SharedFamilySearch(_FamilySearch):
    def __init__(self, masks, compat, contains, n, nontrivial, shared_best):
        super().__init__(masks, compat, contains, n, nontrivial, best=0)
        self.shared = shared_best

    def record(self, chosen):
        self.best = len(chosen)
        self.witness = list(chosen)
        with self.shared.get_lock():
            if self.shared.value < self.best:
                self.shared.value = self.best

    def expand(self, chosen, cand, common):
        size = len(chosen)
        if (not self.nontrivial or common == 0) and size > self.best:
            self.record(chosen)
        bound = max(self.best, self.shared.value)
        # ties with the shared best are still explored so this worker keeps a witness
        if size + bin(cand).count("1") < bound or size + bin(cand).count("1") <= self.best:
            return
        if self.nontrivial and common and not self._feasible(common, cand):
            return
        while cand:
            bound = max(self.best, self.shared.value)
            if size + bin(cand).count("1") < bound or size + bin(cand).count("1") <= self.best:
                return
            low = cand & -cand
            c = low.bit_length() - 1
            cand ^= low
            chosen.append(c)
            self.expand(chosen, cand & self.compat[c], common & self.masks[c])
            chosen.pop()
            if self.nontrivial and common and not self._feasible(common, cand):
                return
