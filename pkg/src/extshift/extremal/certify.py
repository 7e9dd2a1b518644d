"""Certificate-producing bound check for nontrivially self-annihilating subspaces.

:func:`certify_hm` runs the reduction as an algorithm and writes down every
step needed to re-derive it:

1. Slow shift in the standard frame over ``[n]`` until the space is stable
   (then it is monomial and the set-level bound applies) or a shift would
   make it annihilated by a 1-form ``l``.
2. In the second case ``l`` and ``e_j - e_i`` are independent and their
   product kills the pre-shift space.  Change to a frame starting with them,
   add ``f1 ^ f2 ^ (k-2 forms)`` and slow shift over ``{3..n}``.
3. Either the space stabilizes, or a shift at ``(j, i)`` would create an
   annihilator ``l'`` in ``span{f1, f2}``, in which case
   ``l' ^ (f_j - f_i) ^ (k-2 forms)`` is added.  Both end in the same split
   ``L = A + f ^ B' + (f x + g y)`` with ``B'`` and ``C'`` cross-annihilating
   in ``n - 2`` variables, and the cross bound plus Pascal's rule finish.

All subspaces are recorded as echelon bases of exact forms so that
:mod:`extshift.extremal.replay` can check a certificate on its own.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from math import comb

from ..exterior import KForm, Operator, complete_basis, format_form, monomials, parse_form, wedge
from ..setfam import are_cross_intersecting, is_intersecting, is_nontrivial as family_nontrivial, is_shifted
from ..shifting import decompose_stable, stabilize, stable_structure
from ..subspace import (Subspace, annihilator_one_forms, change_basis, colon_by_one_form, from_generators,
                        has_monomial_basis, is_cross_annihilating, is_self_annihilating)
from ..tfield import Field
from .. import linalg
from .bounds import binom, check_inequality, ekr_bound, hm_bound, inequality, value
from .pairs import reduce_pair_to_monomial

__all__ = ["Certificate", "certify_hm", "subspace_record", "subspace_from_record", "operator_record",
           "operator_from_record", "STABLE_MONOMIAL", "STABLE_2FORM", "ANNIHILATOR_CASCADE"]

STABLE_MONOMIAL = "STABLE_MONOMIAL"
STABLE_2FORM = "STABLE_2FORM"
ANNIHILATOR_CASCADE = "ANNIHILATOR_CASCADE"

CHAR2_FLAG = ("characteristic 2: the reduction is carried out verbatim; over GF(2) every "
              "even-degree form squares to zero, which the checks treat like any other field")


# -- record helpers ---------------------------------------------------------

def subspace_record(L: Subspace) -> dict:
    return {"n": L.n, "k": L.k, "dim": L.dim, "basis": [format_form(b) for b in L.basis()]}


def subspace_from_record(F: Field, rec: dict) -> Subspace:
    n, k = int(rec["n"]), int(rec["k"])
    forms = [parse_form(F, n, text, k) for text in rec["basis"]]
    L = from_generators(F, n, k, forms)
    if L.dim != int(rec["dim"]):
        raise ValueError(f"recorded basis spans dimension {L.dim}, not {rec['dim']}")
    return L


def operator_record(P: Operator) -> list[list[str]]:
    return [[P.field.format(v) for v in row] for row in P.rows]


def operator_from_record(F: Field, rows: list[list[str]]) -> Operator:
    return Operator(F, [[F.parse(v) for v in row] for row in rows])


def two_form_part(F: Field, n: int, k: int) -> Subspace:
    """``e1 ^ e2 ^ (k-2 forms)`` as a coordinate subspace."""
    return Subspace.from_monomials(F, n, k, [S for S in monomials(n, k) if S[:2] == (1, 2)])


# -- certificate ------------------------------------------------------------

@dataclass
class Certificate:
    n: int
    k: int
    field: str
    input: dict
    claimed_bound: int
    phases: list[dict] = dc_field(default_factory=list)
    inequalities: list[dict] = dc_field(default_factory=list)
    case: str | None = None
    flags: list[str] = dc_field(default_factory=list)
    verified: bool = False
    failure: str | None = None

    @property
    def input_dim(self) -> int:
        return int(self.input["dim"])

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "field": self.field, "input_dim": self.input_dim,
                "input": self.input, "claimed_bound": self.claimed_bound, "case": self.case,
                "phases": self.phases, "inequalities": self.inequalities, "flags": self.flags,
                "verified": self.verified, "failure": self.failure}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "Certificate":
        """Load a certificate, re-checking every recorded inequality."""
        for rec in data.get("inequalities", []):
            holds = check_inequality(rec)
            if holds != bool(rec.get("holds", holds)):
                raise ValueError(f"inequality {rec.get('label')!r} is recorded as holds={rec.get('holds')} "
                                 f"but evaluates to {holds}")
        cert = cls(n=int(data["n"]), k=int(data["k"]), field=str(data["field"]), input=data["input"],
                   claimed_bound=int(data["claimed_bound"]), phases=list(data.get("phases", [])),
                   inequalities=list(data.get("inequalities", [])), case=data.get("case"),
                   flags=list(data.get("flags", [])), verified=bool(data.get("verified")),
                   failure=data.get("failure"))
        if cert.verified and not all(check_inequality(r) for r in cert.inequalities):
            raise ValueError("certificate claims verified but one of its inequalities fails")
        return cert

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        return cls.from_dict(json.loads(text))


class CheckFailed(Exception):
    """A named hypothesis of the current phase does not hold."""


def _require(cond: bool, name: str) -> None:
    if not cond:
        raise CheckFailed(name)


def _unit(F: Field, n: int, h: int) -> KForm:
    return KForm.monomial(F, n, (h,))


def _kills(v: KForm, L: Subspace) -> bool:
    return all(wedge(v, b).is_zero() for b in L.basis())


def _trigger_record(step) -> dict | None:
    if step is None:
        return None
    return {"j": step.j, "i": step.i, "annihilator": format_form(step.annihilator)}


# -- pipeline ---------------------------------------------------------------

def certify_hm(L: Subspace) -> Certificate:
    """Run the reduction on ``L`` and return a replayable certificate.

    Failed hypotheses never raise: the certificate comes back with
    ``verified = False`` and ``failure`` naming the check.
    """
    F, n, k = L.field, L.n, L.k
    try:
        bound = hm_bound(n, k)
    except ValueError:
        bound = 0
    cert = Certificate(n=n, k=k, field=str(F), input=subspace_record(L), claimed_bound=bound)
    if F.characteristic == 2:
        cert.flags.append(CHAR2_FLAG)
    try:
        _require(k >= 2 and 2 * k <= n, "2 <= k <= n/2")
        _require(L.dim > 0, "input is nonzero")
        _require(is_self_annihilating(L), "input is self-annihilating")
        _require(annihilator_one_forms(L).dim == 0, "input is not annihilated by a 1-form")
        _run(cert, L)
        cert.verified = all(r["holds"] for r in cert.inequalities) and not cert.failure
        if not cert.verified and cert.failure is None:
            cert.failure = next(r["label"] for r in cert.inequalities if not r["holds"])
    except CheckFailed as exc:
        cert.verified = False
        cert.failure = str(exc)
    return cert


def _hm_terms(n: int, k: int) -> list[dict]:
    return [binom(n - 1, k - 1), binom(n - k - 1, k - 1, coef=-1), {"coef": 1, "value": 1, "what": "one"}]


def _run(cert: Certificate, L: Subspace) -> None:
    F, n, k = L.field, L.n, L.k
    # phase 1: standard frame
    S, log = stabilize(L, range(1, n + 1), "lex-last", stop_on_trivializing=True)
    _require(log.non_fixing <= log.bound, "lex-last uses at most |I|-1+C(|I|,2) non-fixing shifts")
    phase1 = {"name": "standard-frame", "indices": list(range(1, n + 1)),
              "steps": [[s.j, s.i] for s in log.steps], "result": subspace_record(S),
              "trigger": _trigger_record(log.trigger)}
    cert.phases.append(phase1)
    if log.trigger is None:
        ok, fam = has_monomial_basis(S)
        _require(ok, "stable subspace has a monomial basis")
        _require(is_intersecting(fam), "variable sets are intersecting")
        _require(family_nontrivial(fam), "variable sets have empty common intersection")
        _require(is_shifted(fam), "variable sets are shifted")
        phase1["family"] = fam.to_list()
        cert.case = STABLE_MONOMIAL
        cert.inequalities.append(inequality(
            "family size within the nontrivial intersecting bound",
            [value(len(fam), "|family|")], "<=", _hm_terms(n, k)))
        cert.inequalities.append(inequality(
            "dim L equals the family size", [value(L.dim, "dim L")], "=", [value(len(fam), "|family|")]))
        return

    # phase 2: frame starting with l, e_j - e_i
    trig = log.trigger
    ell, j, i = trig.annihilator, trig.j, trig.i
    f2 = _unit(F, n, j) - _unit(F, n, i)
    pre = S
    _require(_kills(wedge(ell, _unit(F, n, i) - _unit(F, n, j)), pre),
             "l ^ (e_i - e_j) annihilates the pre-shift subspace")
    _require(linalg.rank(F, [ell.one_form_coeffs(), f2.one_form_coeffs()]) == 2, "f1 and f2 are independent")
    P = complete_basis(F, [ell.one_form_coeffs(), f2.one_form_coeffs()])
    Lf = change_basis(pre, P.inverse())
    A = two_form_part(F, n, k)
    aug = Lf + A
    _require(is_self_annihilating(aug), "subspace plus f1 ^ f2 ^ (k-2 forms) is self-annihilating")
    phase2 = {"name": "two-form-frame", "f1": format_form(ell), "f2": format_form(f2),
              "frame": operator_record(P), "augmented": subspace_record(aug)}
    cert.phases.append(phase2)
    if annihilator_one_forms(aug).dim:
        # cannot happen: enlarging a space only shrinks its annihilator
        cert.flags.append("augmentation produced a 1-form annihilator")
        cert.inequalities.append(inequality(
            "augmented space is within the 1-form bound",
            [value(aug.dim, "dim augmented")], "<=", [binom(n - 1, k - 1)]))
        _require(hm_bound(n, k) == ekr_bound(n, k), "augmented subspace is not annihilated by a 1-form")
        return
    S2, log2 = stabilize(aug, range(3, n + 1), "lex-last", stop_on_trivializing=True)
    _require(log2.non_fixing <= log2.bound, "lex-last uses at most |I|-1+C(|I|,2) non-fixing shifts")
    phase2.update({"indices": list(range(3, n + 1)), "steps": [[s.j, s.i] for s in log2.steps],
                   "result": subspace_record(S2), "trigger": _trigger_record(log2.trigger)})
    e12 = KForm.monomial(F, n, (1, 2))
    _require(_kills(e12, S2), "f1 ^ f2 still annihilates the shifted subspace")
    _require(S2.contains_subspace(A), "shifted subspace still contains f1 ^ f2 ^ (k-2 forms)")

    if log2.trigger is None:
        cert.case = STABLE_2FORM
        _check_two_frame_shape(S2)
        f, g = _choose_split_pair(S2)
        _split(cert, L, S2, f, g, {"case": STABLE_2FORM})
        return

    # phase 3b: a second annihilator appears
    cert.case = ANNIHILATOR_CASCADE
    trig2 = log2.trigger
    ell2, j2, i2 = trig2.annihilator, trig2.j, trig2.i
    coeffs = ell2.one_form_coeffs()
    _require(all(c == 0 for c in coeffs[2:]), "second annihilator lies in span{f1, f2}")
    _require(_kills(wedge(ell2, _unit(F, n, i2) - _unit(F, n, j2)), S2),
             "l' ^ (f_i - f_j) annihilates the pre-shift subspace")
    a, b = coeffs[0], coeffs[1]
    if a != 0:
        g = KForm.one_form(F, [F.zero, F.inv(a)] + [F.zero] * (n - 2))
    else:
        g = KForm.one_form(F, [F.neg(F.inv(b)), F.zero] + [F.zero] * (n - 2))
    _require(wedge(ell2, g) == e12, "l' ^ g = f1 ^ f2")
    d = _unit(F, n, j2) - _unit(F, n, i2)
    lead = wedge(ell2, d)
    extra = [wedge(lead, KForm.monomial(F, n, T)) for T in monomials(n, k - 2)]
    aug2 = S2.add_forms(extra)
    _require(is_self_annihilating(aug2), "adding l' ^ (f_j - f_i) ^ (k-2 forms) keeps self-annihilation")
    _require(annihilator_one_forms(aug2).dim == 0, "cascade-augmented subspace is nontrivial")
    _split(cert, L, aug2, ell2, g, {"case": ANNIHILATOR_CASCADE, "ell": format_form(ell2), "pair": [j2, i2],
                                    "augmented": subspace_record(aug2)})


def _two_frame_factor(F: Field, z: KForm):
    """Write ``z`` minus its ``e1 ^ e2`` part as ``(a e1 + b e2) ^ y``; ``None`` if impossible."""
    rest = {S: c for S, c in z.terms.items() if S[:2] != (1, 2)}
    if not rest:
        return (F.zero, F.zero), None
    parts: dict[int, dict] = {1: {}, 2: {}}
    for S, c in rest.items():
        if S[0] not in (1, 2) or (len(S) > 1 and S[1] in (1, 2)):
            return None
        parts[S[0]][S[1:]] = c
    p, q = parts[1], parts[2]
    ref = p or q
    key = next(iter(ref))
    for part in (p, q):
        if part and set(part) != set(ref):
            return None
    lam = [F.div(p[key], ref[key]) if p else F.zero, F.div(q[key], ref[key]) if q else F.zero]
    for part, mult in ((p, lam[0]), (q, lam[1])):
        for T, c in part.items():
            if c != F.mul(mult, ref[T]):
                return None
    return tuple(lam), KForm(F, z.n, z.k - 1, ref, check=False)


def _check_two_frame_shape(S2: Subspace) -> None:
    F, n = S2.field, S2.n
    for x, T in stable_structure(S2, range(3, n + 1)):
        z = wedge(x, KForm.monomial(F, n, T))
        _require(_two_frame_factor(F, z) is not None,
                 "stable basis elements are f1 ^ f2 ^ x or (a f1 + b f2) ^ y")


def _kernel_dim(f: KForm, L: Subspace) -> int:
    """Dimension of ``{x in L : f ^ x = 0}``."""
    rows = [wedge(f, b).to_dense() for b in L.basis()]
    return L.dim - linalg.rank(L.field, rows)


def _complement(F: Field, n: int, f: KForm) -> KForm:
    a = f.one_form_coeffs()
    return _unit(F, n, 2) if a[0] != 0 else _unit(F, n, 1)


def _choose_split_pair(S2: Subspace) -> tuple[KForm, KForm]:
    """``f, g`` in ``span{e1, e2}`` with some element of ``S2`` killed by ``f`` but not by ``g``."""
    F, n, k = S2.field, S2.n, S2.k
    zeros = [F.zero] * (n - 2)
    if F.is_finite:
        cands = [[F.one, F.zero] + zeros] + [[c, F.one] + zeros for c in F.elements()]
    else:
        one, m1 = F.one, F.neg(F.one)
        cands = [[one, F.zero] + zeros, [F.zero, one] + zeros, [one, one] + zeros, [one, m1] + zeros]
    threshold = comb(n - 2, k - 2)
    for c in cands:
        f = KForm.one_form(F, c)
        if _kernel_dim(f, S2) > threshold:
            return f, _complement(F, n, f)
    for w, _K in decompose_stable(S2):
        if _kernel_dim(w, S2) > threshold:
            return w, _complement(F, n, w)
    raise CheckFailed("some f in span{f1, f2} kills an element of L outside f1 ^ f2 ^ (k-2 forms)")


def reindex_down(L: Subspace, shift: int = 2) -> Subspace:
    """Forms in ``e_{shift+1}..e_n`` renamed to ``e_1..e_{n-shift}``."""
    F = L.field
    forms = []
    for b in L.basis():
        terms = {}
        for S, c in b.terms.items():
            if S and S[0] <= shift:
                raise ValueError("form uses a variable that is dropped by reindexing")
            terms[tuple(s - shift for s in S)] = c
        forms.append(KForm(F, L.n - shift, L.k, terms, check=False))
    return from_generators(F, L.n - shift, L.k, forms)


def _split(cert: Certificate, L: Subspace, M: Subspace, f: KForm, g: KForm, phase: dict) -> None:
    F, n, k = M.field, M.n, M.k
    cols = [f.one_form_coeffs(), g.one_form_coeffs()]
    cols += [[F.one if r == h else F.zero for r in range(n)] for h in range(2, n)]
    Q = Operator.from_columns(F, cols)
    _require(Q.is_invertible(), "f and g are independent")
    Ms = change_basis(M, Q.inverse())
    A = two_form_part(F, n, k)
    e1, e12 = _unit(F, n, 1), KForm.monomial(F, n, (1, 2))
    _require(Ms.contains_subspace(A), "split space contains f ^ g ^ (k-2 forms)")
    _require(_kills(e12, Ms), "f ^ g annihilates the split space")
    for b in Ms.basis():
        _require(all(S[0] in (1, 2) for S in b.terms), "every element has a factor in span{f, g}")
    Bp = colon_by_one_form(Ms, e1, avoid=(1, 2))
    ys = []
    for b in Ms.basis():
        ys.append(KForm(F, n, k - 1, {S[1:]: c for S, c in b.terms.items() if S[0] == 2}, check=False))
    Cp = from_generators(F, n, k - 1, ys)
    _require(Ms.dim == A.dim + Bp.dim + Cp.dim, "dim L = dim A + dim B' + dim C'")
    _require(Bp.dim > 0, "some element is killed by f but not by g")
    _require(Cp.dim > 0, "some element is not killed by f")
    _require(is_cross_annihilating(Bp, Cp), "B' and C' are cross-annihilating")
    Bn, Cn = reindex_down(Bp), reindex_down(Cp)
    K2, L2, plog = reduce_pair_to_monomial(Bn, Cn)
    okK, famK = has_monomial_basis(K2)
    okL, famL = has_monomial_basis(L2)
    _require(okK and okL, "shifted B', C' have monomial bases")
    _require(are_cross_intersecting(famK, famL), "variable sets of B', C' are cross-intersecting")
    phase.update({"name": "split", "f": format_form(f), "g": format_form(g), "frame": operator_record(Q),
                  "space": subspace_record(Ms), "B_prime": subspace_record(Bn), "C_prime": subspace_record(Cn),
                  "pair_steps": [[s.j, s.i] for s in plog.steps],
                  "families": [famK.to_list(), famL.to_list()]})
    cert.phases.append(phase)
    m, kk = n - 2, k - 1
    cert.inequalities += [
        inequality("augmentation only grows the space",
                   [value(L.dim, "dim L")], "<=", [value(Ms.dim, "dim split space")]),
        inequality("split dimension count",
                   [value(Ms.dim, "dim split space")], "=",
                   [binom(n - 2, k - 2), value(Bp.dim, "dim B'"), value(Cp.dim, "dim C'")]),
        inequality("cross-intersecting bound in n-2 variables",
                   [value(len(famK), "|family B'|"), value(len(famL), "|family C'|")], "<=",
                   [binom(m, kk), binom(m - kk, kk, coef=-1), {"coef": 1, "value": 1, "what": "one"}]),
        inequality("Pascal's rule",
                   [binom(n - 2, k - 2), binom(n - 2, k - 1)], "=", [binom(n - 1, k - 1)]),
        inequality("nontrivial self-annihilating bound",
                   [value(L.dim, "dim L")], "<=", _hm_terms(n, k)),
    ]
