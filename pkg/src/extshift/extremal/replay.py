"""Stand-alone checker for certificates written by :func:`certify_hm`.

The replayer reads only the certificate.  Every slow shift is recomputed with
the generic saturation route (:func:`~extshift.shifting.limit_action` of
``N_{j->i}(t)``) rather than the fast kernel the pipeline used, and the
split spaces ``B'``, ``C'`` are rebuilt from coordinate restrictions rather
than colon ideals.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from ..exterior import KForm, apply_operator, monomials, parse_form, wedge
from ..setfam import SetFamily, are_cross_intersecting, is_intersecting, is_nontrivial as family_nontrivial
from ..shifting import limit_action, n_matrix
from ..subspace import Subspace, from_generators
from ..tfield import get_field
from .. import linalg
from .bounds import check_inequality, cross_bound, hm_bound
from .certify import Certificate, operator_from_record, subspace_from_record

__all__ = ["ReplayResult", "replay_certificate"]


@dataclass
class ReplayResult:
    ok: bool = True
    checks: int = 0
    failures: list[str] = dc_field(default_factory=list)

    def check(self, cond: bool, name: str) -> bool:
        self.checks += 1
        if not cond:
            self.ok = False
            self.failures.append(name)
        return cond

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": self.checks, "failures": list(self.failures)}


def _shift(L: Subspace, j: int, i: int) -> Subspace:
    return limit_action(n_matrix(j, i, L.n, L.field), L)


def _killed_by(v: KForm, L: Subspace) -> bool:
    return all(wedge(v, b).is_zero() for b in L.basis())


def _self_annihilating(L: Subspace) -> bool:
    B = L.basis()
    return all(wedge(x, y).is_zero() for a, x in enumerate(B) for y in B[a:])


def _one_form_annihilated(L: Subspace) -> bool:
    """Some nonzero 1-form kills ``L`` (rank of the multiplication map ``V -> Hom(L, ...)``)."""
    F, n = L.field, L.n
    rows = []
    for h in range(1, n + 1):
        eh = KForm.monomial(F, n, (h,))
        row = []
        for b in L.basis():
            row += wedge(eh, b).to_dense()
        rows.append(row)
    if not rows or not rows[0]:
        return True
    return linalg.rank(F, rows) < n


def _transform(L: Subspace, P) -> Subspace:
    return from_generators(L.field, L.n, L.k, [apply_operator(P, b) for b in L.basis()])


def _family_of(L: Subspace) -> SetFamily | None:
    mons = monomials(L.n, L.k)
    sets = []
    for row in L.rows:
        nz = [c for c, v in enumerate(row) if v != 0]
        if len(nz) != 1:
            return None
        sets.append(mons[nz[0]])
    return SetFamily(L.n, L.k, sets)


def _replay_steps(res: ReplayResult, L: Subspace, steps, label: str) -> Subspace:
    for j, i in steps:
        M = _shift(L, int(j), int(i))
        res.check(M != L, f"{label}: recorded step ({j}, {i}) moves the subspace")
        res.check(M.dim == L.dim, f"{label}: step ({j}, {i}) preserves dimension")
        L = M
    return L


def _all_fixed(L: Subspace, indices) -> bool:
    I = sorted(indices)
    return all(_shift(L, j, i) == L for a, i in enumerate(I) for j in I[a + 1:])


def replay_certificate(cert: Certificate | dict) -> ReplayResult:
    if isinstance(cert, dict):
        cert = Certificate.from_dict(cert)
    res = ReplayResult()
    try:
        _replay(cert, res)
    except (ValueError, KeyError, TypeError, IndexError) as exc:
        res.check(False, f"malformed certificate: {exc}")
    return res


def _replay(cert: Certificate, res: ReplayResult) -> None:
    F = get_field(cert.field)
    n, k = cert.n, cert.k
    L0 = subspace_from_record(F, cert.input)
    res.check((L0.n, L0.k) == (n, k), "input lives in the stated space")
    res.check(_self_annihilating(L0), "input is self-annihilating")
    res.check(not _one_form_annihilated(L0), "input is not annihilated by a 1-form")
    res.check(cert.claimed_bound == hm_bound(n, k), "claimed bound matches the closed form")
    for rec in cert.inequalities:
        res.check(check_inequality(rec), f"inequality holds: {rec['label']}")
    res.check(cert.verified, "certificate is marked verified")
    phases = {p["name"]: p for p in cert.phases}

    # standard frame
    p1 = phases["standard-frame"]
    S = _replay_steps(res, L0, p1["steps"], "standard frame")
    res.check(S == subspace_from_record(F, p1["result"]), "standard frame: result reproduced")
    trig = p1["trigger"]
    if trig is None:
        res.check(cert.case == "STABLE_MONOMIAL", "untriggered run ends in the monomial case")
        res.check(_all_fixed(S, range(1, n + 1)), "standard frame: result is stable")
        fam = _family_of(S)
        res.check(fam is not None, "stable result is monomial")
        if fam is not None:
            res.check(sorted(map(list, fam.sets)) == sorted(p1["family"]), "family reproduced")
            res.check(is_intersecting(fam) and family_nontrivial(fam), "family is nontrivially intersecting")
            res.check(len(fam) == L0.dim, "family size equals dim L")
            res.check(len(fam) <= hm_bound(n, k), "family within the bound")
        return
    j, i = int(trig["j"]), int(trig["i"])
    ell = parse_form(F, n, trig["annihilator"], 1)
    res.check(not ell.is_zero() and _killed_by(ell, _shift(S, j, i)),
              "standard frame: recorded annihilator kills the would-be shift")

    # two-form frame
    p2 = phases["two-form-frame"]
    f1 = parse_form(F, n, p2["f1"], 1)
    f2 = parse_form(F, n, p2["f2"], 1)
    res.check(f1 == ell, "f1 is the recorded annihilator")
    res.check(f2 == KForm.monomial(F, n, (j,)) - KForm.monomial(F, n, (i,)), "f2 = e_j - e_i")
    P = operator_from_record(F, p2["frame"])
    res.check(P.is_invertible(), "frame is invertible")
    res.check(P.image(1) == f1 and P.image(2) == f2, "frame starts with f1, f2")
    res.check(_killed_by(wedge(f1, f2), S), "f1 ^ f2 kills the pre-shift subspace")
    Lf = _transform(S, P.inverse())
    A = Subspace.from_monomials(F, n, k, [T for T in monomials(n, k) if T[:2] == (1, 2)])
    aug = Lf + A
    res.check(aug == subspace_from_record(F, p2["augmented"]), "two-form frame: augmentation reproduced")
    res.check(_self_annihilating(aug), "augmented space is self-annihilating")
    res.check(not _one_form_annihilated(aug), "augmented space is nontrivial")
    S2 = _replay_steps(res, aug, p2["steps"], "two-form frame")
    res.check(S2 == subspace_from_record(F, p2["result"]), "two-form frame: result reproduced")
    trig2 = p2["trigger"]
    p3 = phases["split"]
    if trig2 is None:
        res.check(cert.case == "STABLE_2FORM", "untriggered second run ends in the two-form case")
        res.check(_all_fixed(S2, range(3, n + 1)), "two-form frame: result is stable")
        M = S2
    else:
        res.check(cert.case == "ANNIHILATOR_CASCADE", "triggered second run ends in the cascade case")
        j2, i2 = int(trig2["j"]), int(trig2["i"])
        ell2 = parse_form(F, n, trig2["annihilator"], 1)
        res.check(ell2 == parse_form(F, n, p3["ell"], 1), "cascade annihilator matches")
        res.check(not ell2.is_zero() and _killed_by(ell2, _shift(S2, j2, i2)),
                  "two-form frame: recorded annihilator kills the would-be shift")
        d = KForm.monomial(F, n, (j2,)) - KForm.monomial(F, n, (i2,))
        lead = wedge(ell2, d)
        M = S2.add_forms([wedge(lead, KForm.monomial(F, n, T)) for T in monomials(n, k - 2)])
        res.check(M == subspace_from_record(F, p3["augmented"]), "cascade augmentation reproduced")
        res.check(_self_annihilating(M), "cascade-augmented space is self-annihilating")
        res.check(not _one_form_annihilated(M), "cascade-augmented space is nontrivial")

    # split
    f = parse_form(F, n, p3["f"], 1)
    g = parse_form(F, n, p3["g"], 1)
    Q = operator_from_record(F, p3["frame"])
    res.check(Q.is_invertible() and Q.image(1) == f and Q.image(2) == g, "split frame starts with f, g")
    res.check(all(Q.image(h) == KForm.monomial(F, n, (h,)) for h in range(3, n + 1)),
              "split frame fixes e3..en")
    res.check(all(c == 0 for c in f.one_form_coeffs()[2:] + g.one_form_coeffs()[2:]), "f, g in span{f1, f2}")
    Ms = _transform(M, Q.inverse())
    res.check(Ms == subspace_from_record(F, p3["space"]), "split space reproduced")
    res.check(Ms.contains_subspace(A), "split space contains f ^ g ^ (k-2 forms)")
    # B': elements of Ms supported on e1 ^ (forms in e3..en); C': e2-coefficients
    onlyB = [T for T in monomials(n, k) if T[0] == 1 and (len(T) == 1 or T[1] >= 3)]
    Bpart = _coordinate_intersection(Ms, onlyB)
    Bp = from_generators(F, n - 2, k - 1, [_strip(F, n, b, 1) for b in Bpart])
    Cp = from_generators(F, n - 2, k - 1, [_strip(F, n, b, 2) for b in Ms.basis()])
    res.check(Bp == subspace_from_record(F, p3["B_prime"]), "B' reproduced")
    res.check(Cp == subspace_from_record(F, p3["C_prime"]), "C' reproduced")
    res.check(Ms.dim == A.dim + Bp.dim + Cp.dim, "dimension count of the split")
    res.check(Bp.dim > 0 and Cp.dim > 0, "B' and C' are nonzero")
    res.check(all(wedge(x, y).is_zero() for x in Bp.basis() for y in Cp.basis()), "B', C' cross-annihilate")
    K2, L2 = Bp, Cp
    for jj, ii in p3["pair_steps"]:
        K3, L3 = _shift(K2, int(jj), int(ii)), _shift(L2, int(jj), int(ii))
        res.check(K3 != K2 or L3 != L2, f"pair step ({jj}, {ii}) moves the pair")
        K2, L2 = K3, L3
    famK, famL = _family_of(K2), _family_of(L2)
    res.check(famK is not None and famL is not None, "reduced pair is monomial")
    if famK is not None and famL is not None:
        res.check([sorted(map(list, famK.sets)), sorted(map(list, famL.sets))]
                  == [sorted(x) for x in p3["families"]], "pair families reproduced")
        res.check(are_cross_intersecting(famK, famL), "pair families cross-intersect")
        res.check(len(famK) + len(famL) <= cross_bound(n - 2, k - 1), "pair within the cross bound")
    res.check(L0.dim <= Ms.dim, "input dimension at most the split dimension")


def _coordinate_intersection(L: Subspace, allowed: list) -> list[KForm]:
    """Basis of the elements of ``L`` supported on the monomials ``allowed``."""
    F = L.field
    idx = {T: c for c, T in enumerate(monomials(L.n, L.k))}
    outside = [c for T, c in idx.items() if T not in set(allowed)]
    rows = [[r[c] for c in outside] for r in L.rows]
    if not outside:
        return L.basis()
    kern = linalg.left_kernel(F, rows, len(outside))
    out = []
    for coeffs in kern:
        v = [F.zero] * len(idx)
        for c, r in zip(coeffs, L.rows):
            if c != 0:
                v = F.axpy(v, F.neg(c), list(r))
        out.append(KForm.from_dense(F, L.n, L.k, v))
    return out


def _strip(F, n: int, x: KForm, lead: int) -> KForm:
    """Coefficient of ``e_lead ^ (forms in e3..en)`` in ``x``, renamed to ``e1..e_{n-2}``."""
    terms = {}
    for T, c in x.terms.items():
        if T[0] == lead and (len(T) == 1 or T[1] >= 3):
            terms[tuple(s - 2 for s in T[1:])] = c
    return KForm(F, n - 2, x.k - 1, terms, check=False)
