"""``extshift`` command line: parse text inputs, call the library, print a JSON report."""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field as dc_field
from pathlib import Path
from typing import Sequence

from .extremal import certify_hm, cross_bound, ekr_bound, hm_bound, sample_nontrivial_selfann, verify_cross
from .extremal.certify import Certificate
from .extremal.replay import replay_certificate
from .extremal.search import max_crossann_search, max_selfann_search
from .formats import ParseError, parse_subspace, parse_tmatrix
from .setfam import BudgetExceeded, comb_shift, max_intersecting_search, parse_family, shift_until_shifted
from .shifting import limit_action, slow_shift, stabilize
from .subspace import Subspace
from .tfield import get_field

__all__ = ["Report", "run", "main"]


@dataclass
class Report:
    command: str
    inputs: dict
    field: str | None = None
    outputs: dict = dc_field(default_factory=dict)
    verified: bool | None = None
    timing: dict = dc_field(default_factory=dict)
    seed: int | None = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls(**json.loads(text))


class UsageError(ValueError):
    pass


def _pair(text: str) -> tuple[int, int]:
    try:
        j, i = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'j,i', got {text!r}") from None
    return j, i


def _indices(text: str, n: int) -> list[int]:
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..")
            out = list(range(int(lo), (n if hi.strip() == "n" else int(hi)) + 1))
        else:
            out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"cannot read index set {text!r}; use 'a..b' or 'i,j,...'") from None
    if any(not 1 <= h <= n for h in out):
        raise UsageError(f"index set {text!r} is not inside [1, {n}]")
    return out


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_subspace(path: str, field: str | None) -> Subspace:
    try:
        return parse_subspace(_read(path), get_field(field) if field else None)
    except ParseError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _sub(L: Subspace) -> dict:
    return L.to_dict()


# -- subcommands ------------------------------------------------------------

def _cmd_shift_family(args, rep: Report) -> None:
    try:
        fam = parse_family(_read(args.family))
    except ValueError as exc:
        raise UsageError(f"{args.family}: {exc}") from None
    rep.inputs.update(family=fam.to_list(), pairs=[list(p) for p in args.pairs or []])
    applied = []
    for j, i in args.pairs or []:
        fam = comb_shift(fam, j, i)
        applied.append([j, i])
    if args.until_shifted:
        fam, more = shift_until_shifted(fam)
        applied += [list(p) for p in more]
    rep.outputs = {"family": fam.to_list(), "applied": applied, "size": len(fam)}


def _cmd_slow_shift(args, rep: Report) -> None:
    L = _load_subspace(args.subspace, args.field)
    j, i = args.pair
    rep.field = str(L.field)
    rep.inputs.update(subspace=_sub(L), pair=[j, i])
    M = slow_shift(L, j, i)
    rep.outputs = {"subspace": _sub(M), "fixing": M == L}


def _cmd_stabilize(args, rep: Report) -> None:
    L = _load_subspace(args.subspace, args.field)
    I = _indices(args.indices, L.n) if args.indices else list(range(1, L.n + 1))
    rep.field = str(L.field)
    seq = [list(p) for p in args.sequence] if args.sequence else None
    rep.inputs.update(subspace=_sub(L), indices=I, strategy=args.strategy,
                      stop_on_trivializing=args.stop_on_trivializing, sequence=seq)
    if args.strategy == "given-sequence" and not args.sequence:
        raise UsageError("--strategy given-sequence needs --sequence j,i [j,i ...]")
    S, log = stabilize(L, I, args.strategy, args.stop_on_trivializing, args.sequence)
    rep.outputs = {"subspace": _sub(S), "log": log.to_dict()}
    if args.strategy == "lex-last":
        rep.verified = log.within_bound


def _cmd_limit(args, rep: Report) -> None:
    L = _load_subspace(args.subspace, args.field)
    try:
        N = parse_tmatrix(_read(args.matrix), L.field)
    except ParseError as exc:
        raise UsageError(f"{args.matrix}: {exc}") from None
    if N.n != L.n:
        raise UsageError(f"matrix is {N.n} x {N.n} but the subspace lives on F^{L.n}")
    rep.field = str(L.field)
    rep.inputs.update(subspace=_sub(L), matrix=[[str(p) for p in r] for r in N.entries])
    rep.outputs = {"subspace": _sub(limit_action(N, L)), "determinant": str(N.determinant())}


def _cmd_bounds(args, rep: Report) -> None:
    rep.inputs.update(n=args.n, k=args.k)
    try:
        rep.outputs = {"ekr": ekr_bound(args.n, args.k), "hm": hm_bound(args.n, args.k),
                       "cross": cross_bound(args.n, args.k)}
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _cmd_certify(args, rep: Report) -> None:
    L = _load_subspace(args.subspace, args.field)
    rep.field = str(L.field)
    rep.inputs.update(subspace=_sub(L))
    cert = certify_hm(L)
    if args.out:
        Path(args.out).write_text(cert.to_json() + "\n")
        rep.outputs["written"] = args.out
    rep.outputs.update(certificate=cert.to_dict())
    rep.verified = cert.verified


def _cmd_replay(args, rep: Report) -> None:
    try:
        data = json.loads(_read(args.certificate))
        cert = Certificate.from_dict(data)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.certificate}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    except (KeyError, ValueError) as exc:
        raise UsageError(f"{args.certificate}: {exc}") from None
    rep.field = cert.field
    rep.inputs.update(certificate=args.certificate)
    res = replay_certificate(cert)
    rep.outputs = res.to_dict()
    rep.verified = res.ok


def _cmd_verify_cross(args, rep: Report) -> None:
    K = _load_subspace(args.K, args.field)
    L = _load_subspace(args.L, str(K.field))
    if (K.n, K.k) != (L.n, L.k):
        raise UsageError("K and L must have the same n and k")
    rep.field = str(K.field)
    rep.inputs.update(K=_sub(K), L=_sub(L))
    out = verify_cross(K, L)
    rep.outputs = out
    rep.verified = out["verified"]


def _cmd_search(args, rep: Report) -> None:
    rep.inputs.update(kind=args.kind, n=args.n, k=args.k, nontrivial=args.nontrivial,
                      budget=args.budget, jobs=args.jobs)
    try:
        if args.kind == "family":
            best, fam = max_intersecting_search(args.n, args.k, args.nontrivial,
                                                budget=args.budget or 25, jobs=args.jobs)
            rep.outputs = {"maximum": best, "witness": fam.to_list()}
            bound = hm_bound(args.n, args.k) if args.nontrivial else ekr_bound(args.n, args.k)
        else:
            F = get_field(args.field or "GF(2)")
            rep.field = str(F)
            budget = args.budget or 1024
            if args.kind == "selfann":
                best, W = max_selfann_search(args.n, args.k, F, args.nontrivial, budget=budget, jobs=args.jobs)
                rep.outputs = {"maximum": best, "witness": _sub(W)}
                bound = hm_bound(args.n, args.k) if args.nontrivial else ekr_bound(args.n, args.k)
            else:
                best, (K, L) = max_crossann_search(args.n, args.k, F, budget=budget)
                rep.outputs = {"maximum": best, "witness": {"K": _sub(K), "L": _sub(L)}}
                bound = cross_bound(args.n, args.k)
    except BudgetExceeded as exc:
        raise UsageError(str(exc)) from None
    rep.outputs["bound"] = bound
    rep.verified = best == bound


def _cmd_sample(args, rep: Report) -> None:
    F = get_field(args.field)
    rep.field = str(F)
    rep.seed = args.seed
    rep.inputs.update(n=args.n, k=args.k)
    L = sample_nontrivial_selfann(args.n, args.k, F, args.seed)
    if args.out:
        Path(args.out).write_text(L.to_text())
        rep.outputs["written"] = args.out
    rep.outputs["subspace"] = _sub(L)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="extshift", description="Exact slow shifting and extremal bounds "
                                "for subspaces of exterior powers.")
    sub = p.add_subparsers(dest="command", required=True)

    def field_opt(sp):
        sp.add_argument("--field", help="override the field of the input file (Q or GF(p))")

    sp = sub.add_parser("shift-family", help="combinatorial shifts of a set family")
    sp.add_argument("family")
    sp.add_argument("--pairs", nargs="+", type=_pair, metavar="j,i")
    sp.add_argument("--until-shifted", action="store_true", help="then shift lex-last until shifted")
    sp.set_defaults(func=_cmd_shift_family)

    sp = sub.add_parser("slow-shift", help="one slow shift N_{j->i}")
    sp.add_argument("subspace")
    sp.add_argument("--pair", type=_pair, required=True, metavar="j,i")
    field_opt(sp)
    sp.set_defaults(func=_cmd_slow_shift)

    sp = sub.add_parser("stabilize", help="slow shift until stable")
    sp.add_argument("subspace")
    sp.add_argument("--indices", help="'a..b' or 'i,j,...' (default: all)")
    sp.add_argument("--strategy", default="lex-last", choices=["lex-last", "first-found", "given-sequence"])
    sp.add_argument("--sequence", nargs="+", type=_pair, metavar="j,i")
    sp.add_argument("--stop-on-trivializing", action="store_true")
    field_opt(sp)
    sp.set_defaults(func=_cmd_stabilize)

    sp = sub.add_parser("limit", help="limit action of a matrix over F[t]")
    sp.add_argument("subspace")
    sp.add_argument("--matrix", required=True)
    field_opt(sp)
    sp.set_defaults(func=_cmd_limit)

    sp = sub.add_parser("bounds", help="closed-form bounds for n, k")
    sp.add_argument("n", type=int)
    sp.add_argument("k", type=int)
    sp.set_defaults(func=_cmd_bounds)

    sp = sub.add_parser("certify-hm", help="certificate for a nontrivially self-annihilating subspace")
    sp.add_argument("subspace")
    sp.add_argument("--out")
    field_opt(sp)
    sp.set_defaults(func=_cmd_certify)

    sp = sub.add_parser("replay-cert", help="independently re-check a certificate")
    sp.add_argument("certificate")
    sp.set_defaults(func=_cmd_replay)

    sp = sub.add_parser("verify-cross", help="reduce a cross-annihilating pair and check the bound")
    sp.add_argument("K")
    sp.add_argument("L")
    field_opt(sp)
    sp.set_defaults(func=_cmd_verify_cross)

    sp = sub.add_parser("search-max", help="exhaustive extremal search")
    sp.add_argument("kind", choices=["selfann", "crossann", "family"])
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--field", help="finite field for subspace searches (default GF(2))")
    sp.add_argument("--nontrivial", action="store_true")
    sp.add_argument("--budget", type=int)
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=_cmd_search)

    sp = sub.add_parser("sample", help="random nontrivially self-annihilating subspace")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--field", default="Q")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=_cmd_sample)
    return p


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    rep = Report(command=args.command, inputs={})
    start = time.perf_counter_ns()
    try:
        args.func(args, rep)
    except ValueError as exc:
        print(f"extshift {args.command}: {exc}", file=stderr)
        return 2
    rep.timing = {"elapsed_us": (time.perf_counter_ns() - start) // 1000}
    print(rep.to_json(), file=stdout)
    return 1 if rep.verified is False else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
