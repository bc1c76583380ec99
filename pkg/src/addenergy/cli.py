"""Command line interface.

Every command reads set files (``{"group": ..., "elements": [...]}``, ``-``
for stdin) and prints one JSON report.  Exit status: 0 pass, 1 a check
failed, 2 usage error, 3 capacity exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .connectivity import (
    ConnectivityParams,
    check_connected,
    check_strongly_connected,
    extract_almost_basis,
    extract_connected_subset,
    konyagin_containment,
)
from .dissociation import ENUMERATE_CAP, SpanIndex, certify, check_rudin, maximal_dissociated_subset, span_contains, span_enumerate
from .energy import IntFn, check_holder, check_tk_vs_t2, doubling_energy_bound, energy
from .errors import AddEnergyError, UsageError
from .exact import as_fraction, frac_json
from .generators import FAMILIES, make
from .groups import GroupSet, GroupSpec, canonical_json, sumset
from .partition import partition_min_sigma, strong_partition
from .pipeline import recheck, run_main_pipeline
from .suites import SUITES, verify_suite

PASS, FAIL = 0, 1


def parse_group(text: str) -> GroupSpec:
    """``cyclic:N``, ``vector:Q:D``, ``integers`` or a JSON object."""
    text = text.strip()
    if text.startswith("{"):
        return GroupSpec.from_json(json.loads(text))
    parts = text.split(":")
    try:
        if parts[0] == "cyclic" and len(parts) == 2:
            return GroupSpec.cyclic(int(parts[1]))
        if parts[0] == "vector" and len(parts) == 3:
            return GroupSpec.vector(int(parts[1]), int(parts[2]))
        if parts == ["integers"]:
            return GroupSpec.integers()
    except ValueError:
        pass
    raise UsageError(f"cannot parse group {text!r}; use cyclic:N, vector:Q:D or integers")


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: not valid JSON ({exc})") from None


def _read_set(path: str) -> GroupSet:
    return GroupSet.from_json(_read_json(path))


def _frac(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (UsageError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _report(A: GroupSet | None, params: dict, verdicts: dict, witnesses=None, trace=None, certified=True, **extra) -> dict:
    out = {
        "input_digest": None if A is None else A.digest(),
        "params": params,
        "verdicts": verdicts,
        "witnesses": witnesses if witnesses is not None else {},
        "trace": trace if trace is not None else [],
        "certified": bool(certified),
    }
    out.update(extra)
    return out


def _conn_params(args) -> ConnectivityParams:
    return ConnectivityParams(k=args.k, C=args.C, beta1=args.beta1, beta2=args.beta2)


# -- commands ------------------------------------------------------------------


def cmd_gen(args):
    params = {}
    for item in args.param or []:
        if "=" not in item:
            raise UsageError(f"parameters are key=value, got {item!r}")
        key, val = item.split("=", 1)
        try:
            params[key] = json.loads(val)
        except json.JSONDecodeError:
            params[key] = val
    if "window" in params:
        params["window"] = tuple(params["window"])
    A = make(args.family, parse_group(args.group), seed=args.seed, **params)
    return A.to_json(), PASS


def cmd_energy(args):
    A = _read_set(args.input)
    if not len(A):
        raise UsageError("energy of an empty set is not defined here")
    e = energy(A, args.k)
    return _report(A, {"k": args.k}, {"T_k": e.value, "size": len(A)}), PASS


def cmd_sumset(args):
    A, B = _read_set(args.input), _read_set(args.other or args.input)
    S = sumset(A, B)
    return {"sumset": S.to_json(), "size": len(S)}, PASS


def cmd_dissociate(args):
    A = _read_set(args.input)
    lam = maximal_dissociated_subset(A, seed=args.seed)
    covered = SpanIndex(lam.base).count(A) if len(lam) else sum(1 for x in A if x == A.spec.zero)
    rep = _report(
        A,
        {"seed": args.seed},
        {"dissociated": True, "maximal": covered == len(A)},
        {"lambda": lam.base.to_json()["elements"]},
        certified=True,
        **{"lambda": lam.base.to_json()["elements"], "certificate": lam.certificate, "covered_count": covered},
    )
    return rep, PASS if covered == len(A) else FAIL


def cmd_span(args):
    L = _read_set(args.input)
    target = _read_set(args.target) if args.target else None
    out: dict = {"lambda": L.to_json()["elements"]}
    if len(L) <= ENUMERATE_CAP:
        res = span_enumerate(L, target)
        out.update(res.to_json())
        if args.list:
            out["span"] = res.elements.to_json()["elements"]
    elif target is not None:
        out["covered_count"] = SpanIndex(L).count(target)
    if args.contains is not None:
        x = L.spec.elem_from_json(json.loads(args.contains))
        hit = span_contains(L, x)
        out["contains"] = {"element": args.contains, "member": hit.member, "witness": hit.witness}
    return _report(L, {}, {}, trace=[], **out), PASS


def cmd_check(args):
    A = _read_set(args.input)
    what = args.what
    if what == "connected":
        v = check_connected(A, _conn_params(args), mode=args.mode, seed=args.seed)
        rep = _report(A, _conn_params(args).to_json(), {"status": v.status, "inequality": None if v.inequality is None else v.inequality.to_json()},
                      {"B": v.to_json()["witness"]}, certified=v.certified)
        return rep, FAIL if v.status == "violated" else PASS
    if what == "strong":
        v = check_strongly_connected(A, _conn_params(args), mode=args.mode, seed=args.seed)
        rep = _report(A, _conn_params(args).to_json(), {"status": v.status, "inequality": None if v.inequality is None else v.inequality.to_json()},
                      {"cut": v.to_json()["cut"], "cut_value": v.cut_value}, certified=v.certified)
        return rep, FAIL if v.status == "violated" else PASS
    if what == "holder":
        fs = [_read_set(p) for p in args.f] if args.f else [A] * args.k1
        gs = [_read_set(p) for p in args.g] if args.g else [A] * args.k2
        v = check_holder([IntFn.indicator(f) for f in fs], [IntFn.indicator(g) for g in gs], args.k1, args.k2)
        rep = _report(A, {"k1": args.k1, "k2": args.k2}, {**v.to_json(), "equality": v.equality})
        return rep, PASS if v.holds else FAIL
    if what == "rudin":
        ineq = check_rudin(certify(A), args.k)
        return _report(A, {"k": args.k}, {"inequality": ineq.to_json()}), PASS if ineq.holds else FAIL
    if what == "tk2":
        ineq = check_tk_vs_t2(A, args.k)
        return _report(A, {"k": args.k}, {"inequality": ineq.to_json()}), PASS if ineq.holds else FAIL
    if what == "doubling":
        v = doubling_energy_bound(A)
        return _report(A, {}, v.to_json()), PASS if v.holds else FAIL
    raise UsageError(f"unknown check {what!r}")


def cmd_extract(args):
    A = _read_set(args.input)
    params = _conn_params(args)
    res = extract_connected_subset(A, params, mode=args.mode, seed=args.seed)
    body = res.to_json()
    rep = _report(
        A,
        params.to_json(),
        {"zeta_monotone": res.zeta_monotone, "steps_hold": res.trace.all_hold(), "bounds": body["bounds"]},
        {"A_prime": body["subset"]},
        body["trace"],
        res.certified,
        zeta_initial=body["zeta_initial"],
        zeta_final=body["zeta_final"],
    )
    return rep, PASS if res.zeta_monotone and res.trace.all_hold() else FAIL


def cmd_almost_basis(args):
    A = _read_set(args.input)
    params = _conn_params(args)
    res = extract_almost_basis(A, params, seed=args.seed, constant=args.constant)
    body = res.to_json()
    rep = _report(
        A,
        {**params.to_json(), "constant": frac_json(as_fraction(args.constant))},
        {"success": res.success, "covered_count": res.coverage, "l_floor": res.l_bound},
        {"lambda": body["lambda"], "certificate": body["certificate"]},
        body["trace"],
        res.success,
        **{"lambda": body["lambda"], "covered_count": res.coverage},
    )
    return rep, PASS if res.trace.all_hold() else FAIL


def cmd_partition(args):
    A = _read_set(args.input)
    st = partition_min_sigma(A, args.k, args.epsilon1, mode=args.mode, seed=args.seed, start=args.start)
    body = st.to_json()
    ok = all(c.holds for c in st.checks.values())
    rep = _report(
        A,
        {"k": args.k, "epsilon1": frac_json(args.epsilon1), "mode": args.mode, "start": args.start},
        {"sigma": body["sigma"], "checks": body["checks"]},
        {"parts": body["parts"], "uncertified_parts": body["uncertified_parts"]},
        body["trace"],
        not st.uncertified_parts,
    )
    return rep, PASS if ok else FAIL


def cmd_strong_partition(args):
    A = _read_set(args.input)
    res = strong_partition(A, args.epsilon, args.beta, seed=args.seed, mode=args.mode)
    body = res.to_json()
    ok = all(c.holds for name, c in res.checks.items() if res.success or name in ("partition", "cross_terms"))
    rep = _report(
        A,
        {"epsilon": body["epsilon"], "beta": body["beta"], "epsilon_prime": body["epsilon_prime"], "rounds": res.rounds},
        {"status": res.status, "checks": body["checks"]},
        {"parts": body["parts"], "witnesses": body["witnesses"], "omega": body["omega"]},
        body["trace"],
        res.success and not res.uncertified,
    )
    return rep, PASS if ok else FAIL


def cmd_konyagin(args):
    A = _read_set(args.input)
    rep_ = konyagin_containment(A, args.k, args.C)
    body = rep_.to_json()
    rep = _report(
        A,
        {"k": args.k, "C": frac_json(as_fraction(args.C))},
        {"contained": rep_.contained, "consistent": rep_.consistent, "subgroup_order": rep_.subgroup_order},
        {"S": body["S"], "anchor": body["anchor"], "strong": body["strongly_connected"]},
        certified=rep_.strong is not None and rep_.strong.certified,
    )
    return rep, PASS if rep_.consistent else FAIL


def cmd_pipeline(args):
    A = _read_set(args.input)
    r = run_main_pipeline(A, args.epsilon, mode=args.mode, seed=args.seed, K=args.K, max_order=args.max_order)
    return r.data, PASS if r.ok else FAIL


def cmd_verify(args):
    results = verify_suite(args.suites, seed=args.seed, cases=args.cases)
    ok = all(r.ok for r in results)
    return {"ok": ok, "suites": [r.to_json() for r in results]}, PASS if ok else FAIL


def cmd_recheck(args):
    res = recheck(_read_json(args.report))
    return res.to_json(), PASS if res.ok else FAIL


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="addenergy", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-o", "--output", help="write the JSON report here instead of stdout")

    def conn(C=Fraction(1), beta1=Fraction(0), beta2=Fraction(1)):
        # fresh parent per command: argparse shares parent actions and their defaults
        p = argparse.ArgumentParser(add_help=False)
        p.add_argument("--k", type=int, default=2)
        p.add_argument("--C", type=_frac, default=C)
        p.add_argument("--beta1", type=_frac, default=beta1)
        p.add_argument("--beta2", type=_frac, default=beta2)
        p.add_argument("--mode", choices=("exact", "heuristic"), default="exact")
        return p

    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="generate a set")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--group", required=True, help="cyclic:N, vector:Q:D or integers")
    p.add_argument("--param", "-p", action="append", help="family parameter key=value (JSON values)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("energy", parents=[common], help="T_k of a set")
    p.add_argument("input")
    p.add_argument("--k", type=int, default=2)
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("sumset", parents=[common], help="A + B")
    p.add_argument("input")
    p.add_argument("other", nargs="?")
    p.set_defaults(func=cmd_sumset)

    p = sub.add_parser("dissociate", parents=[common], help="maximal dissociated subset")
    p.add_argument("input")
    p.set_defaults(func=cmd_dissociate)

    p = sub.add_parser("span", parents=[common], help="span of a set of generators")
    p.add_argument("input")
    p.add_argument("--target", help="count how much of this set lies in the span")
    p.add_argument("--contains", help="JSON element to test for membership")
    p.add_argument("--list", action="store_true", help="include the full span")
    p.set_defaults(func=cmd_span)

    p = sub.add_parser("check", parents=[common, conn()], help="check one inequality or property")
    p.add_argument("what", choices=("connected", "strong", "holder", "rudin", "tk2", "doubling"))
    p.add_argument("input")
    p.add_argument("--k1", type=int, default=2)
    p.add_argument("--k2", type=int, default=2)
    p.add_argument("--f", action="append", help="set file for an f_i (holder)")
    p.add_argument("--g", action="append", help="set file for a g_j (holder)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("extract", parents=[common, conn(Fraction(1, 32), Fraction(1, 2), Fraction(3, 4))], help="connected subset extraction")
    p.add_argument("input")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("almost-basis", parents=[common, conn(Fraction(1, 32), Fraction(1, 2))], help="almost-basis extraction")
    p.add_argument("input")
    p.add_argument("--constant", type=_frac, default=Fraction(2**13))
    p.set_defaults(func=cmd_almost_basis)

    p = sub.add_parser("partition", parents=[common], help="sigma-minimal partition")
    p.add_argument("input")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--epsilon1", type=_frac, default=Fraction(1, 2))
    p.add_argument("--mode", choices=("exact", "heuristic"), default="exact")
    p.add_argument("--start", choices=("singletons", "whole"), default="singletons")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("strong-partition", parents=[common], help="strongly connected parts plus remainder")
    p.add_argument("input")
    p.add_argument("--epsilon", type=_frac, default=Fraction(1, 2))
    p.add_argument("--beta", type=_frac, default=Fraction(1, 2))
    p.add_argument("--mode", choices=("exact", "heuristic"), default="exact")
    p.set_defaults(func=cmd_strong_partition)

    p = sub.add_parser("konyagin", parents=[common], help="popular differences and subgroup containment")
    p.add_argument("input")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--C", type=_frac, default=Fraction(1))
    p.set_defaults(func=cmd_konyagin)

    p = sub.add_parser("pipeline", parents=[common], help="connected subset then almost-basis, with hypothesis ledger")
    p.add_argument("input")
    p.add_argument("--epsilon", type=_frac, default=Fraction(1, 2))
    p.add_argument("--K", type=_frac, default=None, help="doubling constant (default |A+A|/|A|)")
    p.add_argument("--mode", choices=("exact", "heuristic"), default="exact")
    p.add_argument("--max-order", type=int, default=8)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("suites", nargs="*", metavar="suite", help=f"any of: {', '.join(SUITES)}")
    p.add_argument("--cases", type=int, default=100)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("recheck", parents=[common], help="re-evaluate every inequality in a report")
    p.add_argument("report")
    p.set_defaults(func=cmd_recheck)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, status = args.func(args)
    except AddEnergyError as exc:
        print(f"addenergy: error: {exc}", file=sys.stderr)
        return exc.exit_code
    text = canonical_json(payload)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
