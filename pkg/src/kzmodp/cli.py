"""Command-line front end.

JSON goes to stdout (or --out), a one-line summary to stderr.

Exit codes:
    0: all checks passed
    1: a verification failed (or an input file could not be read)
    2: invalid parameters
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from dataclasses import asdict, dataclass

from . import __version__
from .arith import ConfigError, binom_neg_inv_q, lucas_binom, make_prime_config, reduce_mod_p
from .cartier import cartier_hat, hasse_witt_full, iterated_solution, make_curve, regularity_report
from .compare import binom_neg_inv_q_exact, k_tuples, l_coefficient, shift_profile, verify_decomposition
from .kz import (
    arithmetic_solutions,
    basis_J,
    basis_K,
    independence_certificate,
    minimal_exponents,
    module_rank,
    verify_kz,
    fusion,
)
from .poly import PolyVector

CHECKS = ("kz", "rank", "independence", "decomposition", "lucas", "regularity")


@dataclass
class RunManifest:
    command: str
    parameters: dict
    version: str = __version__
    output_hash: str = ""

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class Result:
    payload: dict
    passed: bool = True
    summary: str = ""


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def parse_lambda(text: str | None, n: int) -> tuple[int, ...]:
    if not text:
        return (1,) * n
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ConfigError(f"cannot parse --lambda {text!r}") from None


def parse_partition(text: str) -> list[list[int]]:
    """'1,2|3|4' -> [[0, 1], [2], [3]] (input is 1-based)."""
    try:
        return [[int(x) - 1 for x in block.split(",")] for block in text.split("|")]
    except ValueError:
        raise ConfigError(f"cannot parse --partition {text!r}") from None


def resolve_threads(value: int | None) -> int:
    if value is None:
        value = int(os.environ.get("KZMODP_THREADS", "1") or 1)
    return max(1, value)


def cmd_config(args, cfg) -> Result:
    out = cfg.to_json()
    out["rank"] = module_rank((1,) * cfg.n, cfg)
    out["genus"] = cfg.genus
    return Result(out, True, f"d={cfg.d} a={list(cfg.a)} A={list(cfg.A)} k={cfg.k} rank={out['rank']}")


def cmd_solve(args, cfg) -> Result:
    kind = args.kind
    if kind == "I":
        lam = parse_lambda(args.lam, cfg.n)
        basis = arithmetic_solutions(lam, minimal_exponents(lam, cfg), cfg)
    else:
        if args.lam and set(parse_lambda(args.lam, cfg.n)) != {1}:
            raise ConfigError(f"--kind {kind} requires unit weights")
        basis = basis_J(cfg) if kind == "J" else basis_K(cfg)
    payload = {"kind": kind, "solutions": basis.to_json(), "excluded_l": list(basis.excluded)}
    return Result(payload, True, f"{len(basis)} {kind}-solutions")


def cmd_hasse_witt(args, cfg) -> Result:
    lam = parse_lambda(args.lam, cfg.n) if args.curve == "xtilde" else None
    curve = make_curve(args.curve, cfg, lam)
    hw = hasse_witt_full(curve, cfg, threads=resolve_threads(args.threads))
    return Result(hw.to_json(), True, f"curve {args.curve}: genus {hw.genus}, {len(hw.blocks)} blocks")


def cmd_iterate(args, cfg) -> Result:
    sol = iterated_solution(args.b, args.m, cfg)
    ok = sol.verify()
    payload = sol.to_json()
    payload["kz_passed"] = ok
    payload["frobenius_span"] = sol.in_frobenius_span()
    return Result(payload, ok, f"iterated b={args.b} m={args.m}: kz {'pass' if ok else 'FAIL'}")


def cmd_fusion(args, cfg) -> Result:
    lam = parse_lambda(args.lam, cfg.n)
    basis = arithmetic_solutions(lam, minimal_exponents(lam, cfg), cfg)
    fused = fusion(basis, parse_partition(args.partition), cfg)
    reports = [verify_kz(v, fused.lam, cfg) for v in fused.vectors]
    ok = all(r.passed for r in reports)
    payload = {
        "lambda": list(fused.lam),
        "M": list(fused.M),
        "rank": module_rank(fused.lam, cfg),
        "solutions": fused.to_json(),
        "kz": [r.to_json() for r in reports],
    }
    return Result(payload, ok, f"fused Λ={list(fused.lam)}: {len(fused)} images, kz {'pass' if ok else 'FAIL'}")


def _load_solutions(path: str) -> tuple[list[PolyVector], list]:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    items = data["result"]["solutions"] if "result" in data else data["solutions"]
    return [PolyVector.from_json(s["vector"]) for s in items], [s["lambda"] for s in items]


def _verify_kz(args, cfg):
    if args.input:
        try:
            vecs, lams = _load_solutions(args.input)
        except (OSError, ValueError, KeyError, TypeError, IndexError, AttributeError) as exc:
            return {"error": f"unreadable input: {exc}"}, False
    else:
        lam = parse_lambda(args.lam, cfg.n)
        basis = arithmetic_solutions(lam, minimal_exponents(lam, cfg), cfg)
        vecs, lams = basis.vectors, [lam] * len(basis)
    reports = [verify_kz(v, lam, cfg) for v, lam in zip(vecs, lams)]
    return {"reports": [r.to_json() for r in reports]}, all(r.passed for r in reports)


def _verify_rank(args, cfg):
    lam = parse_lambda(args.lam, cfg.n)
    rank = module_rank(lam, cfg)
    basis = arithmetic_solutions(lam, minimal_exponents(lam, cfg), cfg)
    cert = independence_certificate(basis)
    ok = rank == len(basis) and cert.passed
    return {"rank": rank, "generators": len(basis), "independence": cert.to_json()}, ok


def _verify_independence(args, cfg):
    lam = parse_lambda(args.lam, cfg.n)
    cert = independence_certificate(arithmetic_solutions(lam, minimal_exponents(lam, cfg), cfg))
    return cert.to_json(), cert.passed


def _verify_decomposition(args, cfg):
    md = args.max_degree if args.max_degree is not None else 3 * cfg.p
    rep = verify_decomposition(cfg, md)
    return rep.to_json(), rep.passed


def _verify_lucas(args, cfg):
    p = cfg.p
    bound = args.max_degree if args.max_degree is not None else 300
    bad = [
        [n, m]
        for n in range(bound + 1)
        for m in range(n + 1)
        if lucas_binom(n, m, p) != math.comb(n, m) % p
    ]
    bad_q = [m for m in range(bound + 1) if binom_neg_inv_q(m, cfg) != reduce_mod_p(binom_neg_inv_q_exact(m, cfg.q), p)]
    return {"bound": bound, "lucas_failures": bad[:20], "neg_inv_q_failures": bad_q[:20]}, not bad and not bad_q


def _verify_regularity(args, cfg):
    lam = parse_lambda(args.lam, cfg.n)
    curve = make_curve("xtilde", cfg, lam)
    rep = regularity_report(cartier_hat(curve, cfg), cfg)
    return rep.to_json(), rep.passed


_VERIFY = {
    "kz": _verify_kz,
    "rank": _verify_rank,
    "independence": _verify_independence,
    "decomposition": _verify_decomposition,
    "lucas": _verify_lucas,
    "regularity": _verify_regularity,
}


def cmd_verify(args, cfg) -> Result:
    payload, ok = _VERIFY[args.check](args, cfg)
    payload = {"check": args.check, "passed": ok, "report": payload}
    return Result(payload, ok, f"verify {args.check}: {'pass' if ok else 'FAIL'}")


def cmd_compare(args, cfg) -> Result:
    md = args.max_degree if args.max_degree is not None else 3 * cfg.p
    rows = []
    for ks in k_tuples(cfg.n - 2, md):
        L = l_coefficient(ks, cfg)
        prof = shift_profile(ks, cfg)
        rows.append({"k": list(ks), "reduced": list(L.reduced), "p_valuation": L.p_valuation, "profile": prof.to_json()})
    nonzero = sum(1 for r in rows if any(r["reduced"]))
    return Result({"max_degree": md, "coefficients": rows}, True, f"{len(rows)} coefficients, {nonzero} nonzero mod p")


COMMANDS = {
    "config": cmd_config,
    "solve": cmd_solve,
    "hasse-witt": cmd_hasse_witt,
    "iterate": cmd_iterate,
    "fusion": cmd_fusion,
    "verify": cmd_verify,
    "compare": cmd_compare,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, required=True, help="characteristic")
    common.add_argument("--q", type=int, required=True, help="exponent of the curve y^q = B(x)")
    common.add_argument("--n", type=int, required=True, help="number of points, n = kq + 1")
    common.add_argument("--lambda", dest="lam", default=None, help="weights a,b,c (default all ones)")
    common.add_argument("--threads", type=int, default=None, help="worker cap (env KZMODP_THREADS)")
    common.add_argument("--out", default=None, help="write JSON here instead of stdout")

    parser = argparse.ArgumentParser(prog="kzmodp", description="Arithmetic KZ solutions and Hasse-Witt matrices over F_p")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("config", parents=[common], help="show derived parameters")
    sp = sub.add_parser("solve", parents=[common], help="arithmetic solutions")
    sp.add_argument("--kind", choices=["I", "J", "K"], default="I")
    sp = sub.add_parser("hasse-witt", parents=[common], help="Hasse-Witt blocks")
    sp.add_argument("--curve", choices=["x", "xtilde", "y"], default="y")
    sp = sub.add_parser("iterate", parents=[common], help="iterated arithmetic solution")
    sp.add_argument("--b", type=int, default=1)
    sp.add_argument("--m", type=int, default=1)
    sp = sub.add_parser("fusion", parents=[common], help="fuse solutions along a partition")
    sp.add_argument("--partition", required=True, help="1-based blocks, e.g. 1,2|3|4")
    sp = sub.add_parser("verify", parents=[common], help="run one verification")
    sp.add_argument("check", choices=CHECKS)
    sp.add_argument("--max-degree", type=int, default=None)
    sp.add_argument("--input", default=None, help="solutions JSON (from solve) for the kz check")
    sp = sub.add_parser("compare", parents=[common], help="Taylor coefficients mod p and shift profiles")
    sp.add_argument("--max-degree", type=int, default=None)
    return parser


def run(argv=None) -> tuple[int, str]:
    """Execute a command; returns (exit code, JSON text)."""
    args = build_parser().parse_args(argv)
    try:
        cfg = make_prime_config(args.p, args.q, args.n)
        result = COMMANDS[args.command](args, cfg)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2, ""
    params = {"p": args.p, "q": args.q, "n": args.n, "lambda": args.lam}
    for name in ("kind", "curve", "b", "m", "partition", "check", "max_degree", "input"):
        if hasattr(args, name):
            params[name] = getattr(args, name)
    manifest = RunManifest(args.command, params)
    manifest.output_hash = hashlib.sha256(_canonical(result.payload).encode()).hexdigest()
    text = _canonical({"manifest": manifest.to_json(), "result": result.payload})
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    print(result.summary, file=sys.stderr)
    return (0 if result.passed else 1), text


def main(argv=None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
