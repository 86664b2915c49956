#!/usr/bin/env python3
"""Build and check every solution family over the standard (p, q, n) sweep.

For each configuration: the I-basis, both J constructions, both K
constructions, the homogenised K-basis, a fused basis and iterated
solutions.  Prints one line per family with timings; exit 1 on any failure.

    python3 scripts/kz_sweep.py
    python3 scripts/kz_sweep.py --configs 5,3,4 7,3,4 --max-b 2
"""
import argparse
import sys
import time

from kzmodp.arith import make_prime_config
from kzmodp.cartier import iterated_solution
from kzmodp.kz import (
    arithmetic_solutions,
    basis_I,
    basis_J,
    basis_K,
    fusion,
    homogenize,
    independence_certificate,
    minimal_exponents,
    module_rank,
    verify_kz,
    z_vars,
)

SWEEP = [(5, 3, 4), (7, 3, 4), (7, 5, 6), (11, 3, 7), (13, 3, 7)]
# one fusion per configuration; blocks are 0-based and keep fused weights < q
PARTITIONS = {
    4: [[0, 1], [2], [3]],
    6: [[0, 1, 2], [3, 4], [5]],
    7: [[0, 1], [2, 3], [4], [5, 6]],
}
# deepest iteration whose F_p[z^p] coefficients stay small enough to build
MAX_B = {5: 2, 7: 2, 11: 1, 13: 1}


def check_config(p, q, n, max_b=None, log=print):
    cfg = make_prime_config(p, q, n)
    ok = True

    def report(name, passed, t0):
        nonlocal ok
        ok &= passed
        log(f"{(p, q, n)} {name:<28} {'pass' if passed else 'FAIL'}  {time.perf_counter() - t0:6.2f}s")

    ones = (1,) * n
    t0 = time.perf_counter()
    I = basis_I(cfg)
    degs = all(s.vector.homogeneous_degree() == cfg.mbar + (s.m - 1) * p - cfg.k for s in I)
    report("I basis + kz + degrees", I.kz_passed() and degs and len(I) == cfg.rank, t0)

    t0 = time.perf_counter()
    cert = independence_certificate(I)
    report("rank law + independence", module_rank(ones, cfg) == cfg.rank == len(I) and cert.passed, t0)

    t0 = time.perf_counter()
    J = basis_J(cfg, "combination", I)
    J2 = basis_J(cfg, "extraction")
    report("J two routes + kz", J.vectors == J2.vectors and J.kz_passed(), t0)

    t0 = time.perf_counter()
    K = basis_K(cfg, "extraction")
    K2 = basis_K(cfg, "closed_form")
    zs = z_vars(n)
    hom = all(
        k.vector.map(lambda c, w=k.degree: homogenize(c, zs, w)) == j
        for k, j in zip(K, J.vectors)
    )
    report("K two routes + homogenize", K.vectors == K2.vectors and hom, t0)

    t0 = time.perf_counter()
    F = fusion(I, PARTITIONS[n], cfg)
    fused_ok = all(verify_kz(v, F.lam, cfg).passed for v in F.vectors)
    Fmin = arithmetic_solutions(F.lam, minimal_exponents(F.lam, cfg), cfg)
    rank_ok = module_rank(F.lam, cfg) == len(Fmin) and independence_certificate(Fmin).passed
    report(f"fusion {F.lam}", fused_ok and rank_ok, t0)

    t0 = time.perf_counter()
    blocks = {}
    top_b = MAX_B.get(p, 1) if max_b is None else max_b
    it_ok = True
    count = 0
    for b in range(1, top_b + 1):
        for m in range(1, cfg.a_s(b + 1) * cfg.k + 1):
            sol = iterated_solution(b, m, cfg, blocks, I)
            it_ok &= sol.verify() and sol.in_frobenius_span()
            count += 1
    report(f"{count} iterated (b<={top_b})", it_ok, t0)
    return ok


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--configs", nargs="*", default=None, help="p,q,n triples")
    parser.add_argument("--max-b", type=int, default=None, help="override iteration depth")
    args = parser.parse_args()
    configs = [tuple(int(x) for x in c.split(",")) for c in args.configs] if args.configs else SWEEP
    t0 = time.perf_counter()
    ok = all([check_config(*c, max_b=args.max_b) for c in configs])
    print(f"total {time.perf_counter() - t0:.1f}s: {'pass' if ok else 'FAIL'}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
