#!/usr/bin/env python3
"""Compare Taylor coefficients of the distinguished solution mod p with the
sum of iterated N terms, up to a total degree.

    python3 scripts/decomposition_report.py
    python3 scripts/decomposition_report.py --p 7 --q 3 --n 4 --max-degree 60
    python3 scripts/decomposition_report.py --literal   # keep the top constant term
"""
import argparse
import sys
import time

from kzmodp.arith import make_prime_config
from kzmodp.compare import verify_decomposition


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--p", type=int, default=5)
    parser.add_argument("--q", type=int, default=3)
    parser.add_argument("--n", type=int, default=4)
    parser.add_argument("--max-degree", type=int, default=30)
    parser.add_argument("--literal", action="store_true", help="do not drop the constant term of the outermost factor")
    args = parser.parse_args()

    cfg = make_prime_config(args.p, args.q, args.n)
    t0 = time.perf_counter()
    rep = verify_decomposition(cfg, args.max_degree, strict_top=not args.literal)
    dt = time.perf_counter() - t0
    print(f"(p,q,n)=({cfg.p},{cfg.q},{cfg.n}) degree <= {args.max_degree}  [{dt:.2f}s]")
    print(f"  matched            {rep.matched}")
    print(f"  mismatched         {len(rep.mismatched)}")
    print(f"  support collisions {len(rep.support_collisions)}")
    print(f"  zero, inadmissible {rep.zero_nonadmissible}")
    print(f"  contributing m-tuples by b: {dict(sorted(rep.contributing.items()))}")
    for row in rep.mismatched[:5]:
        print(f"  k={row['k']}: L={row['L']} sum N={row['N']}")
    print("pass" if rep.passed else "FAIL")
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
