#!/usr/bin/env python3
"""Print the Hasse-Witt blocks of a superelliptic curve family.

Curve Y (roots 0, 1, lam3..lamn) is the default; --curve x uses the
roots z1..zn.  Entries are shown as polynomials over F_p.

    python3 scripts/hasse_witt_example.py
    python3 scripts/hasse_witt_example.py --p 7 --q 3 --n 4 --curve x
"""
import argparse

from kzmodp.arith import make_prime_config
from kzmodp.cartier import hasse_witt_full, make_curve


def show(poly):
    if poly.is_zero():
        return "0"
    out = []
    for exp, c in poly.terms():
        mono = "*".join(f"{v}^{e}" if e > 1 else v for v, e in zip(poly.vars, exp) if e)
        out.append(f"{c}*{mono}" if mono else str(c))
    return " + ".join(out)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--p", type=int, default=5)
    parser.add_argument("--q", type=int, default=3)
    parser.add_argument("--n", type=int, default=4)
    parser.add_argument("--curve", choices=["x", "y"], default="y")
    args = parser.parse_args()

    cfg = make_prime_config(args.p, args.q, args.n)
    hw = hasse_witt_full(make_curve(args.curve, cfg), cfg)
    print(f"curve {args.curve} over F_{cfg.p}: genus {hw.genus}, eigenspaces a = 1..{cfg.q - 1}")
    for a in sorted(hw.blocks):
        blk = hw.blocks[a]
        rows, cols = blk.shape
        print(f"\nblock a={a} -> eta(a)={blk.eta_a}  ({rows} x {cols})")
        for f in range(1, rows + 1):
            for h in range(1, cols + 1):
                print(f"  ^{a}K^{h}_{f} = {show(blk.entry(f, h))}")


if __name__ == "__main__":
    main()
