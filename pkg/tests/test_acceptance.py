"""Acceptance criteria, one test each.

Every test appends a PASS/FAIL line (with its tolerance and timing) to
conftest.ACCEPTANCE_LINES; the block is printed at the end of the run.
"""
import json
import math
import random
import time
from fractions import Fraction

import pytest

import conftest
import golden
import oracles
from kzmodp.arith import binom_neg_inv_q, binom_rational, lucas_binom, make_prime_config
from kzmodp.cartier import cartier_hat, e_vanishing, iterated_solution, make_curve, regularity_report
from kzmodp.cli import run
from kzmodp.compare import verify_decomposition
from kzmodp.kz import (
    arithmetic_solutions,
    basis_I,
    basis_J,
    basis_K,
    embedding_matrix,
    fusion,
    homogenize,
    independence_certificate,
    minimal_exponents,
    module_rank,
    verify_kz,
    z_vars,
)
from kzmodp.poly import FpPoly, PolyVector

SWEEP = [(5, 3, 4), (7, 3, 4), (7, 5, 6), (11, 3, 7), (13, 3, 7)]
PARTITIONS = {
    4: [[0, 1], [2], [3]],
    6: [[0, 1, 2], [3, 4], [5]],
    7: [[0, 1], [2, 3], [4], [5, 6]],
}
# iteration depth per prime; b = 2 at p >= 11 does not fit in memory
MAX_B = {5: 2, 7: 2, 11: 1, 13: 1}


def record(num, title, passed, elapsed, tolerance, note=""):
    line = f"[{'PASS' if passed else 'FAIL'}] {num}. {title} | {tolerance} | {elapsed:.2f}s"
    if note:
        line += f" | {note}"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)


def monomials(text, m):
    sols = {s["m"]: s for s in json.loads(text)["result"]["solutions"]}
    return PolyVector.from_json(sols[m]["vector"]).monomial_vectors()


def test_c1_golden_K_basis():
    t0 = time.perf_counter()
    code, text = run(["solve", "--kind", "K", "--p", "5", "--q", "3", "--n", "4"])
    K1, K2 = monomials(text, 1), monomials(text, 2)
    elapsed = time.perf_counter() - t0
    k1_ok = K1 == golden.K1
    k2_ok = K2 == golden.K2_PRINTED
    diff = sorted(k for k in set(K2) | set(golden.K2_PRINTED) if K2.get(k) != golden.K2_PRINTED.get(k))
    note = f"K1 {'exact' if k1_ok else 'differs'}; K2 differs at monomials {diff}"
    if not k2_ok:
        note += (
            " (displayed lam3^2 lam4 term has degree 3 < 4, the lower bound for K2;"
            " computed and symmetric value puts (2,0,0,3) on lam3^3 lam4)"
        )
    passed = code == 0 and k1_ok and k2_ok and elapsed < 1
    record(1, "golden K-basis as displayed", passed, elapsed, "exact, <1s", note)
    assert passed, note


def test_c2_golden_hasse_witt():
    t0 = time.perf_counter()
    code, text = run(["hasse-witt", "--curve", "y", "--p", "5", "--q", "3", "--n", "4"])
    res = json.loads(text)["result"]
    elapsed = time.perf_counter() - t0

    def entry(a, f, h):
        blk = next(b for b in res["blocks"] if b["a"] == a)
        return FpPoly.from_json(blk["entries"][f - 1][h - 1]).to_dict()

    def red(d):
        return {e: c % 5 for e, c in d.items() if c % 5}

    checks = {
        "1K1_1": entry(1, 1, 1) == red(golden.HW_1_11),
        "1K2_1": entry(1, 1, 2) == red(golden.HW_1_21),
        "2K1_1": entry(2, 1, 1) == red(golden.HW_2_11),
        "2K1_2": entry(2, 2, 1) == red(golden.HW_2_12),
    }
    nterms = len(entry(1, 1, 1))
    passed = code == 0 and all(checks.values()) and elapsed < 1
    note = f"{checks}; 1K1_1 has {nterms} terms, as displayed (a count of 11 does not match the display)"
    record(2, "golden Hasse-Witt entries", passed, elapsed, "exact, <1s", note)
    assert passed, note


@pytest.fixture(scope="module")
def sweep():
    """Build every solution family once; per-config flags and timings."""
    out = {}
    for pqn in SWEEP:
        p, q, n = pqn
        cfg = make_prime_config(*pqn)
        r = {"time": {}}
        t0 = time.perf_counter()
        I = basis_I(cfg)
        r["I_kz"] = I.kz_passed() and len(I) == cfg.rank
        J = basis_J(cfg, "combination", I)
        r["J_kz"] = J.kz_passed()
        F = fusion(I, PARTITIONS[n], cfg)
        r["F_kz"] = all(verify_kz(v, F.lam, cfg).passed for v in F.vectors)
        blocks = {}
        it_ok, count = True, 0
        for b in range(1, MAX_B[p] + 1):
            for m in range(1, cfg.a_s(b + 1) * cfg.k + 1):
                sol = iterated_solution(b, m, cfg, blocks, I)
                it_ok &= sol.verify()
                count += 1
        r["it_kz"], r["it_count"] = it_ok, count
        r["time"]["kz"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        ones = (1,) * n
        cert = independence_certificate(I)
        r["rank"] = module_rank(ones, cfg) == cfg.a1 * cfg.k == len(I) and cert.passed
        r["time"]["rank"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        J2 = basis_J(cfg, "extraction")
        K = basis_K(cfg, "extraction")
        K2 = basis_K(cfg, "closed_form")
        zs = z_vars(n)
        hom = all(k.vector.map(lambda c, w=k.degree: homogenize(c, zs, w)) == j for k, j in zip(K, J.vectors))
        r["J_routes"] = J.vectors == J2.vectors
        r["K_routes"] = K.vectors == K2.vectors
        r["hom"] = hom
        r["time"]["equiv"] = time.perf_counter() - t0
        out[pqn] = r
    return out


def test_c3_kz_sweep(sweep):
    elapsed = sum(r["time"]["kz"] for r in sweep.values())
    bad = [
        f"{pqn}:{name}"
        for pqn, r in sweep.items()
        for name in ("I_kz", "J_kz", "F_kz", "it_kz")
        if not r[name]
    ]
    iterated = {pqn[0]: r["it_count"] for pqn, r in sweep.items()}
    passed = not bad and elapsed < 120
    note = f"failures {bad}; iterated per p {iterated}, depth {MAX_B}"
    record(3, "KZ sweep I/J/fused/iterated", passed, elapsed, "exact, <120s", note)
    assert passed, note


def test_c4_rank_law(sweep):
    t0 = time.perf_counter()
    bad = [str(pqn) for pqn, r in sweep.items() if not r["rank"]]
    fused = {}
    for pqn, lam in [((5, 3, 4), (2, 1, 1)), ((13, 3, 7), (2, 2, 1, 2))]:
        cfg = make_prime_config(*pqn)
        _, e = e_vanishing(lam, cfg.a1, cfg.q)
        want = cfg.a1 * cfg.k - e
        basis = arithmetic_solutions(lam, minimal_exponents(lam, cfg), cfg)
        ok = module_rank(lam, cfg) == want == len(basis) and independence_certificate(basis).passed
        ok &= basis.kz_passed()
        fused[f"{lam}@{pqn[:2]}"] = (want, ok)
        if not ok:
            bad.append(f"{lam}@{pqn}")
    elapsed = time.perf_counter() - t0 + sum(r["time"]["rank"] for r in sweep.values())
    passed = not bad
    record(4, "rank law (all-ones and fused)", passed, elapsed, "exact", f"fused ranks {fused}; failures {bad}")
    assert passed, bad


def test_c5_congruence_oracles():
    t0 = time.perf_counter()
    bad = []
    for p in (5, 7, 11, 13):
        fact = [math.factorial(i) for i in range(301)]
        for n in range(301):
            for m in range(n + 1):
                if lucas_binom(n, m, p) != (fact[n] // (fact[m] * fact[n - m])) % p:
                    bad.append(("lucas", n, m, p))
    for p, q in ((5, 3), (7, 3), (7, 5), (11, 3)):
        cfg = make_prime_config(p, q, 1)
        x = Fraction(-1, q)
        val = Fraction(1)
        for m in range(501):
            if m:
                val = val * (x - m + 1) / m
            if oracles.valuation(val, p) < 0 or binom_neg_inv_q(m, cfg) != oracles.reduce_fraction(val, p):
                bad.append(("neg_inv_q", m, p, q))
    rng = random.Random(5)
    done = 0
    while done < 50:
        p = rng.choice([5, 7, 11, 13])
        u, v, m = rng.randint(-60, 60), rng.randint(1, 60), rng.randint(0, 600)
        if v % p == 0 or math.gcd(u, v) != 1:
            continue
        want = oracles.reduce_fraction(oracles.binom_generalized(Fraction(u, v), m), p)
        if binom_rational(u, v, m, p) != want:
            bad.append(("rational", u, v, m, p))
        done += 1
    elapsed = time.perf_counter() - t0
    passed = not bad and elapsed < 30
    record(5, "congruence oracles", passed, elapsed, "exact, <30s", f"failures {bad[:5]}")
    assert passed, bad[:5]


def test_c6_basis_equivalences(sweep):
    elapsed = sum(r["time"]["equiv"] for r in sweep.values())
    bad = [f"{pqn}:{name}" for pqn, r in sweep.items() for name in ("J_routes", "K_routes", "hom") if not r[name]]
    passed = not bad
    record(6, "J/K route equivalences + homogenize", passed, elapsed, "exact", f"failures {bad}")
    assert passed, bad


def test_c7_decomposition():
    t0 = time.perf_counter()
    rep = verify_decomposition(make_prime_config(5, 3, 4), 30)
    elapsed = time.perf_counter() - t0
    passed = (
        not rep.mismatched
        and not rep.support_collisions
        and rep.contributing.get(1, 0) >= 1
        and elapsed < 300
    )
    note = f"matched {rep.matched}, mismatched {len(rep.mismatched)}, collisions {len(rep.support_collisions)}, contributing by b {rep.contributing}"
    record(7, "decomposition at (5,3,4), degree <= 30", passed, elapsed, "exact, <300s", note)
    assert passed, note


def test_c8_regularity():
    t0 = time.perf_counter()
    cfg = make_prime_config(5, 3, 4)
    lam = (2, 1, 1)
    hat = cartier_hat(make_curve("xtilde", cfg, lam), cfg)
    rep = regularity_report(hat, cfg)
    e, _ = e_vanishing(lam, cfg.a1, cfg.q)
    passed = rep.passed and rep.orders == e and all(verify_kz(r, lam, cfg).passed for r in hat.rows)
    elapsed = time.perf_counter() - t0
    record(8, "regularity of fused Cartier rows", passed, elapsed, "exact division", f"orders {rep.orders}")
    assert passed, rep.to_json()


def test_c9_triangular_embedding():
    t0 = time.perf_counter()
    cfg = make_prime_config(5, 3, 4)
    Mbar = (3, 3, 3, 3)
    I = {s.l: s.vector for s in arithmetic_solutions((1,) * 4, Mbar, cfg)}
    results = {}
    for M2 in [(8, 3, 3, 3), (8, 8, 3, 3)]:
        E = embedding_matrix(M2, Mbar, cfg)
        image = E.apply(I)
        expand_ok = all(
            [c.to_dict() for c in image[l2]] == oracles.master_taylor(M2, l2 * 5 - 1, 5)
            for l2 in E.rows
        )
        results[M2] = E.is_unit_lower_triangular() and E.entries_in_frobenius_ring() and expand_ok
    elapsed = time.perf_counter() - t0
    passed = all(results.values())
    record(9, "triangular embedding", passed, elapsed, "exact", f"{results}")
    assert passed, results
