import json
from itertools import product

import pytest

from kzmodp.arith import make_prime_config
from kzmodp.cartier import (
    block_entry_closed_form,
    cartier_block,
    cartier_hat,
    differential_basis,
    e_vanishing,
    hasse_witt_full,
    iterated_solution,
    make_curve,
    regularity_report,
)
from kzmodp.kz import basis_I, homogenize, module_rank, verify_kz, z_vars
from kzmodp.poly import FpPoly, PolyVector

import golden
import oracles


def reduce_dict(d, p):
    return {e: c % p for e, c in d.items() if c % p}


def test_e_vanishing():
    assert e_vanishing((1, 1, 1), 2, 3) == ((0, 0, 0), 0)
    assert e_vanishing((2,), 2, 3) == ((1,), 1)
    for lam in range(1, 7):
        for a in range(1, 7):
            assert e_vanishing((lam,), a, 7)[0][0] == (lam * a) // 7


def test_hasse_witt_golden_y(cfg534):
    Y = make_curve("y", cfg534)
    b1 = cartier_block(1, Y, cfg534)
    b2 = cartier_block(2, Y, cfg534)
    assert b1.entry(1, 1).to_dict() == reduce_dict(golden.HW_1_11, 5)
    assert b1.entry(1, 2).to_dict() == reduce_dict(golden.HW_1_21, 5)
    assert b2.entry(1, 1).to_dict() == reduce_dict(golden.HW_2_11, 5)
    assert b2.entry(2, 1).to_dict() == reduce_dict(golden.HW_2_12, 5)


def test_full_matrix_layout(cfg534):
    hw = hasse_witt_full(make_curve("y", cfg534), cfg534)
    assert hw.genus == 3 and hw.labels() == [(1, 1), (2, 1), (2, 2)]
    dense = [[e.to_dict() for e in row] for row in hw.dense()]
    assert dense[0][0] == {} and dense[1][1:] == [{}, {}] and dense[2][1:] == [{}, {}]
    assert dense[0][1] == reduce_dict(golden.HW_1_11, 5)
    assert dense[0][2] == reduce_dict(golden.HW_1_21, 5)
    assert dense[1][0] == reduce_dict(golden.HW_2_11, 5)
    assert dense[2][0] == {(0, 0): 1}


@pytest.mark.parametrize("pqn", [(5, 3, 4), (7, 3, 4), (7, 5, 6)])
def test_blocks_match_bruteforce(pqn):
    cfg = make_prime_config(*pqn)
    Y = make_curve("y", cfg)
    for a in range(1, cfg.q):
        blk = cartier_block(a, Y, cfg)
        for f in range(1, blk.shape[0] + 1):
            for h in range(1, blk.shape[1] + 1):
                if pqn == (7, 5, 6) and (f, h) != (1, 1):
                    continue
                assert blk.entry(f, h).to_dict() == oracles.hasse_witt_entry_y(a, f, h, cfg)


@pytest.mark.parametrize("pqn", [(5, 3, 4), (7, 3, 4), (7, 5, 6), (11, 3, 7)])
def test_closed_form_entries(pqn):
    cfg = make_prime_config(*pqn)
    Y = make_curve("y", cfg)
    for s in range(cfg.d):
        a = cfg.a[s]
        blk = cartier_block(a, Y, cfg)
        for f in range(1, blk.shape[0] + 1):
            for h in range(1, blk.shape[1] + 1):
                closed = block_entry_closed_form(s, f, h, cfg)
                assert closed == blk.entry(f, h)
                # every summand of the closed sum is nonzero mod p
                A = cfg.A[s]
                count = sum(
                    1
                    for ell in product(range(A + 1), repeat=cfg.n - 2)
                    if 0 <= sum(ell) + f - 1 - (h - 1) * cfg.p <= A
                )
                assert closed.nterms == count


@pytest.mark.parametrize("pqn", [(5, 3, 4), (7, 5, 6), (13, 3, 7)])
def test_degree_law_curve_x(pqn):
    cfg = make_prime_config(*pqn)
    X = make_curve("x", cfg)
    for a in range(1, cfg.q):
        blk = cartier_block(a, X, cfg)
        E = (blk.eta_a * cfg.p - a) // cfg.q
        for f in range(1, blk.shape[0] + 1):
            for h in range(1, blk.shape[1] + 1):
                e = blk.entry(f, h)
                if not e.is_zero():
                    assert {int(d) for d in e.total_degrees()} == {E - (f - 1) + (h - 1) * cfg.p}


def test_y_to_z_transport(cfg534):
    Y = make_curve("y", cfg534)
    zs = z_vars(4)
    for a in (1, 2):
        blk = cartier_block(a, Y, cfg534)
        E = (blk.eta_a * 5 - a) // 3
        for f in range(1, blk.shape[0] + 1):
            for h in range(1, blk.shape[1] + 1):
                w = E + (h - 1) * 5 - (f - 1)
                J = homogenize(blk.entry(f, h), zs, w)
                assert PolyVector([J]).homogeneous_degree() in (w, -1)


def test_threads_do_not_change_output(cfg534):
    X = make_curve("x", cfg534)
    one = json.dumps(hasse_witt_full(X, cfg534, threads=1).to_json(), sort_keys=True)
    two = json.dumps(hasse_witt_full(X, cfg534, threads=2).to_json(), sort_keys=True)
    assert one == two


def test_cartier_hat_rows_are_I_basis(cfg534):
    hat = cartier_hat(make_curve("x", cfg534), cfg534)
    I = basis_I(cfg534)
    assert hat.labels == [1, 2] and len(hat.rows) == cfg534.rank
    assert hat.rows == I.vectors
    phi = cartier_hat(make_curve("x", cfg534), cfg534, convention="phi")
    assert phi.labels == [0, 1]
    assert phi.rows == list(reversed(hat.rows))


def test_regularity_fused():
    cfg = make_prime_config(5, 3, 4)
    curve = make_curve("xtilde", cfg, (2, 1, 1))
    hat = cartier_hat(curve, cfg)
    rep = regularity_report(hat, cfg)
    assert rep.passed and rep.orders == (1, 0, 0)
    for row in hat.rows:
        assert verify_kz(row, (2, 1, 1), cfg).passed
    # a perturbed row breaks divisibility
    bad = hat.rows[0].coords[0] + FpPoly.one(hat.rows[0].vars, 5)
    hat.rows[0] = PolyVector([bad] + list(hat.rows[0].coords[1:]))
    assert not regularity_report(hat, cfg).passed


def test_dimension_matches_rank():
    cfg = make_prime_config(5, 3, 4)
    curve = make_curve("xtilde", cfg, (2, 1, 1))
    assert differential_basis(cfg.a1, curve, cfg).dim == module_rank((2, 1, 1), cfg) == 1
    cfg = make_prime_config(13, 3, 7)
    curve = make_curve("xtilde", cfg, (2, 2, 1, 2))
    assert differential_basis(cfg.a1, curve, cfg).dim == module_rank((2, 2, 1, 2), cfg)


def _iterate_directly(b, cfg):
    """Expanded recursion V_{s+1}[h] = Σ_f block_s[f][h](z^{p^s}) V_s[f]."""
    X = make_curve("x", cfg)
    V = basis_I(cfg).vectors
    for s in range(1, b + 1):
        blk = cartier_block(cfg.a_s(s), X, cfg)
        nxt = []
        for h in range(blk.shape[1]):
            acc = V[0].scale(0)
            for f in range(blk.shape[0]):
                acc = acc + V[f].scale(blk.entries[f][h].frobenius(s))
            nxt.append(acc)
        V = nxt
    return V


@pytest.mark.parametrize("pqn", [(5, 3, 4), (7, 3, 4)])
def test_iterated_solutions(pqn):
    cfg = make_prime_config(*pqn)
    I = basis_I(cfg)
    for m in range(1, cfg.rank + 1):
        assert iterated_solution(0, m, cfg).expand() == I.by_m(m)
    for b in (1, 2):
        direct = _iterate_directly(b, cfg)
        for m in range(1, cfg.a_s(b + 1) * cfg.k + 1):
            sol = iterated_solution(b, m, cfg)
            assert sol.expand() == direct[m - 1]
            assert verify_kz(sol.expand(), (1,) * cfg.n, cfg).passed
            assert sol.in_frobenius_span()


def test_iterated_range(cfg534):
    with pytest.raises(ValueError):
        iterated_solution(1, 2, cfg534)
    with pytest.raises(ValueError):
        iterated_solution(-1, 1, cfg534)


def test_factored_verification_agrees(cfg534):
    sol = iterated_solution(2, 2, cfg534, expand_limit=0)
    assert sol.vector is None
    assert sol.verify(expand_limit=0)
    assert sol.verify()
    assert sol.vector is not None
