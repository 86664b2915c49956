"""Cartier operator, Hasse-Witt blocks of superelliptic curves, the map from
differentials to KZ solutions and iterated arithmetic solutions."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .arith import ConfigError, PrimeConfig, eta, small_binom
from .kz import (
    Solution,
    SolutionBasis,
    _product_coefficients,
    basis_I,
    canonical_exponents,
    check_weights,
    lambda_vars,
    taylor_vectors,
    verify_kz,
    z_vars,
)
from .poly import FpPoly, PolyVector

X = "x"
CURVE_KINDS = ("x", "xtilde", "y")

__all__ = [
    "CurveSpec",
    "DifferentialBasis",
    "HasseWittBlock",
    "HasseWittMatrix",
    "CartierHat",
    "IteratedSolution",
    "make_curve",
    "e_vanishing",
    "differential_basis",
    "cartier_block",
    "block_entry_closed_form",
    "block_coefficient",
    "hasse_witt_full",
    "cartier_hat",
    "regularity_report",
    "iterated_solution",
]


@dataclass(frozen=True)
class CurveSpec:
    """y^q = B(x) where B = Π (x - r_j)^{w_j} over the parameter variables."""

    kind: str
    q: int
    params: tuple[str, ...]
    roots: tuple[FpPoly, ...]
    weights: tuple[int, ...]

    @property
    def degree(self) -> int:
        return sum(self.weights)

    def branch_polynomial(self) -> FpPoly:
        vars = (X,) + self.params
        p = self.roots[0].p
        out = FpPoly.one(vars, p)
        x = FpPoly.variable(X, vars, p)
        for r, w in zip(self.roots, self.weights):
            out = out * (x - r.embed(vars)) ** w
        return out


def make_curve(kind: str, cfg: PrimeConfig, lam: Sequence[int] | None = None) -> CurveSpec:
    """Curve X (roots z_i), X̃ (roots z̃_j with multiplicities Λ̃_j) or Y
    (roots 0, 1, λ_3, ..., λ_n)."""
    p, n = cfg.p, cfg.n
    if kind == "x":
        params = z_vars(n)
        roots = tuple(FpPoly.variable(v, params, p) for v in params)
        weights = (1,) * n
    elif kind == "xtilde":
        if lam is None:
            raise ConfigError("curve xtilde needs fused weights")
        weights = check_weights(lam, cfg)
        params = z_vars(len(weights))
        roots = tuple(FpPoly.variable(v, params, p) for v in params)
    elif kind == "y":
        params = lambda_vars(n)
        roots = (FpPoly.zero(params, p), FpPoly.one(params, p)) + tuple(FpPoly.variable(v, params, p) for v in params)
        weights = (1,) * n
    else:
        raise ConfigError(f"unknown curve kind {kind!r}; choose from {CURVE_KINDS}")
    if sum(weights) != n:
        raise ConfigError(f"branch degree {sum(weights)} must equal n={n}")
    return CurveSpec(kind, cfg.q, params, roots, weights)


def e_vanishing(lam: Sequence[int], a: int, q: int) -> tuple[tuple[int, ...], int]:
    """Orders e_j(a) = ⌈(Λ_j a + 1)/q - 1⌉ and their sum."""
    if not 1 <= a <= q - 1:
        raise ValueError(f"a must lie in [1, {q - 1}]")
    e = tuple(math.ceil(Fraction(x * a + 1, q) - 1) for x in lam)
    return e, sum(e)


@dataclass(frozen=True)
class DifferentialBasis:
    """Basis x^{i-1} dx / y^a (i = 1..ak) of the a-eigenspace, with the
    vanishing orders required at each branch point."""

    a: int
    exponents: tuple[int, ...]
    vanishing: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.exponents) - sum(self.vanishing)


def differential_basis(a: int, curve: CurveSpec, cfg: PrimeConfig) -> DifferentialBasis:
    e, _ = e_vanishing(curve.weights, a, cfg.q)
    return DifferentialBasis(a, tuple(range(a * cfg.k)), e)


@dataclass
class HasseWittBlock:
    """Entry (f, h) is ^aI^h_f: coefficient of x^{(η(a)k-h)p+p-1} in
    x^{ak-f} B(x)^{(η(a)p-a)/q}.  Stored untwisted: the Cartier map is
    1/p-semilinear and the twist is applied on use by z -> z^{p^s}."""

    a: int
    eta_a: int
    entries: list[list[FpPoly]]
    semilinear: str = "inverse-frobenius"

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), len(self.entries[0]) if self.entries else 0

    def entry(self, f: int, h: int) -> FpPoly:
        """1-based access ^aI^h_f."""
        return self.entries[f - 1][h - 1]

    def to_json(self) -> dict:
        r, c = self.shape
        return {
            "a": self.a,
            "eta_a": self.eta_a,
            "rows": r,
            "cols": c,
            "entries": [[e.to_json() for e in row] for row in self.entries],
        }


def _block_index(a: int, cfg: PrimeConfig, f: int, h: int) -> int:
    """Power of x to read in B^E once the factor x^{ak-f} is moved across."""
    b = eta(a, cfg)
    return (b * cfg.k - h) * cfg.p + cfg.p - 1 - (a * cfg.k - f)


def cartier_block(a: int, curve: CurveSpec, cfg: PrimeConfig) -> HasseWittBlock:
    if not 1 <= a <= cfg.q - 1:
        raise ValueError(f"a must lie in [1, {cfg.q - 1}]")
    b = eta(a, cfg)
    E = (b * cfg.p - a) // cfg.q
    vars = (X,) + curve.params
    lin = [FpPoly.variable(X, vars, cfg.p) - r.embed(vars) for r in curve.roots]
    factors = [(l, w * E) for l, w in zip(lin, curve.weights)]
    rows, cols = a * cfg.k, b * cfg.k
    wanted = sorted({_block_index(a, cfg, f, h) for f in range(1, rows + 1) for h in range(1, cols + 1)})
    coeffs = _product_coefficients(factors, X, vars, cfg.p, [N for N in wanted if N >= 0])
    zero = FpPoly.zero(curve.params, cfg.p)
    entries = [
        [coeffs.get(_block_index(a, cfg, f, h), zero) for h in range(1, cols + 1)]
        for f in range(1, rows + 1)
    ]
    return HasseWittBlock(a, b, entries)


def block_entry_closed_form(s: int, f: int, h: int, cfg: PrimeConfig) -> FpPoly:
    """^{a_s}K^h_f for curve Y as the explicit binomial sum over ℓ with
    0 <= Σℓ + f - 1 - (h-1)p <= A_s and ℓ_i <= A_s."""
    p, n = cfg.p, cfg.n
    A = cfg.A_s(s)
    lv = lambda_vars(n)
    nl = n - 2
    grid = np.indices((A + 1,) * nl).reshape(nl, -1).T.astype(np.int64) if nl else np.zeros((1, 0), dtype=np.int64)
    top = grid.sum(axis=1) + f - 1 - (h - 1) * p
    mask = (top >= 0) & (top <= A)
    grid, top = grid[mask], top[mask]
    table = np.array([small_binom(A, i, p) for i in range(A + 1)], dtype=np.int64)
    c = table[top]
    for col in range(nl):
        c = c * table[grid[:, col]] % p
    if (A - f + 1 + (h - 1) * p) % 2:
        c = (-c) % p
    return FpPoly(lv, p, grid, c)


def block_coefficient(s: int, f: int, h: int, ell: Sequence[int], cfg: PrimeConfig) -> int:
    """Coefficient of λ^ell in ^{a_s}K^h_f (scalar form of the closed sum)."""
    p, A = cfg.p, cfg.A_s(s)
    top = sum(ell) + f - 1 - (h - 1) * p
    if not 0 <= top <= A or any(not 0 <= x <= A for x in ell):
        return 0
    c = small_binom(A, top, p)
    for x in ell:
        c = c * small_binom(A, x, p) % p
    return (-c) % p if (A - f + 1 + (h - 1) * p) % 2 else c


@dataclass
class HasseWittMatrix:
    """All blocks of one curve.  Rows are labelled (a, f) and columns
    (b, h), both in increasing order; block a sits in block-column η(a)."""

    curve: str
    blocks: dict[int, HasseWittBlock]
    q: int
    k: int

    @property
    def genus(self) -> int:
        return self.k * self.q * (self.q - 1) // 2

    def labels(self) -> list[tuple[int, int]]:
        return [(a, f) for a in range(1, self.q) for f in range(1, a * self.k + 1)]

    def dense(self) -> list[list[FpPoly]]:
        labels = self.labels()
        pos = {lab: i for i, lab in enumerate(labels)}
        some = next(iter(self.blocks.values())).entries[0][0]
        zero = FpPoly.zero(some.vars, some.p)
        out = [[zero] * len(labels) for _ in labels]
        for a, blk in self.blocks.items():
            for f in range(1, a * self.k + 1):
                for h in range(1, blk.eta_a * self.k + 1):
                    out[pos[(a, f)]][pos[(blk.eta_a, h)]] = blk.entry(f, h)
        return out

    def to_json(self) -> dict:
        return {
            "curve": self.curve,
            "genus": self.genus,
            "labels": [list(l) for l in self.labels()],
            "blocks": [self.blocks[a].to_json() for a in sorted(self.blocks)],
        }


def hasse_witt_full(curve: CurveSpec, cfg: PrimeConfig, threads: int = 1) -> HasseWittMatrix:
    alist = list(range(1, cfg.q))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            blocks = list(ex.map(lambda a: cartier_block(a, curve, cfg), alist))
    else:
        blocks = [cartier_block(a, curve, cfg) for a in alist]
    return HasseWittMatrix(curve.kind, dict(zip(alist, blocks)), cfg.q, cfg.k)


@dataclass
class CartierHat:
    """Rows of Ĉ: the vectors P^{(a1 k - m)p + p - 1}(z̃, M̃).

    ``convention="solution"`` labels them m = 1..a1 k (row m is I^m for X);
    ``convention="phi"`` labels P^{mp+p-1} by m = 0..a1 k - 1.
    """

    rows: list[PolyVector]
    labels: list[int]
    convention: str
    lam: tuple[int, ...]
    M: tuple[int, ...]

    def as_basis(self, cfg: PrimeConfig) -> SolutionBasis:
        sols = [Solution(v, "I", m=m) for v, m in zip(self.rows, self.labels)]
        return SolutionBasis(sols, "I", cfg, self.lam, self.M)


def cartier_hat(curve: CurveSpec, cfg: PrimeConfig, M: Sequence[int] | None = None, convention: str = "solution") -> CartierHat:
    if curve.kind == "y":
        raise ConfigError("Ĉ is defined for the z-parameter curves only")
    lam = curve.weights
    M = tuple(M) if M is not None else canonical_exponents(lam, cfg)
    r = cfg.rank
    p = cfg.p
    if convention == "solution":
        labels = list(range(1, r + 1))
        index = {m: (r - m) * p + p - 1 for m in labels}
    elif convention == "phi":
        labels = list(range(0, r))
        index = {m: m * p + p - 1 for m in labels}
    else:
        raise ValueError(f"unknown convention {convention!r}")
    vecs = taylor_vectors(list(curve.roots), M, sorted(set(index.values())))
    return CartierHat([vecs[index[m]] for m in labels], labels, convention, lam, M)


@dataclass
class RegularityReport:
    passed: bool
    orders: tuple[int, ...]
    failures: list[tuple[int, int]]

    def to_json(self) -> dict:
        return {"passed": self.passed, "orders": list(self.orders), "failures": [list(f) for f in self.failures]}


def _divide_linear(coeffs: list[FpPoly], root: FpPoly) -> tuple[list[FpPoly], FpPoly]:
    """Synthetic division of Σ coeffs[i] X^{deg-i} by (X - root)."""
    out = [coeffs[0]]
    for c in coeffs[1:]:
        out.append(c + root * out[-1])
    return out[:-1], out[-1]


def regularity_report(hat: CartierHat, cfg: PrimeConfig) -> RegularityReport:
    """For each coordinate j, the polynomial U_j(X) = Σ_m row_m[j] X^{a1k-m}
    must be divisible by (X - z̃_i^p)^{e_i(a1)} for every i.

    U_j is read in the variable X = x^p because Ĉ is 1/p-semilinear.
    """
    if hat.convention != "solution":
        raise ValueError("regularity is stated for the solution labelling")
    e, _ = e_vanishing(hat.lam, cfg.a1, cfg.q)
    zs = hat.rows[0].vars
    failures = []
    for j in range(len(hat.lam)):
        U = [row[j] for row in hat.rows]
        for i, ei in enumerate(e):
            root = FpPoly.variable(zs[i], zs, cfg.p) ** cfg.p
            cur = U
            for _ in range(ei):
                if len(cur) < 2:
                    failures.append((i + 1, j + 1))
                    break
                cur, rem = _divide_linear(cur, root)
                if not rem.is_zero():
                    failures.append((i + 1, j + 1))
                    break
    return RegularityReport(not failures, e, failures)


@dataclass
class IteratedSolution:
    """^bI^m written as Σ_f coefficients[f] * I^{f} with coefficients in
    F_p[z^p]; ``vector`` is the expanded form when it was affordable."""

    b: int
    m: int
    coefficients: list[FpPoly]
    basis: SolutionBasis
    vector: PolyVector | None = None

    def estimated_terms(self) -> int:
        return sum(c.nterms * g.vector.nterms for c, g in zip(self.coefficients, self.basis))

    def expand(self) -> PolyVector:
        if self.vector is None:
            acc = None
            for c, g in zip(self.coefficients, self.basis):
                if c.is_zero():
                    continue
                term = g.vector.scale(c)
                acc = term if acc is None else acc + term
            self.vector = acc if acc is not None else self.basis[0].vector.scale(0)
        return self.vector

    def in_frobenius_span(self) -> bool:
        p = self.basis.cfg.p
        return all(not (c.exps % p).any() for c in self.coefficients)

    def verify(self, expand_limit: int = 2_000_000) -> bool:
        """KZ check: expanded when small, otherwise through the factored form
        (every generator solves KZ and every coefficient lies in F_p[z^p],
        whose elements have zero derivatives)."""
        cfg = self.basis.cfg
        lam = self.basis.lam
        if self.vector is not None or self.estimated_terms() <= expand_limit:
            return verify_kz(self.expand(), lam, cfg).passed
        return self.in_frobenius_span() and self.basis.kz_passed()

    def to_json(self) -> dict:
        out = {
            "b": self.b,
            "m": self.m,
            "coefficients": [c.to_json() for c in self.coefficients],
        }
        if self.vector is not None:
            out["vector"] = self.vector.to_json()
        return out


def iterated_solution(
    b: int,
    m: int,
    cfg: PrimeConfig,
    blocks: dict[int, HasseWittBlock] | None = None,
    basis: SolutionBasis | None = None,
    expand_limit: int = 2_000_000,
) -> IteratedSolution:
    """^bI^m = Σ ^{a_b}I^m_{m_b}(z^{p^b}) ... ^{a_1}I^{m_2}_{m_1}(z^p) I^{m_1}(z).

    m ranges over 1..a_{b+1} k, the row count of the outermost factor.
    """
    if b < 0:
        raise ValueError("b must be nonnegative")
    top = cfg.a_s(b + 1) * cfg.k
    if not 1 <= m <= top:
        raise ValueError(f"m must lie in [1, {top}] for b={b}")
    basis = basis or basis_I(cfg)
    zs = basis.vectors[0].vars
    p = cfg.p
    r = cfg.rank
    blocks = {} if blocks is None else blocks
    x_curve = make_curve("x", cfg)
    # coeff[f][f1]: coefficient of I^{f1} in V_s[f]
    one, zero = FpPoly.one(zs, p), FpPoly.zero(zs, p)
    coeff = [[one if f == f1 else zero for f1 in range(r)] for f in range(r)]
    for s in range(1, b + 1):
        a = cfg.a_s(s)
        if a not in blocks:
            blocks[a] = cartier_block(a, x_curve, cfg)
        blk = blocks[a]
        rows, cols = blk.shape
        assert rows == len(coeff)
        nxt = []
        for h in range(cols):
            acc = [zero] * r
            for f in range(rows):
                e = blk.entries[f][h]
                if e.is_zero():
                    continue
                tw = e.frobenius(s)
                acc = [x + tw * c for x, c in zip(acc, coeff[f])]
            nxt.append(acc)
        coeff = nxt
    sol = IteratedSolution(b, m, coeff[m - 1], basis)
    if sol.estimated_terms() <= expand_limit:
        sol.expand()
    return sol
