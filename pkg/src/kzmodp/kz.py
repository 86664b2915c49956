"""Polynomial solutions of the KZ system over F_p and their module structure."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .arith import ConfigError, PrimeConfig, lucas_binom, small_binom
from .poly import FpPoly, PolyVector, expand_in_x, linear_shift, substitute

__all__ = [
    "z_vars",
    "lambda_vars",
    "check_weights",
    "minimal_exponents",
    "canonical_exponents",
    "master_polynomial",
    "taylor_vectors",
    "Solution",
    "SolutionBasis",
    "arithmetic_solutions",
    "arithmetic_solution_closed_form",
    "KZReport",
    "verify_kz",
    "module_rank",
    "IndependenceReport",
    "independence_certificate",
    "EmbeddingMatrix",
    "embedding_matrix",
    "fusion",
    "basis_I",
    "basis_J",
    "basis_K",
    "k_term",
    "homogenize",
]

X = "t"


def z_vars(n: int) -> tuple[str, ...]:
    return tuple(f"z{i}" for i in range(1, n + 1))


def lambda_vars(n: int) -> tuple[str, ...]:
    return tuple(f"lam{i}" for i in range(3, n + 1))


def check_weights(lam: Sequence[int], cfg: PrimeConfig) -> tuple[int, ...]:
    lam = tuple(int(x) for x in lam)
    if not lam:
        raise ConfigError("empty weight vector")
    for x in lam:
        if not 1 <= x < cfg.q:
            raise ConfigError(f"weights must satisfy 1 <= Λ_i < q={cfg.q}, got {lam}")
    return lam


def minimal_exponents(lam: Sequence[int], cfg: PrimeConfig) -> tuple[int, ...]:
    """Componentwise-minimal positive M with q*M_i ≡ -Λ_i (mod p)."""
    lam = check_weights(lam, cfg)
    p, qinv = cfg.p, pow(cfg.q, -1, cfg.p)
    return tuple((-x * qinv) % p for x in lam)


def canonical_exponents(lam: Sequence[int], cfg: PrimeConfig) -> tuple[int, ...]:
    """M̃_j = Λ_j (a1 p - 1)/q, the exponents read off the curve equation."""
    lam = check_weights(lam, cfg)
    return tuple(x * cfg.mbar for x in lam)


def _linear(x: str, root: FpPoly, vars) -> FpPoly:
    """x - root over ``vars`` (which contains x)."""
    return FpPoly.variable(x, vars, root.p) - root.embed(vars)


def _factor_product(factors, vars, p) -> FpPoly:
    out = FpPoly.one(vars, p)
    for base, e in factors:
        if e:
            out = out * base**e
    return out


def _product_coefficients(factors, x: str, vars, p, indices) -> dict[int, FpPoly]:
    """Coefficients of x**N (N in indices) in a product of powers of
    polynomials, computed from two half-products."""
    weight = [base.nterms * e for base, e in factors]
    total, acc, cut = sum(weight), 0, len(factors)
    for i, w in enumerate(weight):
        acc += w
        if acc * 2 >= total:
            cut = i + 1
            break
    A = _factor_product(factors[:cut], vars, p)
    B = _factor_product(factors[cut:], vars, p)
    sa, sb = expand_in_x(A, x), expand_in_x(B, x)
    rest = tuple(v for v in vars if v != x)
    out = {}
    for N in indices:
        acc_poly = FpPoly(rest, p)
        for r in range(max(0, N - sb.degree), min(sa.degree, N) + 1):
            ca, cb = sa[r], sb[N - r]
            if ca.nterms and cb.nterms:
                acc_poly = acc_poly + ca * cb
        out[N] = acc_poly
    return out


def taylor_vectors(roots: Sequence[FpPoly], M: Sequence[int], indices: Sequence[int], x: str = X) -> dict[int, PolyVector]:
    """Coefficient vectors of x**N in Π(x - r_i)**M_i * (1/(x - r_1), ..., 1/(x - r_n)).

    Coordinate j is the coefficient of x**N in Π_i (x - r_i)**(M_i - δ_ij).
    """
    rest = roots[0].vars
    p = roots[0].p
    vars = (x,) + rest
    lin = [_linear(x, r, vars) for r in roots]
    coords: dict[int, list[FpPoly]] = {N: [] for N in indices}
    for j in range(len(roots)):
        factors = [(lin[i], M[i] - (i == j)) for i in range(len(roots))]
        got = _product_coefficients(factors, x, vars, p, indices)
        for N in indices:
            coords[N].append(got[N])
    return {N: PolyVector(c) for N, c in coords.items()}


def master_polynomial(M: Sequence[int], cfg: PrimeConfig) -> FpPoly:
    """Π (t - z_i)**M_i fully expanded, over variables (t, z1, ..., zn)."""
    n = len(M)
    vars = (X,) + z_vars(n)
    out = FpPoly.one(vars, cfg.p)
    for i, e in enumerate(M):
        out = out * (FpPoly.variable(X, vars, cfg.p) - FpPoly.variable(f"z{i + 1}", vars, cfg.p)) ** e
    return out


@dataclass
class Solution:
    vector: PolyVector
    kind: str
    m: int | None = None
    l: int | None = None
    degree: int | None = None

    def to_json(self, cfg: PrimeConfig, lam, M) -> dict:
        return {
            "kind": self.kind,
            "p": cfg.p,
            "q": cfg.q,
            "n": cfg.n,
            "lambda": list(lam),
            "M": list(M) if M is not None else None,
            "m": self.m,
            "l": self.l,
            "degree": self.degree,
            "vector": self.vector.to_json(),
        }


@dataclass
class SolutionBasis:
    solutions: list[Solution]
    kind: str
    cfg: PrimeConfig
    lam: tuple[int, ...]
    M: tuple[int, ...] | None = None
    excluded: tuple[int, ...] = ()
    _kz_ok: bool | None = field(default=None, repr=False, compare=False)

    def kz_passed(self) -> bool:
        """Every member passes verify_kz (computed once)."""
        if self._kz_ok is None:
            self._kz_ok = all(verify_kz(v, self.lam, self.cfg).passed for v in self.vectors)
        return self._kz_ok

    def __len__(self):
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)

    def __getitem__(self, i) -> Solution:
        return self.solutions[i]

    @property
    def vectors(self) -> list[PolyVector]:
        return [s.vector for s in self.solutions]

    def by_m(self, m: int) -> PolyVector:
        for s in self.solutions:
            if s.m == m:
                return s.vector
        raise KeyError(m)

    def to_json(self) -> list[dict]:
        return [s.to_json(self.cfg, self.lam, self.M) for s in self.solutions]


def arithmetic_solutions(lam: Sequence[int], M: Sequence[int], cfg: PrimeConfig) -> SolutionBasis:
    """The vectors P^{lp-1}(z, M) for 0 < lp - 1 <= ΣM - 1.

    Labels: ``l`` is the raw index, ``m`` runs the other way (m = 1 is the
    top l).  Zero vectors are dropped and their ``l`` listed in ``excluded``.
    """
    lam = check_weights(lam, cfg)
    M = tuple(int(x) for x in M)
    p, q = cfg.p, cfg.q
    if len(M) != len(lam):
        raise ValueError("Λ and M differ in length")
    for x, m in zip(lam, M):
        if m <= 0 or (q * m + x) % p:
            raise ValueError(f"M={M} does not solve q*M_i ≡ -Λ_i mod p")
    n = len(M)
    zs = z_vars(n)
    roots = [FpPoly.variable(z, zs, p) for z in zs]
    top = sum(M) // p
    ls = list(range(top, 0, -1))
    vecs = taylor_vectors(roots, M, [l * p - 1 for l in ls])
    sols, excluded = [], []
    for idx, l in enumerate(ls):
        v = vecs[l * p - 1]
        if v.is_zero():
            excluded.append(l)
            continue
        sols.append(Solution(v, "I", m=idx + 1, l=l, degree=sum(M) - l * p))
    return SolutionBasis(sols, "I", cfg, lam, M, tuple(excluded))


def basis_I(cfg: PrimeConfig) -> SolutionBasis:
    lam = (1,) * cfg.n
    return arithmetic_solutions(lam, minimal_exponents(lam, cfg), cfg)


def arithmetic_solution_closed_form(M: Sequence[int], l: int, cfg: PrimeConfig) -> PolyVector:
    """P^{lp-1}(z, M) from the explicit binomial formula (enumeration of the
    exponent sets); independent of polynomial multiplication."""
    p = cfg.p
    M = tuple(M)
    n = len(M)
    deg = sum(M) - l * p
    coords = []
    for j in range(n):
        E = [m - (i == j) for i, m in enumerate(M)]
        terms = {}
        if deg >= 0:
            for ell in itertools.product(*(range(e + 1) for e in E)):
                if sum(ell) != deg:
                    continue
                c = (-1) ** deg
                for e, li in zip(E, ell):
                    c = c * lucas_binom(e, li, p) % p
                if c % p:
                    terms[ell] = c
        coords.append(FpPoly.from_dict(terms, z_vars(n), p))
    return PolyVector(coords)


@dataclass
class KZReport:
    passed: bool
    failure: tuple[str, int, int] | None = None
    checked: int = 0

    def to_json(self) -> dict:
        return {"passed": self.passed, "failure": list(self.failure) if self.failure else None, "checked": self.checked}


def verify_kz(sol: PolyVector, lam: Sequence[int], cfg: PrimeConfig, full: bool = False) -> KZReport:
    """Check the KZ differential equations and Σ Λ_i I_i = 0 exactly.

    For i != c the cleared identity for coordinate c shares the factor
    Π_{l != i, c}(z_i - z_l) on both sides; after cancelling it reads
    q (z_i - z_c) ∂_i I_c = Λ_i (I_i - I_c).  Granted those, the identity for
    coordinate i is equivalent to Σ_j ∂_j I_i = 0.  ``full=True`` expands
    the uncancelled identities instead (small cases only).

    ``failure`` is (check, i, coordinate) with 1-based indices.
    """
    lam = tuple(lam)
    n = len(lam)
    if len(sol) != n or len(sol.vars) != n:
        raise ValueError("solution length must match Λ and its variables")
    if sol.p != cfg.p:
        raise ValueError("modulus mismatch")
    zs = sol.vars
    q = cfg.q
    checked = 0
    alg = FpPoly.zero(zs, cfg.p)
    for x, c in zip(lam, sol):
        alg = alg + c.scale(x)
    checked += 1
    if not alg.is_zero():
        return KZReport(False, ("algebraic", 0, 0), checked)
    if full:
        return _verify_kz_full(sol, lam, cfg, checked)
    z = [FpPoly.variable(v, zs, cfg.p) for v in zs]
    for i in range(n):
        for c in range(n):
            if c == i:
                continue
            lhs = (z[i] - z[c]) * sol[c].derivative(zs[i]).scale(q)
            rhs = (sol[i] - sol[c]).scale(lam[i])
            checked += 1
            if not lhs == rhs:
                return KZReport(False, ("differential", i + 1, c + 1), checked)
    for i in range(n):
        total = FpPoly.zero(zs, cfg.p)
        for j in range(n):
            total = total + sol[i].derivative(zs[j])
        checked += 1
        if not total.is_zero():
            return KZReport(False, ("differential", i + 1, i + 1), checked)
    return KZReport(True, None, checked)


def _verify_kz_full(sol, lam, cfg, checked) -> KZReport:
    zs = sol.vars
    n = len(lam)
    p, q = cfg.p, cfg.q
    z = [FpPoly.variable(v, zs, p) for v in zs]

    def prod_except(i, skip):
        out = FpPoly.one(zs, p)
        for l in range(n):
            if l != i and l not in skip:
                out = out * (z[i] - z[l])
        return out

    for i in range(n):
        full_prod = prod_except(i, ())
        lhs = [full_prod * sol[c].derivative(zs[i]).scale(q) for c in range(n)]
        rhs = [FpPoly.zero(zs, p) for _ in range(n)]
        for j in range(n):
            if j == i:
                continue
            w = prod_except(i, (j,))
            # Ω_ij acts on coordinates i and j only
            rhs[i] = rhs[i] + w * (sol[j] - sol[i]).scale(lam[j])
            rhs[j] = rhs[j] + w * (sol[i] - sol[j]).scale(lam[i])
        for c in range(n):
            checked += 1
            if not lhs[c] == rhs[c]:
                return KZReport(False, ("differential", i + 1, c + 1), checked)
    return KZReport(True, None, checked)


def module_rank(lam: Sequence[int], cfg: PrimeConfig) -> int:
    """[Σ M̄_i / p]; when ΣΛ = n it is checked against a1 k - e(a1)."""
    from .cartier import e_vanishing

    lam = check_weights(lam, cfg)
    if sum(lam) >= cfg.p:
        raise ConfigError(f"need p > ΣΛ_i = {sum(lam)}")
    rank = sum(minimal_exponents(lam, cfg)) // cfg.p
    if sum(lam) == cfg.n:
        _, e = e_vanishing(lam, cfg.a1, cfg.q)
        if rank != cfg.a1 * cfg.k - e:
            raise AssertionError(f"rank law violated: {rank} != {cfg.a1 * cfg.k} - {e}")
    return rank


@dataclass
class IndependenceReport:
    passed: bool
    disjoint: bool
    collisions: list[tuple[int, int]]
    rank: int
    expected: int

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "disjoint": self.disjoint,
            "collisions": [list(c) for c in self.collisions],
            "rank": self.rank,
            "expected": self.expected,
        }


def _rank_mod_p(rows: list[list[int]], p: int) -> int:
    rows = [list(r) for r in rows]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] % p:
                f = rows[r][col]
                rows[r] = [(a - f * b) % p for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def independence_certificate(basis: SolutionBasis | Sequence[PolyVector], trials: int = 256, seed: int = 0) -> IndependenceReport:
    """Support-disjointness of the first coordinates reduced mod p, plus the
    rank of the basis specialised at random points of F_p^n."""
    vecs = basis.vectors if isinstance(basis, SolutionBasis) else list(basis)
    p = vecs[0].p
    supports = []
    injective = True
    for v in vecs:
        red = v[0].exps % p
        uniq = {tuple(int(x) for x in row) for row in red}
        injective &= len(uniq) == red.shape[0]
        supports.append(uniq)
    collisions = [
        (a + 1, b + 1)
        for a, b in itertools.combinations(range(len(vecs)), 2)
        if supports[a] & supports[b]
    ]
    disjoint = not collisions and injective
    rng = random.Random(seed)
    zs = vecs[0].vars
    best = 0
    for _ in range(trials):
        pt = {z: rng.randrange(p) for z in zs}
        rows = [[c.evaluate(pt) for c in v] for v in vecs]
        best = max(best, _rank_mod_p(rows, p))
        if best == len(vecs):
            break
    # Disjoint reduced supports already force independence over F_p[z]; the
    # specialised rank is only a lower bound since F_p may be too small.
    return IndependenceReport(disjoint, disjoint, collisions, best, len(vecs))


@dataclass
class EmbeddingMatrix:
    """Rows: P^{l'p-1}(z, M') for l' descending; columns: P^{lp-1}(z, M) for
    l descending.  Entry (l', l) is the coefficient of t^{(l'-l)p} in
    Π (t^p - z_i^p)^{N_i}."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]
    entries: list[list[FpPoly]]
    M_from: tuple[int, ...]
    M_to: tuple[int, ...]

    def is_unit_lower_triangular(self) -> bool:
        k = len(self.cols)
        for r in range(k):
            for c in range(k):
                e = self.entries[r][c]
                if r == c and not e == 1:
                    return False
                if c > r and not e.is_zero():
                    return False
        return True

    def entries_in_frobenius_ring(self) -> bool:
        p = self.entries[0][0].p
        return all(not (e.exps % p).any() for row in self.entries for e in row)

    def apply(self, source: dict[int, PolyVector]) -> dict[int, PolyVector]:
        out = {}
        for r, l2 in enumerate(self.rows):
            acc = None
            for c, l in enumerate(self.cols):
                e = self.entries[r][c]
                if e.is_zero():
                    continue
                term = source[l].scale(e)
                acc = term if acc is None else acc + term
            out[l2] = acc if acc is not None else source[self.cols[0]].scale(0)
        return out

    def __matmul__(self, other: "EmbeddingMatrix") -> "EmbeddingMatrix":
        """self: M' -> M, other: M'' -> M'; returns M'' -> M."""
        if other.cols != self.rows:
            raise ValueError("incompatible embedding matrices")
        entries = []
        for r in range(len(other.rows)):
            row = []
            for c in range(len(self.cols)):
                acc = FpPoly.zero(self.entries[0][0].vars, self.entries[0][0].p)
                for mid in range(len(self.rows)):
                    acc = acc + other.entries[r][mid] * self.entries[mid][c]
                row.append(acc)
            entries.append(row)
        return EmbeddingMatrix(other.rows, self.cols, entries, self.M_from, other.M_to)


def embedding_matrix(M2: Sequence[int], M: Sequence[int], cfg: PrimeConfig) -> EmbeddingMatrix:
    M2, M = tuple(M2), tuple(M)
    p = cfg.p
    if len(M2) != len(M):
        raise ValueError("length mismatch")
    if any(a < b for a, b in zip(M2, M)):
        raise ValueError(f"M'={M2} is not >= M={M}")
    if any((a - b) % p for a, b in zip(M2, M)):
        raise ValueError("M' - M must be a multiple of p componentwise")
    N = [(a - b) // p for a, b in zip(M2, M)]
    n = len(M)
    vars = (X,) + z_vars(n)
    Q = FpPoly.one(vars, p)
    t = FpPoly.variable(X, vars, p)
    for i, e in enumerate(N):
        if e:
            zi = FpPoly.variable(f"z{i + 1}", vars, p)
            Q = Q * (t**p - zi**p) ** e
    series = expand_in_x(Q, X)
    rows = tuple(range(sum(M2) // p, 0, -1))
    cols = tuple(range(sum(M) // p, 0, -1))
    zero = FpPoly.zero(z_vars(n), p)
    entries = []
    for l2 in rows:
        row = []
        for l in cols:
            r = l2 - l
            row.append(series[r * p] if 0 <= r * p <= series.degree else zero)
        entries.append(row)
    return EmbeddingMatrix(rows, cols, entries, M, M2)


def fusion(basis: SolutionBasis, partition: Sequence[Sequence[int]], cfg: PrimeConfig) -> SolutionBasis:
    """Send P^{lp-1}(z, M) to P^{lp-1}(z̃, M̃) by identifying the variables
    inside each block of ``partition`` (0-based index sets)."""
    lam, M = basis.lam, basis.M
    n = len(lam)
    blocks = [tuple(sorted(b)) for b in partition]
    flat = sorted(i for b in blocks for i in b)
    if flat != list(range(n)):
        raise ValueError(f"partition {partition} does not cover 0..{n - 1} exactly once")
    lam_t = tuple(sum(lam[i] for i in b) for b in blocks)
    if any(x >= cfg.q for x in lam_t):
        raise ConfigError(f"fused weights {lam_t} must stay below q={cfg.q}")
    M_t = tuple(sum(M[i] for i in b) for b in blocks) if M is not None else None
    nt = len(blocks)
    zs, zt = z_vars(n), z_vars(nt)
    block_of = {i: j for j, b in enumerate(blocks) for i in b}
    assign = {zs[i]: FpPoly.variable(zt[block_of[i]], zt, cfg.p) for i in range(n)}
    sols = []
    for s in basis.solutions:
        coords = []
        for b in blocks:
            images = [substitute(s.vector[a], assign, zt) for a in b]
            if any(not img == images[0] for img in images[1:]):
                raise AssertionError(f"fused coordinates disagree in block {b}")
            coords.append(images[0])
        v = PolyVector(coords)
        sols.append(Solution(v, s.kind, m=s.m, l=s.l, degree=v.homogeneous_degree()))
    return SolutionBasis(sols, basis.kind, cfg, lam_t, M_t, basis.excluded)


def basis_J(cfg: PrimeConfig, method: str = "combination", I: SolutionBasis | None = None) -> SolutionBasis:
    """J^m for m = 1..a1 k.

    ``combination``: triangular F_p[z^p]-combination of the I^m.
    ``extraction``: Taylor coefficients after the shift x -> x + z1.
    """
    p, r = cfg.p, cfg.rank
    n = cfg.n
    zs = z_vars(n)
    lam = (1,) * n
    Mbar = (cfg.mbar,) * n
    sols = []
    if method == "combination":
        I = I or basis_I(cfg)
        z1 = FpPoly.variable("z1", zs, p)
        for m in range(1, r + 1):
            acc = None
            for l in range(1, m + 1):
                c = lucas_binom(r - m - 1 + l, r - m, p)
                if c == 0:
                    continue
                term = I.by_m(m + 1 - l).scale(z1 ** ((l - 1) * p)).scale(c)
                acc = term if acc is None else acc + term
            deg = cfg.mbar + (m - 1) * p - cfg.k
            sols.append(Solution(acc, "J", m=m, l=r - m + 1, degree=deg))
    elif method == "extraction":
        z = [FpPoly.variable(v, zs, p) for v in zs]
        roots = [FpPoly.zero(zs, p)] + [z[i] - z[0] for i in range(1, n)]
        idx = {m: (r - m) * p + p - 1 for m in range(1, r + 1)}
        vecs = taylor_vectors(roots, Mbar, list(idx.values()))
        for m in range(1, r + 1):
            deg = cfg.mbar + (m - 1) * p - cfg.k
            sols.append(Solution(vecs[idx[m]], "J", m=m, l=r - m + 1, degree=deg))
    else:
        raise ValueError(f"unknown method {method!r}")
    return SolutionBasis(sols, "J", cfg, lam, Mbar)


def k_term(m: int, ell: Sequence[int], cfg: PrimeConfig) -> tuple[int, ...]:
    """Closed-form coefficient vector of λ^ell in K^m (zero vector outside Δ^m)."""
    p, q, k, mb = cfg.p, cfg.q, cfg.k, cfg.mbar
    s = sum(ell)
    top = s + k - (m - 1) * p
    if not 0 <= top <= mb or any(x > mb or x < 0 for x in ell):
        return (0,) * cfg.n
    c = -1 if (mb + (m - 1) * p - k) % 2 else 1
    c = c * small_binom(mb, top, p)
    for x in ell:
        c = c * small_binom(mb, x, p) % p
    vec = (1, -q * (s + k)) + tuple(q * x + 1 for x in ell)
    return tuple(c * v % p for v in vec)


def _k_closed_form(m: int, cfg: PrimeConfig) -> PolyVector:
    p, q, k, mb, n = cfg.p, cfg.q, cfg.k, cfg.mbar, cfg.n
    lv = lambda_vars(n)
    nl = n - 2
    grid = np.array(list(itertools.product(range(mb + 1), repeat=nl)), dtype=np.int64).reshape(-1, nl)
    s = grid.sum(axis=1)
    top = s + k - (m - 1) * p
    mask = (top >= 0) & (top <= mb)
    grid, s, top = grid[mask], s[mask], top[mask]
    table = np.array([small_binom(mb, i, p) for i in range(mb + 1)], dtype=np.int64)
    c = table[top]
    for col in range(nl):
        c = c * table[grid[:, col]] % p
    if (mb + (m - 1) * p - k) % 2:
        c = (-c) % p
    vecs = [np.ones_like(s), -q * (s + k)] + [q * grid[:, col] + 1 for col in range(nl)]
    return PolyVector(FpPoly(lv, p, grid, c * (v % p) % p) for v in vecs)


def basis_K(cfg: PrimeConfig, method: str = "extraction") -> SolutionBasis:
    """K^m(λ) for m = 1..a1 k, over variables lam3..lamn.

    ``extraction``: Taylor coefficients of the master polynomial with roots
    0, 1, λ_3, ..., λ_n.  ``closed_form``: the explicit binomial sum.
    """
    p, r, n = cfg.p, cfg.rank, cfg.n
    lv = lambda_vars(n)
    Mbar = (cfg.mbar,) * n
    sols = []
    if method == "extraction":
        roots = [FpPoly.zero(lv, p), FpPoly.one(lv, p)] + [FpPoly.variable(v, lv, p) for v in lv]
        idx = {m: (r - m) * p + p - 1 for m in range(1, r + 1)}
        vecs = taylor_vectors(roots, Mbar, list(idx.values()))
        for m in range(1, r + 1):
            sols.append(Solution(vecs[idx[m]], "K", m=m, l=r - m + 1, degree=cfg.mbar + (m - 1) * p - cfg.k))
    elif method == "closed_form":
        for m in range(1, r + 1):
            sols.append(Solution(_k_closed_form(m, cfg), "K", m=m, l=r - m + 1, degree=cfg.mbar + (m - 1) * p - cfg.k))
    else:
        raise ValueError(f"unknown method {method!r}")
    return SolutionBasis(sols, "K", cfg, (1,) * n, Mbar)


def homogenize(f: FpPoly, zs: Sequence[str], weight: int) -> FpPoly:
    """(z2 - z1)**weight * f(λ) with λ_i = (z_i - z1)/(z2 - z1).

    ``f`` is over lam3..lamn, matched to z3..zn by position.
    """
    zs = tuple(zs)
    n = len(zs)
    if len(f.vars) != n - 2:
        raise ValueError("λ-polynomial must have n - 2 variables")
    p = f.p
    if f.nterms == 0:
        return FpPoly.zero(zs, p)
    deg = f.exps.sum(axis=1)
    if deg.max() > weight:
        raise ValueError(f"degree {int(deg.max())} exceeds weight {weight}: a denominator would remain")
    exps = np.zeros((f.nterms, n), dtype=np.int64)
    exps[:, 1] = weight - deg
    exps[:, 2:] = f.exps
    g = FpPoly(zs, p, exps, f.coefs)
    for i in range(1, n):
        g = linear_shift(g, zs[i], zs[0], -1)
    return g
