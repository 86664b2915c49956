"""Taylor coefficients of the distinguished solution in characteristic 0,
their reduction mod p, and the decomposition into iterated arithmetic
solutions."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from .arith import PrimeConfig, base_p_digits, lucas_binom, p_valuation, reduce_mod_p, small_binom
from .cartier import HasseWittBlock, block_coefficient, cartier_block, make_curve
from .kz import SolutionBasis, basis_K, k_term, lambda_vars
from .poly import FpPoly, PolyVector

__all__ = [
    "LCoefficient",
    "ShiftProfile",
    "DecompositionReport",
    "binom_neg_inv_q_exact",
    "l_coefficient",
    "shift_profile",
    "m_tuples",
    "n_term",
    "product_form",
    "k_tuples",
    "verify_decomposition",
]


@lru_cache(maxsize=None)
def _neg_inv_q_table(q: int, upto: int) -> tuple[Fraction, ...]:
    out = [Fraction(1)]
    x = Fraction(-1, q)
    for m in range(upto):
        out.append(out[-1] * (x - m) / (m + 1))
    return tuple(out)


def binom_neg_inv_q_exact(m: int, q: int) -> Fraction:
    """binom(-1/q, m) as an exact rational."""
    size = 64
    while size < m:
        size *= 2
    return _neg_inv_q_table(q, size)[m]


@dataclass(frozen=True)
class LCoefficient:
    index: tuple[int, ...]
    value: tuple[Fraction, ...]
    p_valuation: int
    reduced: tuple[int, ...] | None = None

    def to_json(self) -> dict:
        return {
            "index": list(self.index),
            "value": [str(v) for v in self.value],
            "p_valuation": self.p_valuation,
            "reduced": list(self.reduced) if self.reduced is not None else None,
        }


def l_coefficient(ks: Sequence[int], cfg: PrimeConfig, reduce: bool = True) -> LCoefficient:
    """L_k = (-1)^k binom(-1/q, Σk_i + k) Π binom(-1/q, k_i) times the vector
    (1, -q(Σk_i + k), q k_3 + 1, ..., q k_n + 1)."""
    ks = tuple(int(x) for x in ks)
    if len(ks) != cfg.n - 2 or any(x < 0 for x in ks):
        raise ValueError(f"need {cfg.n - 2} nonnegative indices, got {ks}")
    q, k, p = cfg.q, cfg.k, cfg.p
    total = sum(ks)
    scalar = Fraction((-1) ** k) * binom_neg_inv_q_exact(total + k, q)
    for x in ks:
        scalar *= binom_neg_inv_q_exact(x, q)
    vec = (1, -q * (total + k)) + tuple(q * x + 1 for x in ks)
    value = tuple(scalar * v for v in vec)
    val = min(p_valuation(v, p) for v in value if v != 0)
    red = tuple(reduce_mod_p(v, p) for v in value) if reduce else None
    return LCoefficient(ks, value, val, red)


@dataclass(frozen=True)
class ShiftProfile:
    """Carry profile of Σk_i + k in base p.  ``m`` is (m_0, ..., m_{b+1})."""

    b: int
    m: tuple[int, ...]
    digits: tuple[tuple[int, ...], ...]
    admissible: bool

    def to_json(self) -> dict:
        return {"b": self.b, "m": list(self.m), "digits": [list(d) for d in self.digits], "admissible": self.admissible}


def shift_profile(ks: Sequence[int], cfg: PrimeConfig) -> ShiftProfile:
    p, k = cfg.p, cfg.k
    digs = [base_p_digits(x, p) for x in ks]
    b = max((len(d) - 1 for d in digs if len(d)), default=0)
    digits = tuple(tuple(d[s] for d in digs) for s in range(b + 1))
    m = [k + 1]
    for s in range(b + 1):
        m.append((sum(digits[s]) + m[s] - 1) // p + 1)
    ok = True
    for s in range(b + 1):
        A = cfg.A_s(s)
        if any(x > A for x in digits[s]):
            ok = False
        if sum(digits[s]) + m[s] - 1 - (m[s + 1] - 1) * p > A:
            ok = False
    if m[b + 1] - 1 > cfg.A_s(b + 1):
        ok = False
    return ShiftProfile(b, tuple(m), digits, ok)


def m_tuples(cfg: PrimeConfig, b: int) -> Iterator[tuple[int, ...]]:
    """All (m_0, ..., m_{b+1}) with m_0 = k + 1 and 1 <= m_s <= a_s k."""
    ranges = [range(1, cfg.a_s(s) * cfg.k + 1) for s in range(1, b + 2)]
    for rest in itertools.product(*ranges):
        yield (cfg.k + 1,) + rest


def _check_m(ms, cfg):
    if len(ms) < 2 or ms[0] != cfg.k + 1:
        raise ValueError(f"m-tuple must start with k+1={cfg.k + 1}: {ms}")
    for s, x in enumerate(ms[1:], start=1):
        if not 1 <= x <= cfg.a_s(s) * cfg.k:
            raise ValueError(f"m_{s}={x} outside [1, {cfg.a_s(s) * cfg.k}]")


def _prefactor(ms, cfg) -> int:
    b = len(ms) - 2
    top = ms[b + 1]
    e = (cfg.a_s(b + 1) * cfg.p ** (b + 1) - 1) // cfg.q + top - 1
    c = small_binom(cfg.A_s(b + 1), top - 1, cfg.p)
    return (-c) % cfg.p if e % 2 else c


class _Context:
    """Blocks of curve Y and the K-basis, computed once per config."""

    def __init__(self, cfg: PrimeConfig):
        self.cfg = cfg
        self.curve = make_curve("y", cfg)
        self.blocks: dict[int, HasseWittBlock] = {}
        self.K: SolutionBasis = basis_K(cfg)

    def block(self, a: int) -> HasseWittBlock:
        if a not in self.blocks:
            self.blocks[a] = cartier_block(a, self.curve, self.cfg)
        return self.blocks[a]


def n_term(ms: Sequence[int], cfg: PrimeConfig, max_degree: int, strict_top: bool = True, _ctx: _Context | None = None) -> PolyVector:
    """N_m(λ) truncated to total degree <= max_degree.

    With ``strict_top`` the outermost Hasse-Witt factor (s = b >= 1) loses
    its constant term, so that the top base-p digit of the exponent is
    nonzero; without it the literal product is returned.
    """
    ms = tuple(ms)
    _check_m(ms, cfg)
    ctx = _ctx or _Context(cfg)
    b = len(ms) - 2
    vec = ctx.K.by_m(ms[1]).map(lambda c: c.truncate(max_degree))
    scalar = _prefactor(ms, cfg)
    factor = None
    for s in range(1, b + 1):
        e = ctx.block(cfg.a_s(s)).entry(ms[s], ms[s + 1])
        if strict_top and s == b:
            e = e.without_constant()
        e = e.frobenius(s).truncate(max_degree)
        factor = e if factor is None else (factor * e).truncate(max_degree)
    if factor is not None:
        vec = vec.map(lambda c: (c * factor).truncate(max_degree))
    return vec.scale(scalar)


def product_form(ks: Sequence[int], cfg: PrimeConfig) -> tuple[int, ...]:
    """L_k mod p as the product of closed-form factors along the shift profile
    (zero vector for non-admissible tuples)."""
    prof = shift_profile(ks, cfg)
    if not prof.admissible:
        return (0,) * cfg.n
    c = _prefactor(prof.m, cfg)
    for s in range(1, prof.b + 1):
        c = c * block_coefficient(s, prof.m[s], prof.m[s + 1], prof.digits[s], cfg) % cfg.p
    return tuple(c * v % cfg.p for v in k_term(prof.m[1], prof.digits[0], cfg))


def k_tuples(nvars: int, max_degree: int) -> Iterator[tuple[int, ...]]:
    """Tuples with Σ <= max_degree in graded-lex order."""
    for total in range(max_degree + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), total):
            t = [0] * nvars
            for i in combo:
                t[i] += 1
            yield tuple(t)


@dataclass
class DecompositionReport:
    matched: int = 0
    mismatched: list = field(default_factory=list)
    zero_nonadmissible: int = 0
    admissibility_violations: list = field(default_factory=list)
    support_collisions: list = field(default_factory=list)
    contributing: dict = field(default_factory=dict)
    max_degree: int = 0

    @property
    def passed(self) -> bool:
        return not (self.mismatched or self.support_collisions or self.admissibility_violations)

    def to_json(self) -> dict:
        return {
            "matched": self.matched,
            "mismatched": self.mismatched,
            "zero_nonadmissible": self.zero_nonadmissible,
            "admissibility_violations": self.admissibility_violations,
            "support_collisions": self.support_collisions,
            "contributing_by_b": {str(b): c for b, c in sorted(self.contributing.items())},
            "max_degree": self.max_degree,
            "passed": self.passed,
        }


def verify_decomposition(cfg: PrimeConfig, max_degree: int, strict_top: bool = True) -> DecompositionReport:
    """Compare L mod p with Σ_m N_m coefficientwise up to ``max_degree`` and
    check that distinct N_m have disjoint monomial supports."""
    if max_degree < 0:
        raise ValueError("max_degree must be nonnegative")
    p = cfg.p
    ctx = _Context(cfg)
    rep = DecompositionReport(max_degree=max_degree)
    total: dict[tuple[int, ...], list[int]] = {}
    owner: dict[tuple[int, ...], tuple[int, ...]] = {}
    b = 0
    while b == 0 or p**b <= max_degree:
        count = 0
        for ms in m_tuples(cfg, b):
            vec = n_term(ms, cfg, max_degree, strict_top, ctx)
            mons = vec.monomial_vectors()
            if mons:
                count += 1
            for mon, v in mons.items():
                if mon in owner:
                    rep.support_collisions.append({"monomial": list(mon), "m": [list(owner[mon]), list(ms)]})
                else:
                    owner[mon] = ms
                acc = total.setdefault(mon, [0] * cfg.n)
                for j, x in enumerate(v):
                    acc[j] = (acc[j] + x) % p
        rep.contributing[b] = count
        b += 1
    zero = (0,) * cfg.n
    for ks in k_tuples(cfg.n - 2, max_degree):
        L = l_coefficient(ks, cfg)
        prof = shift_profile(ks, cfg)
        if (L.reduced == zero) == prof.admissible:
            rep.admissibility_violations.append({"k": list(ks), "admissible": prof.admissible})
        if L.reduced == zero and not prof.admissible:
            rep.zero_nonadmissible += 1
        got = tuple(total.get(ks, zero))
        if got == L.reduced:
            rep.matched += 1
        else:
            rep.mismatched.append({"k": list(ks), "L": list(L.reduced), "N": list(got)})
    return rep
