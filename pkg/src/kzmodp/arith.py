"""Prime-pair configuration, base-p digits and binomial coefficients mod p."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "ConfigError",
    "PrimeConfig",
    "PDigits",
    "is_prime",
    "multiplicative_order",
    "make_prime_config",
    "eta",
    "base_p_digits",
    "lucas_binom",
    "binom_neg_inv_q",
    "binom_rational",
    "binom_rational_periodic",
    "padic_digits",
    "binom_exact",
    "p_valuation",
    "reduce_mod_p",
]


class ConfigError(ValueError):
    """Invalid (p, q, n) or weight parameters."""


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def multiplicative_order(p: int, m: int) -> int:
    if m == 1:
        return 1
    if math.gcd(p, m) != 1:
        raise ValueError(f"{p} is not invertible modulo {m}")
    x, k = p % m, 1
    while x != 1:
        x = x * p % m
        k += 1
    return k


@dataclass(frozen=True)
class PrimeConfig:
    """The pair (p, q) together with n = kq + 1 and the derived sequences.

    ``a[s]`` is the s-th iterate of division by p modulo q applied to 1,
    for s = 0..d, and ``A`` are the base-p digits of (p**d - 1)/q.
    """

    p: int
    q: int
    n: int
    k: int
    d: int
    a: tuple[int, ...]
    A: tuple[int, ...]

    @property
    def a1(self) -> int:
        return self.a[1]

    @property
    def mbar(self) -> int:
        """(a1 p - 1)/q, the minimal exponent for unit weights."""
        return (self.a1 * self.p - 1) // self.q

    @property
    def rank(self) -> int:
        """a1 k, the rank of the solution module for unit weights."""
        return self.a1 * self.k

    @property
    def genus(self) -> int:
        return self.k * self.q * (self.q - 1) // 2

    def a_s(self, s: int) -> int:
        return self.a[s % self.d]

    def A_s(self, s: int) -> int:
        return self.A[s % self.d]

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "n": self.n,
            "k": self.k,
            "d": self.d,
            "a": list(self.a),
            "A": list(self.A),
        }


def make_prime_config(p: int, q: int, n: int) -> PrimeConfig:
    if not is_prime(p):
        raise ConfigError(f"p not prime: {p}")
    if not is_prime(q):
        raise ConfigError(f"q not prime: {q}")
    if p <= q:
        raise ConfigError(f"need p > q, got p={p}, q={q}")
    if n < 1 or n % q != 1:
        raise ConfigError(f"n ≢ 1 mod q: n={n}, q={q}")
    if p <= n:
        raise ConfigError(f"need p > n, got p={p}, n={n}")
    if p >= 2**31:
        raise ConfigError(f"p must fit in 31 bits, got {p}")
    d = multiplicative_order(p, q)
    inv = pow(p, -1, q)
    a = [1]
    for _ in range(d):
        a.append(a[-1] * inv % q)
    A = []
    for s in range(d):
        num = a[s + 1] * p - a[s]
        assert num % q == 0
        A.append(num // q)
    cfg = PrimeConfig(p=p, q=q, n=n, k=(n - 1) // q, d=d, a=tuple(a), A=tuple(A))
    assert a[d] == a[0] == 1
    assert all(0 < x < p for x in A)
    assert q * sum(x * p**s for s, x in enumerate(A)) == p**d - 1
    return cfg


def eta(a: int, cfg: PrimeConfig) -> int:
    """Division by p modulo q on {1, ..., q-1}."""
    if not 1 <= a <= cfg.q - 1:
        raise ValueError(f"eta argument out of range [1, {cfg.q - 1}]: {a}")
    return a * pow(cfg.p, -1, cfg.q) % cfg.q


@dataclass(frozen=True)
class PDigits:
    """Little-endian base-p digits, trimmed of trailing zeros."""

    digits: tuple[int, ...]
    base: int

    @property
    def value(self) -> int:
        return sum(d * self.base**i for i, d in enumerate(self.digits))

    def __getitem__(self, i: int) -> int:
        return self.digits[i] if 0 <= i < len(self.digits) else 0

    def __len__(self):
        return len(self.digits)


def base_p_digits(m: int, p: int) -> PDigits:
    if m < 0:
        raise ValueError("negative integer has no base-p expansion")
    out = []
    while m:
        m, r = divmod(m, p)
        out.append(r)
    return PDigits(tuple(out), p)


@lru_cache(maxsize=64)
def _binom_table(p: int) -> tuple[tuple[int, ...], ...]:
    rows = [[1]]
    for n in range(1, p):
        prev = rows[-1]
        rows.append([1] + [(prev[i - 1] + prev[i]) % p for i in range(1, n)] + [1])
    return tuple(tuple(r) for r in rows)


def small_binom(n: int, m: int, p: int) -> int:
    """binom(n, m) mod p for 0 <= n < p, zero when m is out of range."""
    if m < 0 or m > n:
        return 0
    if p < 4096:
        return _binom_table(p)[n][m]
    return math.comb(n, m) % p


def lucas_binom(n: int, m: int, p: int) -> int:
    if n < 0 or m < 0:
        raise ValueError("lucas_binom needs nonnegative arguments")
    out = 1
    while m:
        n, ni = divmod(n, p)
        m, mi = divmod(m, p)
        if mi > ni:
            return 0
        out = out * small_binom(ni, mi, p) % p
    return out


def binom_neg_inv_q(m: int, cfg: PrimeConfig) -> int:
    """binom(-1/q, m) mod p as a product over the digits of m against the
    periodic digit sequence of (p**d - 1)/q."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    out = 1
    for i, mi in enumerate(base_p_digits(m, cfg.p).digits):
        out = out * small_binom(cfg.A_s(i), mi, cfg.p) % cfg.p
        if out == 0:
            return 0
    return out


@lru_cache(maxsize=256)
def _padic_cycle(u: int, v: int, p: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(pre-period, period) of the p-adic digits of u/v."""
    vinv = pow(v, -1, p)
    seen: dict[int, int] = {}
    digits: list[int] = []
    num = u
    while num not in seen:
        seen[num] = len(digits)
        a = num * vinv % p
        digits.append(a)
        num = (num - a * v) // p
    start = seen[num]
    return tuple(digits[:start]), tuple(digits[start:])


def padic_digits(u: int, v: int, p: int, length: int) -> tuple[int, ...]:
    """First ``length`` p-adic digits of u/v (v prime to p)."""
    if v % p == 0:
        raise ValueError(f"denominator {v} divisible by p={p}")
    g = math.gcd(u, v)
    u, v = u // g, v // g
    if v < 0:
        u, v = -u, -v
    pre, cyc = _padic_cycle(u, v, p)
    out = list(pre[:length])
    while len(out) < length:
        out.extend(cyc[: length - len(out)])
    return tuple(out)


def binom_rational(u: int, v: int, m: int, p: int) -> int:
    """binom(u/v, m) mod p via the p-adic digits of u/v and the digits of m."""
    if v % p == 0:
        raise ValueError(f"denominator {v} divisible by p={p}")
    if math.gcd(u, v) != 1:
        raise ValueError(f"u/v not in lowest terms: gcd({u}, {v}) != 1")
    if m < 0:
        raise ValueError("m must be nonnegative")
    md = base_p_digits(m, p).digits
    A = padic_digits(u, v, p, len(md))
    out = 1
    for ai, mi in zip(A, md):
        out = out * small_binom(ai, mi, p) % p
        if out == 0:
            return 0
    return out


def binom_rational_periodic(u: int, v: int, m: int, p: int) -> int:
    """binom(u/v, m) mod p for 0 < u, v < p from the finite expansions of
    (p**l + u)/v and (p**r - 1)/v.

    The period r is the multiplicative order of p modulo v; that is the
    exponent for which p**r - 1 is divisible by v.
    """
    if not (0 < u < p and 0 < v < p) or math.gcd(u, v) != 1:
        raise ValueError("need coprime 0 < u, v < p")
    if v == 1:
        # (p**l + u) would carry into digit l; the integer case is plain Lucas
        return lucas_binom(u, m, p)
    r = multiplicative_order(p, v)
    ell = next((l for l in range(1, r + 1) if (p**l + u) % v == 0), None)
    if ell is None:
        raise ValueError(f"no l with p^l + u ≡ 0 mod {v}")
    B = base_p_digits((p**ell + u) // v, p).digits
    B = B + (0,) * (ell - len(B))
    C = base_p_digits((p**r - 1) // v, p).digits
    C = C + (0,) * (r - len(C))
    out = 1
    for i, mi in enumerate(base_p_digits(m, p).digits):
        digit = B[i] if i < ell else C[(i - ell) % r]
        out = out * small_binom(digit, mi, p) % p
        if out == 0:
            return 0
    return out


def binom_exact(x: Fraction, m: int) -> Fraction:
    """Generalised binomial coefficient x(x-1)...(x-m+1)/m! over Q."""
    num, den = Fraction(1), 1
    for ell in range(m):
        num *= x - ell
        den *= ell + 1
    return num / den


def p_valuation(x: Fraction | int, p: int) -> int:
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def reduce_mod_p(x: Fraction | int, p: int) -> int:
    x = Fraction(x)
    if x.denominator % p == 0:
        raise ZeroDivisionError(f"{x} is not p-integral for p={p}")
    return x.numerator * pow(x.denominator, -1, p) % p
