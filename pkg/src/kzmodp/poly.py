"""Sparse multivariate polynomials over F_p (and a small rational companion).

Terms are held as an integer exponent matrix plus a coefficient vector, so
that ring operations run as vectorised numpy kernels.  Polynomials are kept
normalised: exponent rows are unique and sorted lexicographically ascending,
and no stored coefficient is zero.  The graded-lex descending order used in
serialised output is imposed only at export time.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "FpPoly",
    "RatPoly",
    "XSeries",
    "PolyVector",
    "ZERO_DEGREE",
    "poly_add",
    "poly_mul",
    "poly_pow",
    "partial_derivative",
    "expand_in_x",
    "substitute",
    "is_homogeneous",
    "coefficient_of_product",
    "linear_shift",
]

#: value returned by :func:`is_homogeneous` for the zero polynomial
ZERO_DEGREE = -1

MAX_EXPONENT = 2**31 - 1
_KEY_LIMIT = 2**62
_CHUNK = 1 << 22


def _empty(nv: int):
    return np.zeros((0, nv), dtype=np.int64), np.zeros(0, dtype=np.int64)


def _strides(bounds) -> np.ndarray | None:
    """Mixed-radix strides (first variable most significant) or None if the
    packed key would not fit in a signed 64-bit integer."""
    radix = [int(b) + 1 for b in bounds]
    total = 1
    for r in radix:
        total *= r
    if total >= _KEY_LIMIT:
        return None
    strides = [1] * len(radix)
    for v in range(len(radix) - 2, -1, -1):
        strides[v] = strides[v + 1] * radix[v + 1]
    return np.array(strides, dtype=np.int64)


def _reduce_keys(keys, coefs, p):
    order = np.argsort(keys, kind="stable")
    keys = keys[order]
    coefs = coefs[order]
    if keys.size > 1:
        starts = np.flatnonzero(np.r_[True, keys[1:] != keys[:-1]])
        coefs = np.add.reduceat(coefs, starts) % p
        keys = keys[starts]
    else:
        coefs = coefs % p
    mask = coefs != 0
    return keys[mask], coefs[mask]


def _unpack(keys, strides, bounds):
    radix = np.asarray(bounds, dtype=np.int64) + 1
    return (keys[:, None] // strides[None, :]) % radix[None, :]


def _normalize(exps, coefs, p):
    nv = exps.shape[1]
    if exps.shape[0] == 0:
        return _empty(nv)
    coefs = np.asarray(coefs, dtype=np.int64) % p
    if nv == 0:
        c = int(coefs.sum() % p)
        if c == 0:
            return _empty(0)
        return np.zeros((1, 0), dtype=np.int64), np.array([c], dtype=np.int64)
    if exps.min() < 0:
        raise ValueError("negative exponent")
    bounds = exps.max(axis=0)
    if bounds.max() > MAX_EXPONENT:
        raise OverflowError("exponent exceeds 32-bit range")
    strides = _strides(bounds)
    if strides is not None:
        keys, coefs = _reduce_keys(exps @ strides, coefs, p)
        return _unpack(keys, strides, bounds), coefs
    order = np.lexsort(exps.T[::-1])
    exps = exps[order]
    coefs = coefs[order]
    starts = np.flatnonzero(np.r_[True, np.any(exps[1:] != exps[:-1], axis=1)])
    coefs = np.add.reduceat(coefs, starts) % p
    exps = exps[starts]
    mask = coefs != 0
    return exps[mask], coefs[mask]


class FpPoly:
    """Polynomial over F_p in an ordered tuple of named variables."""

    __slots__ = ("vars", "p", "exps", "coefs")
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, vars: Sequence[str], p: int, exps=None, coefs=None, *, normalized=False):
        self.vars = tuple(vars)
        self.p = int(p)
        nv = len(self.vars)
        if exps is None:
            exps, coefs = _empty(nv)
        else:
            exps = np.asarray(exps, dtype=np.int64).reshape(-1, nv)
            coefs = np.asarray(coefs, dtype=np.int64).reshape(-1)
            if exps.shape[0] != coefs.shape[0]:
                raise ValueError("exponent/coefficient length mismatch")
            if not normalized:
                exps, coefs = _normalize(exps, coefs, self.p)
        self.exps = exps
        self.coefs = coefs

    # -- construction -------------------------------------------------
    @classmethod
    def zero(cls, vars, p):
        return cls(vars, p)

    @classmethod
    def constant(cls, c, vars, p):
        nv = len(tuple(vars))
        return cls(vars, p, np.zeros((1, nv), dtype=np.int64), [int(c) % p])

    @classmethod
    def one(cls, vars, p):
        return cls.constant(1, vars, p)

    @classmethod
    def monomial(cls, exp, coef, vars, p):
        return cls(vars, p, np.array([exp], dtype=np.int64), [int(coef) % p])

    @classmethod
    def variable(cls, name, vars, p):
        vars = tuple(vars)
        exp = [0] * len(vars)
        exp[vars.index(name)] = 1
        return cls.monomial(exp, 1, vars, p)

    @classmethod
    def from_dict(cls, terms: Mapping[Sequence[int], int], vars, p):
        vars = tuple(vars)
        if not terms:
            return cls(vars, p)
        exps = np.array([list(e) for e in terms], dtype=np.int64).reshape(-1, len(vars))
        coefs = np.array([int(c) % p for c in terms.values()], dtype=np.int64)
        return cls(vars, p, exps, coefs)

    # -- inspection ---------------------------------------------------
    @property
    def nterms(self) -> int:
        return int(self.coefs.shape[0])

    def is_zero(self) -> bool:
        return self.coefs.shape[0] == 0

    def to_dict(self) -> dict[tuple[int, ...], int]:
        return {tuple(int(x) for x in e): int(c) for e, c in zip(self.exps, self.coefs)}

    def _grlex_order(self):
        if self.nterms == 0:
            return np.zeros(0, dtype=np.int64)
        total = self.exps.sum(axis=1)
        keys = [-self.exps[:, v] for v in range(len(self.vars) - 1, -1, -1)] + [-total]
        return np.lexsort(keys)

    def terms(self) -> list[tuple[tuple[int, ...], int]]:
        """Terms in graded-lex descending order."""
        order = self._grlex_order()
        return [(tuple(int(x) for x in self.exps[i]), int(self.coefs[i])) for i in order]

    def coefficient_of(self, exp: Sequence[int]) -> int:
        if self.nterms == 0:
            return 0
        hit = np.all(self.exps == np.asarray(exp, dtype=np.int64)[None, :], axis=1)
        idx = np.flatnonzero(hit)
        return int(self.coefs[idx[0]]) if idx.size else 0

    def total_degrees(self) -> np.ndarray:
        return self.exps.sum(axis=1)

    def degree(self) -> int:
        """Total degree; ``ZERO_DEGREE`` for the zero polynomial."""
        if self.nterms == 0:
            return ZERO_DEGREE
        return int(self.exps.sum(axis=1).max())

    def degree_in(self, var: str) -> int:
        if self.nterms == 0:
            return ZERO_DEGREE
        return int(self.exps[:, self._index(var)].max())

    def _index(self, var: str) -> int:
        try:
            return self.vars.index(var)
        except ValueError:
            raise KeyError(f"unknown variable {var!r}") from None

    # -- comparison ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = FpPoly.constant(other, self.vars, self.p)
        if not isinstance(other, FpPoly):
            return NotImplemented
        return (
            self.vars == other.vars
            and self.p == other.p
            and np.array_equal(self.exps, other.exps)
            and np.array_equal(self.coefs, other.coefs)
        )

    def _check(self, other: "FpPoly"):
        if self.p != other.p:
            raise ValueError(f"modulus mismatch: {self.p} vs {other.p}")
        if self.vars != other.vars:
            raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        if isinstance(other, int):
            other = FpPoly.constant(other, self.vars, self.p)
        if not isinstance(other, FpPoly):
            return NotImplemented
        self._check(other)
        if other.nterms == 0:
            return self
        if self.nterms == 0:
            return other
        return FpPoly(
            self.vars,
            self.p,
            np.concatenate([self.exps, other.exps]),
            np.concatenate([self.coefs, other.coefs]),
        )

    __radd__ = __add__

    def __neg__(self):
        return FpPoly(self.vars, self.p, self.exps, (-self.coefs) % self.p, normalized=True)

    def __sub__(self, other):
        if isinstance(other, int):
            other = FpPoly.constant(other, self.vars, self.p)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: int) -> "FpPoly":
        c = int(c) % self.p
        if c == 0:
            return FpPoly(self.vars, self.p)
        return FpPoly(self.vars, self.p, self.exps, self.coefs * c % self.p, normalized=True)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.scale(int(other))
        if not isinstance(other, FpPoly):
            return NotImplemented
        self._check(other)
        return _mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return poly_pow(self, e)

    def mul_monomial(self, exp: Sequence[int], coef: int = 1) -> "FpPoly":
        coef = int(coef) % self.p
        if coef == 0 or self.nterms == 0:
            return FpPoly(self.vars, self.p)
        shift = np.asarray(exp, dtype=np.int64)[None, :]
        return FpPoly(self.vars, self.p, self.exps + shift, self.coefs * coef % self.p, normalized=True)

    # -- structural ---------------------------------------------------
    def derivative(self, var: str) -> "FpPoly":
        v = self._index(var)
        e = self.exps[:, v]
        coefs = self.coefs * (e % self.p) % self.p
        mask = coefs != 0
        exps = self.exps[mask].copy()
        exps[:, v] -= 1
        return FpPoly(self.vars, self.p, exps, coefs[mask], normalized=True)

    def coefficient(self, var: str, power: int) -> "FpPoly":
        """Coefficient of ``var**power`` as a polynomial in the other variables."""
        v = self._index(var)
        rest = self.vars[:v] + self.vars[v + 1 :]
        mask = self.exps[:, v] == power
        exps = np.delete(self.exps[mask], v, axis=1)
        return FpPoly(rest, self.p, exps, self.coefs[mask], normalized=True)

    def embed(self, new_vars: Sequence[str]) -> "FpPoly":
        """Re-express over ``new_vars`` (a superset of the variables in use)."""
        new_vars = tuple(new_vars)
        if new_vars == self.vars:
            return self
        exps = np.zeros((self.nterms, len(new_vars)), dtype=np.int64)
        for v, name in enumerate(self.vars):
            col = self.exps[:, v]
            if name in new_vars:
                exps[:, new_vars.index(name)] = col
            elif col.size and col.max() > 0:
                raise ValueError(f"variable {name!r} in use but absent from {new_vars}")
        return FpPoly(new_vars, self.p, exps, self.coefs)

    def frobenius(self, s: int = 1, vars: Iterable[str] | None = None) -> "FpPoly":
        """Substitute v -> v**(p**s) for the chosen variables (default all)."""
        factor = self.p**s
        exps = self.exps.copy()
        cols = range(len(self.vars)) if vars is None else [self._index(v) for v in vars]
        for v in cols:
            exps[:, v] *= factor
        if exps.size and exps.max() > MAX_EXPONENT:
            raise OverflowError("exponent exceeds 32-bit range")
        return FpPoly(self.vars, self.p, exps, self.coefs, normalized=(vars is None))

    def truncate(self, max_degree: int) -> "FpPoly":
        mask = self.exps.sum(axis=1) <= max_degree
        return FpPoly(self.vars, self.p, self.exps[mask], self.coefs[mask], normalized=True)

    def without_constant(self) -> "FpPoly":
        mask = self.exps.sum(axis=1) > 0
        return FpPoly(self.vars, self.p, self.exps[mask], self.coefs[mask], normalized=True)

    def evaluate(self, point: Mapping[str, int]) -> int:
        p = self.p
        if self.nterms == 0:
            return 0
        vals = self.coefs.copy()
        for v, name in enumerate(self.vars):
            col = self.exps[:, v]
            if not col.any():
                continue
            x = int(point[name]) % p
            uniq, inv = np.unique(col, return_inverse=True)
            powers = np.array([pow(x, int(e), p) for e in uniq], dtype=np.int64)
            vals = vals * powers[inv] % p
        return int(vals.sum() % p)

    # -- serialisation --------------------------------------------------
    def to_json(self) -> dict:
        return {
            "vars": list(self.vars),
            "p": self.p,
            "terms": [{"exp": list(e), "coef": c} for e, c in self.terms()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "FpPoly":
        vars = tuple(data["vars"])
        p = int(data["p"])
        terms = data["terms"]
        if not terms:
            return cls(vars, p)
        exps = np.array([t["exp"] for t in terms], dtype=np.int64).reshape(-1, len(vars))
        coefs = np.array([int(t["coef"]) for t in terms], dtype=np.int64)
        return cls(vars, p, exps, coefs)

    def __repr__(self):
        if self.nterms == 0:
            return "0"
        parts = []
        for exp, c in self.terms()[:12]:
            mono = "*".join(
                name if e == 1 else f"{name}^{e}" for name, e in zip(self.vars, exp) if e
            )
            parts.append(f"{c}*{mono}" if mono else str(c))
        more = "" if self.nterms <= 12 else f" + ... ({self.nterms} terms)"
        return " + ".join(parts) + more + f" (mod {self.p})"


def _mul(f: FpPoly, g: FpPoly) -> FpPoly:
    p = f.p
    if f.nterms == 0 or g.nterms == 0:
        return FpPoly(f.vars, p)
    if f.nterms < g.nterms:
        f, g = g, f
    nv = len(f.vars)
    if nv == 0:
        return FpPoly.constant(int(f.coefs[0]) * int(g.coefs[0]), f.vars, p)
    bounds = f.exps.max(axis=0) + g.exps.max(axis=0)
    if bounds.max() > MAX_EXPONENT:
        raise OverflowError("exponent exceeds 32-bit range")
    strides = _strides(bounds)
    step = max(1, _CHUNK // f.nterms)
    if strides is not None:
        kf = f.exps @ strides
        kg = g.exps @ strides
        acc_k, acc_c, size = [], [], 0
        for start in range(0, g.nterms, step):
            kk = (kg[start : start + step, None] + kf[None, :]).ravel()
            cc = (g.coefs[start : start + step, None] * f.coefs[None, :] % p).ravel()
            kk, cc = _reduce_keys(kk, cc, p)
            acc_k.append(kk)
            acc_c.append(cc)
            size += kk.size
            if size > _CHUNK and len(acc_k) > 1:
                kk, cc = _reduce_keys(np.concatenate(acc_k), np.concatenate(acc_c), p)
                acc_k, acc_c, size = [kk], [cc], kk.size
        if len(acc_k) > 1:
            keys, coefs = _reduce_keys(np.concatenate(acc_k), np.concatenate(acc_c), p)
        else:
            keys, coefs = acc_k[0], acc_c[0]
        return FpPoly(f.vars, p, _unpack(keys, strides, bounds), coefs, normalized=True)
    # wide exponents: row-based fallback
    acc_e, acc_c = [], []
    for start in range(0, g.nterms, step):
        ee = (g.exps[start : start + step, None, :] + f.exps[None, :, :]).reshape(-1, nv)
        cc = (g.coefs[start : start + step, None] * f.coefs[None, :] % p).ravel()
        ee, cc = _normalize(ee, cc, p)
        acc_e.append(ee)
        acc_c.append(cc)
    exps, coefs = _normalize(np.concatenate(acc_e), np.concatenate(acc_c), p)
    return FpPoly(f.vars, p, exps, coefs, normalized=True)


def poly_add(f: FpPoly, g: FpPoly) -> FpPoly:
    return f + g


def poly_mul(f: FpPoly, g: FpPoly) -> FpPoly:
    return f * g


def poly_pow(base: FpPoly, e: int) -> FpPoly:
    """Binary exponentiation."""
    if e < 0:
        raise ValueError("negative exponent")
    result = FpPoly.one(base.vars, base.p)
    while e:
        if e & 1:
            result = result * base
        e >>= 1
        if e:
            base = base * base
    return result


def partial_derivative(f: FpPoly, var: str) -> FpPoly:
    return f.derivative(var)


@dataclass(frozen=True)
class XSeries:
    """Dense expansion ``sum_i coeffs[i] * var**i`` with polynomial coefficients."""

    var: str
    coeffs: tuple[FpPoly, ...]
    p: int = 0

    def __post_init__(self):
        if self.coeffs and self.coeffs[-1].is_zero():
            raise ValueError("trailing coefficient must be nonzero")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i: int) -> FpPoly:
        return self.coeffs[i]

    def get(self, i: int, rest_vars, p) -> FpPoly:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return FpPoly(rest_vars, p)

    def assemble(self, vars: Sequence[str]) -> FpPoly:
        """Rebuild ``sum coeffs[i] var**i`` as a polynomial over ``vars``."""
        vars = tuple(vars)
        xi = vars.index(self.var)
        parts_e, parts_c = [], []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            cc = c.embed(tuple(v for v in vars if v != self.var))
            exps = np.insert(cc.exps, xi, i, axis=1)
            parts_e.append(exps)
            parts_c.append(cc.coefs)
        if not parts_e:
            return FpPoly(vars, self.coeffs[0].p if self.coeffs else self.p)
        p = self.coeffs[0].p
        return FpPoly(vars, p, np.concatenate(parts_e), np.concatenate(parts_c))


def expand_in_x(f: FpPoly, x: str) -> XSeries:
    v = f._index(x)
    rest = f.vars[:v] + f.vars[v + 1 :]
    if f.nterms == 0:
        return XSeries(x, (), f.p)
    col = f.exps[:, v]
    deg = int(col.max())
    others = np.delete(f.exps, v, axis=1)
    order = np.argsort(col, kind="stable")
    bounds = np.searchsorted(col[order], np.arange(deg + 2))
    coeffs = []
    for i in range(deg + 1):
        idx = order[bounds[i] : bounds[i + 1]]
        # rows stay lex-sorted within a fixed power of x
        idx = np.sort(idx)
        coeffs.append(FpPoly(rest, f.p, others[idx], f.coefs[idx], normalized=True))
    return XSeries(x, tuple(coeffs), f.p)


def coefficient_of_product(a: FpPoly, b: FpPoly, x: str, index: int) -> FpPoly:
    """Coefficient of ``x**index`` in ``a*b`` without forming the full product."""
    sa = expand_in_x(a, x)
    sb = expand_in_x(b, x)
    v = a._index(x)
    rest = a.vars[:v] + a.vars[v + 1 :]
    out = FpPoly(rest, a.p)
    for r in range(max(0, index - sb.degree), min(sa.degree, index) + 1):
        ca, cb = sa[r], sb[index - r]
        if ca.nterms and cb.nterms:
            out = out + ca * cb
    return out


def substitute(f: FpPoly, assignments: Mapping[str, FpPoly], target_vars: Sequence[str] | None = None) -> FpPoly:
    """Compose ``f`` with ``var -> assignments[var]``.

    Unassigned variables map to the same-named variable of ``target_vars``.
    Monomial assignments are applied as one linear map on exponent rows;
    the remaining ones by Horner's rule.
    """
    for name in assignments:
        f._index(name)
    if target_vars is None:
        values = list(assignments.values())
        target_vars = values[0].vars if values else f.vars
    target_vars = tuple(target_vars)
    p = f.p
    mono, general = {}, {}
    for name, g in assignments.items():
        if g.vars != target_vars:
            g = g.embed(target_vars)
        if g.p != p:
            raise ValueError("modulus mismatch")
        if g.nterms == 1:
            mono[name] = g
        else:
            general[name] = g
    temps = tuple(f"__sub{i}" for i in range(len(general)))
    work_vars = target_vars + temps
    temp_of = dict(zip(general, temps))
    nT = len(work_vars)
    mat = np.zeros((len(f.vars), nT), dtype=np.int64)
    mult = f.coefs.copy()
    zero_rows = np.zeros(f.nterms, dtype=bool)
    for v, name in enumerate(f.vars):
        col = f.exps[:, v]
        if name in mono:
            g = mono[name]
            mat[v, : len(target_vars)] = g.exps[0]
            c = int(g.coefs[0])
            if c != 1 and col.any():
                uniq, inv = np.unique(col, return_inverse=True)
                powers = np.array([pow(c, int(e), p) for e in uniq], dtype=np.int64)
                mult = mult * powers[inv] % p
        elif name in general:
            mat[v, work_vars.index(temp_of[name])] = 1
        elif name in target_vars:
            mat[v, target_vars.index(name)] = 1
        elif col.any():
            raise KeyError(f"variable {name!r} neither assigned nor in target variables")
        if name in assignments and assignments[name].is_zero():
            zero_rows |= col > 0
    keep = ~zero_rows
    work = FpPoly(work_vars, p, f.exps[keep] @ mat, mult[keep])
    for name, temp in temp_of.items():
        g = general[name].embed(work_vars)
        series = expand_in_x(work, temp)
        acc = FpPoly(work_vars, p)
        for i in range(series.degree, -1, -1):
            acc = acc * g
            c = series[i]
            if c.nterms:
                acc = acc + c.embed(work_vars)
        work = acc
    return work.embed(target_vars) if temps else work


def _pascal_mod(nmax: int, p: int) -> np.ndarray:
    table = np.zeros((nmax + 1, nmax + 1), dtype=np.int64)
    table[:, 0] = 1
    for n in range(1, nmax + 1):
        table[n, 1 : n + 1] = (table[n - 1, : n] + table[n - 1, 1 : n + 1]) % p
    return table


def linear_shift(f: FpPoly, var: str, other: str, c: int) -> FpPoly:
    """Substitute ``var -> var + c*other`` by binomial expansion of each term."""
    v, w = f._index(var), f._index(other)
    if v == w:
        raise ValueError("shift variable must differ from the target")
    p = f.p
    c %= p
    if f.nterms == 0 or c == 0:
        return f
    e = f.exps[:, v]
    counts = e + 1
    rows = np.repeat(np.arange(f.nterms), counts)
    offsets = np.cumsum(counts) - counts
    j = np.arange(rows.size) - np.repeat(offsets, counts)
    exps = f.exps[rows].copy()
    exps[:, v] -= j
    exps[:, w] += j
    if exps[:, w].max() > MAX_EXPONENT:
        raise OverflowError("exponent exceeds 32-bit range")
    table = _pascal_mod(int(e.max()), p)
    cpow = np.array([pow(c, int(k), p) for k in range(int(e.max()) + 1)], dtype=np.int64)
    coefs = f.coefs[rows] * table[e[rows], j] % p * cpow[j] % p
    return FpPoly(f.vars, p, exps, coefs)


def is_homogeneous(f: FpPoly) -> int | None:
    """Common total degree of all terms, ``ZERO_DEGREE`` for 0, else None."""
    if f.nterms == 0:
        return ZERO_DEGREE
    deg = f.exps.sum(axis=1)
    return int(deg[0]) if np.all(deg == deg[0]) else None


class PolyVector:
    """An n-vector of polynomials over shared variables."""

    __slots__ = ("coords",)
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, coords: Iterable[FpPoly]):
        coords = tuple(coords)
        if not coords:
            raise ValueError("empty vector")
        v0 = coords[0]
        for c in coords[1:]:
            v0._check(c)
        self.coords = coords

    @property
    def vars(self):
        return self.coords[0].vars

    @property
    def p(self):
        return self.coords[0].p

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)

    def __eq__(self, other):
        if not isinstance(other, PolyVector):
            return NotImplemented
        return len(self) == len(other) and all(a == b for a, b in zip(self.coords, other.coords))

    def __add__(self, other: "PolyVector"):
        return PolyVector(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: "PolyVector"):
        return PolyVector(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self):
        return PolyVector(-a for a in self.coords)

    def scale(self, c) -> "PolyVector":
        """Multiply every coordinate by an integer or a polynomial."""
        return PolyVector(a * c for a in self.coords)

    def map(self, fn) -> "PolyVector":
        return PolyVector(fn(a) for a in self.coords)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    @property
    def nterms(self) -> int:
        return sum(c.nterms for c in self.coords)

    def homogeneous_degree(self) -> int | None:
        """Shared degree of all nonzero coordinates, None if they disagree."""
        degs = {is_homogeneous(c) for c in self.coords if not c.is_zero()}
        if not degs:
            return ZERO_DEGREE
        if None in degs or len(degs) > 1:
            return None
        return degs.pop()

    def monomial_vectors(self) -> dict[tuple[int, ...], tuple[int, ...]]:
        """Map each monomial to its coefficient n-vector."""
        out: dict[tuple[int, ...], list[int]] = {}
        for j, c in enumerate(self.coords):
            for e, v in c.to_dict().items():
                out.setdefault(e, [0] * len(self.coords))[j] = v
        return {e: tuple(v) for e, v in out.items()}

    def to_json(self) -> list:
        return [c.to_json() for c in self.coords]

    @classmethod
    def from_json(cls, data) -> "PolyVector":
        return cls(FpPoly.from_json(c) for c in data)

    def __repr__(self):
        return "PolyVector(" + ", ".join(repr(c) for c in self.coords) + ")"


class RatPoly:
    """Sparse polynomial with exact rational coefficients (small sizes only)."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Sequence[str], terms: Mapping[Sequence[int], Fraction] | None = None):
        self.vars = tuple(vars)
        self.terms: dict[tuple[int, ...], Fraction] = {}
        for e, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                e = tuple(int(x) for x in e)
                if len(e) != len(self.vars):
                    raise ValueError("exponent length mismatch")
                self.terms[e] = self.terms.get(e, Fraction(0)) + c
        self.terms = {e: c for e, c in self.terms.items() if c}

    def __add__(self, other: "RatPoly") -> "RatPoly":
        if self.vars != other.vars:
            raise ValueError("variable mismatch")
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return RatPoly(self.vars, out)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatPoly(self.vars, {e: c * other for e, c in self.terms.items()})
        if self.vars != other.vars:
            raise ValueError("variable mismatch")
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return RatPoly(self.vars, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, RatPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def reduce(self, p: int) -> FpPoly:
        """Reduce coefficients mod p; denominators must be prime to p."""
        out = {}
        for e, c in self.terms.items():
            if c.denominator % p == 0:
                raise ZeroDivisionError(f"coefficient {c} has denominator divisible by {p}")
            out[e] = c.numerator * pow(c.denominator, -1, p) % p
        return FpPoly.from_dict(out, self.vars, p)

    def to_json(self) -> dict:
        order = sorted(self.terms, key=lambda e: (-sum(e), tuple(-x for x in e)))
        return {
            "vars": list(self.vars),
            "terms": [{"exp": list(e), "coef": str(self.terms[e])} for e in order],
        }
