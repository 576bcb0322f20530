"""Truncated series in u^-1 (and in u^-1, v^-1) over an abstract coefficient ring.

A series stores coefficients ``k -> c`` meaning ``c * u^(-k)``.  The window
``(lo, hi)`` records what is known: no term has exponent below ``lo`` and
coefficients are exact for ``k <= hi``.  Exact polynomials use ``hi = inf``.

Coefficients may be ints/Fractions or any ring element supporting ``+ - *``
(Yangian elements, tensors, flag elements, ...).
"""

from __future__ import annotations

import math
import operator
from fractions import Fraction
from math import comb

from .linear import as_exact, is_scalar, is_zero
from .yangian_core import Element, gen

INF = math.inf

__all__ = [
    "INF",
    "Series",
    "BiSeries",
    "NonUnitConstantTerm",
    "gen_series",
    "shift",
    "invert",
    "linear_factor",
    "clear_denominators",
    "series_relation_residual",
    "unit_inverse",
]


class NonUnitConstantTerm(ArithmeticError):
    """The constant coefficient of a series is not invertible."""


def unit_inverse(c):
    """Inverse of a coefficient that is a nonzero rational scalar."""
    if is_scalar(c):
        if c == 0:
            raise NonUnitConstantTerm("constant term is 0")
        return as_exact(Fraction(1) / c)
    val = c.scalar_value() if hasattr(c, "scalar_value") else None
    if val is None or val == 0:
        raise NonUnitConstantTerm(f"constant term {c!r} is not a nonzero scalar")
    return as_exact(Fraction(1) / val)


def _add_into(d, k, c):
    if is_zero(c):
        return
    if k in d:
        v = d[k] + c
        if is_zero(v):
            del d[k]
        else:
            d[k] = v
    else:
        d[k] = c


class Series:
    """Univariate truncated series sum_k c_k u^(-k)."""

    __slots__ = ("coeffs", "lo", "hi")

    def __init__(self, coeffs=None, lo=0, hi=INF):
        if lo > hi:
            raise ValueError(f"empty window ({lo}, {hi})")
        self.lo = lo
        self.hi = hi
        out = {}
        for k, c in (coeffs or {}).items():
            if is_zero(c):
                continue
            if k < lo:
                raise ValueError(f"coefficient at u^-{k} below window lo={lo}")
            if k <= hi:
                out[k] = as_exact(c) if is_scalar(c) else c
        self.coeffs = out

    @classmethod
    def constant(cls, c, hi=INF):
        return cls({0: c}, 0, hi)

    @property
    def window(self):
        return (self.lo, self.hi)

    def __getitem__(self, k):
        if k > self.hi:
            raise IndexError(f"u^-{k} outside window {self.window}")
        return self.coeffs.get(k, 0)

    def truncate(self, hi):
        return Series(self.coeffs, self.lo, min(self.hi, hi))

    def __add__(self, other):
        if not isinstance(other, Series):
            other = Series.constant(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            _add_into(out, k, c)
        return Series(out, min(self.lo, other.lo), min(self.hi, other.hi))

    __radd__ = __add__

    def __neg__(self):
        return Series({k: -c for k, c in self.coeffs.items()}, self.lo, self.hi)

    def __sub__(self, other):
        if not isinstance(other, Series):
            other = Series.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def mul(self, other, op=operator.mul):
        """Cauchy product with an arbitrary bilinear coefficient product ``op``."""
        lo = self.lo + other.lo
        hi = min(self.hi + other.lo, other.hi + self.lo)
        out: dict = {}
        for a, ca in self.coeffs.items():
            for b, cb in other.coeffs.items():
                if a + b <= hi:
                    _add_into(out, a + b, op(ca, cb))
        return Series(out, lo, hi)

    def __mul__(self, other):
        if isinstance(other, Series):
            return self.mul(other)
        return Series({k: c * other for k, c in self.coeffs.items()}, self.lo, self.hi)

    def __rmul__(self, other):
        return Series({k: other * c for k, c in self.coeffs.items()}, self.lo, self.hi)

    def map(self, f):
        return Series({k: f(c) for k, c in self.coeffs.items()}, self.lo, self.hi)

    def is_zero(self) -> bool:
        return not self.coeffs

    def equals(self, other) -> bool:
        """Equality of coefficients on the intersection of the two windows."""
        hi = min(self.hi, other.hi)
        keys = {k for k in self.coeffs if k <= hi} | {k for k in other.coeffs if k <= hi}
        return all(is_zero(self.coeffs.get(k, 0) - other.coeffs.get(k, 0)) for k in keys)

    def nonzero_terms(self):
        return sum(1 if is_scalar(c) else len(c) for c in self.coeffs.values())

    def shift(self, a):
        return shift(self, a)

    def invert(self):
        return invert(self)

    def __repr__(self):
        body = " + ".join(f"({c!r})u^-{k}" for k, c in sorted(self.coeffs.items())) or "0"
        return f"Series[{self.lo},{self.hi}]({body})"


def shift(s: Series, a) -> Series:
    """Substitute u -> u + a, expanding (u+a)^-p by the negative binomial series."""
    a = as_exact(a)
    if a == 0:
        return s
    out: dict = {}
    for p, c in s.coeffs.items():
        if p > 0:
            q = 0
            while p + q <= s.hi:
                _add_into(out, p + q, c * as_exact((-1) ** q * comb(p + q - 1, q) * a ** q))
                q += 1
                if s.hi == INF:
                    raise ValueError("cannot shift a non-polynomial series with infinite window")
        elif p == 0:
            _add_into(out, 0, c)
        else:
            m = -p
            for q in range(m + 1):
                _add_into(out, p + q, c * as_exact(comb(m, q) * a ** q))
    return Series(out, min(s.lo, 0) if s.lo < 0 else s.lo, s.hi)


def invert(s: Series) -> Series:
    """Two-sided inverse of a series whose constant term is a nonzero scalar."""
    if any(k < 0 for k in s.coeffs):
        raise NonUnitConstantTerm("series has a polynomial part")
    inv0 = unit_inverse(s.coeffs.get(0, 0))
    if s.hi == INF:
        raise ValueError("inverse needs a finite truncation window")
    b = {0: inv0}
    for k in range(1, int(s.hi) + 1):
        acc = 0
        for j in range(1, k + 1):
            cj = s.coeffs.get(j)
            bk = b.get(k - j)
            if cj is not None and bk is not None:
                acc = acc + cj * bk
        if not is_zero(acc):
            b[k] = acc * (-inv0)
    return Series(b, 0, s.hi)


_GEN_CACHE: dict = {}


def gen_series(n: int, i: int, j: int, N: int, a=0) -> Series:
    """t_ij(u + a) = delta_ij + sum_{r=1}^N t^(r)_ij (u+a)^-r, window (0, N)."""
    key = (n, i, j, N, as_exact(a))
    s = _GEN_CACHE.get(key)
    if s is None:
        if a:
            s = shift(gen_series(n, i, j, N), a)
        else:
            coeffs = {0: 1} if i == j else {}
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValueError(f"index out of range for n={n}: ({i},{j})")
            for r in range(1, N + 1):
                coeffs[r] = gen(n, r, i, j)
            s = Series(coeffs, 0, N)
        _GEN_CACHE[key] = s
    return s


class BiSeries:
    """Truncated series in u^-1, v^-1; key (a, b) means u^-a v^-b."""

    __slots__ = ("coeffs", "win")

    def __init__(self, coeffs=None, win=(0, INF, 0, INF)):
        lo_u, hi_u, lo_v, hi_v = win
        if lo_u > hi_u or lo_v > hi_v:
            raise ValueError(f"empty window {win}")
        self.win = tuple(win)
        out = {}
        for (a, b), c in (coeffs or {}).items():
            if is_zero(c):
                continue
            if a < lo_u or b < lo_v:
                raise ValueError(f"coefficient {(a, b)} below window {win}")
            if a <= hi_u and b <= hi_v:
                out[(a, b)] = as_exact(c) if is_scalar(c) else c
        self.coeffs = out

    @classmethod
    def from_u(cls, s: Series):
        return cls({(k, 0): c for k, c in s.coeffs.items()}, (s.lo, s.hi, 0, INF))

    @classmethod
    def from_v(cls, s: Series):
        return cls({(0, k): c for k, c in s.coeffs.items()}, (0, INF, s.lo, s.hi))

    @classmethod
    def constant(cls, c):
        return cls({(0, 0): c})

    @property
    def window(self):
        return self.win

    def __add__(self, other):
        if not isinstance(other, BiSeries):
            other = BiSeries.constant(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            _add_into(out, k, c)
        w1, w2 = self.win, other.win
        return BiSeries(out, (min(w1[0], w2[0]), min(w1[1], w2[1]), min(w1[2], w2[2]), min(w1[3], w2[3])))

    __radd__ = __add__

    def __neg__(self):
        return BiSeries({k: -c for k, c in self.coeffs.items()}, self.win)

    def __sub__(self, other):
        if not isinstance(other, BiSeries):
            other = BiSeries.constant(other)
        return self + (-other)

    def mul(self, other, op=operator.mul):
        (lu1, hu1, lv1, hv1), (lu2, hu2, lv2, hv2) = self.win, other.win
        win = (lu1 + lu2, min(hu1 + lu2, hu2 + lu1), lv1 + lv2, min(hv1 + lv2, hv2 + lv1))
        out: dict = {}
        for (a1, b1), c1 in self.coeffs.items():
            for (a2, b2), c2 in other.coeffs.items():
                a, b = a1 + a2, b1 + b2
                if a <= win[1] and b <= win[3]:
                    _add_into(out, (a, b), op(c1, c2))
        return BiSeries(out, win)

    def __mul__(self, other):
        if isinstance(other, BiSeries):
            return self.mul(other)
        return BiSeries({k: c * other for k, c in self.coeffs.items()}, self.win)

    def __rmul__(self, other):
        return BiSeries({k: other * c for k, c in self.coeffs.items()}, self.win)

    def map(self, f):
        return BiSeries({k: f(c) for k, c in self.coeffs.items()}, self.win)

    def is_zero(self) -> bool:
        return not self.coeffs

    def residual_terms(self) -> int:
        return sum(1 if is_scalar(c) else len(c) for c in self.coeffs.values())

    def __repr__(self):
        body = " + ".join(f"({c!r})u^-{a}v^-{b}" for (a, b), c in sorted(self.coeffs.items())) or "0"
        return f"BiSeries{self.win}({body})"


def linear_factor(c) -> BiSeries:
    """The exact polynomial (u - v - c)."""
    c = as_exact(c)
    return BiSeries({(-1, 0): 1, (0, -1): -1, (0, 0): -c}, (-1, INF, -1, INF))


def _poly_product(cs) -> BiSeries:
    out = BiSeries.constant(1)
    for c in cs:
        out = out * linear_factor(c)
    return out


def clear_denominators(lhs: BiSeries, numerators, d: int, e: int) -> BiSeries:
    """Residual of ``lhs = sum_p (-1)^(p-1) p! num_p / prod_{k=1}^p (u-v-e+k)``.

    Both sides are multiplied by prod_{k=1}^d (u-v-e+k); the p-th summand keeps
    prod_{k=p+1}^d (u-v-e+k).  ``numerators[p-1]`` is ``num_p``.  The returned
    BiSeries is LHS - RHS after clearing; its window is shrunk by the
    polynomial degree.
    """
    if len(numerators) != d:
        raise ValueError(f"expected {d} numerators, got {len(numerators)}")
    res = _poly_product([e - k for k in range(1, d + 1)]) * lhs
    for p in range(1, d + 1):
        factor = (-1) ** (p - 1) * math.factorial(p)
        res = res - (_poly_product([e - k for k in range(p + 1, d + 1)]) * numerators[p - 1]) * factor
    return res


def _commutator_uv(x: BiSeries, y: BiSeries) -> BiSeries:
    return x * y - y * x


def series_relation_residual(n, i, j, k, l, N) -> BiSeries:
    """(u-v)[t_ij(u), t_kl(v)] - (t_kj(u) t_il(v) - t_kj(v) t_il(u))."""
    tu = lambda a, b: BiSeries.from_u(gen_series(n, a, b, N))  # noqa: E731
    tv = lambda a, b: BiSeries.from_v(gen_series(n, a, b, N))  # noqa: E731
    lhs = _commutator_uv(tu(i, j), tv(k, l))
    num = tu(k, j) * tv(i, l) - tv(k, j) * tu(i, l)
    return clear_denominators(lhs, [num], 1, 1)
