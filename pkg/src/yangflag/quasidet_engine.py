"""Quasideterminants, left quasi-Plücker coordinates and noncommutative elimination.

Everything here is generic over a ring with partial inverses (see ``Ring``).
Three instances are provided: exact rationals, k x k rational matrices (the
evaluation backend for free skew-field identities), and truncated series
with Yangian coefficients.  Matrix indices in the public API are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import flint

from .linear import as_exact, is_scalar
from .series_ring import NonUnitConstantTerm, Series, gen_series, invert

__all__ = [
    "SingularPivot",
    "Ring",
    "FractionRing",
    "QMat",
    "QMatRing",
    "SeriesRing",
    "NCMatrix",
    "nc_inverse",
    "quasidet",
    "quasi_plucker_left",
    "gaussian_eliminate_parabolic",
    "partial_sums",
    "LDUResult",
    "ldu_factor",
    "ldu_factor_yangian",
    "yangian_matrix",
]


class SingularPivot(ArithmeticError):
    """No invertible pivot was available; ``witness`` names where."""

    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class Ring:
    """Interface: zero, one, inverse (raising SingularPivot), is_zero."""

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def inverse(self, x):
        raise NotImplementedError

    def is_zero(self, x) -> bool:
        raise NotImplementedError

    def is_invertible(self, x) -> bool:
        try:
            self.inverse(x)
        except SingularPivot:
            return False
        return True

    def eq(self, x, y) -> bool:
        return self.is_zero(x - y)


class FractionRing(Ring):
    def zero(self):
        return 0

    def one(self):
        return 1

    def inverse(self, x):
        if x == 0:
            raise SingularPivot("zero pivot")
        return as_exact(Fraction(1) / x)

    def is_zero(self, x):
        return x == 0


class QMat:
    """Immutable k x k matrix over Q, backed by FLINT's exact rational matrices."""

    __slots__ = ("k", "_m")

    def __init__(self, rows):
        if isinstance(rows, flint.fmpq_mat):
            self._m = rows
        else:
            rows = [list(r) for r in rows]
            k = len(rows)
            if any(len(r) != k for r in rows):
                raise ValueError("QMat must be square")
            self._m = flint.fmpq_mat(k, k, [_to_fmpq(c) for r in rows for c in r])
        self.k = self._m.nrows()
        if self._m.ncols() != self.k:
            raise ValueError("QMat must be square")

    @classmethod
    def scalar(cls, k, c):
        return cls([[c if i == j else 0 for j in range(k)] for i in range(k)])

    @property
    def rows(self):
        k, e = self.k, [_from_fmpq(c) for c in self._m.entries()]
        return tuple(tuple(e[r * k:(r + 1) * k]) for r in range(k))

    def _coerce(self, other):
        if isinstance(other, QMat):
            if other.k != self.k:
                raise ValueError("size mismatch")
            return other._m
        if is_scalar(other):
            return QMat.scalar(self.k, other)._m
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QMat(self._m + other)

    __radd__ = __add__

    def __neg__(self):
        return QMat(-self._m)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QMat(self._m - other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if is_scalar(other):
            return QMat(self._m * _to_fmpq(other))
        if not isinstance(other, QMat):
            return NotImplemented
        return QMat(self._m * other._m)

    def __rmul__(self, other):
        if is_scalar(other):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._m == other

    __hash__ = None

    def is_zero(self):
        return all(c == 0 for c in self._m.entries())

    def det(self):
        return as_exact(_from_fmpq(self._m.det()))

    def inverse(self):
        if self._m.det() == 0:
            raise SingularPivot("singular rational matrix")
        return QMat(self._m.inv())

    def __repr__(self):
        return "QMat(" + "; ".join(" ".join(str(a) for a in r) for r in self.rows) + ")"


def _to_fmpq(c):
    c = Fraction(c)
    return flint.fmpq(c.numerator, c.denominator)


def _from_fmpq(c):
    return as_exact(Fraction(int(c.p), int(c.q)))


class QMatRing(Ring):
    def __init__(self, k):
        self.k = k

    def zero(self):
        return QMat.scalar(self.k, 0)

    def one(self):
        return QMat.scalar(self.k, 1)

    def inverse(self, x):
        return x.inverse()

    def is_zero(self, x):
        return x.is_zero() if isinstance(x, QMat) else x == 0


class SeriesRing(Ring):
    """Series with window (0, N); units are series with nonzero scalar constant term."""

    def __init__(self, N):
        self.N = N

    def zero(self):
        return Series({}, 0, self.N)

    def one(self):
        return Series({0: 1}, 0, self.N)

    def inverse(self, x):
        try:
            return invert(x)
        except NonUnitConstantTerm as exc:
            raise SingularPivot(str(exc)) from exc

    def is_zero(self, x):
        if is_scalar(x):
            return x == 0
        return x.is_zero()


class NCMatrix:
    """Rectangular matrix over a ``Ring``; entries are ring elements."""

    def __init__(self, entries, ring: Ring):
        self.rows = [list(r) for r in entries]
        self.ring = ring
        self.m = len(self.rows)
        self.n = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.n for r in self.rows):
            raise ValueError("ragged matrix")

    @classmethod
    def identity(cls, size, ring):
        return cls([[ring.one() if i == j else ring.zero() for j in range(size)] for i in range(size)], ring)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i - 1][j - 1]

    def keep(self, I, J):
        """A_{I,J}: rows I and columns J (1-based, in the given order)."""
        return NCMatrix([[self.rows[i - 1][j - 1] for j in J] for i in I], self.ring)

    def delete(self, i, j):
        """A^{ij}: drop row i and column j."""
        return self.keep([r for r in range(1, self.m + 1) if r != i], [c for c in range(1, self.n + 1) if c != j])

    def first_rows(self, J):
        """A_J: the first |J| rows, columns J."""
        return self.keep(range(1, len(J) + 1), J)

    def __mul__(self, other):
        if self.n != other.m:
            raise ValueError("shape mismatch")
        out = []
        for i in range(self.m):
            row = []
            for j in range(other.n):
                acc = self.ring.zero()
                for k in range(self.n):
                    acc = acc + self.rows[i][k] * other.rows[k][j]
                row.append(acc)
            out.append(row)
        return NCMatrix(out, self.ring)

    def __sub__(self, other):
        return NCMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ring)

    def equals(self, other) -> bool:
        return (self.m, self.n) == (other.m, other.n) and all(
            self.ring.eq(a, b) for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))

    def is_identity(self) -> bool:
        return self.m == self.n and self.equals(NCMatrix.identity(self.m, self.ring))


def nc_inverse(A: NCMatrix, swaps: list | None = None) -> NCMatrix:
    """Two-sided inverse by Gauss-Jordan with row exchanges.

    Row exchanges are appended to ``swaps`` (as (row, row) pairs) when given.
    """
    if A.m != A.n:
        raise ValueError("nc_inverse needs a square matrix")
    R = A.ring
    size = A.m
    M = [list(r) + [R.one() if i == j else R.zero() for j in range(size)] for i, r in enumerate(A.rows)]
    for c in range(size):
        p = next((r for r in range(c, size) if R.is_invertible(M[r][c])), None)
        if p is None:
            raise SingularPivot(f"no invertible pivot in column {c + 1}", witness=("column", c + 1))
        if p != c:
            M[c], M[p] = M[p], M[c]
            if swaps is not None:
                swaps.append((c + 1, p + 1))
        inv = R.inverse(M[c][c])
        M[c] = [inv * x for x in M[c]]
        for r in range(size):
            if r != c and not R.is_zero(M[r][c]):
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return NCMatrix([row[size:] for row in M], R)


def quasidet(A: NCMatrix, i: int, j: int):
    """|A|_ij = a_ij - rho_ij (A^{ij})^-1 chi_ji."""
    if A.m != A.n:
        raise ValueError("quasidet needs a square matrix")
    if A.m == 1:
        return A[1, 1]
    inner = nc_inverse(A.delete(i, j))
    rho = [A[i, c] for c in range(1, A.n + 1) if c != j]
    chi = [A[r, j] for r in range(1, A.m + 1) if r != i]
    acc = A.ring.zero()
    for a, x in enumerate(rho):
        for b, y in enumerate(chi):
            acc = acc + x * inner.rows[a][b] * y
    return A[i, j] - acc


def quasi_plucker_left(A: NCMatrix, i: int, j: int, M, s: int):
    """p^M_ij(A) = |A_{[m], iM}|_{s i}^-1 |A_{[m], jM}|_{s j}, m = |M| + 1."""
    M = tuple(M)
    if i in M:
        raise ValueError("need i not in M")
    m = len(M) + 1
    rows = range(1, m + 1)
    left = quasidet(A.keep(rows, (i,) + M), s, 1)
    right = quasidet(A.keep(rows, (j,) + M), s, 1)
    return A.ring.inverse(left) * right


def partial_sums(gamma):
    out, acc = [], 0
    for g in gamma:
        if g <= 0:
            raise ValueError("composition parts must be positive")
        acc += g
        out.append(acc)
    return out


def gaussian_eliminate_parabolic(A: NCMatrix, gamma, pivots: list | None = None) -> NCMatrix:
    """Reduce A by left multiplication with block-lower-triangular matrices.

    Rows of block a come out as [0 | identity of order gamma_a | coordinates].
    Inverted diagonal blocks are appended to ``pivots`` as (block, rows, row exchanges).
    """
    ds = partial_sums(gamma)
    if ds[-1] != A.m or A.m != A.n:
        raise ValueError(f"composition {tuple(gamma)} does not match a {A.m}x{A.n} matrix")
    R = A.ring
    rows = [list(r) for r in A.rows]
    lo = 0
    for a, hi in enumerate(ds):
        block = range(lo, hi)
        for c in range(lo):
            for r in block:
                f = rows[r][c]
                if not R.is_zero(f):
                    rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
        G = NCMatrix([[rows[r][c] for c in block] for r in block], R)
        swaps: list = []
        Ginv = nc_inverse(G, swaps)
        if pivots is not None:
            pivots.append((a + 1, tuple(b + 1 for b in block), tuple(swaps)))
        new = []
        for r in range(len(block)):
            acc = [R.zero()] * A.n
            for k, rk in enumerate(block):
                g = Ginv.rows[r][k]
                acc = [x + g * y for x, y in zip(acc, rows[rk])]
            new.append(acc)
        for r, rk in enumerate(block):
            rows[rk] = new[r]
        lo = hi
    return NCMatrix(rows, R)


@dataclass
class LDUResult:
    L: NCMatrix
    D: NCMatrix
    U: NCMatrix
    pivots: list = field(default_factory=list)
    reduced: NCMatrix | None = None

    def product(self) -> NCMatrix:
        return self.L * self.D * self.U


def ldu_factor(A: NCMatrix) -> LDUResult:
    """A = L D U with principal pivots and no row exchanges.

    ``pivots`` lists (k, D_kk) where D_kk = |A_{[k],[k]}|_kk.
    """
    R = A.ring
    size = A.m
    S = [list(r) for r in A.rows]
    L = NCMatrix.identity(size, R)
    U = NCMatrix.identity(size, R)
    D = NCMatrix([[R.zero()] * size for _ in range(size)], R)
    pivots = []
    for k in range(size):
        piv = S[k][k]
        try:
            inv = R.inverse(piv)
        except SingularPivot as exc:
            raise SingularPivot(f"principal pivot {k + 1} is not invertible", witness=("principal", k + 1)) from exc
        D.rows[k][k] = piv
        pivots.append((k + 1, piv))
        for j in range(k + 1, size):
            U.rows[k][j] = inv * S[k][j]
        for i in range(k + 1, size):
            L.rows[i][k] = S[i][k] * inv
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                S[i][j] = S[i][j] - S[i][k] * inv * S[k][j]
    return LDUResult(L, D, U, pivots)


def yangian_matrix(n, N) -> NCMatrix:
    return NCMatrix([[gen_series(n, i, j, N) for j in range(1, n + 1)] for i in range(1, n + 1)], SeriesRing(N))


def ldu_factor_yangian(n, gamma, N) -> LDUResult:
    """LDU factorization of T(u) inside Y_n[[u^-1]], plus the gamma-reduced form."""
    if sum(gamma) != n:
        raise ValueError(f"composition {tuple(gamma)} does not sum to n={n}")
    T = yangian_matrix(n, N)
    res = ldu_factor(T)
    blocks = []
    res.reduced = gaussian_eliminate_parabolic(T, gamma, blocks)
    res.pivots = [("principal", k, p) for k, p in res.pivots] + [("block",) + b for b in blocks]
    return res
