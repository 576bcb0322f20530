"""Free skew-field identities checked by evaluation at random matrix points.

The generic entries a_ij are replaced by random invertible k x k rational
matrices and each identity becomes an exact matrix equation.  Identities of
the free skew field hold wherever they are defined, so a pass here is strong
evidence and a fail is a definite counterexample.  With k = 1 the same code
doubles as a commutative oracle.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .linear import is_scalar
from .minor_calculus import inversion_sign
from .quasidet_engine import (
    FractionRing,
    NCMatrix,
    QMat,
    QMatRing,
    SingularPivot,
    gaussian_eliminate_parabolic,
    nc_inverse,
    partial_sums,
    quasi_plucker_left,
    quasidet,
)
from .report import IdentityReport, ResourceGuard, residual_summary, stopwatch

__all__ = [
    "ENTRY_RANGE",
    "EPISTEMIC",
    "MatrixPoint",
    "ParabolicSample",
    "sample_point",
    "sample_parabolic",
    "qp",
    "reduced_form_3x3_chain",
    "check_on_matrix",
    "check_skewfield_identity",
    "commutative_oracle",
    "SKEW_FAMILIES",
    "ORACLE_FAMILIES",
    "enumerate_skew_params",
    "enumerate_oracle_params",
]

ENTRY_RANGE = (-9, 9)
RETRY_BUDGET = 50
EPISTEMIC = "evaluation at a random matrix point: pass is evidence, fail is a counterexample"


@dataclass
class MatrixPoint:
    n: int
    k: int
    seed: int
    assignment: dict = field(repr=False)

    def matrix(self) -> NCMatrix:
        rows = [[self.assignment[i, j] for j in range(1, self.n + 1)] for i in range(1, self.n + 1)]
        return NCMatrix(rows, QMatRing(self.k))


@dataclass
class ParabolicSample:
    gamma: tuple
    g: NCMatrix


def _random_qmat(rng, k):
    lo, hi = ENTRY_RANGE
    return QMat([[rng.randint(lo, hi) for _ in range(k)] for _ in range(k)])


def _invertible_qmat(rng, k):
    for _ in range(RETRY_BUDGET):
        m = _random_qmat(rng, k)
        if m.det() != 0:
            return m
    raise SingularPivot("retry budget exhausted drawing an invertible block")


def sample_point(n, k, seed) -> MatrixPoint:
    """Deterministic in (n, k, seed); every block is an invertible k x k matrix."""
    if k < 1 or n < 1:
        raise ValueError("need n >= 1 and k >= 1")
    rng = random.Random(f"point:{n}:{k}:{seed}")
    assignment = {(i, j): _invertible_qmat(rng, k) for i in range(1, n + 1) for j in range(1, n + 1)}
    return MatrixPoint(n, k, seed, assignment)


def sample_parabolic(gamma, k, rng) -> ParabolicSample:
    """Block-lower-triangular g in P_gamma with invertible diagonal blocks."""
    ring = QMatRing(k)
    n = sum(gamma)
    ds = partial_sums(gamma)
    starts = [0] + ds[:-1]
    block_of = [a for a, g in enumerate(gamma) for _ in range(g)]
    for _ in range(RETRY_BUDGET):
        rows = [[_random_qmat(rng, k) if block_of[j] <= block_of[i] else ring.zero() for j in range(n)]
                for i in range(n)]
        g = NCMatrix(rows, ring)
        try:
            for lo, hi in zip(starts, ds):
                nc_inverse(g.keep(range(lo + 1, hi + 1), range(lo + 1, hi + 1)))
        except SingularPivot:
            continue
        return ParabolicSample(tuple(gamma), g)
    raise SingularPivot("retry budget exhausted drawing a parabolic sample")


def qp(A: NCMatrix, i, j, M, s=None):
    """Left quasi-Plücker coordinate; without ``s`` the first defined row choice is used."""
    M = tuple(M)
    m = len(M) + 1
    if s is not None:
        return quasi_plucker_left(A, i, j, M, s)
    order = ([i] if i <= m else []) + [r for r in range(1, m + 1) if r != i]
    for r in order:
        try:
            return quasi_plucker_left(A, i, j, M, r)
        except SingularPivot:
            continue
    raise SingularPivot(f"p^{M}_{i}{j} is undefined at this point")


def _qd(A, I, J, i, j):
    """|A_{I,J}|_{ij} with labels i in I and j in J."""
    return quasidet(A.keep(I, J), I.index(i) + 1, J.index(j) + 1)


def _fam_homological(A, L, M, i, j, s, t):
    R = A.ring
    L, M = tuple(L), tuple(M)
    rows, cols = (s,) + L, (i, j) + M
    lhs = _qd(A, rows, cols, s, i) * R.inverse(_qd(A, L, (i,) + M, t, i))
    rhs = -(_qd(A, rows, cols, s, j) * R.inverse(_qd(A, L, (j,) + M, t, j)))
    # the left ratio is the same for every t in L
    ratios = [R.inverse(_qd(A, L, (i,) + M, r, i)) * _qd(A, L, (j,) + M, r, j) for r in L]
    return [("homological", lhs, rhs)] + [(f"t={r}", x, ratios[0]) for r, x in zip(L[1:], ratios[1:])]


def _fam_qp_order_independence(A, i, j, M):
    base = qp(A, i, j, M)
    return [(f"M={perm}", qp(A, i, j, perm), base) for perm in itertools.permutations(M) if perm != tuple(M)]


def _fam_qp_cyclic(A, i, j, k, M):
    M = tuple(M)
    prod = qp(A, i, j, (k,) + M) * qp(A, j, k, (i,) + M) * qp(A, k, i, (j,) + M)
    return [("cyclic", prod, -A.ring.one())]


def _fam_qp_delta(A, i, j, M):
    R = A.ring
    expected = R.one() if j == i else R.zero()
    return [("delta", qp(A, i, j, M), expected)]


def _fam_qp_cocycle(A, i, j, k, M):
    return [("cocycle", qp(A, i, j, M) * qp(A, j, k, M), qp(A, i, k, M))]


def _fam_qp_plucker(A, i, M, L):
    R = A.ring
    total = R.zero()
    for j in L:
        rest = tuple(x for x in L if x != j)
        total = total + qp(A, i, j, M) * qp(A, j, i, rest)
    return [("plucker", total, R.one())]


def _coordinates(A, gamma):
    """Every p^M_ij with |M| + 1 a partial sum of gamma, M increasing, i, j outside M, i != j."""
    n, R = A.m, A.ring
    out = {}
    for m in partial_sums(gamma):
        for M in itertools.combinations(range(1, n + 1), m - 1):
            free = [x for x in range(1, n + 1) if x not in M]
            # |A_{[m], xM}|_{m x} for every x, sharing one inverse of A_{[m-1], M}
            if M:
                inner = nc_inverse(A.keep(range(1, m), M))
                rho = [A[m, c] for c in M]
                proj = [sum((rho[a] * inner.rows[a][b] for a in range(len(M))), R.zero())
                        for b in range(len(M))]
                col = {x: A[m, x] - sum((proj[b] * A[b + 1, x] for b in range(len(M))), R.zero())
                       for x in free}
            else:
                col = {x: A[1, x] for x in free}
            for i, j in itertools.permutations(free, 2):
                out[i, j, M] = R.inverse(col[i]) * col[j]
    return out


def _fam_qp_invariance(A, gamma, samples=10, seed=0):
    k = A.ring.k
    rng = random.Random(f"parabolic:{tuple(gamma)}:{k}:{seed}")
    base = _coordinates(A, gamma)
    reduced = gaussian_eliminate_parabolic(A, gamma)
    pairs = []
    for r in range(samples):
        g = sample_parabolic(gamma, k, rng).g
        gA = g * A
        moved = _coordinates(gA, gamma)
        pairs += [(f"g{r}:p{key}", moved[key], base[key]) for key in sorted(base)]
        red = gaussian_eliminate_parabolic(gA, gamma)
        pairs += [(f"g{r}:reduced{a + 1}{b + 1}", red.rows[a][b], reduced.rows[a][b])
                  for a in range(A.m) for b in range(A.n)]
    return pairs


def _row_op(rows, target, factor, source):
    rows[target] = [x - factor * y for x, y in zip(rows[target], rows[source])]


def _scale(rows, target, factor):
    rows[target] = [factor * x for x in rows[target]]


def reduced_form_3x3_chain(A: NCMatrix):
    """Stage-by-stage elimination of a 3x3 matrix with gamma = (2, 1).

    Returns (label, computed, expected) triples: the two intermediate
    matrices, the unsimplified reduced form, the simplification chain and the
    final reduced form.
    """
    if (A.m, A.n) != (3, 3):
        raise ValueError("needs a 3x3 matrix")
    R = A.ring
    inv = R.inverse
    one, zero = R.one(), R.zero()
    a = lambda i, j: A[i, j]  # noqa: E731
    rows = [list(r) for r in A.rows]
    _scale(rows, 0, inv(rows[0][0]))
    _row_op(rows, 1, rows[1][0], 0)
    _row_op(rows, 2, rows[2][0], 0)
    q = lambda I, J, i, j: _qd(A, I, J, i, j)  # noqa: E731
    p1_12, p1_13 = inv(a(1, 1)) * a(1, 2), inv(a(1, 1)) * a(1, 3)
    stage1 = [[one, p1_12, p1_13],
              [zero, q((1, 2), (1, 2), 2, 2), q((1, 2), (1, 3), 2, 3)],
              [zero, q((1, 3), (1, 2), 3, 2), q((1, 3), (1, 3), 3, 3)]]
    out = [(f"stage1[{r + 1},{c + 1}]", rows[r][c], stage1[r][c]) for r in range(3) for c in range(3)]

    _scale(rows, 1, inv(rows[1][1]))
    _row_op(rows, 2, rows[2][1], 1)
    stage2 = [[one, p1_12, p1_13],
              [zero, one, inv(q((1, 2), (1, 2), 2, 2)) * q((1, 2), (1, 3), 2, 3)],
              [zero, zero, q((1, 2, 3), (1, 2, 3), 3, 3)]]
    out += [(f"stage2[{r + 1},{c + 1}]", rows[r][c], stage2[r][c]) for r in range(3) for c in range(3)]

    _scale(rows, 2, inv(rows[2][2]))
    _row_op(rows, 0, rows[0][1], 1)
    p13, p12, p23 = qp(A, 1, 3, ()), qp(A, 1, 2, ()), qp(A, 2, 3, (1,))
    unsimplified = p13 - p12 * p23
    stage3 = [[one, zero, unsimplified], [zero, one, p23], [zero, zero, one]]
    out += [(f"stage3[{r + 1},{c + 1}]", rows[r][c], stage3[r][c]) for r in range(3) for c in range(3)]

    p2_13, p2_31, p3_21 = qp(A, 1, 3, (2,)), qp(A, 3, 1, (2,)), qp(A, 2, 1, (3,))
    out += [
        ("chain:cocycle", (p13 * p2_31 - p12 * p23 * p2_31) * p2_13, unsimplified),
        ("chain:cyclic", -(p23 * p2_31), p3_21),
        ("chain:plucker", p13 * p2_31 + p12 * p3_21, one),
        ("chain:result", unsimplified, p2_13),
    ]
    final = gaussian_eliminate_parabolic(A, (2, 1))
    expected = [[one, zero, p2_13], [zero, one, p23], [zero, zero, one]]
    out += [(f"reduced[{r + 1},{c + 1}]", final.rows[r][c], expected[r][c]) for r in range(3) for c in range(3)]
    return out


def _fam_gauss_3x3(A):
    return reduced_form_3x3_chain(A)


SKEW_FAMILIES = {
    "homological": _fam_homological,
    "qp_order_independence": _fam_qp_order_independence,
    "qp_cyclic": _fam_qp_cyclic,
    "qp_delta": _fam_qp_delta,
    "qp_cocycle": _fam_qp_cocycle,
    "qp_plucker": _fam_qp_plucker,
    "qp_invariance": _fam_qp_invariance,
    "gauss_3x3": _fam_gauss_3x3,
}


def _count(x) -> int:
    if is_scalar(x):
        return 0 if x == 0 else 1
    if isinstance(x, QMat):
        return sum(1 for r in x.rows for c in r if c != 0)
    return residual_summary(x)[0]


def check_on_matrix(family, params, A: NCMatrix):
    """(residual term count, first failing label) for a family on a concrete matrix."""
    if family not in SKEW_FAMILIES:
        raise ValueError(f"unsupported family {family!r}")
    residual, first = 0, None
    for label, lhs, rhs in SKEW_FAMILIES[family](A, **params):
        c = _count(lhs - rhs)
        if c and first is None:
            first = label
        residual += c
    return residual, first


def check_skewfield_identity(family, params, point: MatrixPoint) -> IdentityReport:
    """Evaluate one identity at ``point``; singular points are resampled from a derived seed."""
    if point.n > 4 or point.k > 4:
        raise ResourceGuard("skew-field checks are limited to n <= 4, k <= 4")
    resamples = 0
    with stopwatch() as sw:
        while True:
            try:
                residual, first = check_on_matrix(family, params, point.matrix())
                break
            except SingularPivot:
                resamples += 1
                if resamples > RETRY_BUDGET:
                    raise
                point = sample_point(point.n, point.k, f"{point.seed}/{resamples}")
    notes = {"epistemic": EPISTEMIC}
    if resamples:
        notes["resamples"] = resamples
    full = dict(params, n=point.n, eval_k=point.k, seed=point.seed)
    return IdentityReport(family, full, "exact", residual, sw["ms"], first, notes)


# -- commutative oracle (k = 1) -------------------------------------------

def _minor(A, K):
    """det A_{[d], K} for a commutative matrix, columns taken in the order of K."""
    if not K:
        return 1
    return QMat([[A[r, c].rows[0][0] if isinstance(A[r, c], QMat) else A[r, c] for c in K]
                 for r in range(1, len(K) + 1)]).det()


def _scalar_matrix(point):
    return NCMatrix([[point.assignment[i, j].rows[0][0] for j in range(1, point.n + 1)]
                     for i in range(1, point.n + 1)], FractionRing())


def _oracle_young(A, I, J, s):
    total = 0
    for lam in itertools.combinations(J, s):
        rest = tuple(x for x in J if x not in lam)
        total += inversion_sign(lam, rest) * _minor(A, tuple(I) + lam) * _minor(A, rest)
    return [("young", total, 0)]


def _oracle_alternating(A, K):
    base = _minor(A, K)
    out = []
    for perm in itertools.permutations(range(len(K))):
        sk = tuple(K[p] for p in perm)
        out.append((f"K={sk}", _minor(A, sk), inversion_sign(perm) * base))
    if len(set(K)) < len(K):
        out.append(("repeat", base, 0))
    return out


def _oracle_qp_ratio(A, i, j, M):
    M = tuple(M)
    ratio = Fraction(_minor(A, (j,) + M)) / _minor(A, (i,) + M)
    return [("ratio", qp(A, i, j, M), ratio)]


def _oracle_qp_cyclic(A, i, j, k, M):
    M = tuple(M)
    ratios = [Fraction(_minor(A, (b,) + c + M)) / _minor(A, (a,) + c + M)
              for a, b, c in ((i, j, (k,)), (j, k, (i,)), (k, i, (j,)))]
    prod = ratios[0] * ratios[1] * ratios[2]
    generic = _fam_qp_cyclic(A, i, j, k, M)[0][1]
    return [("cyclic", prod, -1), ("agrees", generic, prod)]


ORACLE_FAMILIES = {
    "young_symmetry": _oracle_young,
    "alternating": _oracle_alternating,
    "qp_ratio": _oracle_qp_ratio,
    "qp_cyclic": _oracle_qp_cyclic,
}


def commutative_oracle(family, params, n=4, seed=0) -> IdentityReport:
    """Classical identities with exact commutative determinants at a k = 1 point."""
    if family not in ORACLE_FAMILIES:
        raise ValueError(f"unsupported oracle family {family!r}")
    attempt = 0
    with stopwatch() as sw:
        while True:
            A = _scalar_matrix(sample_point(n, 1, seed if not attempt else f"{seed}/{attempt}"))
            try:
                pairs = ORACLE_FAMILIES[family](A, **params)
                break
            except (SingularPivot, ZeroDivisionError):
                attempt += 1
                if attempt > RETRY_BUDGET:
                    raise
    residual, first = 0, None
    for label, lhs, rhs in pairs:
        if lhs != rhs:
            residual += 1
            first = first or label
    notes = {"oracle": "commutative determinants"}
    if attempt:
        notes["resamples"] = attempt
    return IdentityReport(f"oracle:{family}", dict(params, n=n, eval_k=1, seed=seed), "exact",
                          residual, sw["ms"], first, notes)


# -- parameter shapes ---------------------------------------------------------

def _subsets(n, size, exclude=()):
    return [c for c in itertools.combinations(range(1, n + 1), size) if not set(c) & set(exclude)]


def _spread(items, limit):
    """At most ``limit`` items spread evenly, always keeping the first and last."""
    if len(items) <= limit:
        return items
    if limit == 1:
        return items[:1]
    step = (len(items) - 1) / (limit - 1)
    return [items[round(a * step)] for a in range(limit)]


def enumerate_skew_params(family, n, per_shape=2):
    """Representative parameters for every size profile of a family at size n."""
    rng = range(1, n + 1)
    shapes: dict = {}

    def add(shape, params):
        shapes.setdefault(shape, []).append(params)

    if family == "homological":
        for m in range(1, n):
            for L in _subsets(n, m):
                for M in _subsets(n, m - 1):
                    for i, j in itertools.permutations([x for x in rng if x not in M], 2):
                        for s in (x for x in rng if x not in L):
                            add((m,), dict(L=L, M=M, i=i, j=j, s=s, t=L[-1]))
    elif family == "qp_order_independence":
        for d in range(2, n):
            for M in itertools.permutations(rng, d):
                for i in (x for x in rng if x not in M):
                    for j in rng:
                        add((d, j in M, j == i), dict(i=i, j=j, M=M))
    elif family == "qp_cyclic":
        for d in range(0, n - 2):
            for M in _subsets(n, d):
                for i, j, k in itertools.permutations([x for x in rng if x not in M], 3):
                    add((d,), dict(i=i, j=j, k=k, M=M))
    elif family == "qp_delta":
        for d in range(0, n):
            for M in _subsets(n, d):
                for i in (x for x in rng if x not in M):
                    add((d, "i"), dict(i=i, j=i, M=M))
                    for j in M:
                        add((d, "M"), dict(i=i, j=j, M=M))
    elif family == "qp_cocycle":
        for d in range(0, n - 1):
            for M in _subsets(n, d):
                free = [x for x in rng if x not in M]
                for i, j in itertools.permutations(free, 2):
                    for k in rng:
                        add((d,), dict(i=i, j=j, k=k, M=M))
    elif family == "qp_plucker":
        for t in range(1, n + 1):
            for s in range(t, n + 1):
                for M in _subsets(n, t - 1):
                    for L in _subsets(n, s):
                        for i in (x for x in rng if x not in M):
                            add((t, s), dict(i=i, M=M, L=L))
    elif family == "qp_invariance":
        for gamma in _compositions(n):
            if len(gamma) > 1:
                add((gamma,), dict(gamma=gamma, samples=10))
    elif family == "gauss_3x3":
        if n == 3:
            add((), {})
    else:
        raise ValueError(f"unsupported family {family!r}")
    out = []
    for shape in sorted(shapes, key=repr):
        out += _spread(shapes[shape], per_shape)
    return out


def _compositions(n):
    if n == 0:
        return [()]
    return [(a,) + rest for a in range(1, n + 1) for rest in _compositions(n - a)]


def enumerate_oracle_params(family, n=4, d=2, e=2):
    if family == "young_symmetry":
        out = []
        for s in range(1, d + 1):
            for I in _subsets(n, d - s):
                for J in _subsets(n, e + s):
                    out.append(dict(I=I, J=J, s=s))
        return out
    if family == "alternating":
        return [dict(K=K) for K in itertools.product(range(1, n + 1), repeat=d)]
    if family == "qp_ratio":
        return [dict(i=i, j=j, M=M) for m in range(1, n) for M in _subsets(n, m - 1)
                for i in range(1, n + 1) if i not in M for j in range(1, n + 1) if j != i]
    if family == "qp_cyclic":
        return [dict(i=i, j=j, k=k, M=M) for dd in range(0, n - 2) for M in _subsets(n, dd)
                for i, j, k in itertools.combinations([x for x in range(1, n + 1) if x not in M], 3)]
    raise ValueError(f"unsupported oracle family {family!r}")
