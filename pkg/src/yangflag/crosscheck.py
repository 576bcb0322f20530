"""Cross-checks between the minor calculus and the generic quasideterminant engine on T(u)."""

from __future__ import annotations

import itertools

from .minor_calculus import initial, quasi_plucker_minor, ydet
from .quasidet_engine import (
    SingularPivot,
    ldu_factor_yangian,
    partial_sums,
    quasi_plucker_left,
    yangian_matrix,
)
from .report import IdentityReport, ResourceGuard, stopwatch
from .series_ring import NonUnitConstantTerm, Series, invert

__all__ = ["plucker_factorization_check", "principal_pivot_check", "parabolic_check"]


def _guard(n, N):
    if n > 3 or N > 6:
        raise ResourceGuard("engine cross-checks run at n <= 3, N <= 6")


def _diff_terms(x, y):
    return sum(len(c) if hasattr(c, "terms") else int(c != 0) for c in (x - y).coeffs.values())


def plucker_factorization_check(n, N) -> IdentityReport:
    """quasi_plucker_minor(a, b, K) against quasi_plucker_left(T(u), a, b, K, s) for every s.

    Instances where either side needs a non-invertible constant term are
    skipped and counted in the notes.
    """
    _guard(n, N)
    T = yangian_matrix(n, N)
    compared = skipped = residual = 0
    first = None
    with stopwatch() as sw:
        for d in range(1, n + 1):
            for a in range(1, n + 1):
                for K in itertools.permutations([x for x in range(1, n + 1) if x != a], d - 1):
                    for b in range(1, n + 1):
                        try:
                            ref = quasi_plucker_minor(a, b, K, n, N)
                        except NonUnitConstantTerm:
                            skipped += d
                            continue
                        for s in range(1, d + 1):
                            try:
                                got = quasi_plucker_left(T, a, b, K, s)
                            except SingularPivot:
                                skipped += 1
                                continue
                            compared += 1
                            r = _diff_terms(got, ref)
                            if r and first is None:
                                first = f"p^{K}_{a}{b} with s={s}"
                            residual += r
    return IdentityReport("qp_factorization", dict(n=n, N=N), (0, N), residual, sw["ms"], first,
                          {"compared": compared, "skipped": skipped})


def principal_pivot_check(n, N) -> IdentityReport:
    """|T_[k],[k]|_kk = t^[k-1](u+k-1)^-1 t^[k](u+k-1) for every k."""
    _guard(n, N)
    res = ldu_factor_yangian(n, (1,) * n, N)
    residual, first = 0, None
    with stopwatch() as sw:
        for k in range(1, n + 1):
            num = ydet(n, initial(k), initial(k), N, k - 1)
            ref = invert(ydet(n, initial(k - 1), initial(k - 1), N, k - 1)) * num if k > 1 else num
            r = _diff_terms(res.D[k, k], ref)
            if r and first is None:
                first = f"D_{k}{k}"
            residual += r
    return IdentityReport("principal_pivots", dict(n=n, N=N), (0, N), residual, sw["ms"], first)


def parabolic_check(n, gamma, N) -> IdentityReport:
    """LDU reconstruction, coordinates in the reduced form and U, and principal-only witnesses.

    Rows i of block a+1 of the gamma-reduced form read [0 | identity | p^{[d]-i}_ij]
    with d = d_{a+1}; the unipotent factor has U_ij = p^{[i-1]}_ij.
    """
    _guard(n, N)
    gamma = tuple(gamma)
    if sum(gamma) != n:
        raise ValueError(f"composition {gamma} does not sum to n={n}")
    residual, first = 0, None
    checked = 0

    def record(label, r):
        nonlocal residual, first, checked
        checked += 1
        if r and first is None:
            first = label
        residual += r

    with stopwatch() as sw:
        res = ldu_factor_yangian(n, gamma, N)
        T = yangian_matrix(n, N)
        P = res.product()
        for i, j in itertools.product(range(1, n + 1), repeat=2):
            record(f"LDU[{i},{j}]", _diff_terms(P[i, j], T[i, j]))
        R = res.reduced
        prev = 0
        for d in partial_sums(gamma):
            for i in range(prev + 1, d + 1):
                for j in range(1, n + 1):
                    if j <= d:
                        want = 1 if i == j else 0
                        got = R[i, j]
                        record(f"reduced[{i},{j}]", _diff_terms(got, _const(want, N)))
                    else:
                        K = tuple(x for x in initial(d) if x != i)
                        record(f"reduced[{i},{j}]", _diff_terms(R[i, j], quasi_plucker_minor(i, j, K, n, N)))
            prev = d
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                record(f"U[{i},{j}]", _diff_terms(res.U[i, j], quasi_plucker_minor(i, j, initial(i - 1), n, N)))
        witnesses = []
        starts = [0] + list(partial_sums(gamma))
        for w in res.pivots:
            if w[0] == "principal":
                witnesses.append(f"principal [{w[1]}]")
            else:
                _, a, rows, swaps = w
                ok = tuple(rows) == tuple(range(starts[a - 1] + 1, starts[a] + 1)) and not swaps
                record(f"block witness {a}", 0 if ok else 1)
                witnesses.append(f"principal [{rows[-1]}] via block {a}" if ok else f"block {a} exchanged rows {swaps}")
    return IdentityReport("parabolic", dict(n=n, gamma=gamma, N=N), (0, N), residual, sw["ms"], first,
                          {"entries_checked": checked, "witnesses": witnesses})


def _const(c, N):
    return Series({0: c} if c else {}, 0, N)
