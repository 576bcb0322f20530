"""Yangian minors t^I_J(u) and checks of the identities they satisfy.

Minors are series in u^-1 with Yangian coefficients.  ``ydet`` extends the
definition from sets to tuples through the alternating property; ``raw=True``
evaluates the permutation sum literally on the given tuples, which is what
the alternating checks compare against.
"""

from __future__ import annotations


from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

from .linear import as_exact
from .report import IdentityReport, ResourceGuard, residual_summary, stopwatch
from .series_ring import (
    BiSeries,
    NonUnitConstantTerm,
    Series,
    clear_denominators,
    gen_series,
    invert,
    shift,
)

__all__ = [
    "IdentityReport",
    "MinorKey",
    "ResourceGuard",
    "inversion_sign",
    "sort_with_sign",
    "ydet",
    "quasi_plucker_minor",
    "verify_minor_identity",
    "FAMILIES",
    "c_rel_numerators",
    "young_sum",
    "straightening_terms",
]

MAX_N, MAX_N_TRUNC, MAX_SIZE = 4, 6, 3


def inversion_sign(*parts) -> int:
    """(-1)^(inversions of the concatenation), or 0 if an entry repeats."""
    seq = [x for p in parts for x in p]
    if len(set(seq)) != len(seq):
        return 0
    inv = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return -1 if inv % 2 else 1


def sort_with_sign(t):
    """(sorted tuple, sign) with sign 0 when ``t`` has a repeat."""
    return tuple(sorted(t)), inversion_sign(t)


def perm_sign(p) -> int:
    return inversion_sign(p)


@dataclass(frozen=True)
class MinorKey:
    rows: tuple
    cols: tuple
    shift: object = 0
    N: int = 4

    def __post_init__(self):
        if len(self.rows) != len(self.cols):
            raise ValueError(f"|I| != |J|: {self.rows} vs {self.cols}")


def _guard(n, N, *sizes):
    if n > MAX_N or N > MAX_N_TRUNC or any(s > MAX_SIZE for s in sizes):
        raise ResourceGuard(f"outside desk scale: n={n} (<= {MAX_N}), N={N} (<= {MAX_N_TRUNC}), "
                            f"sizes {sizes} (<= {MAX_SIZE})")


def _zero(N):
    return Series({}, 0, N)


_RAW: dict = {}


def _raw_det(n, I, J, N, variant):
    key = (n, I, J, N, variant)
    s = _RAW.get(key)
    if s is not None:
        return s
    d = len(I)
    if d == 0:
        s = Series({0: 1}, 0, N)
    else:
        s = _zero(N)
        for p in permutations(range(d)):
            sg = perm_sign(p)
            if variant == "rows":
                factors = [gen_series(n, I[p[k]], J[k], N, -k) for k in range(d)]
            else:
                factors = [gen_series(n, I[k], J[p[k]], N, -(d - 1 - k)) for k in range(d)]
            prod = factors[0]
            for f in factors[1:]:
                prod = prod * f
            s = s + prod * sg if sg == 1 else s - prod
    _RAW[key] = s
    return s


_SHIFTED: dict = {}


def ydet(n, I, J, N, alpha=0, variant="rows", raw=False) -> Series:
    """t^I_J(u + alpha) as a series with window (0, N)."""
    I, J = tuple(I), tuple(J)
    if len(I) != len(J):
        raise ValueError(f"size mismatch |I|={len(I)} != |J|={len(J)}")
    if any(not 1 <= x <= n for x in I + J):
        raise ValueError(f"index out of range for n={n}")
    alpha = as_exact(alpha)
    key = (n, I, J, N, alpha, variant, raw)
    s = _SHIFTED.get(key)
    if s is not None:
        return s
    if raw:
        base = _raw_det(n, I, J, N, variant)
    else:
        sI, gI = sort_with_sign(I)
        sJ, gJ = sort_with_sign(J)
        if gI * gJ == 0:
            base = _zero(N)
        else:
            base = _raw_det(n, sI, sJ, N, variant)
            if gI * gJ == -1:
                base = -base
    s = shift(base, alpha) if alpha else base
    _SHIFTED[key] = s
    return s


def initial(d):
    return tuple(range(1, d + 1))


def quasi_plucker_minor(a, b, K, n, N) -> Series:
    """p^K_ab(T(u)) = t^[d]_{a|K}(u+d-1)^-1 t^[d]_{b|K}(u+d-1)."""
    K = tuple(K)
    d = len(K) + 1
    if set((a,) + K) != set(initial(d)) or len(set(K)) != len(K):
        raise NonUnitConstantTerm(f"{{{a}}} u {K} is not [{d}]; the minor has no unit constant term")
    den = ydet(n, initial(d), (a,) + K, N, d - 1)
    num = ydet(n, initial(d), (b,) + K, N, d - 1)
    return invert(den) * num


# ---------------------------------------------------------------------------
# identity families; each returns (residual, notes)


def _fam_rows_equals_cols(n, N, I, J):
    return ydet(n, I, J, N, raw=True) - ydet(n, I, J, N, variant="cols", raw=True), {}


def _fam_alternating(n, N, I, J):
    sign = inversion_sign(I) * inversion_sign(J)
    res = _zero(N)
    for variant in ("rows", "cols"):
        lit = ydet(n, I, J, N, variant=variant, raw=True)
        if sign == 0:
            res = res + lit
        else:
            res = res + (lit - ydet(n, sorted(I), sorted(J), N, variant=variant, raw=True) * sign)
    return res, {"sign": sign}


def _positions(d, r):
    return [tuple(c) for c in combinations(range(d), r)]


def _pick(t, pos):
    return tuple(t[p] for p in pos)


def _drop(t, pos):
    return tuple(x for k, x in enumerate(t) if k not in pos)


def _fam_laplace_row(n, N, I, J, r):
    d = len(I)
    if not 1 <= r < d:
        raise ValueError("need 1 <= r < d")
    acc = _zero(N)
    for lam in _positions(d, r):
        rest = tuple(k for k in range(d) if k not in lam)
        sg = inversion_sign(lam, rest)
        acc = acc + ydet(n, I[:r], _pick(J, lam), N, -d + r) * ydet(n, I[r:], _drop(J, lam), N) * sg
    return acc - ydet(n, I, J, N), {}


def _fam_laplace_col(n, N, I, J, r):
    # the trailing block sits at u - r; u - d + r would agree only when d = 2r
    d = len(I)
    if not 1 <= r < d:
        raise ValueError("need 1 <= r < d")
    acc = _zero(N)
    for lam in _positions(d, r):
        rest = tuple(k for k in range(d) if k not in lam)
        sg = inversion_sign(lam, rest)
        acc = acc + ydet(n, _pick(I, lam), J[:r], N) * ydet(n, _drop(I, lam), J[r:], N, -r) * sg
    return acc - ydet(n, I, J, N), {}


def _is_subsequence(sub, seq):
    it = iter(seq)
    return all(x in it for x in sub)


def _fam_commuting(n, N, I, J, I2, J2):
    if not (_is_subsequence(I2, I) and _is_subsequence(J2, J)):
        raise ValueError("I', J' must be subsequences of I, J")
    x = BiSeries.from_u(ydet(n, I, J, N))
    y = BiSeries.from_v(ydet(n, I2, J2, N))
    return x * y - y * x, {}


def _replace(t, pos, vals):
    out = list(t)
    for p, v in zip(pos, vals):
        out[p] = v
    return tuple(out)


def c_rel_numerators(n, N, A, I, B, J, reading="corrected"):
    """Numerators num_p (p = 1..d) of the general minor commutator.

    Row term: t^{A<-B}_I(u) t^{B<-A}_J(v).  Column term ("corrected"):
    t^B_{J<-I}(v) t^A_{I<-J}(u); ("literal"): t^A_{I<-J}(v) t^B_{J<-I}(u).
    Positions k range over [e] and l over [d], paired in increasing order.
    """
    e, d = len(A), len(B)
    nums = []
    for p in range(1, d + 1):
        acc = BiSeries({}, (0, N, 0, N))
        for ks in combinations(range(e), p):
            for ls in combinations(range(d), p):
                a_rows = _replace(A, ks, _pick(B, ls))
                b_rows = _replace(B, ls, _pick(A, ks))
                row_term = BiSeries.from_u(ydet(n, a_rows, I, N)) * BiSeries.from_v(ydet(n, b_rows, J, N))
                i_cols = _replace(I, ks, _pick(J, ls))
                j_cols = _replace(J, ls, _pick(I, ks))
                if reading == "corrected":
                    col_term = BiSeries.from_v(ydet(n, B, j_cols, N)) * BiSeries.from_u(ydet(n, A, i_cols, N))
                elif reading == "literal":
                    col_term = BiSeries.from_v(ydet(n, A, i_cols, N)) * BiSeries.from_u(ydet(n, B, j_cols, N))
                else:
                    raise ValueError(f"unknown reading {reading!r}")
                acc = acc + row_term - col_term
        nums.append(acc)
    return nums


def _fam_c_rels(n, N, A, I, B, J, reading="corrected"):
    e, d = len(A), len(B)
    if e < d:
        raise ValueError("need |A| >= |B|")
    x = BiSeries.from_u(ydet(n, A, I, N))
    y = BiSeries.from_v(ydet(n, B, J, N))
    res = clear_denominators(x * y - y * x, c_rel_numerators(n, N, A, I, B, J, reading), d, e)
    return res, {"reading": reading}


def _fam_inverse(n, N, I, J, side):
    d = len(I)
    det = ydet(n, I, J, N, d - 1)
    T = [[gen_series(n, I[k], J[l], N) for l in range(d)] for k in range(d)]
    cof = [[ydet(n, _drop(I, (l,)), _drop(J, (k,)), N, d - 1) * (-1) ** (k + l) for l in range(d)]
           for k in range(d)]
    c0 = det.coeffs.get(0, 0)
    unit = not (c0 == 0 if isinstance(c0, (int, Fraction)) else c0.scalar_value() in (None, 0))
    res = _zero(N)
    if unit:
        inv = invert(det)
        S = [[inv * cof[k][l] for l in range(d)] for k in range(d)]
        X, Y = (S, T) if side == "st" else (T, S)
        for k in range(d):
            for m in range(d):
                acc = _zero(N)
                for l in range(d):
                    acc = acc + X[k][l] * Y[l][m]
                res = res + (acc - (1 if k == m else 0))
        form = "inverse"
    else:
        X, Y = (cof, T) if side == "st" else (T, cof)
        for k in range(d):
            for m in range(d):
                acc = _zero(N)
                for l in range(d):
                    acc = acc + X[k][l] * Y[l][m]
                res = res + (acc - (det if k == m else _zero(N)))
        form = "adjugate"
    return res, {"form": form}


def _fam_weak_qcomm(n, N, L, a, b, K):
    L, K = tuple(L), tuple(K)
    x = ydet(n, L, (a,) + K, N) * ydet(n, L, (b,) + K, N, 1)
    y = ydet(n, L, (b,) + K, N) * ydet(n, L, (a,) + K, N, 1)
    return x - y, {}


def young_sum(n, N, p, d, e, I, J, second_shift):
    """List of signed summands sum_{Lambda c J, |Lambda|=p} t^[d]_{I|Lambda}(u+d) t^[e]_{J-Lambda}(u+s)."""
    I, J = tuple(I), tuple(J)
    terms = []
    for pos in _positions(len(J), p):
        lam, rest = _pick(J, pos), _drop(J, pos)
        sg = inversion_sign(lam, rest)
        terms.append(ydet(n, initial(d), I + lam, N, d) * ydet(n, initial(e), rest, N, second_shift) * sg)
    return terms


def _check_young_shape(n, p, d, e, I, J):
    if not (1 <= p <= d <= e):
        raise ValueError("need 1 <= p <= d <= e")
    if len(I) != d - p or len(J) != e + p or len(set(J)) != len(J):
        raise ValueError("need |I| = d-p and J a set of size e+p")
    if e + p > n:
        raise ValueError("need e+p <= n")


def _sum(terms, N):
    acc = _zero(N)
    for t in terms:
        acc = acc + t
    return acc


def _fam_ys_lemma(n, N, d, e, I, J):
    if not (1 <= d <= e < n):
        raise ValueError("need 1 <= d <= e < n")
    _check_young_shape(n, 1, d, e, I, J)
    return _sum(young_sum(n, N, 1, d, e, I, J, e + 1), N), {}


def _fam_ys_I(n, N, p, d, e, I, J):
    _check_young_shape(n, p, d, e, I, J)
    terms = young_sum(n, N, p, d, e, I, J, e + 1)
    notes = {}
    if p == 1 and e < n:
        lemma = young_sum(n, N, 1, d, e, I, J, e + 1)
        notes["matches_lemma_termwise"] = all((a - b).is_zero() for a, b in zip(terms, lemma))
        if not notes["matches_lemma_termwise"]:
            return _sum(terms, N) + Series({0: 1}, 0, N), notes
    return _sum(terms, N), notes


def _fam_ys_II(n, N, p, d, e, I, J):
    _check_young_shape(n, p, d, e, I, J)
    return _sum(young_sum(n, N, p, d, e, I, J, e + p), N), {}


def _formal_young(p, I, J, sizes, shifts):
    """Formal combination {(cols1, cols2): coef} of sum sign * f_{I|Lambda} f_{J-Lambda}."""
    out: dict = {}
    for pos in _positions(len(J), p):
        lam, rest = _pick(J, pos), _drop(J, pos)
        sg = inversion_sign(lam, rest)
        c1, g1 = sort_with_sign(tuple(I) + lam)
        c2, g2 = sort_with_sign(rest)
        c = sg * g1 * g2
        if c:
            key = ((c1, sizes[0], shifts[0]), (c2, sizes[1], shifts[1]))
            out[key] = out.get(key, 0) + c
    return {k: v for k, v in out.items() if v}


def _fam_ys_recursion(n, N, p, d, e, I, J):
    """Y_{I,J}(p) = (1/p) sum_lambda sign(lambda|J-lambda) Y_{I|lambda, J-lambda}(p-1)."""
    _check_young_shape(n, p, d, e, I, J)
    I, J = tuple(I), tuple(J)
    sizes, shifts = (d, e), (d, e + 1)
    lhs = _formal_young(p, I, J, sizes, shifts)
    rhs: dict = {}
    series_rhs = _zero(N)
    for k in range(len(J)):
        lam = (J[k],)
        rest = _drop(J, (k,))
        sg = inversion_sign(lam, rest)
        for key, c in _formal_young(p - 1, I + lam, rest, sizes, shifts).items():
            rhs[key] = rhs.get(key, 0) + Fraction(sg * c, p)
        series_rhs = series_rhs + _sum(young_sum(n, N, p - 1, d, e, I + lam, rest, e + 1), N) * (
            Fraction(sg, p))
    formal_res = {k: lhs.get(k, 0) - rhs.get(k, 0) for k in set(lhs) | set(rhs)}
    formal_terms = sum(1 for v in formal_res.values() if v)
    res = _sum(young_sum(n, N, p, d, e, I, J, e + 1), N) - series_rhs
    if formal_terms:
        res = res + Series({0: formal_terms}, 0, N)
    return res, {"formal_terms": len(lhs), "formal_residual": formal_terms}


def _fam_ys_II_mechanism(n, N, p, d, e, I, J):
    """Column expansion of t^[d]_{I|Lambda}(u+d) followed by the row-Laplace collapse."""
    _check_young_shape(n, p, d, e, I, J)
    I, J = tuple(I), tuple(J)
    res = _zero(N)
    Ks = [tuple(c) for c in combinations(initial(d), p)]
    # (a) column expansion with r = d - p: the trailing block lands at u + d - r = u + p
    for pos in _positions(len(J), p):
        lam = _pick(J, pos)
        acc = _zero(N)
        for K in Ks:
            rest = tuple(x for x in initial(d) if x not in K)
            sg = inversion_sign(rest, K)
            acc = acc + ydet(n, rest, I, N, d) * ydet(n, K, lam, N, p) * sg
        res = res + (acc - ydet(n, initial(d), I + lam, N, d))
    # (b) for each K the row-Laplace sum equals t^{K|[e]}_J(u+e+p), which has a repeat
    for K in Ks:
        acc = _zero(N)
        for pos in _positions(len(J), p):
            lam, rest = _pick(J, pos), _drop(J, pos)
            acc = acc + ydet(n, K, lam, N, p) * ydet(n, initial(e), rest, N, e + p) * inversion_sign(lam, rest)
        res = res + acc
    return res, {"block_shift": f"u+{p}"}


def straightening_terms(n, N, d, e, I, J):
    """Signed summands of the right side: t^[d]_{J-Lambda}(u+d) t^[e]_{Lambda|I}(u+e)."""
    I, J = tuple(I), tuple(J)
    terms = []
    for pos in _positions(len(J), e - d):
        lam, rest = _pick(J, pos), _drop(J, pos)
        sg = inversion_sign(lam, rest)
        terms.append(ydet(n, initial(d), rest, N, d) * ydet(n, initial(e), lam + I, N, e) * sg)
    return terms


def _fam_monomial_straightening(n, N, d, e, I, J):
    if not (len(I) == d <= e == len(J)):
        raise ValueError("need |I| = d <= e = |J|")
    lhs = ydet(n, initial(e), J, N, e) * ydet(n, initial(d), I, N, d)
    terms = straightening_terms(n, N, d, e, I, J)
    return lhs - _sum(terms, N), {"rhs_terms": len(terms)}


FAMILIES = {
    "rows_equals_cols": (_fam_rows_equals_cols, ("I", "J")),
    "alternating": (_fam_alternating, ("I", "J")),
    "laplace_row": (_fam_laplace_row, ("I", "J", "r")),
    "laplace_col": (_fam_laplace_col, ("I", "J", "r")),
    "commuting": (_fam_commuting, ("I", "J", "I2", "J2")),
    "c_rels": (_fam_c_rels, ("A", "I", "B", "J")),
    "inverse_st": (lambda n, N, I, J: _fam_inverse(n, N, I, J, "st"), ("I", "J")),
    "inverse_ts": (lambda n, N, I, J: _fam_inverse(n, N, I, J, "ts"), ("I", "J")),
    "weak_qcomm": (_fam_weak_qcomm, ("L", "a", "b", "K")),
    "ys_lemma": (_fam_ys_lemma, ("d", "e", "I", "J")),
    "ys_I": (_fam_ys_I, ("p", "d", "e", "I", "J")),
    "ys_II": (_fam_ys_II, ("p", "d", "e", "I", "J")),
    "ys_recursion": (_fam_ys_recursion, ("p", "d", "e", "I", "J")),
    "ys_II_mechanism": (_fam_ys_II_mechanism, ("p", "d", "e", "I", "J")),
    "monomial_straightening": (_fam_monomial_straightening, ("d", "e", "I", "J")),
}


def _sizes(params):
    """Minor sizes a family will build (d, e when given, else tuple lengths)."""
    if "e" in params:
        return [params["d"], params["e"]]
    return [len(v) for v in params.values() if isinstance(v, (tuple, list))]


def verify_minor_identity(family, params, n, N) -> IdentityReport:
    """Run one identity family; the report's residual counts nonzero terms of LHS - RHS."""
    if family not in FAMILIES:
        raise ValueError(f"unsupported family {family!r}")
    fn, _ = FAMILIES[family]
    _guard(n, N, *_sizes(params))
    with stopwatch() as sw:
        res, notes = fn(n, N, **params)
    terms, first = residual_summary(res)
    return IdentityReport(family, dict(params, n=n, N=N), res.window, terms, sw["ms"], first, notes)


def enumerate_params(family, n, max_size=2):
    """Parameter grid for a family at desk scale (sets as increasing tuples)."""
    idx = initial(n)
    sets = {d: [tuple(c) for c in combinations(idx, d)] for d in range(0, n + 1)}
    out = []
    if family == "rows_equals_cols":
        for d in range(1, min(max_size, n) + 1):
            out += [dict(I=I, J=J) for I in sets[d] for J in sets[d]]
    elif family == "alternating":
        for d in range(1, min(max_size, n) + 1):
            tuples = [tuple(t) for t in _all_tuples(idx, d)]
            out += [dict(I=I, J=J) for I in tuples for J in sets[d]]
            out += [dict(I=I, J=J) for I in sets[d] for J in tuples]
    elif family in ("laplace_row", "laplace_col"):
        for d in range(2, min(max_size, n) + 1):
            for r in range(1, d):
                out += [dict(I=I, J=J, r=r) for I in sets[d] for J in sets[d]]
    elif family == "commuting":
        for d in range(1, min(max_size, n) + 1):
            for I in sets[d]:
                for J in sets[d]:
                    for d2 in range(1, d + 1):
                        for pi in combinations(range(d), d2):
                            for pj in combinations(range(d), d2):
                                out.append(dict(I=I, J=J, I2=_pick(I, pi), J2=_pick(J, pj)))
    elif family == "c_rels":
        for e in range(1, min(max_size, n) + 1):
            for d in range(1, e + 1):
                out += [dict(A=A, I=I, B=B, J=J) for A in sets[e] for I in sets[e]
                        for B in sets[d] for J in sets[d]]
    elif family in ("inverse_st", "inverse_ts"):
        for d in range(1, min(max_size, n) + 1):
            out += [dict(I=I, J=J) for I in sets[d] for J in sets[d]]
    elif family == "weak_qcomm":
        for d in range(1, min(max_size, n) + 1):
            for L in sets[d]:
                for K in sets[d - 1]:
                    rest = [x for x in idx if x not in K]
                    out += [dict(L=L, a=a, b=b, K=K) for a in rest for b in rest if a < b]
    elif family == "ys_lemma":
        for e in range(1, min(max_size, n - 1) + 1):
            for d in range(1, e + 1):
                out += [dict(d=d, e=e, I=I, J=J) for I in sets[d - 1] for J in sets[e + 1]]
    elif family in ("ys_I", "ys_II", "ys_recursion", "ys_II_mechanism"):
        for p in (1, 2):
            for e in range(1, max_size + 1):
                for d in range(p, e + 1):
                    if e + p > n:
                        continue
                    out += [dict(p=p, d=d, e=e, I=I, J=J) for I in sets[d - p] for J in sets[e + p]]
    elif family == "monomial_straightening":
        for e in range(1, min(max_size, n) + 1):
            for d in range(1, e + 1):
                out += [dict(d=d, e=e, I=I, J=J) for I in sets[d] for J in sets[e]]
    else:
        raise ValueError(f"unsupported family {family!r}")
    return out


def _all_tuples(idx, d):
    if d == 0:
        yield ()
        return
    for t in _all_tuples(idx, d - 1):
        for x in idx:
            yield t + (x,)


