import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from yangflag.minor_calculus import ydet
from yangflag.quasidet_engine import (
    FractionRing,
    NCMatrix,
    QMat,
    QMatRing,
    SingularPivot,
    gaussian_eliminate_parabolic,
    ldu_factor,
    ldu_factor_yangian,
    nc_inverse,
    quasi_plucker_left,
    quasidet,
    yangian_matrix,
)
from yangflag.series_ring import invert, shift


def _det(rows):
    """Leibniz determinant over Fractions; independent of FLINT."""
    k = len(rows)
    total = Fraction(0)
    for p in itertools.permutations(range(k)):
        inv = sum(1 for a in range(k) for b in range(a + 1, k) if p[a] > p[b])
        term = Fraction((-1) ** inv)
        for r in range(k):
            term *= rows[r][p[r]]
        total += term
    return total


def _minor(rows, i, j):
    return [[x for c, x in enumerate(r) if c != j] for q, r in enumerate(rows) if q != i]


small = st.integers(-5, 5)
square3 = st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3)


@given(square3)
def test_qmat_inverse_matches_cofactors(rows):
    d = _det(rows)
    if d == 0:
        with pytest.raises(SingularPivot):
            QMat(rows).inverse()
        return
    inv = QMat(rows).inverse().rows
    for i, j in itertools.product(range(3), repeat=2):
        assert inv[i][j] == (-1) ** (i + j) * _det(_minor(rows, j, i)) / d


@given(square3, st.integers(1, 3), st.integers(1, 3))
def test_commutative_quasidet_is_ratio_of_determinants(rows, i, j):
    sub = _det(_minor(rows, i - 1, j - 1))
    A = NCMatrix(rows, FractionRing())
    if sub == 0:
        return
    try:
        got = quasidet(A, i, j)
    except SingularPivot:
        pytest.fail("invertible complement but no pivot")
    assert got == (-1) ** (i + j) * _det(rows) / sub


def _qmat_point(n, k, seed):
    rng = random.Random(seed)
    while True:
        rows = [[QMat([[rng.randint(-4, 4) for _ in range(k)] for _ in range(k)]) for _ in range(n)]
                for _ in range(n)]
        A = NCMatrix(rows, QMatRing(k))
        try:
            return A, nc_inverse(A)
        except SingularPivot:
            continue


@pytest.mark.parametrize("seed", range(4))
def test_quasidet_inverse_is_inverse_entry(seed):
    A, Ainv = _qmat_point(3, 2, seed)
    assert (A * Ainv).is_identity() and (Ainv * A).is_identity()
    for i, j in itertools.product(range(1, 4), repeat=2):
        assert quasidet(A, i, j).inverse() == Ainv[j, i]


@pytest.mark.parametrize("seed", range(3))
def test_quasi_plucker_independent_of_row_choice(seed):
    A, _ = _qmat_point(3, 2, seed)
    for i, j in ((1, 2), (2, 3), (3, 1)):
        M = tuple(x for x in (1, 2, 3) if x not in (i, j))[:1]
        vals = [quasi_plucker_left(A, i, j, M, s) for s in (1, 2)]
        assert vals[0] == vals[1]


def test_singular_pivot_witness():
    A = NCMatrix([[0, 1], [0, 2]], FractionRing())
    with pytest.raises(SingularPivot) as exc:
        nc_inverse(A)
    assert exc.value.witness == ("column", 1)
    with pytest.raises(SingularPivot) as exc:
        ldu_factor(NCMatrix([[0, 1], [1, 0]], FractionRing()))
    assert exc.value.witness == ("principal", 1)


def test_row_exchanges_are_recorded():
    swaps = []
    inv = nc_inverse(NCMatrix([[0, 1], [1, 0]], FractionRing()), swaps)
    assert swaps == [(1, 2)] and inv.rows == [[0, 1], [1, 0]]


def test_ldu_n1():
    res = ldu_factor_yangian(1, (1,), 3)
    T = yangian_matrix(1, 3)
    assert res.D[1, 1].equals(T[1, 1]) and res.product().equals(T)


def test_ldu_n2_entries():
    N = 4
    res = ldu_factor_yangian(2, (1, 1), N)
    T = yangian_matrix(2, N)
    assert res.product().equals(T)
    t11inv = invert(T[1, 1])
    assert res.U[1, 2].equals(t11inv * T[1, 2])
    assert res.L[2, 1].equals(T[2, 1] * t11inv)
    # D_22 = t_11(u+1)^-1 qdet T(u+1)
    want = invert(shift(T[1, 1], 1)) * ydet(2, (1, 2), (1, 2), N, 1)
    assert res.D[2, 2].equals(want)
    assert (res.D[2, 2] - (T[2, 2] - T[2, 1] * t11inv * T[1, 2])).is_zero()


def test_gamma_single_block_reduces_to_identity():
    res = ldu_factor_yangian(2, (2,), 3)
    assert res.reduced.is_identity()
    assert res.pivots[-1] == ("block", 1, (1, 2), ())


def test_parabolic_rejects_bad_composition():
    A = NCMatrix([[1, 0], [0, 1]], FractionRing())
    with pytest.raises(ValueError):
        gaussian_eliminate_parabolic(A, (1, 2))
    with pytest.raises(ValueError):
        ldu_factor_yangian(2, (1,), 2)
