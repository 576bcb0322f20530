import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from yangflag.minor_calculus import c_rel_numerators, ydet
from yangflag.series_ring import (
    INF,
    BiSeries,
    NonUnitConstantTerm,
    Series,
    clear_denominators,
    gen_series,
    invert,
    series_relation_residual,
    shift,
)
from yangflag.yangian_core import gen, one


def _geometric_power(a, p, N):
    """Coefficients of (1 + a x)^-p up to x^N by repeated convolution with sum (-a x)^q."""
    geo = [(-a) ** q for q in range(N + 1)]
    out = [1] + [0] * N
    for _ in range(p):
        out = [sum(out[i] * geo[k - i] for i in range(k + 1)) for k in range(N + 1)]
    return out


def test_gen_series_examples():
    s = gen_series(2, 1, 1, 2)
    assert s.window == (0, 2)
    assert s[0] == 1 and s[1] == gen(2, 1, 1, 1) and s[2] == gen(2, 2, 1, 1)
    assert gen_series(2, 1, 2, 0).is_zero()
    s = gen_series(2, 2, 2, 1)
    assert s[0] == 1 and s[1] == gen(2, 1, 2, 2)


@pytest.mark.parametrize("a", [1, -2, Fraction(1, 3)])
@pytest.mark.parametrize("p", [1, 2, 3])
def test_shift_matches_convolution_oracle(a, p):
    N = 7
    got = shift(Series({p: 1}, 0, N), a)
    want = _geometric_power(a, p, N - p)
    for q in range(N - p + 1):
        assert got[p + q] == want[q]


def test_shift_examples():
    s = shift(Series({1: 1}, 0, 3), 1)
    assert s[3] == 1 and s[2] == -1
    x = gen_series(2, 1, 2, 3)
    assert shift(x, 0) is x


def test_shift_of_polynomial_part():
    # (u + a) u^0 with u = u^{-(-1)}
    s = shift(Series({-1: 1}, -1, INF), 5)
    assert s.coeffs == {-1: 1, 0: 5}


def test_shift_refuses_infinite_window_series():
    with pytest.raises(ValueError):
        shift(Series({1: 1}, 0, INF), 1)


def test_invert_examples():
    x = gen(2, 1, 1, 2)
    s = invert(Series({0: 1, 1: x}, 0, 3))
    assert s[1] == -x and s[2] == x * x and s[3] == -(x * x * x)
    assert invert(Series({0: 1}, 0, 2)).coeffs == {0: 1}
    with pytest.raises(NonUnitConstantTerm):
        invert(gen_series(2, 1, 2, 3))


def test_invert_is_two_sided_on_minors():
    m = ydet(3, (1, 2), (1, 2), 4, 1)
    mi = invert(m)
    assert (m * mi).equals(Series.constant(1, 4))
    assert (mi * m).equals(Series.constant(1, 4))


def test_product_window():
    a, b = gen_series(2, 1, 1, 3), gen_series(2, 2, 1, 3)
    assert (a * b).window == (0, 3)
    assert (a * b.truncate(2)).window == (0, 2)


scalar_series = st.dictionaries(st.integers(0, 5), st.integers(-4, 4), max_size=5).map(lambda d: Series(d, 0, 5))
shifts = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@given(scalar_series, scalar_series, shifts)
def test_shift_is_multiplicative(s, t, a):
    assert shift(s * t, a).equals(shift(s, a) * shift(t, a))


@given(scalar_series, shifts, shifts)
def test_shift_composes(s, a, b):
    assert shift(shift(s, a), b).equals(shift(s, a + b))


@given(scalar_series.filter(lambda s: s[0] != 0))
def test_invert_two_sided_scalar(s):
    one_ = Series.constant(1, 5)
    assert (s * invert(s)).equals(one_) and (invert(s) * s).equals(one_)


def test_shift_homomorphism_on_yangian_series():
    s, t = gen_series(2, 1, 2, 4), gen_series(2, 2, 1, 4)
    assert shift(s * t, 2).equals(shift(s, 2) * shift(t, 2))


@pytest.mark.parametrize("ijkl", list(itertools.product((1, 2), repeat=4)))
def test_series_defining_relation_cleared(ijkl):
    assert series_relation_residual(2, *ijkl, 4).is_zero()


def test_clear_denominators_empty_product():
    lhs = BiSeries.from_u(gen_series(2, 1, 1, 2))
    assert clear_denominators(lhs, [], 0, 1).residual_terms() == lhs.residual_terms()


def test_minor_commutator_at_size_one_is_the_defining_relation():
    # d = e = 1: (u - v)[t_ij(u), t_kl(v)] cleared with one numerator
    for i, j, k, l in itertools.product((1, 2), repeat=4):
        lhs = BiSeries.from_u(gen_series(2, i, j, 4)) * BiSeries.from_v(gen_series(2, k, l, 4)) \
            - BiSeries.from_v(gen_series(2, k, l, 4)) * BiSeries.from_u(gen_series(2, i, j, 4))
        nums = c_rel_numerators(2, 4, (i,), (j,), (k,), (l,))
        assert clear_denominators(lhs, nums, 1, 1).is_zero()
        assert series_relation_residual(2, i, j, k, l, 4).is_zero()


def test_scalar_constant_is_unit():
    s = Series.constant(one(2), 2)
    assert invert(Series.constant(3, 2))[0] == Fraction(1, 3)
    assert s[0] == one(2)
