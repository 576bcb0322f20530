import itertools

import pytest
from hypothesis import given, strategies as st

from yangflag.minor_calculus import (
    FAMILIES,
    ResourceGuard,
    _fam_c_rels,
    _fam_ys_I,
    enumerate_params,
    inversion_sign,
    quasi_plucker_minor,
    verify_minor_identity,
    ydet,
)
from yangflag.series_ring import BiSeries, NonUnitConstantTerm, gen_series, invert, shift


def _parity_by_cycles(seq):
    """Sign of the permutation sorting ``seq`` (distinct entries), via cycle count."""
    order = sorted(range(len(seq)), key=lambda k: seq[k])
    seen, cycles = set(), 0
    for s in range(len(seq)):
        if s not in seen:
            cycles += 1
            k = s
            while k not in seen:
                seen.add(k)
                k = order[k]
    return (-1) ** (len(seq) - cycles)


def test_inversion_sign_examples():
    assert inversion_sign((1, 2, 3)) == 1
    assert inversion_sign((2, 1)) == -1
    assert inversion_sign((1,), (3,), (2,)) == -1
    assert inversion_sign((1, 2), (2,)) == 0
    assert inversion_sign(()) == 1


@given(st.permutations(range(6)))
def test_inversion_sign_matches_cycle_parity(p):
    assert inversion_sign(p) == _parity_by_cycles(p)


@given(st.permutations(range(5)), st.integers(0, 5))
def test_inversion_sign_splits(p, cut):
    assert inversion_sign(p[:cut], p[cut:]) == inversion_sign(p)


def test_ydet_size_one_is_generator_series():
    assert ydet(2, (1,), (2,), 3).equals(gen_series(2, 1, 2, 3))
    assert ydet(2, (2,), (1,), 3, 2).equals(shift(gen_series(2, 2, 1, 3), 2))


def test_ydet_two_by_two_by_hand():
    N = 4
    t = lambda i, j, a=0: shift(gen_series(2, i, j, N), a) if a else gen_series(2, i, j, N)
    want = t(1, 1) * t(2, 2, -1) - t(2, 1) * t(1, 2, -1)
    assert ydet(2, (1, 2), (1, 2), N, raw=True).equals(want)


def test_ydet_antisymmetry_and_repeats():
    N = 3
    assert ydet(3, (2, 1), (1, 3), N).equals(-ydet(3, (1, 2), (1, 3), N))
    assert ydet(3, (1, 1), (1, 3), N).is_zero()
    with pytest.raises(ValueError):
        ydet(3, (1, 2), (1,), N)
    with pytest.raises(ValueError):
        ydet(2, (3,), (1,), N)


def test_quantum_determinant_is_central():
    N = 4
    qdet = BiSeries.from_u(ydet(2, (1, 2), (1, 2), N))
    for i, j in itertools.product((1, 2), repeat=2):
        g = BiSeries.from_v(gen_series(2, i, j, N))
        assert (qdet * g - g * qdet).is_zero()


def test_quasi_plucker_examples():
    N = 3
    want = invert(gen_series(2, 1, 1, N)) * gen_series(2, 1, 2, N)
    assert quasi_plucker_minor(1, 2, (), 2, N).equals(want)
    assert quasi_plucker_minor(1, 1, (), 2, N).equals(ydet(2, (), (), N))
    # p^K_ab with b in K vanishes
    assert quasi_plucker_minor(1, 2, (2,), 3, N).is_zero()
    with pytest.raises(NonUnitConstantTerm):
        quasi_plucker_minor(3, 1, (), 3, N)
    with pytest.raises(NonUnitConstantTerm):
        quasi_plucker_minor(1, 2, (1,), 3, N)


def _sample(family, n, k=6):
    params = enumerate_params(family, n, 3 if family in ("rows_equals_cols", "alternating") else 2)
    step = max(1, len(params) // k)
    return [(family, p) for p in params[::step]]


@pytest.mark.parametrize("family,params", [fp for f in FAMILIES for fp in _sample(f, 3)],
                         ids=lambda x: x if isinstance(x, str) else "")
def test_family_samples_hold(family, params):
    rep = verify_minor_identity(family, params, 3, 3)
    assert rep.passed, rep.counterexample
    assert rep.residual_terms == 0


def test_c_rels_literal_reading_fails():
    # negative control: the column term with swapped variables is not a relation
    res, notes = _fam_c_rels(2, 3, (1,), (1,), (1,), (2,), reading="literal")
    assert not res.is_zero() and notes["reading"] == "literal"
    res, _ = _fam_c_rels(2, 3, (1,), (1,), (1,), (2,))
    assert res.is_zero()


def test_ys_I_at_p1_agrees_with_lemma():
    for params in enumerate_params("ys_I", 3, 2):
        if params["p"] == 1:
            res, notes = _fam_ys_I(3, 3, **params)
            assert notes["matches_lemma_termwise"] and res.is_zero()


def test_inverse_uses_adjugate_when_det_not_unit():
    rep = verify_minor_identity("inverse_st", dict(I=(1, 2), J=(2, 3)), 3, 3)
    assert rep.passed and rep.notes["form"] == "adjugate"
    rep = verify_minor_identity("inverse_ts", dict(I=(1, 2), J=(1, 2)), 3, 3)
    assert rep.passed and rep.notes["form"] == "inverse"


def test_guards():
    with pytest.raises(ResourceGuard):
        verify_minor_identity("rows_equals_cols", dict(I=(1,), J=(1,)), 5, 3)
    with pytest.raises(ValueError):
        verify_minor_identity("nope", {}, 2, 2)
    with pytest.raises(ValueError):
        verify_minor_identity("laplace_row", dict(I=(1, 2), J=(1, 2), r=2), 2, 2)


@pytest.mark.parametrize("family", ["ys_I", "ys_II", "ys_recursion", "ys_II_mechanism"])
def test_young_p2_at_n4(family):
    params = [p for p in enumerate_params(family, 4, 2) if p["p"] == 2]
    assert params
    for p in params:
        assert verify_minor_identity(family, p, 4, 4).passed
