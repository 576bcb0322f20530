import itertools

import pytest
from hypothesis import given, strategies as st

from yangflag.flag_algebra import (
    Composition,
    FlagElement,
    Tensor,
    action_check,
    action_on_tuples,
    bialgebra_check,
    c_ideal_stability_check,
    coaction_check,
    comodule_map_check,
    coproduct,
    counit,
    flag_gen,
    flag_monomial,
    flag_series,
    minor_model_check,
    module_action,
    mu_domain_element,
    mu_map,
    preferred_basis_monomials,
    rho,
    sigma_map,
    sigma_series,
)
from yangflag.report import ResourceGuard
from yangflag.yangian_core import gen, one


def test_composition_parsing():
    c = Composition.parse("2,1", 3)
    assert c.partial_sums == (2, 3) and c.allows(2) and not c.allows(1)
    with pytest.raises(ValueError):
        Composition.parse("2,1", 4)
    with pytest.raises(ValueError):
        Composition.parse("2,x")
    with pytest.raises(ValueError):
        Composition((0, 2))


def test_flag_monomial_alternation():
    assert flag_monomial(3, [((2, 1), 1)]) == -flag_gen(3, (1, 2), 1)
    assert not flag_monomial(3, [((1, 1), 1)])
    with pytest.raises(ValueError):
        flag_gen(2, (3,), 1)
    with pytest.raises(ValueError):
        flag_gen(2, (1,), -1)


def test_flag_series_levels():
    s = flag_series(2, (1,), 2)
    assert 0 not in s.coeffs and s[1] == flag_gen(2, (1,), 1)
    assert flag_series(2, (1,), 2, tilde=True)[0] == flag_gen(2, (1,), 0)


def test_coproduct_of_generator():
    # Delta t_12^(1) = t_12^(1) (x) 1 + 1 (x) t_12^(1)
    D = coproduct(gen(2, 1, 1, 2))
    assert len(D.terms) == 2 and all(c == 1 for c in D.terms.values())
    assert counit(gen(2, 1, 1, 2)) == 0 and counit(one(2)) == 1


@pytest.mark.parametrize("kind", ["unit", "counit", "coassociativity", "algebra_map"])
def test_bialgebra_axioms(kind):
    assert bialgebra_check(kind, 2, 2).passed


def test_minor_coproduct():
    assert bialgebra_check("minor_coproduct", 3, 2, dict(I=(1, 2), J=(2, 3))).passed


@pytest.mark.parametrize("family,params,gamma", [
    ("A", dict(I=(1, 2), sigma=(1, 0)), (2, 1)),
    ("C", dict(I=(2,), J=(1, 3)), (1, 1, 1)),
    ("Y", dict(p=1, I=(), J=(1, 3)), (1, 2)),
    ("M", dict(I=(3,), J=(1, 2)), (1, 1, 1)),
])
def test_minor_model_relations(family, params, gamma):
    rep = minor_model_check(family, params, gamma, 3, 3)
    assert rep.passed, rep.counterexample


def test_flag_c_first_term_matches_minor_relation():
    rep = minor_model_check("C", dict(I=(1,), J=(2,)), (1, 1, 1), 3, 3)
    assert rep.notes["first_term"] == "agrees with the minor relation's row term"


def test_minor_model_rejects_sizes_outside_gamma():
    with pytest.raises(ValueError):
        minor_model_check("M", dict(I=(1,), J=(1, 2)), (3,), 3, 2)


def test_coaction_law_n2():
    for d in (1, 2):
        assert coaction_check("coaction_law", 2, 3, dict(d=d)).passed
    assert coaction_check("counit", 2, 3, dict(d=1)).passed
    assert coaction_check("alternating", 3, 2, dict(I=(3, 1))).passed


def test_rho_needs_tilde_for_level_zero():
    with pytest.raises(ValueError):
        rho(flag_gen(2, (1,), 0))
    assert rho(flag_gen(2, (1,), 0), tilde=True).terms


def test_rho_on_top_tuple_is_quantum_determinant():
    # rho(f_12^(1)) = f_12^(1) (x) 1 + f_12^(0) (x) [qdet]_1 in the tilde space
    R = rho(flag_gen(2, (1, 2), 1))
    assert R.terms == {((((1, 2), 1),), ()): 1}


def test_sigma_examples():
    s = sigma_series(2, (1, 2), 1, 1, 1)
    # sigma(f_12(u)) = f_1(u-1) f_2(u) - f_2(u-1) f_1(u); constant term is the level-0 part
    assert len(s[0].terms) == 2
    with pytest.raises(ValueError):
        sigma_series(2, (2, 2), 1, 1, 1)
    with pytest.raises(ValueError):
        sigma_map(flag_gen(2, (1, 2), 1) * flag_gen(2, (1, 2), 1), 1, 1)


def test_sigma_square():
    assert comodule_map_check("sigma_square", 2, 3, dict(e=1, p=1)).passed


def test_mu_square_n2():
    assert comodule_map_check("mu_square", 2, 3, dict(d=2, p=1)).passed


def test_mu_needs_level_zero():
    # negative control: without f^(0) the domain element X_1 vanishes but mu(X_1) does not
    X1 = mu_domain_element(2, (1,), (2,), 1, 1)
    assert X1.terms
    assert all(any(r == 0 for word in key for _, r in word) for key in X1.terms)
    assert mu_map(X1, 1) == flag_gen(2, (1, 2), 1)


def test_mu_rejects_outside_domain():
    T = Tensor(2, "FF", {((((1,), 1),), (((2,), 1),)): 1})
    with pytest.raises(ValueError):
        mu_map(T, 1)


def test_young_composition():
    assert comodule_map_check("young_composition", 3, 2, dict(p=1, I=(1,), J=(2, 3))).passed


@pytest.mark.parametrize("n", [2, 3])
def test_c_ideal_stability(n):
    rep = c_ideal_stability_check(n, 2)
    assert rep.passed and rep.notes["span_dim"] > 0


def test_c_ideal_guard():
    with pytest.raises(ResourceGuard):
        c_ideal_stability_check(3, 3, d=2, e=2)


def test_action_examples():
    x = flag_gen(2, (2,), 1)
    s = module_action(1, 2, x)
    assert not s[0] and s[1] == flag_gen(2, (1,), 1)
    s = module_action(1, 1, x)
    assert s[0] == x and not s[1]
    s = module_action(1, 2, flag_gen(2, (1, 2), 1))
    assert not s[0] and not s[1]
    with pytest.raises(ValueError):
        module_action(3, 1, x)


def test_action_on_tuples_follows_alternation():
    a = action_on_tuples(3, 1, 3, [((3, 2), 1)])
    b = action_on_tuples(3, 1, 3, [((2, 3), 1)])
    assert a[1] == -b[1]
    with pytest.raises(ValueError):
        action_on_tuples(3, 1, 3, [((2, 2), 1)])


@pytest.mark.parametrize("kind", ["well_defined_case1", "well_defined_case2", "well_defined_case3",
                                  "well_defined_case4", "respects_A", "respects_Y", "respects_M", "respects_C"])
def test_action_checks_n2(kind):
    assert action_check(kind, 2, 2).passed


@pytest.mark.parametrize("gamma", [(1, 1, 1), (2, 1), (1, 2), (3,)])
def test_highest_weight(gamma):
    assert action_check("highest_weight", 3, 2, dict(gamma=gamma)).passed


def test_preferred_basis_enumeration():
    mons = preferred_basis_monomials((1, 1), max_len=1, max_level=1)
    assert len(mons) == 3


levels = st.integers(1, 3)
tuples2 = st.sampled_from([t for s in (1, 2) for t in itertools.permutations((1, 2, 3), s)])


@given(st.lists(st.tuples(tuples2, levels), min_size=1, max_size=2), st.integers(1, 3), st.integers(1, 3))
def test_action_is_a_derivation(factors, a, b):
    # t_ab^(1) acts as a derivation on products
    x = flag_monomial(3, factors[:1])
    y = flag_monomial(3, factors[1:]) if len(factors) > 1 else FlagElement(3, {(): 1})
    lhs = module_action(a, b, x * y)[1]
    rhs = module_action(a, b, x)[1] * y + x * module_action(a, b, y)[1]
    assert lhs == rhs
