import pytest

from fusionlim.expr import build_group, build_module
from fusionlim.groups import GroupError, cyclic_group, symmetric_group
from fusionlim.lam import (
    kunneth_combine, lambda_bar_oracle, lambda_closed_form_sylow_p, lambda_dims, lambda_poset,
    lambda_resolution, lambda_zero_law, vanishing_preflight, wreath_shift,
)
from fusionlim.modules import GModule, natural_module


def pair(group, module):
    G = build_group(group)
    return G, build_module(module, G)


def test_base_case_all_backends():
    G, V = pair("Sym(3)", "natural(2)")
    assert lambda_bar_oracle(G, V, 2).dims == [0, 1, 0]
    assert lambda_poset(G, V, 3).dims == [0, 1, 0, 0]
    assert lambda_resolution(G, V, 3).dims == [0, 1, 0, 0]
    assert lambda_closed_form_sylow_p(G, V, 2).dims == [0, 1, 0]


def test_cyclic_two_trivial_vanishes():
    G, k = pair("C(2)", "trivial(2,1)")
    assert lambda_bar_oracle(G, k, 2).dims == [0, 0, 0]
    assert lambda_poset(G, k, 2).dims == [0, 0, 0]
    assert lambda_closed_form_sylow_p(G, k, 2).dims == [0, 0, 0]


def test_lambda0_for_p_prime_order_group():
    G, k = pair("C(3)", "trivial(2,1)")
    assert lambda_bar_oracle(G, k, 1).dims == [1, 0]
    assert lambda_poset(G, k, 1).dims == [1, 0]
    assert lambda_zero_law(G, k) == 1


def test_sym3_trivial_closed_form():
    G, k = pair("Sym(3)", "trivial(2,1)")
    assert lambda_closed_form_sylow_p(G, k, 2).dims == [0, 0, 0]


def test_closed_form_requires_order_p_sylow():
    G, V = pair("Sym(4)", "natural(2,4)")
    with pytest.raises(GroupError):
        lambda_closed_form_sylow_p(G, V)


def test_p3_base_case():
    G, V = pair("Sym(4)", "natural(3)")
    assert lambda_poset(G, V, 2).dims == [0, 1, 0]
    assert lambda_closed_form_sylow_p(G, V, 2).dims == [0, 1, 0]


def test_headline_example():
    G, M = pair("prod(Sym(3),Sym(3),Sym(3))", "tensor(natural(2),natural(2),natural(2))")
    assert lambda_poset(G, M, 4).dims == [0, 0, 0, 1, 0]


def test_kunneth_combine():
    assert kunneth_combine([0, 1, 0], [0, 1, 0], 2) == [0, 0, 1]
    assert kunneth_combine([3, 1, 4], [0, 0, 0], 2) == [0, 0, 0]
    two = kunneth_combine([0, 1, 0, 0], [0, 1, 0, 0], 3)
    assert kunneth_combine(two, [0, 1, 0, 0], 3) == [0, 0, 0, 1]
    with pytest.raises(ValueError):
        kunneth_combine([0, 1], [0, 1], 2)


def test_kunneth_against_computation():
    base = lambda_poset(*pair("Sym(3)", "natural(2)"), 2).dims
    G, M = pair("prod(Sym(3),Sym(3))", "tensor(natural(2),natural(2))")
    assert lambda_poset(G, M, 2).dims == kunneth_combine(base, base, 2)


def test_vanishing_certificates():
    G, k = pair("C(2)", "trivial(2,1)")
    assert "C_Gamma(M)" in vanishing_preflight(G, k)
    G, V = pair("Sym(4)", "natural(2,4)")
    assert "O_p" in vanishing_preflight(G, V)
    G, V = pair("Sym(3)", "natural(2)")
    assert vanishing_preflight(G, V) is None


def test_wreath_shift():
    G, V = pair("Sym(3)", "natural(2)")
    base = lambda_poset(G, V, 2).dims
    W, V2 = pair("wreath(Sym(3),2)", "power(natural(2),2)")
    got = lambda_poset(W, V2, 3).dims
    assert got == wreath_shift(G, 2, base) == [0, 0, 1, 0]
    with pytest.raises(GroupError):
        wreath_shift(cyclic_group(3), 2, base)


def test_lambda_dims_dispatch():
    G, V = pair("Sym(3)", "natural(2)")
    for backend in ("poset", "bar", "resolution", "closed-form"):
        assert lambda_dims(G, V, 2, backend=backend).dims == [0, 1, 0]
    with pytest.raises(ValueError):
        lambda_dims(G, V, 2, backend="nope")


def test_module_over_wrong_group_rejected():
    V = natural_module(2)
    with pytest.raises(GroupError):
        lambda_bar_oracle(symmetric_group(4), V, 1)


def test_dimension_bound_example():
    # nonzero Lambda^k forces dim M >= p^k
    G, M = pair("prod(Sym(3),Sym(3),Sym(3))", "tensor(natural(2),natural(2),natural(2))")
    dims = lambda_poset(G, M, 3).dims
    for k, d in enumerate(dims):
        if d:
            assert M.dim >= 2 ** k


def test_trivial_module_over_sym3_gives_zero():
    G = symmetric_group(3)
    k = GModule.trivial(G, 2)
    assert lambda_poset(G, k, 2).dims == [0, 0, 0]
