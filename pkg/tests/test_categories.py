import numpy as np
import pytest

from fusionlim.categories import (
    CategoryError, ContravariantFunctor, FiniteCategory, GroupOrbitCategory,
    atomic_functor_at_trivial, lim_complex, lim_finite_category, normalized_chains,
)
from fusionlim.expr import build_group, build_module
from fusionlim.groups import BudgetExceeded, symmetric_group


def group_as_category(G):
    """One object, morphisms the elements of G."""
    elems = G.elements
    index = {g: i for i, g in enumerate(elems)}
    n = len(elems)
    return FiniteCategory([0], [0] * n, [0] * n, [index[G.identity]],
                          lambda g, f: index[G.mul(elems[g], elems[f])]), elems


def poset_category(n_objects, relations):
    """A poset as a category: identities plus one arrow a -> b per a < b."""
    src, dst = [], []
    ident = []
    for a in range(n_objects):
        ident.append(len(src))
        src.append(a)
        dst.append(a)
    arrows = {}
    for a, b in relations:
        arrows[(a, b)] = len(src)
        src.append(a)
        dst.append(b)

    def arrow(a, b):
        return ident[a] if a == b else arrows[(a, b)]

    def compose(g, f):
        return arrow(src[f], dst[g])

    return FiniteCategory(list(range(n_objects)), src, dst, ident, compose)


def test_one_object_trivial_group():
    C = FiniteCategory([0], [0], [0], [0], lambda g, f: 0)
    F = ContravariantFunctor(2, [3], lambda m: np.eye(3, dtype=np.int64))
    assert lim_finite_category(C, F, 3) == [3, 0, 0, 0]


def test_terminal_object_constant_functor():
    # 0 < 2, 1 < 2: object 2 is terminal
    C = poset_category(3, [(0, 2), (1, 2)])
    F = ContravariantFunctor(2, [2, 2, 2], lambda m: np.eye(2, dtype=np.int64))
    assert lim_finite_category(C, F, 3) == [2, 0, 0, 0]
    assert lim_finite_category(C, F, 3, method="resolution") == [2, 0, 0, 0]


def test_circle_poset_has_lim1():
    # two minimal and two maximal objects, each min below each max: a circle
    C = poset_category(4, [(0, 2), (0, 3), (1, 2), (1, 3)])
    F = ContravariantFunctor(2, [1, 1, 1, 1], lambda m: np.eye(1, dtype=np.int64))
    assert lim_finite_category(C, F, 2) == [1, 1, 0]
    assert lim_finite_category(C, F, 2, method="resolution") == [1, 1, 0]


def test_group_cohomology_of_c2():
    # lim over one-object C2 of the trivial GF(2) module is H^*(C2; F2): 1 in every degree
    C, _ = group_as_category(build_group("C(2)"))
    F = ContravariantFunctor(2, [1], lambda m: np.eye(1, dtype=np.int64))
    assert lim_finite_category(C, F, 4) == [1, 1, 1, 1, 1]
    assert lim_finite_category(C, F, 4, method="resolution") == [1, 1, 1, 1, 1]


def test_group_cohomology_sym3_natural():
    # H^*(Sym(3); V) at p = 2: V is projective, so only H^0 = V^Sym(3) = 0 could survive
    G = symmetric_group(3)
    V = build_module("natural(2)", G)
    C, elems = group_as_category(G)
    F = ContravariantFunctor(2, [2], lambda m: V.matrix(G.inv(elems[m])))
    F.check(C)
    assert lim_finite_category(C, F, 3) == [0, 0, 0, 0]


def test_orbit_category_sym3():
    G = symmetric_group(3)
    O = GroupOrbitCategory(G, p=2)
    assert len(O.objects) == 2
    O.check_laws()
    assert O.is_ei()
    # Mor(1, 1) = Gamma, Mor(1, T) = Gamma/T, Mor(T, T) = N(T)/T, Mor(T, 1) empty
    assert O.n_morphisms == 6 + 3 + 1


def test_sym3_natural_limits():
    G = symmetric_group(3)
    V = build_module("natural(2)", G)
    O = GroupOrbitCategory(G, p=2)
    F = atomic_functor_at_trivial(O, V)
    F.check(O)
    assert lim_finite_category(O, F, 2) == [0, 1, 0]


def test_functoriality_failure_detected():
    C, _ = group_as_category(build_group("C(2)"))
    F = ContravariantFunctor(2, [1], lambda m: np.zeros((1, 1), dtype=np.int64))
    with pytest.raises(CategoryError):
        F.check(C)


def test_bad_composition_detected():
    # C2 with a composition that never returns the identity
    C = FiniteCategory([0], [0, 0], [0, 0], [0], lambda g, f: 1)
    with pytest.raises(CategoryError):
        C.check_laws()


def test_chain_budget():
    C, _ = group_as_category(build_group("Sym(4)"))
    with pytest.raises(BudgetExceeded):
        normalized_chains(C, [0], 4, budget=1000)


def test_complex_is_a_complex():
    G = build_group("prod(Sym(3),C(2))")
    M = build_module("tensor(natural(2),trivial(2,1))", G)
    O = GroupOrbitCategory(G, p=2)
    K = lim_complex(O, atomic_functor_at_trivial(O, M), 3)
    K.check()


def test_unknown_method():
    C = FiniteCategory([0], [0], [0], [0], lambda g, f: 0)
    F = ContravariantFunctor(2, [1], lambda m: np.eye(1, dtype=np.int64))
    with pytest.raises(ValueError):
        lim_finite_category(C, F, 1, method="spectral")
