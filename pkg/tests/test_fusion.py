import pytest

from fusionlim.fusion import (
    FusionError, FusionOrbitCategory, RepHoms, center_functor, class_local_lambda,
    classify_linking_systems, f_centric, fusion_context, lim_z_direct, out_f, theorem_sets,
)
from fusionlim.groups import (all_subgroups, naive_all_subgroups, overgroups, p_core,
                              trivial_subgroup)
from fusionlim.lam import lambda_poset


def brute_rep_count(fc, P, Q):
    """|Q \\ Hom_G(P, Q)| by brute force: homs as image tuples, classes under Inn(Q)."""
    G = fc.G
    homs = set()
    for g in G.elements:
        imgs = tuple(G.conj(g, x) for x in P.gens)
        if all(y in Q.element_set for y in imgs):
            homs.add(imgs)
    classes = set()
    for h in homs:
        classes.add(min(tuple(G.conj(q, y) for y in h) for q in Q.elements))
    return len(classes)


def normal_v4(fc):
    return p_core(fc.G, 2)


def test_sylow_and_centricity_basics(s4):
    assert s4.S.order == 8
    assert f_centric(s4, s4.S)
    assert not f_centric(s4, trivial_subgroup(s4.G))


def test_centric_subgroups_of_s4_by_brute_force(s4):
    # P is centric iff every conjugate gPg^-1 inside S has C_S(gPg^-1) <= gPg^-1
    G, S = s4.G, s4.S
    brute = []
    for P in naive_all_subgroups(S):
        ok = True
        for g in G.elements:
            Q = {G.conj(g, x) for x in P.elements}
            if Q <= S.element_set:
                C = {s for s in S.elements if all(G.mul(s, q) == G.mul(q, s) for q in Q)}
                ok &= C <= Q
        if ok:
            brute.append(P.key)
    got = [P.key for P in all_subgroups(S) if f_centric(s4, P)]
    assert set(got) == set(brute)
    assert sorted(len(k) for k in got) == [4, 4, 4, 8]


def test_rep_homs_examples(s4):
    V = normal_v4(s4)
    assert len(RepHoms(s4, V, V)) == 6
    assert len(RepHoms(s4, s4.S, s4.S)) == 1
    assert len(RepHoms(s4, s4.S, V)) == 0


def test_rep_homs_against_brute_force(s4):
    subs = [P for P in all_subgroups(s4.S) if P.order > 1]
    for P in subs:
        for Q in subs:
            assert len(RepHoms(s4, P, Q)) == brute_rep_count(s4, P, Q)


def test_fusion_orbit_category_laws(s4):
    objs = [P for P in all_subgroups(s4.S) if f_centric(s4, P)]
    O = FusionOrbitCategory(s4, objs)
    O.check_laws()
    assert O.is_ei()


def test_out_f_of_normal_v4(s4):
    V = normal_v4(s4)
    data = out_f(s4, V)
    assert data.out_order == 6
    assert data.Z.order == 4
    assert class_local_lambda(s4, V, 2, data=data).dims == [0, 1, 0]


def test_out_f_of_sylow(s4):
    data = out_f(s4, s4.S)
    # N(S) = S and C(S) = Z(S) <= S, so Out_F(S) is trivial
    assert data.out_order == 1
    assert data.Z.order == 2


def elementary_centrics(fc):
    """The two Klein four-groups and S: closed under overgroups, and each
    Z(P) = C_S(P) is elementary abelian (the cyclic centric has Z(P) = C4)."""
    return [P for P in all_subgroups(fc.S) if f_centric(fc, P)
            and P.order in (4, 8) and all(fc.G.mul(x, x) == fc.G.identity
                                          for x in fc.centralizer_in_s(P).elements)]


def test_z_functor_is_functorial(s4):
    objs = elementary_centrics(s4)
    assert sorted(P.order for P in objs) == [4, 4, 8]
    O = FusionOrbitCategory(s4, objs)
    F, coords = center_functor(O)
    F.check(O)
    assert F.dims == [c.dim for c in coords]


def test_lim_z_single_object(s4):
    # objects {S}: one object with automorphism group Out_F(S) = 1
    assert lim_z_direct(s4, [s4.S], 2) == [1, 0, 0]
    assert lim_z_direct(s4, [s4.S], 2, method="bar") == [1, 0, 0]


def test_lim_z_over_s4_centrics_backends_agree(s4):
    objs = elementary_centrics(s4)
    bar = lim_z_direct(s4, objs, 2, method="bar")
    res = lim_z_direct(s4, objs, 2)
    assert bar == res
    assert bar[1:] == [0, 0]


def test_prime_needed_for_non_semidirect_groups():
    with pytest.raises(FusionError):
        fusion_context("Sym(4)")
    fc = fusion_context("Sym(4)", p=2)
    assert fc.S.order == 8


def test_small_semidirect_context():
    fc = fusion_context("semidirect(natural(2), Sym(3))", module_spec="natural(2)")
    assert fc.G.order == 24
    sets = theorem_sets(fc)
    assert sets.ok
    assert fc.M in sets.X
    # Lambda^3(Sym(3); V) = 0, so there is a single Y-class
    report = classify_linking_systems(fc, i_max=3, sets=sets)
    assert report["y_classes"] == 1 and report["x_classes"] == 1


# ex2: (V (x) V (x) V) x| Sym(3)^3 at p = 2

def test_ex2_basics(ex2):
    assert ex2.G.order == 55296
    assert ex2.S.order == 2048
    assert ex2.M.order == 256


def test_ex2_theorem_sets(ex2, ex2_sets):
    assert ex2_sets.ok
    assert len(ex2_sets.X) == 16
    assert len(ex2_sets.Y) == 15
    assert ex2.M in ex2_sets.X and ex2.M not in ex2_sets.Y
    # X is every subgroup of S containing M, counted independently
    assert {P.key for P in ex2_sets.X} == {P.key for P in overgroups(ex2.S, ex2.M)}


def test_ex2_overgroups_of_m_are_centric(ex2, ex2_sets):
    for P in ex2_sets.X:
        C = ex2.centralizer_in_s(P)
        assert C.element_set <= P.element_set


def test_ex2_out_f_of_m(ex2):
    data = out_f(ex2, ex2.M)
    assert data.out_order == 216
    assert data.Z.order == 256
    local = class_local_lambda(ex2, ex2.M, 3, data=data).dims
    from fusionlim.expr import build_group, build_module

    G = build_group("prod(Sym(3),Sym(3),Sym(3))")
    M = build_module("tensor(natural(2),natural(2),natural(2))", G)
    assert local == lambda_poset(G, M, 3).dims == [0, 0, 0, 1]


def test_ex2_report(ex2, ex2_sets):
    report = classify_linking_systems(ex2, sets=ex2_sets)
    assert report["lambda_dims"][3] == 1
    assert report["x_classes"] == 1
    assert report["y_classes"] == 2
    assert report["extendable_y_classes"] == 1
    assert len(report["per_class_table"]) == 16
    for row in report["per_class_table"]:
        assert set(row) >= {"rep", "order", "outF_order", "zP_dim", "lambda_dims"}


def test_ex2_lim_z(ex2, ex2_sets):
    assert lim_z_direct(ex2, ex2_sets.Y, 3) == [0, 0, 1, 0]
    assert lim_z_direct(ex2, ex2_sets.X, 2) == [0, 0, 0]


@pytest.mark.slow
def test_orbit_category_laws_on_x(ex2, ex2_sets):
    # composition of rep_homs classes: identity and associativity on every triple
    O = FusionOrbitCategory(ex2, ex2_sets.X)
    O.check_laws()
    assert len(O.objects) == 16
