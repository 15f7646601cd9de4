import numpy as np
import pytest
from hypothesis import given, strategies as st

from artifact import bundles as bd
from artifact import fuzz
from artifact import sgroup as sg
from artifact import sset as ss

seeds = st.integers(min_value=0, max_value=2**63 - 1)


def mobius(N=3):
    S = ss.circle(N)
    G = sg.constant_group(sg.cyclic(2), N - 1)
    t = bd.identity_twisting(S, G)
    edge = int(ss.nondegenerate(S, 1)[0])
    maps = [m.copy() for m in t.maps]
    maps[1][edge] = 1
    # higher simplices of the circle are degeneracies of the edge or the vertex
    for n in range(2, N + 1):
        for m in range(S.count(n)):
            ops, (k, z) = ss.ez_decomposition(S, n, m)
            maps[n][m] = 1 if k == 1 and ops and ops[0] != 0 and z == edge else maps[n][m]
    return S, G, bd.TwistFn(S, G, maps)


@pytest.mark.parametrize("G", [sg.constant_group(sg.cyclic(3), 3), sg.constant_group(sg.symmetric(3), 3),
                               sg.nerve_cyclic_group(2, 3), sg.nerve_cyclic_group(3, 3)])
def test_wbar_constructions_agree(G):
    W = bd.wbar(G, 3)
    assert ss.validate_sset(W).ok
    assert W.same_tables(bd.wbar_via_formula(G, 3))


def test_wbar_of_constant_group_is_its_nerve():
    W = bd.wbar(sg.constant_group(sg.cyclic(3), 3), 3)
    assert W.counts == [1, 3, 9, 27]


@pytest.mark.parametrize("G", [sg.constant_group(sg.cyclic(2), 3), sg.constant_group(sg.symmetric(3), 2),
                               sg.nerve_cyclic_group(2, 3)])
def test_universal_bundle_validates(G):
    N = min(G.trunc, 3)
    U = bd.wg(G, N)
    assert bd.validate_universal(U, G).ok
    assert bd.validate_pseudo_section(U.torsor).ok


def test_identity_twisting_gives_the_product():
    M = ss.standard_simplex(1, 3)
    G = sg.constant_group(sg.cyclic(3), 2)
    t = bd.identity_twisting(M, G)
    assert bd.validate_twisting(M, G, t).ok
    T = bd.twisted_product(M, G, t)
    assert bd.find_torsor_isomorphism(T, bd.product_torsor(M, G)) is not None


def test_mobius_twisting_is_valid_and_nontrivial():
    S, G, t = mobius()
    assert bd.validate_twisting(S, G, t).ok, bd.validate_twisting(S, G, t).summary(5)
    T = bd.twisted_product(S, G, t)
    assert bd.validate_torsor(T).ok
    assert bd.find_torsor_isomorphism(T, bd.product_torsor(S, G)) is None


def test_extract_recovers_the_twisting():
    S, G, t = mobius()
    u = bd.extract_twisting(bd.twisted_product(S, G, t))
    assert all(np.array_equal(u.maps[n], t.maps[n]) for n in range(u.trunc + 1))
    assert u.trunc >= 2


@given(seeds)
def test_extract_round_trip_on_fuzz(seed):
    t = fuzz.random_twist(fuzz.rng_for(seed), 1)
    T = bd.twisted_product(t.base, t.group, t)
    assert bd.validate_torsor(T).ok
    u = bd.extract_twisting(T)
    assert bd.validate_twisting(t.base, t.group, u).ok
    assert bd.find_torsor_isomorphism(T, bd.twisted_product(u.base, u.group, u)) is not None


@pytest.mark.parametrize("k", [2, 3])
def test_h1_of_circle_is_the_group(k):
    r = bd.h1_enumerate(ss.circle(2), sg.constant_group(sg.cyclic(k), 1))
    assert r.count == k
    assert len(r.class_of) == len(r.twistings)


def test_h1_of_simplex_is_trivial():
    assert bd.h1_enumerate(ss.standard_simplex(2, 2), sg.constant_group(sg.symmetric(3), 1)).count == 1


def test_h1_with_nonabelian_group_counts_conjugacy_classes():
    # Hom(Z, S3)/conjugation: identity, transpositions, 3-cycles
    assert bd.h1_enumerate(ss.circle(2), sg.constant_group(sg.symmetric(3), 1)).count == 3


@given(seeds)
def test_broken_twisting_is_rejected(seed):
    t = fuzz.random_twist(fuzz.rng_for(seed), 1)
    if all(G.order == 1 for lvl in t.group.groups for G in lvl):
        return
    try:
        u, (n, m) = fuzz.break_twisting(t, fuzz.rng_for(seed, 1))
    except ss.BudgetExceeded:
        return
    rep = bd.validate_twisting(u.base, u.group, u)
    assert not rep.ok
    with pytest.raises(bd.InvalidTwistingError):
        bd.twisted_product(u.base, u.group, u)


def test_torsor_with_broken_action_is_rejected():
    S, G, t = mobius()
    T = bd.twisted_product(S, G, t)
    act = [a.copy() for a in T.action.act]
    act[1][0] = act[1][0][::-1]
    A = sg.GroupAction(T.total, T.action.G, act)
    bad = bd.Torsor(T.total, T.base, G, T.proj, A, T.section, T.twisting)
    assert not bd.validate_torsor(bad).ok


def test_pullback_along_identity():
    S, G, t = mobius()
    T = bd.twisted_product(S, G, t)
    P = bd.pullback_torsor(T, ss.identity_map(T.base))
    assert bd.validate_torsor(P).ok
    assert bd.find_torsor_isomorphism(P, T) is not None


def test_division_is_the_difference():
    S, G, t = mobius()
    T = bd.twisted_product(S, G, t)
    n = 1
    for p in range(T.total.count(n)):
        for g in range(G.sset.count(n)):
            if G.sset.base_of[n][g] != T.total.base_of[n][p]:
                continue
            q = int(T.action.act[n][p, g])
            # q = p·g, and division returns the group element relating the two
            assert G.sset.base_of[n][bd.division(T, n, q, p)] == T.total.base_of[n][p]
