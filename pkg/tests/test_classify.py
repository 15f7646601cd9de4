import numpy as np
import pytest
from hypothesis import given, strategies as st

from artifact import bundles as bd
from artifact import classify as cl
from artifact import fuzz
from artifact import sgroup as sg
from artifact import sset as ss
from test_bundles import mobius

seeds = st.integers(min_value=0, max_value=2**63 - 1)


# ------------------------------------------------------------ Čech nerves


def test_cech_of_identity_is_constant():
    C = cl.cech_nerve_sets([0, 1, 2], 3, 3)
    assert C.sset.counts == [3, 3, 3, 3]
    assert ss.validate_sset(C.sset).ok


def test_cech_of_two_points_over_one():
    C = cl.cech_nerve_sets([0, 0], 1, 3)
    assert C.sset.counts == [2, 4, 8, 16]
    assert cl.compare_with_coskeleton(C, [0, 0], 1)


@given(st.lists(st.integers(0, 2), min_size=1, max_size=5))
def test_cech_matches_coskeleton(pi):
    nM = max(pi) + 1
    if set(pi) != set(range(nM)):
        return
    C = cl.cech_nerve_sets(pi, nM, 2)
    sizes = np.bincount(pi)
    assert C.sset.counts == [int((sizes ** (n + 1)).sum()) for n in range(3)]
    assert cl.compare_with_coskeleton(C, pi, nM)


def test_cech_nerve_rejects_non_surjection():
    with pytest.raises(ValueError):
        cl.cech_nerve_sets([0, 0], 2, 2)


def test_cech_of_simplicial_map_is_augmented():
    U = bd.wg(sg.constant_group(sg.cyclic(2), 2), 2)
    C = cl.cech_nerve(U.torsor.proj)
    assert ss.validate_sset(C.sset).ok
    assert ss.validate_smap(C.aug).ok


# ------------------------------------------------------------ classifying maps


def test_classifying_map_of_the_universal_bundle_is_the_identity():
    G = sg.constant_group(sg.symmetric(3), 2)
    U = bd.wg(G, 2)
    C = cl.classifying_map(U.torsor, U)
    for n in range(3):
        assert np.array_equal(C.base_map.level_maps[n], np.arange(U.wbar.count(n)))


def test_trivial_bundle_maps_to_the_basepoint():
    M = ss.standard_simplex(2, 2)
    G = sg.constant_group(sg.cyclic(3), 2)
    C = cl.classifying_map(bd.product_torsor(M, G))
    W = C.universal.wbar
    x = 0
    for n in range(3):
        assert set(C.base_map.level_maps[n].tolist()) == {x}
        x = W.degen(n, 0, x) if n < W.trunc else x


def test_mobius_hits_the_nonidentity_edge():
    S, G, t = mobius()
    T = bd.twisted_product(S, G, t)
    C = cl.classifying_map(T)
    edge = int(ss.nondegenerate(S, 1)[0])
    assert C.universal.wbar.labels[1][C.base_map.level_maps[1][edge]] == (0, 1)
    assert cl.check_bundle_map(T, C).ok
    assert cl.verify_classification(T, C)


@given(seeds)
def test_classification_on_fuzz(seed):
    T = fuzz.random_torsor(fuzz.rng_for(seed), 1)
    C = cl.classifying_map(T)
    assert cl.verify_classification(T, C)
    assert ss.validate_smap(C.base_map).ok


def test_explicit_and_adjoint_routes_agree():
    G = sg.nerve_cyclic_group(2, 3)
    T = bd.wg(G, 2).torsor
    W = bd.wbar(G, 2)
    t = bd.extract_twisting(T)
    f, g = cl.classifying_explicit(t, W), cl.classifying_adjoint(T, W)
    assert all(np.array_equal(a, b) for a, b in zip(f.level_maps, g.level_maps))


# ------------------------------------------------------------ prisms, paths, dDec


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_prism_map_is_natural(n):
    assert cl.check_prism_naturality(n)
    assert ss.validate_smap(cl.prism_map(n)).ok


def test_prism_map_vertices():
    assert cl.prism_vertex_map(1) == {(0, 0): 0, (1, 0): 1, (0, 1): 2, (1, 1): 3}
    f = cl.prism_map(0)
    # Δ[0] × Δ[1] is Δ[1]
    assert f.source.counts == f.target.counts
    assert np.array_equal(f.level_maps[0], [0, 1])


def test_diamond_commutes():
    W = bd.wbar(sg.constant_group(sg.cyclic(2), 3), 3, check=False)
    P = cl.ddec_to_path(W, 1)
    assert cl.check_diamond(P).ok
    assert any((P.ends[0].level_maps[n] != P.ends[1].level_maps[n]).any() for n in range(2))


@pytest.mark.parametrize("H", [sg.cyclic(2), sg.cyclic(3), sg.symmetric(3)])
def test_ddec_of_wbar_is_cech_for_constant_groups(H):
    assert cl.ddec_vs_cech(sg.constant_group(H, 3), 1)


def test_ddec_vs_cech_trivial_group():
    assert cl.ddec_vs_cech(sg.constant_group(sg.trivial_group(), 5), 2)


def test_ddec_vs_cech_fails_for_nonconstant_group():
    assert not cl.ddec_vs_cech(sg.nerve_cyclic_group(2, 3), 1)


# ------------------------------------------------------------ gerbes


def test_trivial_gerbe_twisting_is_a_coboundary():
    g = cl.trivial_gerbe([0, 0], 1, 3)
    H = cl.cosk1_hypercover(g, 3)
    t = cl.gerbe_to_twisting(g, H)
    xi = H.edges[2] % 3  # unpermuted: element p*k + ξ has coordinate ξ
    delta = (xi[:, 0] + xi[:, 2] - xi[:, 1]) % 3
    assert np.array_equal(cl.twisting_cochain(H, t), delta)


def test_cocycle_gerbe_twisting_recovers_the_cocycle():
    k = 3
    b = {(0, 1): 1, (1, 0): 2, (0, 2): 0, (2, 0): 1, (1, 2): 2, (2, 1): 0}

    def c(u, v, w):
        return (b.get((u, v), 0) + b.get((v, w), 0) - b.get((u, w), 0)) % k

    g = cl.gerbe_from_cocycle([0, 0, 0], 1, k, c)
    H = cl.cosk1_hypercover(g, 2)
    t = cl.gerbe_to_twisting(g, H)
    xi = H.edges[2] % k
    v = H.verts[2]
    cc = np.array([c(*r) for r in v.tolist()])
    assert np.array_equal((cl.twisting_cochain(H, t) - xi[:, 0] - xi[:, 2] + xi[:, 1]) % k, cc)


@pytest.mark.parametrize("pi0,k", [([0, 0], 2), ([0, 1, 1], 3), ([0, 0, 0], 1)])
def test_hypercover_sizes(pi0, k):
    g = cl.trivial_gerbe(pi0, max(pi0) + 1, k)
    H = cl.cosk1_hypercover(g, 3)
    r = np.bincount(pi0)
    assert H.sset.counts == [int((r ** (p + 1)).sum()) * k ** (p * (p + 1) // 2) for p in range(4)]
    assert ss.validate_sset(H.sset).ok
    assert cl.compare_hypercover_with_coskeleton(H)


def test_identity_cover_with_trivial_band_is_constant():
    g = cl.trivial_gerbe([0, 1], 2, 1)
    assert cl.cosk1_hypercover(g, 3).sset.counts == [2, 2, 2, 2]


@given(seeds)
def test_random_gerbes_round_trip(seed):
    g = cl.random_gerbe(fuzz.rng_for(seed))
    assert cl.validate_gerbe(g).ok
    H = cl.cosk1_hypercover(g, 3)
    t = cl.gerbe_to_twisting(g, H)
    assert bd.validate_twisting(H.sset, t.group, t).ok
    L = cl.twisting_to_gerbe(H, t)
    assert cl.validate_gerbe(L).ok
    phi = cl.find_gerbe_isomorphism(g, L)
    assert phi is not None and cl.is_gerbe_isomorphism(g, L, phi)
    assert cl.is_gerbe_isomorphism(g, L, cl.gerbe_map_into_quotient(g, L, H, t))


def test_nonassociative_product_is_rejected():
    g = cl.trivial_gerbe([0, 0], 1, 2)
    prod = g.prod.copy()
    a, b = np.argwhere(prod >= 0)[3]
    prod[a, b] = g.act[prod[a, b], 1]
    bad = cl.GerbeData(g.nM, g.pi0, g.k, g.pairs, g.pair_of, g.act, prod, g.unit)
    assert not cl.validate_gerbe(bad).ok


def test_gerbes_over_one_fiber_are_isomorphic_iff_bands_match():
    # over a single fiber every 2-cocycle is a coboundary
    g = cl.trivial_gerbe([0, 0, 0], 1, 2)
    h = cl.random_gerbe(fuzz.rng_for(7), max_y0=3, max_m=1, max_k=2)
    if h.k == 2 and np.array_equal(h.pi0, g.pi0):
        assert cl.find_gerbe_isomorphism(g, h) is not None
    other = cl.trivial_gerbe([0, 0, 0], 1, 3)
    assert cl.find_gerbe_isomorphism(g, other) is None
