import numpy as np
import pytest
from hypothesis import given, strategies as st

from artifact import decalage as dc
from artifact import fuzz
from artifact import sgroup as sg
from artifact import sset as ss

seeds = st.integers(min_value=0, max_value=2**63 - 1)


@pytest.mark.parametrize("side", ["first", "last"])
@pytest.mark.parametrize("X", [ss.circle(4), ss.standard_simplex(2, 4), ss.point(3)])
def test_dec0_is_augmented_and_contractible(X, side):
    A = dc.dec0(X, side)
    assert A.sset.trunc == X.trunc - 1
    assert dc.validate_augmented(A).ok
    assert ss.validate_smap(A.canonical).ok


@given(seeds, st.sampled_from(["first", "last"]))
def test_dec0_on_fuzz(seed, side):
    X = fuzz.generate("tsset", seed, 2)
    assert dc.validate_augmented(dc.dec0(X, side)).ok


def test_dec0_of_simplex_is_a_cone():
    A = dc.dec0(ss.standard_simplex(1, 3), "last")
    # Dec of Δ[1] is Δ[1] ⋆ Δ[0] restricted: degree n simplices are Δ[1]_{n+1}
    assert A.sset.counts == ss.standard_simplex(1, 3).counts[1:]


@given(seeds)
def test_total_dec_is_bisimplicial(seed):
    X = fuzz.generate("tsset", seed, 1)
    W = dc.dec_total(X)
    assert dc.validate_bisset(W).ok
    assert dc.validate_bisset(dc.vertical_dec(W)).ok


def test_T_of_total_dec_unit_exists():
    X = ss.standard_simplex(1, 4)
    W = dc.dec_total(X)
    T = dc.total_T(W)
    assert ss.validate_sset(T).ok


@pytest.mark.parametrize("X", [ss.circle(3), ss.standard_simplex(1, 3)])
def test_adjunction_bijection(X):
    G = sg.nerve_cyclic_group(2, 3)
    assert dc.adjunction_check(X, sg.nerve_NG(G, Ntot=3), 2)


def test_diagonal_dec_is_simplicial():
    X = ss.standard_simplex(2, 5)
    D = dc.diagonal_dec(X)
    assert D.trunc == 2 and ss.validate_sset(D).ok
    assert D.counts == [X.count(1), X.count(3), X.count(5)]


def test_prism_counts():
    P = dc.prism(1, 2)
    # Δ[1] × Δ[1]: 4 vertices, 9 edges, 16 triangles (2 nondegenerate)
    assert P.counts == [4, 9, 16]
    assert len(ss.nondegenerate(P, 2)) == 2


def test_restrict_along_matches_yoneda():
    X = ss.standard_simplex(3, 3)
    z = X.index_of(3)[(0, 1, 2, 3)]
    assert X.labels[1][dc.restrict_along(X, 3, z, (1, 3))] == (1, 3)
    assert X.labels[2][dc.restrict_along(X, 3, z, (0, 0, 2))] == (0, 0, 2)
    f = dc.yoneda_map(X, 3, z, 3)
    assert ss.validate_smap(f).ok


def test_path_object_endpoints():
    X = ss.standard_simplex(1, 2)
    PO = dc.path_object(X, 1)
    assert ss.validate_sset(PO.sset).ok
    assert ss.validate_smap(PO.ev0).ok and ss.validate_smap(PO.ev1).ok
    # constant paths exist at every vertex
    assert PO.sset.count(0) >= X.count(0)


def test_broken_bisset_is_caught():
    W = dc.dec_total(ss.standard_simplex(1, 3))
    bad = {k: v.copy() for k, v in W.hface.items()}
    key = next(c for c in bad if c[0] >= 1 and bad[c].shape[1] > 1)
    bad[key][0] = bad[key][0][::-1]
    V = dc.BisSet(W.Np, W.Nq, W.Ntot, W.nbase, W.base_of, bad, W.hdegen, W.vface, W.vdegen)
    assert not dc.validate_bisset(V).ok
