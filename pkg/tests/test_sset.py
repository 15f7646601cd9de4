import numpy as np
import pytest
from hypothesis import given, strategies as st

from artifact import fuzz
from artifact import sset as ss

seeds = st.integers(min_value=0, max_value=2**63 - 1)


@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_standard_simplex_counts(m):
    from math import comb

    X = ss.standard_simplex(m, 4)
    # monotone maps [n] → [m]
    assert X.counts == [comb(m + n + 1, n + 1) for n in range(5)]
    assert ss.validate_sset(X).ok


def test_circle_has_one_nondegenerate_edge():
    S = ss.circle(4)
    assert ss.validate_sset(S).ok
    assert [len(ss.nondegenerate(S, n)) for n in range(5)] == [1, 1, 0, 0, 0]
    assert S.counts == [1, 2, 3, 4, 5]


def test_point_is_terminal():
    X = ss.standard_simplex(2, 3)
    assert ss.count_maps(X, ss.point(3)) == 1


def test_maps_from_interval_to_interval():
    D = ss.standard_simplex(1, 2)
    assert ss.count_maps(D, D) == 3


def test_validator_catches_a_broken_face():
    X = ss.standard_simplex(2, 3)
    faces = [f.copy() for f in X.faces]
    faces[2][0, 0], faces[2][0, 1] = faces[2][0, 1], faces[2][0, 0]
    Y = ss.TruncSSet(X.trunc, X.nbase, X.base_of, faces, X.degens)
    assert not ss.validate_sset(Y).ok


@given(seeds)
def test_fuzz_ssets_are_valid(seed):
    X = fuzz.generate("tsset", seed, 2)
    assert ss.validate_sset(X).ok


@given(seeds)
def test_ez_decomposition_rebuilds_the_simplex(seed):
    X = fuzz.generate("tsset", seed, 2)
    for n in range(X.trunc + 1):
        for x in range(X.count(n)):
            ops, (k, z) = ss.ez_decomposition(X, n, x)
            assert not ss.is_degenerate(X, k, z)
            y, deg = z, k
            for i in reversed(ops):
                y = X.degen(deg, i, y)
                deg += 1
            assert (deg, y) == (n, x)


@given(seeds)
def test_latching_pushout_on_fuzz(seed):
    X = fuzz.generate("tsset", seed, 2)
    for n in range(X.trunc):
        assert ss.verify_latching_pushout(X, n)


def test_coskeleton_of_two_points():
    D = ss.TruncSSet(0, 1, [np.zeros(2, dtype=np.int64)], [np.zeros((0, 2), dtype=np.int64)], [])
    K = ss.coskeleton(D, 0, 3)
    assert K.counts == [2, 4, 8, 16]
    assert ss.validate_sset(K).ok


def test_coskeleton_is_identity_below_its_degree():
    X = ss.circle(3)
    assert ss.coskeleton(X, 3, 3).same_tables(X)


def test_fiber_product_over_a_point_is_the_product():
    A, B = ss.standard_simplex(1, 2), ss.standard_simplex(1, 2)
    P, p1, p2 = ss.product(A, B)
    assert P.counts == [4, 9, 16]
    assert ss.validate_sset(P).ok
    assert ss.validate_smap(p1).ok and ss.validate_smap(p2).ok


def test_find_isomorphism_after_permuting():
    X = ss.standard_simplex(2, 3)
    rng = np.random.default_rng(3)
    perms = [rng.permutation(c) for c in X.counts]
    Y = ss.permute(X, perms)
    f = ss.find_isomorphism(X, Y)
    assert f is not None and ss.validate_smap(f).ok


def test_disjoint_union_and_restriction_round_trip():
    X, Y = ss.circle(3), ss.standard_simplex(1, 3)
    U = ss.disjoint_union([X, Y])
    assert U.nbase == 2
    R0, _ = ss.restrict_to_base(U, [0])
    R1, _ = ss.restrict_to_base(U, [1])
    assert R0.same_tables(X) and R1.same_tables(Y)


def test_budget_is_enforced():
    with pytest.raises(ss.BudgetExceeded):
        ss.hom_enumerate(ss.standard_simplex(2, 3), ss.standard_simplex(3, 3), budget=5)
