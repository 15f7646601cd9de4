import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from artifact import _kernels
from artifact import bundles as bd
from artifact import fuzz
from artifact import homology as hm
from artifact import sgroup as sg
from artifact import sset as ss

seeds = st.integers(min_value=0, max_value=2**63 - 1)
small_mats = st.tuples(st.integers(1, 5), st.integers(1, 5)).flatmap(
    lambda s: arrays(np.int64, s, elements=st.integers(-6, 6)))


def sympy_factors(A):
    f = invariant_factors(Matrix(A.tolist()), domain=ZZ)
    return sorted(abs(int(d)) for d in f if d != 0)


@given(small_mats)
def test_snf_matches_sympy(A):
    factors, rank = hm.smith_normal_form(A)
    assert factors == sympy_factors(A)
    assert rank == np.linalg.matrix_rank(A.astype(float))


@given(small_mats)
def test_snf_backends_agree(A):
    assert sorted(abs(int(d)) for d in _kernels._snf_diag_np(A)) == sorted(
        abs(int(d)) for d in _kernels.snf_diagonal(A))


def test_snf_handles_large_entries():
    A = np.array([[2**40, 3], [5, 2**41]], dtype=object)
    assert hm.smith_normal_form(A)[0] == sympy_factors(A)


def test_snf_examples():
    assert hm.smith_normal_form(np.array([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]))[0] == [2, 6, 12]
    assert hm.smith_normal_form(np.zeros((2, 3), dtype=np.int64)) == ([], 0)


def test_abelian_group_normal_form():
    assert hm.abelian_group(0, [2, 3]) == hm.AbelianGroup(0, (6,))
    assert hm.abelian_group(1, [4, 6, 1]) == hm.AbelianGroup(1, (2, 12))
    assert str(hm.AbelianGroup(2, (2,))) == "Z^2 ⊕ Z/2"
    assert str(hm.AbelianGroup(0)) == "0"


@given(seeds)
def test_boundary_squares_to_zero_on_fuzz(seed):
    C = hm.normalized_chains(fuzz.generate("tsset", seed, 2))
    for n in range(2, len(C.ranks)):
        assert not (C.boundary[n] @ C.boundary[n - 1]).any()


def test_circle_homology():
    S = ss.circle(4)
    assert hm.homology_groups(S, 0) == hm.AbelianGroup(1)
    assert hm.homology_groups(S, 1) == hm.AbelianGroup(1)
    assert hm.homology_groups(S, 2) == hm.AbelianGroup(0)


def test_simplex_is_acyclic():
    D = ss.standard_simplex(3, 4)
    assert [hm.homology_groups(D, n) for n in range(3)] == [hm.AbelianGroup(1), hm.AbelianGroup(0),
                                                               hm.AbelianGroup(0)]


def test_classifying_space_of_c2():
    W = bd.wbar(sg.constant_group(sg.cyclic(2), 5), 5)
    got = [hm.homology_groups(W, n) for n in range(4)]
    assert got == [hm.AbelianGroup(1), hm.AbelianGroup(0, (2,)), hm.AbelianGroup(0), hm.AbelianGroup(0, (2,))]


def test_degrees_near_truncation_are_refused():
    S = ss.circle(3)
    with pytest.raises(ss.TruncationError, match="allow"):
        hm.homology_groups(S, 2)
    assert hm.homology_groups(S, 2, allow_edge=True) == hm.AbelianGroup(0)
    with pytest.raises(ss.TruncationError):
        hm.homology_groups(S, 3, allow_edge=True)


@pytest.mark.parametrize("k", [2, 3, 4, 6])
def test_circle_cohomology(k):
    S = ss.circle(3)
    assert hm.cohomology_coeffs(S, k, 1) == hm.AbelianGroup(0, (k,))
    assert hm.cohomology_coeffs(S, k, 0) == hm.AbelianGroup(0, (k,))


@pytest.mark.parametrize("p", [2, 3])
def test_universal_coefficients_match_direct_mod_p(p):
    W = bd.wbar(sg.constant_group(sg.cyclic(2), 5), 5)
    for n in range(4):
        G = hm.cohomology_coeffs(W, p, n)
        assert len(G.torsion) == hm.cohomology_rank_mod_p(W, p, n)


@given(seeds, st.sampled_from([2, 3, 5]))
def test_universal_coefficients_on_fuzz(seed, p):
    X = fuzz.generate("tsset", seed, 2)
    for n in range(X.trunc - 1):
        assert len(hm.cohomology_coeffs(X, p, n).torsion) == hm.cohomology_rank_mod_p(X, p, n)


def brute_solvable(A, y, k):
    for x in itertools.product(range(k), repeat=A.shape[1]):
        if not ((A @ np.array(x, dtype=np.int64) - y) % k).any():
            return True
    return False


@given(st.integers(2, 9).flatmap(lambda k: st.tuples(
    st.just(k),
    st.tuples(st.integers(1, 3), st.integers(1, 3)).flatmap(
        lambda s: st.tuples(arrays(np.int64, s, elements=st.integers(0, k - 1)),
                            arrays(np.int64, s[0], elements=st.integers(0, k - 1)))))))
def test_solve_mod_matches_brute_force(case):
    k, (A, y) = case
    x = hm.solve_mod(A, y, k)
    assert (x is not None) == brute_solvable(A, y, k)
    if x is not None:
        assert not ((A @ x - y) % k).any()


def test_solve_mod_zero_divisor_case():
    # 2x ≡ 1 (mod 4) has no solution, 2x ≡ 2 does
    assert hm.solve_mod(np.array([[2]]), np.array([1]), 4) is None
    assert hm.solve_mod(np.array([[2]]), np.array([2]), 4) is not None
    # x + 2y ≡ 1, 2x ≡ 0 (mod 4): x odd makes 2x ≡ 2
    assert hm.solve_mod(np.array([[1, 2], [2, 0]]), np.array([1, 0]), 4) is None


def test_rank_mod_p():
    assert hm.rank_mod_p(np.array([[2, 4], [1, 2]]), 2) == 1
    assert hm.rank_mod_p(np.array([[2, 4], [1, 3]]), 3) == 2
