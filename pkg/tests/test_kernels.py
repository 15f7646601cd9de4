import numpy as np
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from artifact import _kernels


@given(st.integers(1, 30).flatmap(lambda n: st.tuples(
    st.just(n), arrays(np.int64, 20, elements=st.integers(0, n - 1)),
    arrays(np.int64, 20, elements=st.integers(0, n - 1)))))
def test_union_find_backends_agree(case):
    n, left, right = case
    got = _kernels.union_find_classes(n, left, right)
    assert np.array_equal(got, _kernels._uf_classes_np(n, left, right))
    # classes are numbered by least member, in order
    firsts = [int(np.nonzero(got == c)[0][0]) for c in range(got.max() + 1)]
    assert firsts == sorted(firsts)
    assert (got[left] == got[right]).all()


@given(arrays(np.int64, 15, elements=st.integers(0, 4)), arrays(np.int64, 15, elements=st.integers(0, 4)))
def test_compose_mismatch_backends_agree(a, b):
    o1, o2 = np.arange(5), np.array([0, 1, 2, 2, 4])
    assert np.array_equal(_kernels.compose_mismatch(o1, a, o2, b), _kernels._compose_mismatch_np(o1, a, o2, b))


def test_snf_backends_agree_on_a_boundary_matrix():
    from artifact import bundles as bd, homology as hm, sgroup as sg

    W = bd.wbar(sg.constant_group(sg.cyclic(3), 5), 5, check=False)
    B = hm.normalized_chains(W, 4).boundary[4]
    assert sorted(abs(int(d)) for d in _kernels.snf_diagonal(B)) == sorted(
        abs(int(d)) for d in _kernels._snf_diag_np(B))
