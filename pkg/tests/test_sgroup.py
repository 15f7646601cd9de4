import numpy as np
import pytest
from hypothesis import given, strategies as st

from artifact import decalage as dc
from artifact import sgroup as sg


@pytest.mark.parametrize("G", [sg.cyclic(1), sg.cyclic(4), sg.symmetric(3), sg.trivial_group()])
def test_finite_groups_satisfy_the_axioms(G):
    assert sg.validate_group(G).ok


def test_product_group_is_componentwise():
    P = sg.ProductGroup([sg.cyclic(2), sg.symmetric(3)])
    assert P.order == 12 and sg.validate_group(P).ok
    a, b = P.encode([1, 4]), P.encode([1, 2])
    assert list(P.decode(P.mul(a, b))) == [0, int(sg.symmetric(3).mul(4, 2))]


def test_broken_table_is_rejected():
    t = sg.cyclic(3).table.copy()
    t[1, 1] = 1
    assert not sg.validate_group(sg.FinGroup(t)).ok


@pytest.mark.parametrize("make", [
    lambda: sg.constant_group(sg.cyclic(3), 3),
    lambda: sg.constant_group(sg.symmetric(3), 3),
    lambda: sg.nerve_cyclic_group(2, 4),
    lambda: sg.nerve_cyclic_group(3, 3),
    lambda: sg.disjoint_union_groups([sg.nerve_cyclic_group(2, 3), sg.constant_group(sg.cyclic(3), 3)]),
])
def test_simplicial_groups_validate(make):
    G = make()
    assert sg.validate_sgroup(G).ok
    assert sg.validate_action(sg.regular_action(G)).ok


def test_nerve_sizes():
    assert sg.nerve_cyclic_group(3, 4).sset.counts == [1, 3, 9, 27, 81]


@given(st.integers(2, 4), st.integers(0, 3))
def test_nerve_of_G_is_bisimplicial(k, which):
    G = [sg.constant_group(sg.cyclic(k), 3), sg.nerve_cyclic_group(2, 3),
         sg.constant_group(sg.symmetric(3), 2), sg.nerve_cyclic_group(3, 2)][which]
    W = sg.nerve_NG(G)
    assert dc.validate_bisset(W).ok


def test_restrict_group_recovers_parts():
    A, B = sg.nerve_cyclic_group(2, 3), sg.constant_group(sg.cyclic(3), 3)
    U = sg.disjoint_union_groups([A, B])
    R = sg.restrict_group(U, [1])
    assert R.sset.same_tables(B.sset)
    assert all(np.array_equal(R.local[n], B.local[n]) for n in range(4))


def test_action_groupoid_nerve_is_bisimplicial():
    A = sg.regular_action(sg.constant_group(sg.cyclic(2), 2))
    W = sg.nerve_action_groupoid(A, 2)
    assert dc.validate_bisset(W).ok
