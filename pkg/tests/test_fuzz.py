import pytest
from hypothesis import given, strategies as st

from artifact import bundles as bd
from artifact import classify as cl
from artifact import formats as fm
from artifact import fuzz
from artifact import sgroup as sg
from artifact import sset as ss

seeds = st.integers(min_value=0, max_value=2**63 - 1)


@pytest.mark.parametrize("kind", fuzz.KINDS)
def test_generation_is_deterministic(kind):
    a = fm.dumps(fm.to_doc(fuzz.generate(kind, 12345, 1)))
    b = fm.dumps(fm.to_doc(fuzz.generate(kind, 12345, 1)))
    assert a == b


def test_seeds_give_different_instances():
    docs = {fm.dumps(fm.to_doc(fuzz.generate("tsset", s, 2))) for s in range(8)}
    assert len(docs) > 1


def test_child_streams_are_independent():
    a = fuzz.rng_for(1, 0).integers(0, 2**62, 4)
    b = fuzz.rng_for(1, 1).integers(0, 2**62, 4)
    assert (a != b).any()
    assert (fuzz.rng_for(1, 0).integers(0, 2**62, 4) == a).all()


@given(seeds, st.integers(1, 3))
def test_generated_instances_validate(seed, size):
    for kind in fuzz.KINDS:
        try:
            obj = fuzz.generate(kind, seed, size)
        except ss.BudgetExceeded:
            continue
        if kind == "tsset":
            assert ss.validate_sset(obj).ok
        elif kind == "sgroup":
            assert sg.validate_sgroup(obj).ok
        elif kind == "twist":
            assert bd.validate_twisting(obj.base, obj.group, obj).ok
        elif kind == "torsor":
            assert bd.validate_torsor(obj).ok
        else:
            assert cl.validate_gerbe(obj).ok


@given(seeds)
def test_oracle_agrees_with_validator(seed):
    t = fuzz.random_twist(fuzz.rng_for(seed), 1)
    assert fuzz.identity_violations(t) == []
    try:
        u, _ = fuzz.break_twisting(t, fuzz.rng_for(seed, 9))
    except ss.BudgetExceeded:
        return
    assert fuzz.identity_violations(u)
    assert not bd.validate_twisting(u.base, u.group, u).ok


def test_unknown_kind():
    with pytest.raises(ValueError, match="unknown kind"):
        fuzz.generate("nope", 0)
