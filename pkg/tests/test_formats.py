import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from artifact import bundles as bd
from artifact import classify as cl
from artifact import decalage as dc
from artifact import formats as fm
from artifact import fuzz
from artifact import sgroup as sg
from artifact import sset as ss

seeds = st.integers(min_value=0, max_value=2**63 - 1)


def same_sset(a, b):
    return a.same_tables(b) and a.nbase == b.nbase


def test_tsset_round_trip_keeps_labels():
    X = ss.standard_simplex(2, 3)
    Y = fm.loads(fm.dumps(fm.tsset_doc(X)))
    assert same_sset(X, Y) and Y.labels == X.labels


@given(seeds, st.sampled_from(fuzz.KINDS))
def test_fuzz_round_trip_is_byte_identical(seed, kind):
    try:
        obj = fuzz.generate(kind, seed, 1)
    except ss.BudgetExceeded:
        return
    text = fm.dumps(fm.to_doc(obj))
    again = fm.dumps(fm.to_doc(fm.loads(text)))
    assert text == again


def test_sgroup_round_trip():
    G = sg.disjoint_union_groups([sg.nerve_cyclic_group(2, 2), sg.constant_group(sg.symmetric(3), 2)])
    H = fm.loads(fm.dumps(fm.sgroup_doc(G)), "sgroup")
    assert same_sset(G.sset, H.sset)
    assert all(np.array_equal(a, b) for a, b in zip(G.local, H.local))
    assert sg.validate_sgroup(H).ok


def test_torsor_round_trip_validates():
    T = bd.wg(sg.constant_group(sg.cyclic(2), 2), 2).torsor
    S = fm.loads(fm.dumps(fm.torsor_doc(T)), "torsor")
    assert bd.validate_torsor(S).ok
    assert bd.extract_twisting(S).same(bd.extract_twisting(T))


def test_bisset_round_trip():
    W = dc.dec_total(ss.circle(3))
    V = fm.loads(fm.dumps(fm.bisset_doc(W)), "bisset")
    assert dc.validate_bisset(V).ok
    assert all(np.array_equal(W.hface[c], V.hface[c]) for c in W.hface)


def test_gerbe_round_trip():
    g = cl.random_gerbe(fuzz.rng_for(5))
    h = fm.loads(fm.dumps(fm.gerbe_doc(g)), "gerbe")
    assert cl.is_gerbe_isomorphism(g, h, np.arange(g.n1))


def test_output_is_canonical():
    text = fm.dumps(fm.tsset_doc(ss.circle(2)))
    assert text.endswith("\n") and "\n" not in text[:-1]
    assert text == fm.dumps(json.loads(text))


def test_wrong_kind_is_a_format_error():
    text = fm.dumps(fm.tsset_doc(ss.point(1)))
    with pytest.raises(fm.FormatVersionError, match="expected a torsor"):
        fm.loads(text, "torsor")


def test_unsupported_version():
    doc = fm.tsset_doc(ss.point(1))
    doc["format"] = "tsset/9"
    with pytest.raises(fm.FormatVersionError, match="version 9"):
        fm.loads(fm.dumps(doc))


def test_syntax_error_reports_the_line():
    with pytest.raises(fm.ParseError, match=r"f\.json:3:"):
        fm.loads('{"format": "tsset/1",\n"trunc": 0,\n"nbase": ,\n}', path="f.json")


def test_missing_field_reports_its_name():
    doc = fm.tsset_doc(ss.point(1))
    del doc["faces"]
    with pytest.raises(fm.ParseError, match="faces"):
        fm.loads(json.dumps(doc, indent=1))


def test_missing_file(tmp_path):
    with pytest.raises(fm.ParseError):
        fm.load(tmp_path / "nope.json")
