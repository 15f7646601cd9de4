"""JSON formats: tsset/1, sgroup/1, bisset/1, twist/1, torsor/1, gerbe/1, homology/1.

Every document is an object with a ``"format"`` key naming the schema and
its version.  Output is canonical (sorted keys, fixed separators) so that
identical inputs give byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import bundles as bd
from . import classify as cl
from . import decalage as dc
from . import sgroup as sg
from .sset import SMap, TruncSSet

VERSIONS = {
    "tsset": 1, "sgroup": 1, "bisset": 1, "twist": 1, "torsor": 1, "gerbe": 1, "homology": 1,
}


class ParseError(ValueError):
    """Malformed input; the message starts with ``path:line:``."""


class FormatVersionError(ParseError):
    """Well-formed document of an unsupported schema or version."""


def _tuplify(x):
    if isinstance(x, list):
        return tuple(_tuplify(v) for v in x)
    return x


def _listify(x):
    if isinstance(x, (tuple, list)):
        return [_listify(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    return x


def _arr(x):
    return np.asarray(x, dtype=np.int64).tolist()


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def write(doc, path) -> None:
    Path(path).write_text(dumps(doc), encoding="utf-8")


# ------------------------------------------------------------ encoders


def tsset_doc(X: TruncSSet, labels: bool = True) -> dict:
    doc = {
        "format": "tsset/1",
        "trunc": X.trunc,
        "nbase": X.nbase,
        "base_of": [_arr(b) for b in X.base_of],
        "faces": [_arr(f) for f in X.faces],
        "degens": [_arr(d) for d in X.degens],
    }
    if labels and X.labels is not None:
        doc["labels"] = [_listify(lv) for lv in X.labels]
    return doc


def _group_table(g) -> list:
    a = np.arange(g.order)
    return _arr(g.mul(a[:, None], a[None, :]))


def sgroup_doc(G: sg.SimpGroup) -> dict:
    tables, seen = [], {}
    refs = []
    for lv in G.groups:
        row = []
        for g in lv:
            if id(g) not in seen:
                seen[id(g)] = len(tables)
                tables.append({"table": _group_table(g), "identity": int(g.identity)})
            row.append(seen[id(g)])
        refs.append(row)
    return {
        "format": "sgroup/1",
        "sset": tsset_doc(G.sset),
        "groups": tables,
        "group_of": refs,
        "local": [_arr(c) for c in G.local],
    }


def twist_doc(t: bd.TwistFn) -> dict:
    return {
        "format": "twist/1",
        "base": tsset_doc(t.base),
        "group": sgroup_doc(t.group),
        "maps": [_arr(m) for m in t.maps],
    }


def torsor_doc(T: bd.Torsor) -> dict:
    doc = {
        "format": "torsor/1",
        "total": tsset_doc(T.total),
        "base": tsset_doc(T.base),
        "group": sgroup_doc(T.group),
        "proj": [_arr(m) for m in T.proj.level_maps],
        "action": [_arr(a) for a in T.action.act],
    }
    if T.section is not None:
        doc["section"] = [_arr(s) for s in T.section]
    return doc


def bisset_doc(W: dc.BisSet) -> dict:
    cells = []
    for (p, q) in W.cells():
        c = {"p": p, "q": q, "base_of": _arr(W.base_of[(p, q)]),
             "hface": _arr(W.hface[(p, q)]), "vface": _arr(W.vface[(p, q)])}
        if (p, q) in W.hdegen:
            c["hdegen"] = _arr(W.hdegen[(p, q)])
        if (p, q) in W.vdegen:
            c["vdegen"] = _arr(W.vdegen[(p, q)])
        cells.append(c)
    return {"format": "bisset/1", "Np": W.Np, "Nq": W.Nq, "Ntot": W.Ntot, "nbase": W.nbase, "cells": cells}


def gerbe_doc(g: cl.GerbeData) -> dict:
    return {
        "format": "gerbe/1",
        "nM": g.nM, "k": g.k, "pi0": _arr(g.pi0), "pairs": _arr(g.pairs),
        "pair_of": _arr(g.pair_of), "act": _arr(g.act), "prod": _arr(g.prod), "unit": _arr(g.unit),
    }


def homology_doc(groups: dict, coeffs: int | None = None) -> dict:
    return {
        "format": "homology/1",
        "coefficients": "Z" if coeffs is None else f"C{coeffs}",
        "degrees": [{"n": n, **grp.to_json(), "text": str(grp)} for n, grp in sorted(groups.items())],
    }


def to_doc(obj) -> dict:
    if isinstance(obj, TruncSSet):
        return tsset_doc(obj)
    if isinstance(obj, sg.SimpGroup):
        return sgroup_doc(obj)
    if isinstance(obj, bd.TwistFn):
        return twist_doc(obj)
    if isinstance(obj, bd.Torsor):
        return torsor_doc(obj)
    if isinstance(obj, dc.BisSet):
        return bisset_doc(obj)
    if isinstance(obj, cl.GerbeData):
        return gerbe_doc(obj)
    raise TypeError(f"no format for {type(obj).__name__}")


# ------------------------------------------------------------ decoders


class _Ctx:
    def __init__(self, path, text):
        self.path = str(path)
        self.text = text

    def line_of(self, key):
        if not self.text or key is None:
            return 1
        pos = self.text.find(f'"{key}"')
        return self.text.count("\n", 0, pos) + 1 if pos >= 0 else 1

    def fail(self, msg, key=None):
        raise ParseError(f"{self.path}:{self.line_of(key)}: {msg}")


def _need(ctx, doc, key, where=""):
    if not isinstance(doc, dict) or key not in doc:
        ctx.fail(f"missing field {where}{key!r}", key)
    return doc[key]


def _ints(ctx, x, key, ndim):
    try:
        a = np.asarray(x, dtype=np.int64)
    except (TypeError, ValueError, OverflowError):
        ctx.fail(f"field {key!r} is not an integer array", key)
    if a.size == 0:
        a = a.reshape((0,) * ndim) if ndim else a
    if a.ndim != ndim and a.size:
        ctx.fail(f"field {key!r} has {a.ndim} dimensions, expected {ndim}", key)
    return a


def _check_format(ctx, doc, kind):
    if not isinstance(doc, dict):
        ctx.fail("top level is not an object")
    fmt = doc.get("format")
    if not isinstance(fmt, str) or "/" not in fmt:
        ctx.fail("missing or malformed 'format' field", "format")
    name, _, ver = fmt.partition("/")
    if kind is not None and name != kind:
        raise FormatVersionError(f"{ctx.path}:{ctx.line_of('format')}: expected a {kind} document, got {fmt!r}")
    if name not in VERSIONS:
        raise FormatVersionError(f"{ctx.path}:{ctx.line_of('format')}: unknown format {fmt!r}")
    if ver != str(VERSIONS[name]):
        raise FormatVersionError(
            f"{ctx.path}:{ctx.line_of('format')}: {name} version {ver} not supported (expected {VERSIONS[name]})")
    return name


def _tsset(ctx, doc) -> TruncSSet:
    _check_format(ctx, doc, "tsset")
    N = int(_need(ctx, doc, "trunc"))
    nbase = int(_need(ctx, doc, "nbase"))
    base_of = [_ints(ctx, b, "base_of", 1) for b in _need(ctx, doc, "base_of")]
    faces = [_ints(ctx, f, "faces", 2) for f in _need(ctx, doc, "faces")]
    degens = [_ints(ctx, d, "degens", 2) for d in _need(ctx, doc, "degens")]
    if len(base_of) != N + 1 or len(faces) != N + 1 or len(degens) != N:
        ctx.fail("level count does not match 'trunc'", "trunc")
    faces[0] = faces[0].reshape(0, len(base_of[0]))
    for n in range(N + 1):
        if n and faces[n].shape != (n + 1, len(base_of[n])):
            ctx.fail(f"faces in degree {n} have shape {faces[n].shape}", "faces")
        if n and ((faces[n] < 0) | (faces[n] >= len(base_of[n - 1]))).any():
            ctx.fail(f"face index out of range in degree {n}", "faces")
        if n < N and (degens[n].shape != (n + 1, len(base_of[n]))
                      or ((degens[n] < 0) | (degens[n] >= len(base_of[n + 1]))).any()):
            ctx.fail(f"bad degeneracy table in degree {n}", "degens")
        if ((base_of[n] < 0) | (base_of[n] >= nbase)).any():
            ctx.fail(f"base point out of range in degree {n}", "base_of")
    labels = None
    if "labels" in doc:
        labels = [[_tuplify(x) for x in lv] for lv in doc["labels"]]
    return TruncSSet(N, nbase, base_of, faces, degens, labels)


def _sgroup(ctx, doc) -> sg.SimpGroup:
    _check_format(ctx, doc, "sgroup")
    X = _tsset(ctx, _need(ctx, doc, "sset"))
    tables = []
    for t in _need(ctx, doc, "groups"):
        tab = _ints(ctx, _need(ctx, t, "table"), "table", 2)
        tables.append(sg.FinGroup(tab, int(_need(ctx, t, "identity"))))
    refs = _need(ctx, doc, "group_of")
    local = [_ints(ctx, c, "local", 1) for c in _need(ctx, doc, "local")]
    if len(refs) != X.trunc + 1 or len(local) != X.trunc + 1:
        ctx.fail("group levels do not match the simplicial set", "group_of")
    try:
        groups = [[tables[r] for r in row] for row in refs]
    except (IndexError, TypeError):
        ctx.fail("group reference out of range", "group_of")
    return sg.make_simp_group(X, groups, local)


def _twist(ctx, doc) -> bd.TwistFn:
    _check_format(ctx, doc, "twist")
    M = _tsset(ctx, _need(ctx, doc, "base"))
    G = _sgroup(ctx, _need(ctx, doc, "group"))
    maps = [_ints(ctx, m, "maps", 1) for m in _need(ctx, doc, "maps")]
    return bd.TwistFn(M, G, maps)


def _torsor(ctx, doc) -> bd.Torsor:
    _check_format(ctx, doc, "torsor")
    P = _tsset(ctx, _need(ctx, doc, "total"))
    M = _tsset(ctx, _need(ctx, doc, "base"))
    G = _sgroup(ctx, _need(ctx, doc, "group"))
    proj = SMap(P, M, [_ints(ctx, m, "proj", 1) for m in _need(ctx, doc, "proj")])
    act = sg.GroupAction(P, G, [_ints(ctx, a, "action", 2) for a in _need(ctx, doc, "action")])
    sec = None
    if "section" in doc:
        sec = [_ints(ctx, s, "section", 1) for s in doc["section"]]
    return bd.Torsor(P, M, G, proj, act, sec)


def _bisset(ctx, doc) -> dc.BisSet:
    _check_format(ctx, doc, "bisset")
    base_of, hf, hd, vf, vd = {}, {}, {}, {}, {}
    for c in _need(ctx, doc, "cells"):
        key = (int(_need(ctx, c, "p")), int(_need(ctx, c, "q")))
        base_of[key] = _ints(ctx, _need(ctx, c, "base_of"), "base_of", 1)
        hf[key] = _ints(ctx, _need(ctx, c, "hface"), "hface", 2).reshape(-1, len(base_of[key]))
        vf[key] = _ints(ctx, _need(ctx, c, "vface"), "vface", 2).reshape(-1, len(base_of[key]))
        if "hdegen" in c:
            hd[key] = _ints(ctx, c["hdegen"], "hdegen", 2)
        if "vdegen" in c:
            vd[key] = _ints(ctx, c["vdegen"], "vdegen", 2)
    return dc.BisSet(int(_need(ctx, doc, "Np")), int(_need(ctx, doc, "Nq")), int(_need(ctx, doc, "Ntot")),
                     int(_need(ctx, doc, "nbase")), base_of, hf, hd, vf, vd)


def _gerbe(ctx, doc) -> cl.GerbeData:
    _check_format(ctx, doc, "gerbe")
    return cl.GerbeData(
        int(_need(ctx, doc, "nM")),
        _ints(ctx, _need(ctx, doc, "pi0"), "pi0", 1),
        int(_need(ctx, doc, "k")),
        _ints(ctx, _need(ctx, doc, "pairs"), "pairs", 2).reshape(-1, 2),
        _ints(ctx, _need(ctx, doc, "pair_of"), "pair_of", 1),
        _ints(ctx, _need(ctx, doc, "act"), "act", 2),
        _ints(ctx, _need(ctx, doc, "prod"), "prod", 2),
        _ints(ctx, _need(ctx, doc, "unit"), "unit", 1),
    )


def _homology(ctx, doc) -> dict:
    _check_format(ctx, doc, "homology")
    return doc


_DECODERS = {"tsset": _tsset, "sgroup": _sgroup, "twist": _twist, "torsor": _torsor,
             "bisset": _bisset, "gerbe": _gerbe, "homology": _homology}


def loads(text: str, kind: str | None = None, path="<string>"):
    """Decode a document; ``kind`` restricts the accepted schema."""
    ctx = _Ctx(path, text)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}:{e.lineno}: {e.msg} (column {e.colno})") from None
    name = _check_format(ctx, doc, kind)
    try:
        return _DECODERS[name](ctx, doc)
    except ParseError:
        raise
    except (TypeError, ValueError, KeyError, IndexError) as e:
        raise ParseError(f"{path}:1: malformed {name} document: {e}") from None


def load(path, kind: str | None = None):
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"{path}:0: {e.strerror}") from None
    return loads(text, kind, path)
