"""Čech nerves, classifying maps, the prism homotopy, and finite bundle gerbes.

Gerbes here have C_k in place of the circle.  A gerbe over a finite set M
is a surjection Y0 → M, a C_k-torsor Y1 over the pairs of Y0 with equal
image, and an associative, unital, C_k-bilinear product on composable
pairs.  The twisting function of a gerbe lives on its 1-coskeleton
hypercover and takes values in the nerve of C_k.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import bundles as bd
from . import decalage as dc
from . import sgroup as sg
from . import sset as ss
from .sset import SMap, TruncationError, TruncSSet, ValidationReport


# ------------------------------------------------------------ Čech nerves


@dataclass(eq=False)
class CechNerve:
    sset: TruncSSet
    aug: SMap | None  # to M for simplicial input; base labels carry it for sets


def cech_nerve_sets(pi, nM: int, N: int) -> CechNerve:
    """Čech nerve of a surjection of finite sets Y → M; the base is M."""
    pi = np.asarray(pi, dtype=np.int64)
    if len(np.setdiff1d(np.arange(nM), pi)):
        raise ValueError("map is not surjective")
    fib = [np.nonzero(pi == m)[0].tolist() for m in range(nM)]
    levels = [[t for m in range(nM) for t in itertools.product(fib[m], repeat=n + 1)] for n in range(N + 1)]
    X = ss.from_labels(
        levels,
        face=lambda n, i, t: t[:i] + t[i + 1:],
        degen=lambda n, i, t: t[: i + 1] + t[i:],
        base=lambda n, t: int(pi[t[0]]),
        nbase=nM,
    )
    return CechNerve(X, None)


def cech_nerve(f: SMap, N: int | None = None) -> CechNerve:
    """Diagonal Čech nerve of a degreewise surjective map Y → M.

    Degree n is the (n + 1)-fold fiber product of Y_n over M_n; d_i omits
    component i and applies d_i to the rest, s_i repeats component i and
    applies s_i to all.
    """
    Y, M = f.source, f.target
    N = f.trunc if N is None else N
    fibers = []
    for n in range(N + 1):
        fm = f.level_maps[n]
        if len(np.setdiff1d(np.arange(M.count(n)), fm)):
            raise ValueError(f"map is not surjective in degree {n}")
        fibers.append([np.nonzero(fm == m)[0].tolist() for m in range(M.count(n))])
    levels = [[t for m in range(M.count(n)) for t in itertools.product(fibers[n][m], repeat=n + 1)]
              for n in range(N + 1)]
    X = ss.from_labels(
        levels,
        face=lambda n, i, t: tuple(Y.face(n, i, y) for y in t[:i] + t[i + 1:]),
        degen=lambda n, i, t: tuple(Y.degen(n, i, y) for y in t[: i + 1] + t[i:]),
        base=lambda n, t: int(Y.base_of[n][t[0]]),
        nbase=Y.nbase,
    )
    aug = SMap(X, M.truncate(N), [np.array([f.level_maps[n][t[0]] for t in levels[n]], dtype=np.int64)
                                   for n in range(N + 1)])
    return CechNerve(X, aug)


def vertices(X: TruncSSet, n: int) -> np.ndarray:
    """Vertex j of every n-simplex, as a (count, n + 1) array."""
    out = np.empty((X.count(n), n + 1), dtype=np.int64)
    for j in range(n + 1):
        x = np.arange(X.count(n))
        deg = n
        # drop the vertices above j, then those below
        for i in range(n, j, -1):
            x = X.faces[deg][i][x]
            deg -= 1
        for _ in range(j):
            x = X.faces[deg][0][x]
            deg -= 1
        out[:, j] = x
    return out


def compare_with_coskeleton(C: CechNerve, Y0_base, nM: int) -> bool:
    """The set-level Čech nerve equals cosk₀ of the discrete set over M."""
    N = C.sset.trunc
    D = TruncSSet(0, nM, [np.asarray(Y0_base, dtype=np.int64)], [np.zeros((0, len(Y0_base)), dtype=np.int64)], [])
    K = ss.coskeleton(D, 0, N)
    if K.counts != C.sset.counts:
        return False
    idx = [C.sset.index_of(n) for n in range(N + 1)]
    maps = []
    for n in range(N + 1):
        v = vertices(K, n)
        try:
            maps.append(np.array([idx[n][tuple(r)] for r in v.tolist()], dtype=np.int64))
        except KeyError:
            return False
        if len(np.unique(maps[-1])) != len(maps[-1]):
            return False
    return ss.validate_smap(SMap(K, C.sset, maps)).ok


# ------------------------------------------------------------ classifying maps


@dataclass(eq=False)
class Classification:
    base_map: SMap  # M → W̄G
    total_map: SMap  # P → WG
    universal: bd.UniversalBundle
    twisting: bd.TwistFn


def classifying_explicit(t: bd.TwistFn, Wbar: TruncSSet) -> SMap:
    """m ↦ (t(m), t(d_0 m), ..., t(d_0^{n-1} m))."""
    M = t.base
    N = min(M.trunc, Wbar.trunc)
    idx = [Wbar.index_of(n) for n in range(N + 1)]
    maps = []
    for n in range(N + 1):
        cols = []
        m = np.arange(M.count(n))
        for k in range(n):
            cols.append(t.maps[n - k][m])
            m = M.faces[n - k][0][m]
        labs = zip(M.base_of[n].tolist(), *[c.tolist() for c in cols])
        maps.append(np.array([idx[n][lab] for lab in labs], dtype=np.int64))
    return SMap(M.truncate(N), Wbar.truncate(N), maps)


def _join_restriction(M, n, m, i, verts):
    # restriction of s_i m ∈ M_{n+1} to a vertex set, computed from m
    a = tuple(v if v <= i else v - 1 for v in verts)
    return dc.restrict_along(M, n, m, a)


def classifying_adjoint(T: bd.Torsor, Wbar: TruncSSet, NG=None) -> SMap:
    """Transpose of the bisimplicial map Dec M → NG built from the section.

    A (p, q)-cell z ∈ M_{p+q+1} goes to the p-tuple of divisions between
    the lifts d_0 σ(z_j), where z_j is z restricted to the vertex j and the
    last q + 1 vertices; the lifts all lie over the same q-simplex, so this
    factors through the Čech nerve of P.  The transpose sends m ∈ M_n to
    the tuple of images of the unit (s_0 m, ..., s_n m); s_i m is never
    materialized, its restrictions are computed from m.
    """
    M, P, G, sec = T.base, T.total, T.group, T.section
    N = min(M.trunc, Wbar.trunc)
    if NG is None:
        NG = sg.nerve_NG(sg.truncate_group(G, min(G.trunc, N)), Ntot=N)
    TW = dc.total_T(NG, N)
    tindex = [TW.index_of(n) for n in range(N + 1)]
    cells = {c: {lab: k for k, lab in enumerate(NG.labels[c])} for c in NG.base_of}
    widx = [Wbar.index_of(n) for n in range(N + 1)]
    maps = []
    for n in range(N + 1):
        out = np.empty(M.count(n), dtype=np.int64)
        for m in range(M.count(n)):
            b = int(M.base_of[n][m])
            coords = [cells[(0, n)][(b,)]]
            for i in range(1, n + 1):
                q = n - i
                lifts = []
                for j in range(i + 1):
                    z = _join_restriction(M, n, m, i, (j,) + tuple(range(i + 1, n + 2)))
                    lifts.append(P.face(q + 1, 0, int(sec[q + 1][z])))
                gs = tuple(bd.division(T, q, lifts[j - 1], lifts[j]) for j in range(1, i + 1))
                coords.append(cells[(i, q)][(b,) + gs])
            k = tindex[n].get(tuple(coords))
            if k is None:
                raise bd.ConstructionMismatch("transpose is not a simplex of the total complex")
            out[m] = widx[n][bd._wbar_label_from_T(NG, TW.labels[n][k])]
        maps.append(out)
    return SMap(M.truncate(N), Wbar.truncate(N), maps)


def classifying_bismap(T: bd.Torsor, NG) -> dc.BisMap:
    """The bisimplicial map Dec M → NG itself, on every cell both carry."""
    M, P, sec = T.base, T.total, T.section
    DM = dc.dec_total(M)
    cells = {c: {lab: k for k, lab in enumerate(NG.labels[c])} for c in NG.base_of}
    maps = {}
    for (p, q) in DM.base_of:
        if not NG.has(p, q):
            continue
        n = p + q + 1
        arr = np.empty(M.count(n), dtype=np.int64)
        for z in range(M.count(n)):
            lifts = []
            for j in range(p + 1):
                zj = dc.restrict_along(M, n, z, (j,) + tuple(range(p + 1, n + 1)))
                lifts.append(P.face(q + 1, 0, int(sec[q + 1][zj])))
            gs = tuple(bd.division(T, q, lifts[j - 1], lifts[j]) for j in range(1, p + 1))
            arr[z] = cells[(p, q)][(int(M.base_of[n][z]),) + gs]
        maps[(p, q)] = arr
    return dc.BisMap(DM, NG, maps)


def classifying_map(T: bd.Torsor, U: bd.UniversalBundle | None = None) -> Classification:
    """Classifying maps M → W̄G and P → WG, built two ways and compared."""
    if T.section is None:
        raise bd.TorsorError("classifying map needs a pseudo-section")
    N = T.trunc
    G = T.group
    if G.trunc < N:
        raise TruncationError("group truncated below the torsor")
    U = bd.wg(G, N) if U is None else U
    t = bd.extract_twisting(T)
    f = classifying_explicit(t, U.wbar)
    g = classifying_adjoint(T, U.wbar)
    for n in range(N + 1):
        if not np.array_equal(f.level_maps[n], g.level_maps[n]):
            raise bd.ConstructionMismatch(f"explicit and adjoint classifying maps differ in degree {n}")
    # P → WG: σ(m)·g ↦ σ_W(f(m))·g
    W = U.torsor
    maps = []
    for n in range(N + 1):
        x = np.arange(T.total.count(n))
        m = T.proj.level_maps[n]
        g_ = bd.division_many(T, n, T.section[n][m], x)
        maps.append(W.action.act[n][W.section[n][f.level_maps[n][m]], g_])
    F = SMap(T.total, W.total, maps)
    return Classification(f, F, U, t)


def check_bundle_map(T: bd.Torsor, C: Classification) -> ValidationReport:
    """Both maps simplicial, the square commutes, and the top map is equivariant."""
    rep = ValidationReport()
    rep.extend(ss.validate_smap(C.base_map), "base map: ")
    rep.extend(ss.validate_smap(C.total_map), "total map: ")
    W = C.universal.torsor
    for n in range(T.trunc + 1):
        F = C.total_map.level_maps[n]
        if not np.array_equal(W.proj.level_maps[n][F], C.base_map.level_maps[n][T.proj.level_maps[n]]):
            rep.add("square with the projections does not commute", n, None)
        a1, a2 = T.action.act[n], W.action.act[n]
        ok = a1 >= 0
        if not np.array_equal(np.where(ok, F[np.maximum(a1, 0)], -1), np.where(ok, a2[F], -1)):
            rep.add("total map is not equivariant", n, None)
    return rep


def verify_classification(T: bd.Torsor, C: Classification, budget: int = ss.DEFAULT_BUDGET) -> bool:
    """T is isomorphic to the pullback of WG along the base map (isomorphism exhibited)."""
    if not check_bundle_map(T, C).ok:
        return False
    Q = bd.pullback_torsor(C.universal.torsor, C.base_map)
    rep = bd.validate_torsor(Q)
    if not rep.ok:
        return False
    # the induced map P → f^*WG, p ↦ (π p, F p)
    maps = []
    for n in range(T.trunc + 1):
        look = Q.total.index_of(n)
        pairs = zip(T.proj.level_maps[n].tolist(), C.total_map.level_maps[n].tolist())
        maps.append(np.array([look[pr] for pr in pairs], dtype=np.int64))
    phi = SMap(T.total, Q.total, maps)
    if bd.is_torsor_isomorphism(T, Q, phi):
        return True
    return bd.find_torsor_isomorphism(T, Q, budget) is not None


# ------------------------------------------------------------ prisms and paths


def prism_map(n: int, N: int | None = None) -> SMap:
    """Δ[n] × Δ[1] → Δ[2n+1] on vertices (i, 0) ↦ i, (i, 1) ↦ n + i + 1."""
    N = n + 1 if N is None else N
    P = dc.prism(n, N)
    D = ss.standard_simplex(2 * n + 1, N)
    idx = [D.index_of(k) for k in range(N + 1)]
    maps = []
    for k in range(N + 1):
        maps.append(np.array([idx[k][tuple(ai + bi * (n + 1) for ai, bi in zip(a, b))]
                              for a, b in P.labels[k]], dtype=np.int64))
    return SMap(P, D, maps)


def prism_vertex_map(n: int) -> dict:
    return {(i, e): i + e * (n + 1) for i in range(n + 1) for e in (0, 1)}


def check_prism_naturality(n: int) -> bool:
    """Squares for the cofaces [n-1] → [n] and the end restrictions commute on vertices."""
    f = prism_vertex_map(n)
    if n >= 1:
        g = prism_vertex_map(n - 1)
        for j in range(n + 1):
            delta = [v if v < j else v + 1 for v in range(n)]
            # Δ[2n-1] → Δ[2n+1] induced by δ_j on both blocks
            join = [delta[v] if v < n else n + 1 + delta[v - n] for v in range(2 * n)]
            for (i, e), w in g.items():
                if f[(delta[i], e)] != join[w]:
                    return False
    # the two ends are the block inclusions [n] → [n] ⋆ [n]
    first = [f[(i, 0)] for i in range(n + 1)]
    second = [f[(i, 1)] for i in range(n + 1)]
    return first == list(range(n + 1)) and second == list(range(n + 1, 2 * n + 2))


@dataclass(eq=False)
class PathComparison:
    ddec: TruncSSet
    path: dc.PathObject
    to_path: SMap
    ends: tuple  # the two block restrictions dDec X → X


def block_restrictions(X: TruncSSet, D: TruncSSet) -> tuple:
    """dDec X → X restricting a (2n+1)-simplex to its first and to its last n + 1 vertices."""
    out = []
    for e in (0, 1):
        maps = []
        for n in range(D.trunc + 1):
            a = tuple(range(n + 1)) if e == 0 else tuple(range(n + 1, 2 * n + 2))
            maps.append(np.array([dc.restrict_along(X, 2 * n + 1, x, a) for x in range(X.count(2 * n + 1))],
                                 dtype=np.int64))
        out.append(SMap(D, X.truncate(D.trunc), maps))
    return tuple(out)


def ddec_to_path(X: TruncSSet, N: int, budget: int = ss.DEFAULT_BUDGET) -> PathComparison:
    """dDec X → X^{Δ[1]} by restriction along the prism map, up to degree N."""
    if X.trunc < 2 * N + 1:
        raise TruncationError(f"need X up to degree {2 * N + 1}")
    D = dc.diagonal_dec(X.truncate(2 * N + 1))
    PO = dc.path_object(X, N, budget)
    maps = []
    for n in range(N + 1):
        index = {dc._map_key(lv, n + 1): k for k, lv in enumerate(PO.maps[n])}
        pr = PO.prisms[n]
        tuples = [[tuple(ai + bi * (n + 1) for ai, bi in zip(a, b)) for a, b in pr.labels[k]]
                  for k in range(n + 2)]
        arr = np.empty(D.count(n), dtype=np.int64)
        for x in range(X.count(2 * n + 1)):
            lv = [np.array([dc.restrict_along(X, 2 * n + 1, x, a) for a in tuples[k]], dtype=np.int64)
                  for k in range(n + 2)]
            arr[x] = index[dc._map_key(lv, n + 1)]
        maps.append(arr)
    return PathComparison(D, PO, SMap(D, PO.sset, maps), block_restrictions(X, D))


def check_diamond(C: PathComparison) -> ValidationReport:
    rep = ValidationReport()
    rep.extend(ss.validate_smap(C.to_path), "dDec → path: ")
    for e, ev in enumerate((C.path.ev0, C.path.ev1)):
        rep.extend(ss.validate_smap(C.ends[e]), f"end {e}: ")
        comp = ss.compose(ev, C.to_path)
        for n in range(C.ddec.trunc + 1):
            if not np.array_equal(comp.level_maps[n], C.ends[e].level_maps[n]):
                rep.add(f"endpoint {e} composite differs from the block restriction", n, None)
    return rep


def ddec_vs_cech(G: sg.SimpGroup, N: int) -> bool:
    """dDec W̄G ≅ Čech nerve of WG → W̄G, through the vertex restrictions.

    A (2n+1)-simplex x goes to the n + 1 restrictions of x to {j} ⋆ [n]
    (vertex j of the first block plus the whole second block), each read
    as a simplex of WG through WG = Dec W̄G.
    """
    U = bd.wg(G, N)
    X = bd.wbar(G, 2 * N + 1, check=False)
    D = dc.diagonal_dec(X)
    C = cech_nerve(U.torsor.proj, N)
    W1 = bd.wbar(G, N + 1, check=False)
    maps = []
    for n in range(N + 1):
        # WG_n ↔ W̄G_{n+1}
        lab_to_wg = {lab: k for k, lab in enumerate(bd.wg_to_dec_labels(U, G, n))}
        cidx = C.sset.index_of(n)
        arr = np.empty(D.count(n), dtype=np.int64)
        for x in range(X.count(2 * n + 1)):
            parts = []
            for j in range(n + 1):
                y = dc.restrict_along(X, 2 * n + 1, x, (j,) + tuple(range(n + 1, 2 * n + 2)))
                parts.append(lab_to_wg[X.labels[n + 1][y]])
            k = cidx.get(tuple(parts))
            if k is None:
                return False
            arr[x] = k
        if len(np.unique(arr)) != C.sset.count(n) or len(arr) != C.sset.count(n):
            return False
        maps.append(arr)
    f = SMap(D, C.sset, maps)
    if not ss.validate_smap(f).ok:
        return False
    # the augmentations agree: restriction to the second block
    for n in range(N + 1):
        second = np.array([dc.restrict_along(X, 2 * n + 1, x, tuple(range(n + 1, 2 * n + 2)))
                           for x in range(X.count(2 * n + 1))], dtype=np.int64)
        if not np.array_equal(C.aug.level_maps[n][maps[n]], second):
            return False
    return True


# ------------------------------------------------------------ gerbes


class GerbeError(ValueError):
    pass


@dataclass(eq=False)
class GerbeData:
    nM: int
    pi0: np.ndarray  # Y0 → M
    k: int
    pairs: np.ndarray  # (npairs, 2) rows (u, v) with pi0[u] == pi0[v]
    pair_of: np.ndarray  # Y1 → pair index
    act: np.ndarray  # (|Y1|, k): y·c
    prod: np.ndarray  # (|Y1|, |Y1|), −1 where not composable
    unit: np.ndarray  # Y0 → Y1 over (u, u)

    @property
    def n0(self) -> int:
        return len(self.pi0)

    @property
    def n1(self) -> int:
        return len(self.pair_of)

    def pair_index(self):
        return {(int(u), int(v)): p for p, (u, v) in enumerate(self.pairs.tolist())}

    def over(self, u: int, v: int) -> np.ndarray:
        p = self.pair_index()[(u, v)]
        return np.nonzero(self.pair_of == p)[0]

    def divide(self, y, z):
        """c with y·c = z, vectorized."""
        y = np.asarray(y)
        z = np.asarray(z)
        hit = self.act[y] == np.asarray(z)[..., None]
        if not hit.any(axis=-1).all():
            raise GerbeError("elements over different pairs")
        return np.argmax(hit, axis=-1)


def _all_pairs(pi0):
    return np.array([(u, v) for u in range(len(pi0)) for v in range(len(pi0)) if pi0[u] == pi0[v]],
                    dtype=np.int64).reshape(-1, 2)


def gerbe_from_cocycle(pi0, nM: int, k: int, c, perm=None) -> GerbeData:
    """Y1 = pairs × C_k with ((u,v),ξ)((v,w),η) = ((u,w), ξ + η + c(u,v,w)).

    ``c`` maps (u, v, w) to C_k and must be a normalized 2-cocycle.  ``perm``
    relabels Y1 (element j becomes perm[j]).
    """
    pi0 = np.asarray(pi0, dtype=np.int64)
    pairs = _all_pairs(pi0)
    pidx = {tuple(p): i for i, p in enumerate(pairs.tolist())}
    n1 = len(pairs) * k
    perm = np.arange(n1) if perm is None else np.asarray(perm, dtype=np.int64)

    def el(p, xi):
        return int(perm[p * k + xi % k])

    pair_of = np.empty(n1, dtype=np.int64)
    act = np.empty((n1, k), dtype=np.int64)
    for p in range(len(pairs)):
        for xi in range(k):
            pair_of[el(p, xi)] = p
            for a in range(k):
                act[el(p, xi), a] = el(p, xi + a)
    prod = np.full((n1, n1), -1, dtype=np.int64)
    for (u, v), p in pidx.items():
        for w in range(len(pi0)):
            q = pidx.get((v, w))
            if q is None:
                continue
            r = pidx[(u, w)]
            cc = int(c(u, v, w))
            for xi in range(k):
                for eta in range(k):
                    prod[el(p, xi), el(q, eta)] = el(r, xi + eta + cc)
    unit = np.array([el(pidx[(u, u)], -int(c(u, u, u))) for u in range(len(pi0))], dtype=np.int64)
    return GerbeData(nM, pi0, k, pairs, pair_of, act, prod, unit)


def trivial_gerbe(pi0, nM: int, k: int) -> GerbeData:
    return gerbe_from_cocycle(pi0, nM, k, lambda u, v, w: 0)


def validate_gerbe(g: GerbeData) -> ValidationReport:
    rep = ValidationReport()
    k = g.k
    if len(np.setdiff1d(np.arange(g.nM), g.pi0)):
        rep.add("Y0 → M is not surjective", 0, None)
    expect = _all_pairs(g.pi0)
    if not np.array_equal(expect, g.pairs):
        rep.add("pairs are not the fiber square of Y0 over M", 1, None)
        return rep
    c = np.arange(k)
    # C_k-torsor over each pair
    if not np.array_equal(g.act[:, 0], np.arange(g.n1)):
        rep.add("0 does not act trivially on Y1", 1, None)
    for a in range(k):
        if not np.array_equal(g.act[g.act[:, a]], g.act[:, (a + c) % k]):
            rep.add("C_k does not act on Y1", 1, a)
            break
    if (g.pair_of[g.act] != g.pair_of[:, None]).any():
        rep.add("action leaves the fiber of Y1", 1, None)
    counts = np.bincount(g.pair_of, minlength=len(g.pairs))
    if (counts != k).any():
        rep.add("fiber of Y1 does not have k elements", 1, int(np.argmax(counts != k)))
    for y in range(g.n1):
        if len(np.unique(g.act[y])) != k:
            rep.add("action on Y1 is not free", 1, y)
            break
    if not rep.ok:
        return rep
    pidx = g.pair_index()
    src, dst = g.pairs[g.pair_of, 0], g.pairs[g.pair_of, 1]
    comp = dst[:, None] == src[None, :]
    if ((g.prod >= 0) != comp).any():
        rep.add("product is not defined exactly on composable pairs", 2, None)
        return rep
    Y, Z = np.nonzero(comp)
    target = np.array([pidx[(int(a), int(b))] for a, b in zip(src[Y], dst[Z])], dtype=np.int64)
    if (g.pair_of[g.prod[Y, Z]] != target).any():
        rep.add("product does not cover composition of pairs", 2, None)
    for a in range(k):
        for b in range(k):
            lhs = g.prod[g.act[Y, a], g.act[Z, b]]
            rhs = g.act[g.prod[Y, Z], (a + b) % k]
            if (lhs != rhs).any():
                rep.add("product is not C_k-bilinear", 2, (a, b))
    # associativity on composable triples
    YZ = g.prod[Y, Z]
    for y, z, yz in zip(Y.tolist(), Z.tolist(), YZ.tolist()):
        ws = np.nonzero(comp[z])[0]
        if (g.prod[yz, ws] != g.prod[y, g.prod[z, ws]]).any():
            rep.add("product is not associative", 3, (y, z))
            break
    if (g.pair_of[g.unit] != np.array([pidx[(u, u)] for u in range(g.n0)])).any():
        rep.add("unit does not lie over the diagonal", 1, None)
    else:
        for y in range(g.n1):
            if g.prod[g.unit[src[y]], y] != y or g.prod[y, g.unit[dst[y]]] != y:
                rep.add("unit law fails", 1, y)
                break
    return rep


def gerbe_skeleton(g: GerbeData) -> TruncSSet:
    """The 1-truncated simplicial set Y1 ⇉ Y0 over M: d_0 = target, d_1 = source, s_0 = unit."""
    src, dst = g.pairs[g.pair_of, 0], g.pairs[g.pair_of, 1]
    return TruncSSet(1, g.nM, [g.pi0.copy(), g.pi0[src]],
                     [np.zeros((0, g.n0), dtype=np.int64), np.stack([dst, src])],
                     [g.unit[None, :].copy()])


@dataclass(eq=False)
class Hypercover:
    sset: TruncSSet
    verts: list  # per degree: (count, p+1) vertex array
    edges: list  # per degree: (count, p(p+1)/2) Y1 array, pairs in lexicographic order
    gerbe: GerbeData


def _pair_list(p):
    return [(i, j) for i in range(p + 1) for j in range(i + 1, p + 1)]


def cosk1_hypercover(g: GerbeData, N: int = 3) -> Hypercover:
    """Degree p: vertices v_0..v_p in one fiber and an edge of Y1 over each (v_i, v_j), i < j.

    Built by mixed-radix enumeration: within a fiber of size r, the vertex
    digits have radix r and each edge digit (radix k) picks the element
    of Y1 over its pair in index order.
    """
    k = g.k
    fib = [np.nonzero(g.pi0 == m)[0] for m in range(g.nM)]
    pidx = g.pair_index()
    over = np.full((g.n0, g.n0, k), -1, dtype=np.int64)  # the k elements over (u, v), index order
    rank = np.empty(g.n1, dtype=np.int64)  # digit of each Y1 element
    for (u, v), p in pidx.items():
        el = np.nonzero(g.pair_of == p)[0]
        over[u, v] = el
        rank[el] = np.arange(k)
    loc = np.empty(g.n0, dtype=np.int64)
    for m in range(g.nM):
        loc[fib[m]] = np.arange(len(fib[m]))
    verts, edges, base_of, offs, radices = [], [], [], [], []
    for p in range(N + 1):
        pl = _pair_list(p)
        V, E, B, off = [], [], [], [0]
        for m in range(g.nM):
            r = len(fib[m])
            grids = np.meshgrid(*([np.arange(r)] * (p + 1) + [np.arange(k)] * len(pl)), indexing="ij")
            digits = np.stack([x.ravel() for x in grids], axis=1) if grids else np.zeros((1, 0), dtype=np.int64)
            v = fib[m][digits[:, : p + 1]]
            e = np.stack([over[v[:, i], v[:, j], digits[:, p + 1 + q]] for q, (i, j) in enumerate(pl)], axis=1) \
                if pl else np.zeros((len(v), 0), dtype=np.int64)
            V.append(v)
            E.append(e)
            B.append(np.full(len(v), m, dtype=np.int64))
            off.append(off[-1] + len(v))
        verts.append(np.concatenate(V))
        edges.append(np.concatenate(E))
        base_of.append(np.concatenate(B))
        offs.append(off)

    def locate(p, v, e):
        m = g.pi0[v[:, 0]]
        sizes = np.array([len(f) for f in fib], dtype=np.int64)[m]
        code = np.zeros(len(v), dtype=np.int64)
        for j in range(p + 1):
            code = code * sizes + loc[v[:, j]]
        for q in range(e.shape[1]):
            code = code * k + rank[e[:, q]]
        return np.asarray(offs[p], dtype=np.int64)[m] + code

    faces = [np.zeros((0, len(verts[0])), dtype=np.int64)]
    for p in range(1, N + 1):
        pl = _pair_list(p)
        tab = np.empty((p + 1, len(verts[p])), dtype=np.int64)
        for i in range(p + 1):
            keep = [j for j in range(p + 1) if j != i]
            ecols = [pl.index((keep[a], keep[b])) for a, b in _pair_list(p - 1)]
            tab[i] = locate(p - 1, verts[p][:, keep], edges[p][:, ecols])
        faces.append(tab)
    degens = []
    for p in range(N):
        pl = _pair_list(p)
        tab = np.empty((p + 1, len(verts[p])), dtype=np.int64)
        for i in range(p + 1):
            sig = [j if j <= i else j - 1 for j in range(p + 2)]
            v = verts[p][:, sig]
            cols = []
            for a, b in _pair_list(p + 1):
                if sig[a] == sig[b]:
                    cols.append(g.unit[verts[p][:, sig[a]]])
                else:
                    cols.append(edges[p][:, pl.index((sig[a], sig[b]))])
            e = np.stack(cols, axis=1)
            tab[i] = locate(p + 1, v, e)
        degens.append(tab)
    X = TruncSSet(N, g.nM, base_of, faces, degens)
    return Hypercover(X, verts, edges, g)


def compare_hypercover_with_coskeleton(H: Hypercover) -> bool:
    """The tuple construction agrees with the generic coskeleton of the 1-skeleton."""
    g = H.gerbe
    K = ss.coskeleton(gerbe_skeleton(g), 1, H.sset.trunc)
    if K.counts != H.sset.counts:
        return False
    maps = []
    for p in range(K.trunc + 1):
        v = vertices(K, p)
        cols = []
        for a, b in _pair_list(p):
            x = np.array([dc.restrict_along(K, p, s, (a, b)) for s in range(K.count(p))], dtype=np.int64)
            cols.append(x)
        e = np.stack(cols, axis=1) if cols else np.zeros((len(v), 0), dtype=np.int64)
        # K's vertices are Y0 indices and its edges Y1 indices (degrees 0, 1 are copied)
        look = {(tuple(a), tuple(b)): k for k, (a, b) in
                enumerate(zip(H.verts[p].tolist(), H.edges[p].tolist()))}
        try:
            maps.append(np.array([look[(tuple(a), tuple(b))] for a, b in zip(v.tolist(), e.tolist())],
                                 dtype=np.int64))
        except KeyError:
            return False
        if len(np.unique(maps[-1])) != len(maps[-1]):
            return False
    return ss.validate_smap(SMap(K, H.sset, maps)).ok


def gerbe_to_twisting(g: GerbeData, H: Hypercover | None = None, NC=None) -> bd.TwistFn:
    """t(e12, e02, e01) with e01·e12 = e02·t, extended upward through the (T) identities.

    In degree ≥ 3 each value is the unique simplex of the nerve of C_k with
    the faces the identities prescribe; a missing one means the product is
    not associative and raises :class:`GerbeError`.
    """
    H = cosk1_hypercover(g) if H is None else H
    X = H.sset
    N = X.trunc
    NC = sg.nerve_cyclic_group(g.k, max(N - 1, 0), g.nM) if NC is None else NC
    Z = NC.sset
    maps = [np.zeros(0, dtype=np.int64)]
    if N >= 1:
        maps.append(NC.units(0)[X.base_of[1]])
    if N >= 2:
        e = H.edges[2]  # columns (0,1), (0,2), (1,2)
        tval = g.divide(e[:, 1], g.prod[e[:, 0], e[:, 2]])
        look = {lab: i for i, lab in enumerate(Z.labels[1])}
        maps.append(np.array([look[(int(b), int(c))] for b, c in zip(X.base_of[2], tval)], dtype=np.int64))
    for n in range(3, N + 1):
        prev = maps[n - 1]
        want = [NC.mul(n - 2, prev[X.faces[n][1]], NC.inv(n - 2, prev[X.faces[n][0]]))]
        want += [prev[X.faces[n][i + 1]] for i in range(1, n)]
        keys = np.stack([X.base_of[n]] + want, axis=1)
        zkeys = np.vstack([Z.base_of[n - 1][None, :], Z.faces[n - 1]]).T
        table = {}
        for z, kk in enumerate(map(tuple, zkeys.tolist())):
            table.setdefault(kk, []).append(z)
        out = np.empty(X.count(n), dtype=np.int64)
        for m, kk in enumerate(map(tuple, keys.tolist())):
            hit = table.get(kk, [])
            if len(hit) != 1:
                raise GerbeError(f"no unique twisting value in degree {n} at simplex {m} "
                                 "(product not associative?)")
            out[m] = hit[0]
        maps.append(out)
    return bd.TwistFn(X, NC, maps)


def twisting_to_gerbe(H: Hypercover, t: bd.TwistFn) -> GerbeData:
    """The gerbe L = (Y1 × C_k)/~ with (u, ξ) ~ (v, ξ + f(u, v)).

    f(u, v) = t(e01 = u, e12 = 1, e02 = v) for u, v over the same pair; the
    product is [u, ξ]·[v, η] = [w, ξ + η + t(e01 = u, e12 = v, e02 = w)].
    Each class is stored through its representative over the first element
    of Y1 above the pair.
    """
    g = H.gerbe
    rep = bd.validate_twisting(H.sset, t.group, t)
    if not rep.ok:
        raise bd.InvalidTwistingError(rep.summary())
    k = g.k
    X = H.sset
    Z = t.group.sset
    cval = np.array([Z.labels[1][z][1] for z in range(Z.count(1))], dtype=np.int64)
    t2 = cval[t.maps[2]]
    # degree-2 simplices keyed by their edges (e01, e02, e12)
    tri = {tuple(e): int(t2[s]) for s, e in enumerate(H.edges[2].tolist())}
    pidx = g.pair_index()
    first = np.array([np.nonzero(g.pair_of == p)[0][0] for p in range(len(g.pairs))], dtype=np.int64)

    def f(u, v):
        b = int(g.pairs[g.pair_of[u], 1])
        return tri[(u, v, int(g.unit[b]))]

    def normal(u, xi):
        # [u, ξ] = [u0, ξ + f(u, u0)]
        p = int(g.pair_of[u])
        return p, (xi + f(u, int(first[p]))) % k

    def code(p, xi):
        return p * k + xi

    n1 = len(g.pairs) * k
    act = np.array([[code(p, (xi + a) % k) for a in range(k)] for p in range(len(g.pairs)) for xi in range(k)],
                   dtype=np.int64)
    pair_of = np.repeat(np.arange(len(g.pairs)), k)
    prod = np.full((n1, n1), -1, dtype=np.int64)
    for (a, b), p in pidx.items():
        for c in range(g.n0):
            q = pidx.get((b, c))
            if q is None:
                continue
            r = pidx[(a, c)]
            u, v, w = int(first[p]), int(first[q]), int(first[r])
            s = tri[(u, w, v)]
            for xi in range(k):
                for eta in range(k):
                    prod[code(p, xi), code(q, eta)] = code(*normal(w, xi + eta + s))
    unit = np.array([code(*normal(int(g.unit[u]), 0)) for u in range(g.n0)], dtype=np.int64)
    return GerbeData(g.nM, g.pi0.copy(), k, g.pairs.copy(), pair_of, act, prod, unit)


def gerbe_map_into_quotient(g: GerbeData, L: GerbeData, H: Hypercover, t: bd.TwistFn) -> np.ndarray:
    """u ↦ [u, 0] as a map Y1 → Y1 of the quotient gerbe."""
    Z = t.group.sset
    cval = np.array([Z.labels[1][z][1] for z in range(Z.count(1))], dtype=np.int64)
    t2 = cval[t.maps[2]]
    tri = {tuple(e): int(t2[s]) for s, e in enumerate(H.edges[2].tolist())}
    first = np.array([np.nonzero(g.pair_of == p)[0][0] for p in range(len(g.pairs))], dtype=np.int64)
    out = np.empty(g.n1, dtype=np.int64)
    for u in range(g.n1):
        p = int(g.pair_of[u])
        b = int(g.pairs[p, 1])
        out[u] = p * g.k + tri[(u, int(first[p]), int(g.unit[b]))] % g.k
    return out


def is_gerbe_isomorphism(g: GerbeData, h: GerbeData, phi) -> bool:
    """Bijection Y1 → Y1' over the pairs, C_k-equivariant, preserving products and units."""
    phi = np.asarray(phi, dtype=np.int64)
    if not np.array_equal(g.pairs, h.pairs) or g.k != h.k or not np.array_equal(g.pi0, h.pi0):
        return False
    if len(np.unique(phi)) != g.n1 or len(phi) != h.n1:
        return False
    if not np.array_equal(h.pair_of[phi], g.pair_of):
        return False
    if not np.array_equal(phi[g.act], h.act[phi]):
        return False
    Y, Z = np.nonzero(g.prod >= 0)
    if not np.array_equal(phi[g.prod[Y, Z]], h.prod[phi[Y], phi[Z]]):
        return False
    return np.array_equal(phi[g.unit], h.unit)


def gerbe_cocycle(g: GerbeData):
    """References r(u,v) (the unit on the diagonal) and c with r(u,v) r(v,w) = r(u,w)·c(u,v,w)."""
    pidx = g.pair_index()
    ref = np.empty(len(g.pairs), dtype=np.int64)
    for p, (u, v) in enumerate(g.pairs.tolist()):
        ref[p] = g.unit[u] if u == v else np.nonzero(g.pair_of == p)[0][0]
    c = {}
    for (u, v), p in pidx.items():
        for w in range(g.n0):
            q = pidx.get((v, w))
            if q is None:
                continue
            r = pidx[(u, w)]
            c[(u, v, w)] = int(g.divide(ref[r], g.prod[ref[p], ref[q]]))
    return ref, c


def find_gerbe_isomorphism(g: GerbeData, h: GerbeData):
    """Solve c_h − c_g = δb (mod k) for a 1-cochain b vanishing on the diagonal; None if no solution."""
    from .homology import solve_mod

    if not np.array_equal(g.pairs, h.pairs) or g.k != h.k:
        return None
    k = g.k
    rg, cg = gerbe_cocycle(g)
    rh, ch = gerbe_cocycle(h)
    pidx = g.pair_index()
    var = [p for p, (u, v) in enumerate(g.pairs.tolist()) if u != v]
    col = {p: j for j, p in enumerate(var)}
    rows, rhs = [], []
    for (u, v, w), val in cg.items():
        row = np.zeros(len(var), dtype=np.int64)
        # δb(u,v,w) = b(u,v) + b(v,w) − b(u,w)
        for p, s in ((pidx[(u, v)], 1), (pidx[(v, w)], 1), (pidx[(u, w)], -1)):
            if p in col:
                row[col[p]] += s
        rows.append(row)
        rhs.append((val - ch[(u, v, w)]) % k)
    if not var:
        ok = all(r == 0 for r in rhs)
        sol = np.zeros(0, dtype=np.int64) if ok else None
    else:
        sol = solve_mod(np.array(rows), np.array(rhs), k)
    if sol is None:
        return None
    b = np.zeros(len(g.pairs), dtype=np.int64)
    for p, j in col.items():
        b[p] = sol[j]
    # y = r_g(p)·ξ ↦ r_h(p)·(ξ + b(p))
    phi = np.empty(g.n1, dtype=np.int64)
    for y in range(g.n1):
        p = int(g.pair_of[y])
        xi = int(g.divide(rg[p], y))
        phi[y] = h.act[rh[p], (xi + b[p]) % k]
    return phi if is_gerbe_isomorphism(g, h, phi) else None


def twisting_cochain(H: Hypercover, t: bd.TwistFn) -> np.ndarray:
    """The 2-cochain m ↦ t(m) ∈ C_k on all degree-2 simplices."""
    Z = t.group.sset
    cval = np.array([Z.labels[1][z][1] for z in range(Z.count(1))], dtype=np.int64)
    return cval[t.maps[2]]


def same_class(X: TruncSSet, z1, z2, k: int) -> bool:
    """z1 − z2 is a coboundary in normalized cochains mod k (degree 2)."""
    from .homology import normalized_chains, solve_mod

    C = normalized_chains(X, top=2)
    nd2 = C.basis[2]
    diff = (np.asarray(z1)[nd2] - np.asarray(z2)[nd2]) % k
    if not C.ranks[1]:
        return bool((diff == 0).all())
    # δc = c ∘ ∂; boundary[2] is stored as (2-simplices × 1-simplices), i.e. already δ
    return solve_mod(C.boundary[2], diff, k) is not None


def random_gerbe(rng, max_y0: int = 4, max_m: int = 2, max_k: int = 3) -> GerbeData:
    """A random valid gerbe: cocycle δb for random b, then shuffled Y1 labels."""
    nM = int(rng.integers(1, max_m + 1))
    n0 = int(rng.integers(nM, max_y0 + 1))
    pi0 = np.concatenate([np.arange(nM), rng.integers(0, nM, n0 - nM)])
    pi0 = pi0[rng.permutation(n0)]
    k = int(rng.integers(1, max_k + 1))
    b = rng.integers(0, k, (n0, n0))
    np.fill_diagonal(b, 0)

    def c(u, v, w):
        return (b[u, v] + b[v, w] - b[u, w]) % k

    n1 = len(_all_pairs(pi0)) * k
    return gerbe_from_cocycle(pi0, nM, k, c, rng.permutation(n1))
