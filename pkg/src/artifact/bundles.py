"""Torsors, twisting functions, twisted products and the universal bundle.

Conventions
-----------
A twisting function ``t`` sends an n-simplex of the base to an
(n-1)-simplex of the group over the same base point and satisfies::

    d_0 t(m) = t(d_1 m) · t(d_0 m)^-1
    d_i t(m) = t(d_{i+1} m)          (i >= 1)
    s_i t(m) = t(s_{i+1} m)          (i >= 0)
    t(s_0 m) = 1

The twisted product has d_0(m, g) = (d_0 m, d_0(g) · t(m)) and
componentwise other operators.  Right translation does not commute with
that d_0 when G is nonabelian, so the right action is ``(m, g)·h =
(m, h^-1 g)``.  ``product_torsor`` is the plain product with right
translation ``(m, g)·h = (m, g h)``.

W̄G_n is listed by labels ``(b, g_{n-1}, ..., g_0)`` with g_k a k-simplex of
G over b.  WG_n has compact coordinates ``(w_0, ..., w_n)``, w_i ∈ G_{n-i},
and is the first-face décalage of W̄G through
``(w_0, ..., w_n) ↦ (w_0, (d_0 w_0)^-1 w_1, ..., (d_0 w_{n-1})^-1 w_n)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import decalage as dc
from . import sgroup as sg
from . import sset as ss
from .sset import BudgetExceeded, SMap, TruncationError, TruncSSet, ValidationReport


class TorsorError(ValueError):
    pass


class EmptyFiberError(TorsorError):
    """A base simplex has no simplices above it."""


class InvalidTwistingError(ValueError):
    pass


@dataclass(eq=False)
class TwistFn:
    """``maps[n][m]`` is the simplex t(m) of G in degree n - 1 (``maps[0]`` is empty)."""

    base: TruncSSet
    group: sg.SimpGroup
    maps: list

    @property
    def trunc(self) -> int:
        return len(self.maps) - 1

    def __call__(self, n: int, m: int) -> int:
        return int(self.maps[n][m])

    def same(self, other: "TwistFn") -> bool:
        return len(self.maps) == len(other.maps) and all(
            np.array_equal(a, b) for a, b in zip(self.maps, other.maps))


@dataclass(eq=False)
class Torsor:
    total: TruncSSet
    base: TruncSSet
    group: sg.SimpGroup
    proj: SMap
    action: sg.GroupAction
    section: list | None = None  # level maps M_n -> P_n
    twisting: TwistFn | None = field(default=None, repr=False)

    @property
    def trunc(self) -> int:
        return self.total.trunc


# ------------------------------------------------------------ twisting functions


def validate_twisting(M: TruncSSet, G: sg.SimpGroup, t: TwistFn) -> ValidationReport:
    """All (T) identities within truncation, with witnessing simplices."""
    rep = ValidationReport()
    N = min(t.trunc, M.trunc, G.trunc + 1)
    X = G.sset
    for n in range(1, N + 1):
        tn = np.asarray(t.maps[n], dtype=np.int64)
        if tn.shape != (M.count(n),) or (tn < 0).any() or (tn >= X.count(n - 1)).any():
            rep.add("twisting table has the wrong shape or range", n, None)
            return rep
        bad = np.nonzero(X.base_of[n - 1][tn] != M.base_of[n])[0]
        if len(bad):
            rep.add("t changes the base point", n, int(bad[0]))
            return rep
    for n in range(1, N + 1):
        tn = t.maps[n]
        if n >= 2:
            lhs = X.faces[n - 1][0][tn]
            rhs = G.mul(n - 2, t.maps[n - 1][M.faces[n][1]], G.inv(n - 2, t.maps[n - 1][M.faces[n][0]]))
            bad = np.nonzero(lhs != rhs)[0]
            if len(bad):
                rep.add("d_0 t(m) != t(d_1 m) t(d_0 m)^-1", n, int(bad[0]))
            for i in range(1, n):
                bad = np.nonzero(X.faces[n - 1][i][tn] != t.maps[n - 1][M.faces[n][i + 1]])[0]
                if len(bad):
                    rep.add(f"d_{i} t(m) != t(d_{i + 1} m)", n, int(bad[0]))
        if n + 1 <= N:
            for i in range(n):
                bad = np.nonzero(X.degens[n - 1][i][tn] != t.maps[n + 1][M.degens[n][i + 1]])[0]
                if len(bad):
                    rep.add(f"s_{i} t(m) != t(s_{i + 1} m)", n, int(bad[0]))
        if n <= N and n >= 1:
            units = G.units(n - 1)[M.base_of[n - 1]]
            bad = np.nonzero(t.maps[n][M.degens[n - 1][0]] != units)[0]
            if len(bad):
                rep.add("t(s_0 m) != 1", n - 1, int(bad[0]))
    return rep


def identity_twisting(M: TruncSSet, G: sg.SimpGroup) -> TwistFn:
    N = min(M.trunc, G.trunc + 1)
    maps = [np.zeros(0, dtype=np.int64)]
    for n in range(1, N + 1):
        maps.append(G.units(n - 1)[M.base_of[n]])
    return TwistFn(M, G, maps)


def canonical_twisting(Wbar: TruncSSet, G: sg.SimpGroup) -> TwistFn:
    """t(b, g_{n-1}, ..., g_0) = g_{n-1} on a W̄G built by :func:`wbar`."""
    maps = [np.zeros(0, dtype=np.int64)]
    for n in range(1, Wbar.trunc + 1):
        maps.append(np.array([lab[1] for lab in Wbar.labels[n]], dtype=np.int64))
    return TwistFn(Wbar, G, maps)


def twist_search(M: TruncSSet, G: sg.SimpGroup, budget: int = ss.DEFAULT_BUDGET,
                 rng=None, limit: int | None = None) -> list:
    """Twisting functions M → G by backtracking over nondegenerate simplices.

    Values on degenerate simplices are forced by t(s_0 m) = 1 and
    t(s_{i+1} m) = s_i t(m); on a nondegenerate n-simplex (n ≥ 2) the (T)
    identities prescribe every face of t(m).  With ``rng`` the candidates
    are shuffled, which turns the search into a random solver.
    """
    N = min(M.trunc, G.trunc + 1)
    X = G.sset
    lookup = [None]
    for n in range(1, N + 1):
        keys = X.base_of[n - 1][None, :]
        if n >= 2:
            keys = np.vstack([keys, X.faces[n - 1]])
        d = {}
        for g, k in enumerate(map(tuple, keys.T.tolist())):
            d.setdefault(k, []).append(g)
        lookup.append(d)
    nondeg = [None] + [ss.nondegenerate(M, n) for n in range(1, N + 1)]
    forced = [None]
    for n in range(1, N + 1):
        forced.append([(int(x),) + ss.is_degenerate(M, n, int(x))
                       for x in np.nonzero(ss.degenerate_mask(M, n))[0]])
    vals = [np.zeros(0, dtype=np.int64)] + [np.full(M.count(n), -1, dtype=np.int64) for n in range(1, N + 1)]
    out = []
    nodes = [0]

    def fill(n):
        for x, i, y in forced[n]:
            if i == 0:
                vals[n][x] = G.unit(n - 1, int(M.base_of[n][x]))
            else:
                vals[n][x] = X.degens[n - 2][i - 1][vals[n - 1][y]]

    def rec(n, k):
        nodes[0] += 1
        if nodes[0] > budget:
            raise BudgetExceeded(f"twisting-function search exceeded budget {budget}")
        if n > N:
            t = TwistFn(M, G, [v.copy() for v in vals])
            if validate_twisting(M, G, t).ok:
                out.append(t)
            return limit is not None and len(out) >= limit
        if k == 0:
            fill(n)
        if k == len(nondeg[n]):
            return rec(n + 1, 0)
        m = int(nondeg[n][k])
        key = (int(M.base_of[n][m]),)
        if n >= 2:
            d0 = G.mul(n - 2, int(vals[n - 1][M.faces[n][1][m]]), G.inv(n - 2, int(vals[n - 1][M.faces[n][0][m]])))
            key += (d0,) + tuple(int(vals[n - 1][M.faces[n][i + 1][m]]) for i in range(1, n))
        cands = list(lookup[n].get(key, ()))
        if rng is not None:
            rng.shuffle(cands)
        for g in cands:
            vals[n][m] = g
            if rec(n, k + 1):
                return True
        vals[n][m] = -1
        return False

    if N >= 1:
        rec(1, 0)
    else:
        out.append(TwistFn(M, G, [np.zeros(0, dtype=np.int64)]))
    return out


# ------------------------------------------------------------ torsors


def validate_torsor(T: Torsor, check_group: bool = False) -> ValidationReport:
    """Projection, invariance, shear bijectivity, surjectivity and the pseudo-section.

    Per degree and base point the notes record that the action is free and
    transitive on the fibers of the projection.
    """
    rep = ValidationReport()
    P, M, G, pr = T.total, T.base, T.group, T.proj
    rep.extend(ss.validate_sset(P), "total: ")
    rep.extend(ss.validate_sset(M), "base: ")
    if check_group:
        rep.extend(sg.validate_sgroup(G), "group: ")
    if not rep.ok:
        return rep
    rep.extend(ss.validate_smap(pr), "projection: ")
    rep.extend(sg.validate_action(T.action), "action: ")
    N = min(P.trunc, M.trunc, G.trunc)
    for n in range(N + 1):
        proj = pr.level_maps[n]
        sizes = np.bincount(proj, minlength=M.count(n))
        empty = np.nonzero(sizes == 0)[0]
        if len(empty):
            rep.add("projection is not surjective", n, int(empty[0]))
        tab = T.action.act[n]
        for b in range(P.nbase):
            xs = np.nonzero(P.base_of[n] == b)[0]
            elems = G.members[n][b]
            if not len(xs):
                continue
            vals = tab[np.ix_(xs, elems)]
            if (vals < 0).any():
                continue  # reported by the action validator
            moved = np.argwhere(proj[vals] != proj[xs][:, None])
            if len(moved):
                i, j = moved[0]
                rep.add("projection is not invariant under the action", n, (int(xs[i]), int(elems[j])))
                continue
            srt = np.sort(vals, axis=1)
            dup = np.argwhere(srt[:, 1:] == srt[:, :-1])
            if len(dup):
                x = int(xs[dup[0][0]])
                hit = tab[x, elems]
                v = int(srt[dup[0][0], dup[0][1]])
                g, h = (int(e) for e in elems[hit == v][:2])
                rep.add("shear map is not injective (action not free)", n, (x, g, h))
                continue
            short = np.nonzero(sizes[proj[xs]] != len(elems))[0]
            if len(short):
                rep.add("shear map is not surjective (action not transitive)", n, int(xs[short[0]]))
                continue
            rep.notes.append(f"degree {n} base {b}: action free and transitive on fibers")
    if T.section is not None:
        rep.extend(validate_pseudo_section(T), "pseudo-section: ")
    return rep


def validate_pseudo_section(T: Torsor) -> ValidationReport:
    """σ splits π and commutes with d_i (i ≥ 1) and every s_i."""
    rep = ValidationReport()
    P, M, sec = T.total, T.base, T.section
    N = min(P.trunc, M.trunc, len(sec) - 1)
    for n in range(N + 1):
        bad = np.nonzero(T.proj.level_maps[n][sec[n]] != np.arange(M.count(n)))[0]
        if len(bad):
            rep.add("not a section of the projection", n, int(bad[0]))
        for i in range(1, n + 1):
            bad = np.nonzero(P.faces[n][i][sec[n]] != sec[n - 1][M.faces[n][i]])[0]
            if len(bad):
                rep.add(f"does not commute with d_{i}", n, int(bad[0]))
        if n < N:
            for i in range(n + 1):
                bad = np.nonzero(P.degens[n][i][sec[n]] != sec[n + 1][M.degens[n][i]])[0]
                if len(bad):
                    rep.add(f"does not commute with s_{i}", n, int(bad[0]))
    return rep


def division(T: Torsor, n: int, p: int, q: int) -> int:
    """The unique g with p·g = q (a simplex of G in degree n)."""
    return int(division_many(T, n, np.array([p]), np.array([q]))[0])


def division_many(T: Torsor, n: int, ps, qs) -> np.ndarray:
    ps = np.asarray(ps, dtype=np.int64)
    qs = np.asarray(qs, dtype=np.int64)
    pr = T.proj.level_maps[n]
    bad = np.nonzero(pr[ps] != pr[qs])[0]
    if len(bad):
        raise TorsorError(f"simplices {int(ps[bad[0]])} and {int(qs[bad[0]])} lie in different fibers")
    out = np.full(len(ps), -1, dtype=np.int64)
    base = T.total.base_of[n][ps]
    for b in np.unique(base):
        sel = np.nonzero(base == b)[0]
        elems = T.group.members[n][int(b)]
        hit = T.action.act[n][np.ix_(ps[sel], elems)] == qs[sel][:, None]
        if not hit.any(axis=1).all():
            raise TorsorError("no group element relates the two simplices")
        out[sel] = elems[np.argmax(hit, axis=1)]
    return out


def _check_surjective_base(M: TruncSSet, G: sg.SimpGroup):
    for n in range(min(M.trunc, G.trunc) + 1):
        for b in np.unique(M.base_of[n]):
            if G.groups[n][int(b)].order == 0:
                raise EmptyFiberError(f"empty group fiber over base point {int(b)}")


def _pairs(M: TruncSSet, G: sg.SimpGroup, n: int):
    """Pairs (m, g) over equal base points, m-major; returns (m, g, offset per m)."""
    sizes = np.array([G.groups[n][int(b)].order for b in range(M.nbase)], dtype=np.int64)
    per = sizes[M.base_of[n]]
    off = np.concatenate([[0], np.cumsum(per)[:-1]]).astype(np.int64)
    pm = np.repeat(np.arange(M.count(n)), per)
    loc = np.arange(len(pm)) - np.repeat(off, per)
    pg = np.empty(len(pm), dtype=np.int64)
    bm = M.base_of[n][pm]
    for b in range(M.nbase):
        sel = bm == b
        pg[sel] = G.members[n][b][loc[sel]]
    return pm, pg, off


def _pair_torsor(M, G, face0, act_fn, section, t=None) -> Torsor:
    """Torsor on M_n ×_B G_n; ``face0(n, pm, pg)`` gives the G-part of d_0."""
    N = min(M.trunc, G.trunc)
    _check_surjective_base(M, G)
    X = G.sset
    pm, pg, off = zip(*[_pairs(M, G, n) for n in range(N + 1)])

    def index(n, m, g):
        return off[n][m] + G.local[n][g]

    faces = [np.zeros((0, len(pm[0])), dtype=np.int64)]
    for n in range(1, N + 1):
        tab = np.empty((n + 1, len(pm[n])), dtype=np.int64)
        for i in range(n + 1):
            gi = face0(n, pm[n], pg[n]) if i == 0 else X.faces[n][i][pg[n]]
            tab[i] = index(n - 1, M.faces[n][i][pm[n]], gi)
        faces.append(tab)
    degens = []
    for n in range(N):
        tab = np.empty((n + 1, len(pm[n])), dtype=np.int64)
        for i in range(n + 1):
            tab[i] = index(n + 1, M.degens[n][i][pm[n]], X.degens[n][i][pg[n]])
        degens.append(tab)
    labels = [list(zip(pm[n].tolist(), pg[n].tolist())) for n in range(N + 1)]
    P = TruncSSet(N, M.nbase, [M.base_of[n][pm[n]] for n in range(N + 1)], faces, degens, labels)
    proj = SMap(P, M.truncate(N), [pm[n].copy() for n in range(N + 1)])
    act = []
    for n in range(N + 1):
        tab = np.full((len(pm[n]), X.count(n)), -1, dtype=np.int64)
        for b in range(M.nbase):
            sel = np.nonzero(P.base_of[n] == b)[0]
            elems = G.members[n][b]
            if not len(sel) or not len(elems):
                continue
            S, E = np.meshgrid(sel, elems, indexing="ij")
            tab[S, E] = index(n, pm[n][S], act_fn(n, pg[n][S], E))
        act.append(tab)
    sec = None
    if section:
        sec = [index(n, np.arange(M.count(n)), G.units(n)[M.base_of[n]]) for n in range(N + 1)]
    return Torsor(P, M.truncate(N), G, proj, sg.GroupAction(P, G, act), sec, t)


def product_torsor(M: TruncSSet, G: sg.SimpGroup) -> Torsor:
    """M ×_B G with componentwise structure maps and right translation."""
    X = G.sset
    return _pair_torsor(
        M, G,
        face0=lambda n, pm, pg: X.faces[n][0][pg],
        act_fn=lambda n, g, h: G.mul(n, g, h),
        section=True,
    )


def twisted_product(M: TruncSSet, G: sg.SimpGroup, t: TwistFn, check: bool = True) -> Torsor:
    """M ×_t G with pseudo-section m ↦ (m, 1).

    ``check=False`` skips the twisting validation, so that a broken t can
    be fed through and the output inspected.
    """
    if check:
        rep = validate_twisting(M, G, t)
        if not rep.ok:
            raise InvalidTwistingError(rep.summary())
    X = G.sset
    N = min(M.trunc, G.trunc)
    if t.trunc < N:
        raise TruncationError("twisting function does not reach the truncation level")
    return _pair_torsor(
        M, G,
        face0=lambda n, pm, pg: G.mul(n - 1, X.faces[n][0][pg], t.maps[n][pm]),
        act_fn=lambda n, g, h: G.mul(n, G.inv(n, h), g),
        section=True,
        t=t,
    )


def extract_twisting(T: Torsor) -> TwistFn:
    """t(m) = division(d_0 σ(m), σ(d_0 m))."""
    if T.section is None:
        raise TorsorError("torsor has no pseudo-section")
    M, P, sec = T.base, T.total, T.section
    maps = [np.zeros(0, dtype=np.int64)]
    for n in range(1, min(M.trunc, P.trunc) + 1):
        ps = P.faces[n][0][sec[n]]
        qs = sec[n - 1][M.faces[n][0]]
        maps.append(division_many(T, n - 1, ps, qs))
    return TwistFn(M, T.group, maps)


def pullback_torsor(T: Torsor, f: SMap) -> Torsor:
    """f^*P over the source of f, with the pulled-back action and section."""
    Q, p1, p2 = ss.fiber_product(f, T.proj)
    G = T.group
    act = []
    for n in range(Q.trunc + 1):
        tab = np.full((Q.count(n), G.sset.count(n)), -1, dtype=np.int64)
        look = {lab: k for k, lab in enumerate(Q.labels[n])}
        for k, (m, x) in enumerate(Q.labels[n]):
            row = T.action.act[n][x]
            for g in np.nonzero(row >= 0)[0]:
                tab[k, g] = look[(m, int(row[g]))]
        act.append(tab)
    sec = None
    if T.section is not None:
        sec = []
        for n in range(Q.trunc + 1):
            look = {lab: k for k, lab in enumerate(Q.labels[n])}
            sec.append(np.array([look[(m, int(T.section[n][f.level_maps[n][m]]))]
                                 for m in range(f.source.count(n))], dtype=np.int64))
    return Torsor(Q, f.source.truncate(Q.trunc), G, p1, sg.GroupAction(Q, G, act), sec)


# ------------------------------------------------------------ isomorphism


def find_torsor_isomorphism(T1: Torsor, T2: Torsor, budget: int = ss.DEFAULT_BUDGET) -> SMap | None:
    """Equivariant isomorphism P1 → P2 over the common base, or None.

    One reference simplex per fiber of P1 (degenerate fibers use s_i of the
    reference below); the image of each nondegenerate reference is chosen
    by backtracking, candidates filtered by their faces, and equivariance
    fills in the rest of the fiber.
    """
    M = T1.base
    if not M.same_tables(T2.base) or T1.total.counts != T2.total.counts:
        return None
    P1, P2, G = T1.total, T2.total, T1.group
    N = min(P1.trunc, P2.trunc)
    pr1, pr2 = T1.proj.level_maps, T2.proj.level_maps
    a1, a2 = T1.action.act, T2.action.act
    ref, deg = [], []
    for n in range(N + 1):
        r = np.full(M.count(n), -1, dtype=np.int64)
        dg = [None] * M.count(n)
        first = np.full(M.count(n), -1, dtype=np.int64)
        first[pr1[n][::-1]] = np.arange(P1.count(n))[::-1]
        for m in range(M.count(n)):
            d = ss.is_degenerate(M, n, m)
            dg[m] = d
            r[m] = P1.degens[n - 1][d[0]][ref[n - 1][d[1]]] if d else first[m]
        ref.append(r)
        deg.append(dg)
    # δ[n][i][m]: d_i ref_m = ref_{d_i m} · δ
    delta = [None]
    for n in range(1, N + 1):
        rows = []
        for i in range(n + 1):
            rows.append(division_many(T1, n - 1, ref[n - 1][M.faces[n][i]], P1.faces[n][i][ref[n]]))
        delta.append(np.stack(rows))
    lookup = []
    for n in range(N + 1):
        keys = pr2[n][None, :] if n == 0 else np.vstack([pr2[n][None, :], P2.faces[n]])
        d = {}
        for q, k in enumerate(map(tuple, keys.T.tolist())):
            d.setdefault(k, []).append(q)
        lookup.append(d)
    img = [np.full(M.count(n), -1, dtype=np.int64) for n in range(N + 1)]
    order = [(n, m) for n in range(N + 1) for m in range(M.count(n))]
    nodes = [0]

    def want_faces(n, m):
        return tuple(int(a2[n - 1][img[n - 1][M.faces[n][i][m]], delta[n][i][m]]) for i in range(n + 1))

    def rec(k):
        nodes[0] += 1
        if nodes[0] > budget:
            raise BudgetExceeded("torsor isomorphism search exceeded budget")
        if k == len(order):
            return True
        n, m = order[k]
        key = (m,) + (want_faces(n, m) if n else ())
        d = deg[n][m]
        if d is not None:
            q = int(P2.degens[n - 1][d[0]][img[n - 1][d[1]]])
            cands = [q] if q in lookup[n].get(key, ()) else []
        else:
            cands = lookup[n].get(key, ())
        for q in cands:
            img[n][m] = q
            if rec(k + 1):
                return True
        img[n][m] = -1
        return False

    if not rec(0):
        return None
    maps = []
    for n in range(N + 1):
        phi = np.full(P1.count(n), -1, dtype=np.int64)
        for b in range(M.nbase):
            sel = np.nonzero(M.base_of[n] == b)[0]
            elems = G.members[n][b]
            if not len(sel):
                continue
            S, E = np.meshgrid(sel, elems, indexing="ij")
            phi[a1[n][ref[n][S], E]] = a2[n][img[n][S], E]
        maps.append(phi)
    f = SMap(P1, P2, maps)
    if not is_torsor_isomorphism(T1, T2, f):
        return None
    return f


def is_torsor_isomorphism(T1: Torsor, T2: Torsor, f: SMap) -> bool:
    """Simplicial, bijective, over the base, and equivariant."""
    if not ss.validate_smap(f).ok:
        return False
    for n in range(f.trunc + 1):
        phi = f.level_maps[n]
        if (phi < 0).any() or len(np.unique(phi)) != len(phi):
            return False
        if not np.array_equal(T2.proj.level_maps[n][phi], T1.proj.level_maps[n]):
            return False
        a1, a2 = T1.action.act[n], T2.action.act[n]
        ok = a1 >= 0
        if not np.array_equal(np.where(ok, phi[np.maximum(a1, 0)], -1), np.where(ok, a2[phi], -1)):
            return False
    return True


@dataclass
class H1Result:
    representatives: list  # Torsor per class
    twistings: list  # every twisting function found
    class_of: list  # class index per twisting function

    @property
    def count(self) -> int:
        return len(self.representatives)


def h1_enumerate(M: TruncSSet, G: sg.SimpGroup, budget: int = ss.DEFAULT_BUDGET) -> H1Result:
    """Isomorphism classes of twisted products over M, one representative each.

    Every twisting function is enumerated; classes are merged in enumeration
    order, so the representative of a class is its first twisting function.
    """
    ts = twist_search(M, G, budget)
    reps, class_of = [], []
    for t in ts:
        T = twisted_product(M, G, t)
        for k, R in enumerate(reps):
            if find_torsor_isomorphism(T, R, budget) is not None:
                class_of.append(k)
                break
        else:
            class_of.append(len(reps))
            reps.append(T)
    return H1Result(reps, ts, class_of)


# ------------------------------------------------------------ W̄G


class ConstructionMismatch(RuntimeError):
    """Two independent constructions of the same object disagree."""


def _wbar_label_from_T(NG, tup):
    # coordinate j of a T-tuple is (b, h_1..h_j); the W̄ entry g_{n-j} is h_j
    n = len(tup) - 1
    b = NG.labels[(0, n)][tup[0]][0]
    return (b,) + tuple(NG.labels[(j, n - j)][tup[j]][-1] for j in range(1, n + 1))


def wbar_via_T(G: sg.SimpGroup, N: int) -> TruncSSet:
    """T of the nerve, relabelled by (b, g_{n-1}, ..., g_0) in sorted order."""
    if G.trunc < N - 1:
        raise TruncationError(f"W̄G up to degree {N} needs G up to degree {N - 1}")
    Gt = sg.truncate_group(G, min(G.trunc, N))
    NG = sg.nerve_NG(Gt, Ntot=N)
    T = dc.total_T(NG, N)
    return ss.relabel(T, [[_wbar_label_from_T(NG, tup) for tup in T.labels[n]] for n in range(N + 1)])


def wbar_via_formula(G: sg.SimpGroup, N: int) -> TruncSSet:
    """W̄G from the product formula, vectorized per base point."""
    if G.trunc < N - 1:
        raise TruncationError(f"W̄G up to degree {N} needs G up to degree {N - 1}")
    X = G.sset
    cols, offs = [], []  # per degree: global-index columns (g_{n-1}, ..., g_0), base-major
    for n in range(N + 1):
        blocks = []
        for b in range(X.nbase):
            mems = [G.members[n - 1 - j][b] for j in range(n)]  # column j holds degree n-1-j
            if n == 0:
                blocks.append(np.zeros((1, 0), dtype=np.int64))
                continue
            grids = np.meshgrid(*[np.arange(len(m)) for m in mems], indexing="ij")
            blocks.append(np.stack([mems[j][grids[j].ravel()] for j in range(n)], axis=1))
        cols.append(blocks)
        offs.append(np.concatenate([[0], np.cumsum([len(x) for x in blocks])]).astype(np.int64))

    def locate(n, b, arr):
        # arr columns are degrees n-1, ..., 0; mixed radix over local indices
        code = np.zeros(len(arr), dtype=np.int64)
        for j in range(n):
            code = code * G.groups[n - 1 - j][b].order + G.local[n - 1 - j][arr[:, j]]
        return offs[n][b] + code

    def face(n, i, g):
        # column j of g holds g_{n-1-j}
        if i == 0:
            return g[:, 1:]
        out = [X.faces[n - 1 - j][i - 1 - j][g[:, j]] for j in range(i - 1)]
        if i < n:
            k = n - i
            out.append(G.mul(k - 1, X.faces[k][0][g[:, i - 1]], g[:, i]))
            out += [g[:, j] for j in range(i + 1, n)]
        return np.stack(out, axis=1) if out else np.zeros((len(g), 0), dtype=np.int64)

    def degen(n, i, g):
        out = [X.degens[n - 1 - j][i - 1 - j][g[:, j]] for j in range(i)]
        out.append(np.full(len(g), -1, dtype=np.int64))  # the unit, filled per base
        out += [g[:, j] for j in range(i, n)]
        return out

    base_of, faces, degens = [], [], []
    for n in range(N + 1):
        base_of.append(np.repeat(np.arange(X.nbase), np.diff(offs[n])))
    faces.append(np.zeros((0, int(offs[0][-1])), dtype=np.int64))
    for n in range(1, N + 1):
        tab = np.empty((n + 1, int(offs[n][-1])), dtype=np.int64)
        for b in range(X.nbase):
            g = cols[n][b]
            sl = slice(offs[n][b], offs[n][b + 1])
            for i in range(n + 1):
                tab[i, sl] = locate(n - 1, b, face(n, i, g))
        faces.append(tab)
    for n in range(N):
        tab = np.empty((n + 1, int(offs[n][-1])), dtype=np.int64)
        for b in range(X.nbase):
            g = cols[n][b]
            sl = slice(offs[n][b], offs[n][b + 1])
            for i in range(n + 1):
                parts = degen(n, i, g)
                # the inserted unit sits in degree n - i
                parts[i] = np.full(len(g), G.unit(n - i, b), dtype=np.int64)
                tab[i, sl] = locate(n + 1, b, np.stack(parts, axis=1))
        degens.append(tab)
    labels = [[(b,) + tuple(row) for b in range(X.nbase) for row in cols[n][b].tolist()] for n in range(N + 1)]
    W = TruncSSet(N, X.nbase, base_of, faces, degens, labels)
    return ss.relabel(W, labels)


def wbar(G: sg.SimpGroup, N: int, check: bool = True) -> TruncSSet:
    """W̄G up to degree N, built through the total complex and checked against the formula."""
    A = wbar_via_T(G, N)
    if check:
        B = wbar_via_formula(G, N)
        if not A.same_tables(B) or A.labels != B.labels:
            raise ConstructionMismatch("W̄G via the total complex and via the product formula differ")
    return A


# ------------------------------------------------------------ WG


@dataclass(eq=False)
class UniversalBundle:
    torsor: Torsor
    sgroup: sg.SimpGroup  # group structure on WG
    inclusion: SMap  # G → WG
    wbar: TruncSSet
    coords: list  # per degree: rows (w_0, ..., w_n) of global G indices


def _vertex_last(B, cell, q, G):
    # last vertex x·g_1⋯g_p of an action-groupoid cell label (x, g_1, ..., g_p)
    out = []
    for lab in B.labels[cell]:
        v = lab[0]
        for g in lab[1:]:
            v = G.mul(q, v, g)
        out.append(v)
    return np.array(out, dtype=np.int64)


def wg(G: sg.SimpGroup, N: int) -> UniversalBundle:
    """WG = T N(G//G) → W̄G with its group structure, inclusion and pseudo-section."""
    if G.trunc < N:
        raise TruncationError(f"WG up to degree {N} needs G up to degree {N}")
    Gt = sg.truncate_group(G, N)
    X = Gt.sset
    A = sg.regular_action(Gt)
    B = sg.nerve_action_groupoid(A, Ntot=N)
    P = dc.total_T(B, N)
    Wb = wbar(Gt, N)
    windex = [Wb.index_of(n) for n in range(N + 1)]
    last = {c: _vertex_last(B, c, c[1], Gt) for c in B.base_of}
    coords, groups, codes, proj = [], [], [], []
    for n in range(N + 1):
        rows = np.array(P.labels[n], dtype=np.int64).reshape(-1, n + 1)
        w = np.stack([last[(i, n - i)][rows[:, i]] for i in range(n + 1)], axis=1)
        coords.append(w)
        grp = [sg.ProductGroup([Gt.groups[n - i][b] for i in range(n + 1)]) for b in range(X.nbase)]
        groups.append(grp)
        base = P.base_of[n]
        code = np.zeros(len(w), dtype=np.int64)
        for b in range(X.nbase):
            sel = base == b
            code[sel] = grp[b].encode([Gt.local[n - i][w[sel, i]] for i in range(n + 1)])
        codes.append(code)
        labs = [(int(base[k]),) + tuple(B.labels[(j, n - j)][rows[k, j]][-1] for j in range(1, n + 1))
                for k in range(len(rows))]
        proj.append(np.array([windex[n][lab] for lab in labs], dtype=np.int64))
    WG = sg.make_simp_group(P, groups, codes)
    # inclusion: h ↦ (h, d_0 h, d_0^2 h, ...), the all-equal vertex element
    inc = []
    for n in range(N + 1):
        h = np.arange(X.count(n))
        cols = [h]
        for i in range(1, n + 1):
            cols.append(X.faces[n - i + 1][0][cols[-1]])
        incl = np.empty(len(h), dtype=np.int64)
        for b in range(X.nbase):
            sel = X.base_of[n] == b
            c = groups[n][b].encode([Gt.local[n - i][cols[i][sel]] for i in range(n + 1)])
            incl[sel] = WG.members[n][b][c]
        inc.append(incl)
    # pseudo-section: s_0 in W̄G, i.e. w_0 = 1, w_i = d_0(w_{i-1}) · g_{n-i}
    sec = []
    for n in range(N + 1):
        labs = Wb.labels[n]
        w = [np.array([Gt.unit(n, lab[0]) for lab in labs], dtype=np.int64)]
        for i in range(1, n + 1):
            g = np.array([lab[i] for lab in labs], dtype=np.int64)
            w.append(Gt.mul(n - i, X.faces[n - i + 1][0][w[-1]], g))
        s = np.empty(len(labs), dtype=np.int64)
        base = Wb.base_of[n]
        for b in range(X.nbase):
            sel = base == b
            c = groups[n][b].encode([Gt.local[n - i][w[i][sel]] for i in range(n + 1)])
            s[sel] = WG.members[n][b][c]
        sec.append(s)
    # x·h = ι(h)^-1 x; every x is σ(m)·g for a unique (m, g), so x·h = σ(m)·(g h)
    act = []
    for n in range(N + 1):
        tab = np.full((P.count(n), X.count(n)), -1, dtype=np.int64)
        for b in range(X.nbase):
            ms = np.nonzero(Wb.base_of[n] == b)[0]
            elems = Gt.members[n][b]
            if not len(ms):
                continue
            MM, EE = np.meshgrid(ms, elems, indexing="ij")
            orbit = WG.mul(n, WG.inv(n, inc[n][EE]), sec[n][MM])
            a = np.arange(len(elems))
            loc = Gt.groups[n][b].mul(a[:, None], a[None, :])
            xs = orbit.ravel()
            row = np.empty(P.count(n), dtype=np.int64)
            col = np.empty(P.count(n), dtype=np.int64)
            row[xs] = np.repeat(np.arange(len(ms)), len(elems))
            col[xs] = np.tile(a, len(ms))
            tab[np.ix_(xs, elems)] = orbit[row[xs][:, None], loc[col[xs]]]
        act.append(tab)
    T = Torsor(P, Wb, Gt, SMap(P, Wb, proj), sg.GroupAction(P, Gt, act), sec)
    return UniversalBundle(T, WG, SMap(X, P, inc), Wb, coords)


def validate_universal(U: UniversalBundle, G: sg.SimpGroup | None = None) -> ValidationReport:
    """Torsor axioms, group axioms on WG, inclusion and quotient, and WG = Dec W̄G."""
    T = U.torsor
    G = T.group if G is None else G
    rep = validate_torsor(T)
    rep.extend(sg.validate_sgroup(U.sgroup), "WG group: ")
    inc = U.inclusion
    rep.extend(ss.validate_smap(inc), "inclusion: ")
    N = T.trunc
    W = U.sgroup
    for n in range(N + 1):
        i = inc.level_maps[n]
        if len(np.unique(i)) != len(i):
            rep.add("inclusion is not injective", n, None)
        X = G.sset
        for b in range(X.nbase):
            elems = G.members[n][b]
            gens = [int(elems[s]) for s in G.groups[n][b].generators()]
            for s in gens:
                lhs = i[G.mul(n, elems, np.full(len(elems), s))]
                rhs = W.mul(n, i[elems], np.full(len(elems), i[s]))
                if not np.array_equal(lhs, rhs):
                    rep.add("inclusion is not a homomorphism", n, s)
        # action is translation by the included inverse
        tab = T.action.act[n]
        for b in range(X.nbase):
            xs = np.nonzero(T.total.base_of[n] == b)[0]
            elems = G.members[n][b]
            for s in G.groups[n][b].generators():
                g = int(elems[s])
                if not np.array_equal(tab[xs, g], W.mul(n, np.full(len(xs), W.inv(n, int(i[g]))), xs)):
                    rep.add("action is not translation by the inclusion", n, (b, g))
        # quotient: orbits of the action are exactly the fibers of the projection
        orbit = np.where(tab >= 0, tab, np.iinfo(np.int64).max).min(axis=1)
        pr = T.proj.level_maps[n]
        pairs = np.unique(np.stack([orbit, pr], axis=1), axis=0)
        if len(np.unique(pairs[:, 0])) != len(pairs) or len(np.unique(pairs[:, 1])) != len(pairs):
            rep.add("projection is not the quotient by the action", n, None)
        if len(pairs) != T.base.count(n):
            rep.add("projection is not the quotient by the action", n, None)
    rep.extend(check_wg_is_dec(U, G), "décalage: ")
    return rep


def wg_to_dec_labels(U: UniversalBundle, G: sg.SimpGroup, n: int):
    """W̄G_{n+1} labels (b, w_0, (d_0 w_0)^-1 w_1, ...) of the WG_n simplices."""
    X = G.sset
    w = U.coords[n]
    cols = [w[:, 0]]
    for i in range(1, n + 1):
        cols.append(G.mul(n - i, G.inv(n - i, X.faces[n - i + 1][0][w[:, i - 1]]), w[:, i]))
    base = U.torsor.total.base_of[n]
    return [(int(base[k]),) + tuple(int(c[k]) for c in cols) for k in range(len(w))]


def check_wg_is_dec(U: UniversalBundle, G: sg.SimpGroup) -> ValidationReport:
    """WG equals the first-face décalage of W̄G, with d_0 as projection and s_0 as section."""
    rep = ValidationReport()
    T = U.torsor
    N = T.trunc
    if G.trunc < N:
        rep.notes.append("décalage comparison skipped: group truncated below N")
        return rep
    W1 = wbar(G, N + 1, check=False)
    A = dc.dec0(W1, side="first")
    idx = [W1.index_of(n + 1) for n in range(N + 1)]
    phi = []
    for n in range(N + 1):
        try:
            phi.append(np.array([idx[n][lab] for lab in wg_to_dec_labels(U, G, n)], dtype=np.int64))
        except KeyError:
            rep.add("coordinate change leaves W̄G", n, None)
            return rep
        if len(np.unique(phi[n])) != A.sset.count(n) or len(phi[n]) != A.sset.count(n):
            rep.add("coordinate change is not a bijection", n, None)
            return rep
    f = SMap(T.total, A.sset.truncate(N), phi)
    rep.extend(ss.validate_smap(f), "identification: ")
    for n in range(N + 1):
        can = A.canonical.level_maps[n][phi[n]]
        if not np.array_equal(can, T.proj.level_maps[n]):
            rep.add("projection is not the stripped face d_0", n, None)
        if not np.array_equal(phi[n][T.section[n]], A.extra[n]):
            rep.add("pseudo-section is not the extra degeneracy s_0", n, None)
    return rep
