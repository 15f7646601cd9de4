"""Bisimplicial sets, décalage, the total complex T, and path objects.

Conventions
-----------
``dec0(X, side="last")`` keeps d_0..d_n of X_{n+1}; the stripped d_{n+1}
is the canonical map Dec₀X → X and the stripped s_{n+1} is the extra
degeneracy.  ``side="first"`` strips d_0/s_0 instead; this is the variant
that the universal bundle is literally equal to (see ``bundles.wg``).

``dec_total(X)`` puts X_{p+q+1} at (p, q) with horizontal operators
d_0..d_p and vertical operators d_{p+1}..d_{p+q+1}.

``total_T`` uses the codiagonal structure maps::

    d_i(x_0..x_n) = (d^v_i x_0, ..., d^v_1 x_{i-1}, d^h_i x_{i+1}, ..., d^h_i x_n)
    s_i(x_0..x_n) = (s^v_i x_0, ..., s^v_0 x_i, s^h_i x_i, ..., s^h_i x_n)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from . import sset as ss
from .sset import BudgetExceeded, SMap, TruncationError, TruncSSet, ValidationReport

UNBOUNDED = 10 ** 9


@dataclass(eq=False)
class BisSet:
    Np: int
    Nq: int
    Ntot: int
    nbase: int
    base_of: dict
    hface: dict
    hdegen: dict
    vface: dict
    vdegen: dict
    labels: dict | None = field(default=None, repr=False)

    def has(self, p: int, q: int) -> bool:
        return 0 <= p <= self.Np and 0 <= q <= self.Nq and p + q <= self.Ntot

    def cells(self):
        return sorted(self.base_of, key=lambda c: (c[0] + c[1], c[0]))

    def count(self, p: int, q: int) -> int:
        return len(self.base_of[(p, q)])

    def row(self, q: int) -> TruncSSet:
        """Horizontal simplicial set at vertical degree q."""
        top = max(p for (p, qq) in self.base_of if qq == q)
        return TruncSSet(top, self.nbase, [self.base_of[(p, q)] for p in range(top + 1)],
                         [self.hface[(p, q)] for p in range(top + 1)],
                         [self.hdegen[(p, q)] for p in range(top)])

    def column(self, p: int) -> TruncSSet:
        top = max(q for (pp, q) in self.base_of if pp == p)
        return TruncSSet(top, self.nbase, [self.base_of[(p, q)] for q in range(top + 1)],
                         [self.vface[(p, q)] for q in range(top + 1)],
                         [self.vdegen[(p, q)] for q in range(top)],
                         None if self.labels is None else [self.labels[(p, q)] for q in range(top + 1)])


def bis_from_labels(cells, hface, hdegen, vface, vdegen, base, nbase=1, keep_labels=True) -> BisSet:
    """BisSet from labelled cells ``{(p, q): [labels]}`` and label-level operators."""
    Np = max(p for p, q in cells)
    Nq = max(q for p, q in cells)
    Ntot = max(p + q for p, q in cells)
    # region must be the full box cut by the antidiagonal bound
    expect = {(p, q) for p in range(Np + 1) for q in range(Nq + 1) if p + q <= Ntot}
    if set(cells) != expect:
        raise ValueError("cells must form a truncated box")
    index = {c: {lab: k for k, lab in enumerate(lv)} for c, lv in cells.items()}
    B = BisSet(Np, Nq, Ntot, nbase, {}, {}, {}, {}, {}, {c: list(lv) for c, lv in cells.items()} if keep_labels else None)
    for (p, q), lv in cells.items():
        B.base_of[(p, q)] = np.array([base(p, q, lab) for lab in lv], dtype=np.int64)
        c = len(lv)
        hf = np.zeros((p + 1 if p else 0, c), dtype=np.int64)
        if p:
            low = index[(p - 1, q)]
            for k, lab in enumerate(lv):
                for i in range(p + 1):
                    hf[i, k] = low[hface(p, q, i, lab)]
        B.hface[(p, q)] = hf
        vf = np.zeros((q + 1 if q else 0, c), dtype=np.int64)
        if q:
            low = index[(p, q - 1)]
            for k, lab in enumerate(lv):
                for j in range(q + 1):
                    vf[j, k] = low[vface(p, q, j, lab)]
        B.vface[(p, q)] = vf
        if (p + 1, q) in index:
            high = index[(p + 1, q)]
            hs = np.zeros((p + 1, c), dtype=np.int64)
            for k, lab in enumerate(lv):
                for i in range(p + 1):
                    hs[i, k] = high[hdegen(p, q, i, lab)]
            B.hdegen[(p, q)] = hs
        if (p, q + 1) in index:
            high = index[(p, q + 1)]
            vs = np.zeros((q + 1, c), dtype=np.int64)
            for k, lab in enumerate(lv):
                for j in range(q + 1):
                    vs[j, k] = high[vdegen(p, q, j, lab)]
            B.vdegen[(p, q)] = vs
    return B


def validate_bisset(W: BisSet) -> ValidationReport:
    """Row and column identities plus commutation of horizontal with vertical operators."""
    rep = ValidationReport()
    for q in range(W.Nq + 1):
        if W.has(0, q):
            rep.extend(ss.validate_sset(W.row(q)), f"row q={q}: ")
    for p in range(W.Np + 1):
        if W.has(p, 0):
            rep.extend(ss.validate_sset(W.column(p)), f"column p={p}: ")
    mm = _kernels.compose_mismatch
    for (p, q) in W.cells():
        for i in range(p + 1):
            for j in range(q + 1):
                if p and q:
                    bad = mm(W.hface[(p, q - 1)][i], W.vface[(p, q)][j], W.vface[(p - 1, q)][j], W.hface[(p, q)][i])
                    if len(bad):
                        rep.add(f"d^h_{i} d^v_{j} != d^v_{j} d^h_{i}", (p, q), int(bad[0]))
                if p and W.has(p, q + 1):
                    bad = mm(W.hface[(p, q + 1)][i], W.vdegen[(p, q)][j], W.vdegen[(p - 1, q)][j], W.hface[(p, q)][i])
                    if len(bad):
                        rep.add(f"d^h_{i} s^v_{j} != s^v_{j} d^h_{i}", (p, q), int(bad[0]))
                if q and W.has(p + 1, q):
                    bad = mm(W.hdegen[(p, q - 1)][i], W.vface[(p, q)][j], W.vface[(p + 1, q)][j], W.hdegen[(p, q)][i])
                    if len(bad):
                        rep.add(f"s^h_{i} d^v_{j} != d^v_{j} s^h_{i}", (p, q), int(bad[0]))
                if W.has(p + 1, q + 1):
                    bad = mm(W.hdegen[(p, q + 1)][i], W.vdegen[(p, q)][j], W.vdegen[(p + 1, q)][j], W.hdegen[(p, q)][i])
                    if len(bad):
                        rep.add(f"s^h_{i} s^v_{j} != s^v_{j} s^h_{i}", (p, q), int(bad[0]))
    return rep


# ------------------------------------------------------------------ Dec₀


@dataclass(eq=False)
class AugSSet:
    """Décalage with its augmentation data.

    ``sset``: the shifted simplicial set.  ``minus_one``: base labels of the
    degree −1 object.  ``eps``: augmentation from degree 0 to degree −1.
    ``extra[n + 1]``: extra degeneracy from degree n to n + 1 (n ≥ −1).
    ``canonical``: the stripped face as a map to the original object.
    """

    sset: TruncSSet
    minus_one: np.ndarray
    eps: np.ndarray
    extra: list
    canonical: SMap
    side: str


def _dec_index(side, n):
    # original index of Dec face/degeneracy i at Dec degree n, and the stripped one
    if side == "last":
        return (lambda i: i), n + 1
    return (lambda i: i + 1), 0


def dec0(X: TruncSSet, side: str = "last") -> AugSSet:
    """Shift down by one, stripping the last (default) or first face and degeneracy."""
    if X.trunc < 1:
        raise TruncationError("décalage needs truncation at least 1")
    if side not in ("last", "first"):
        raise ValueError("side must be 'last' or 'first'")
    N = X.trunc - 1
    base_of = [X.base_of[n + 1] for n in range(N + 1)]
    faces = [np.zeros((0, X.count(1)), dtype=np.int64)]
    for n in range(1, N + 1):
        idx, _ = _dec_index(side, n)
        faces.append(X.faces[n + 1][[idx(i) for i in range(n + 1)]])
    degens = []
    for n in range(N):
        idx, _ = _dec_index(side, n)
        degens.append(X.degens[n + 1][[idx(i) for i in range(n + 1)]])
    labels = None if X.labels is None else X.labels[1:]
    D = TruncSSet(N, X.nbase, base_of, faces, degens, labels)
    canon = []
    for n in range(N + 1):
        _, strip = _dec_index(side, n)
        canon.append(X.faces[n + 1][strip])
    # augmentation: the remaining face X_1 -> X_0
    eps = X.faces[1][0] if side == "last" else X.faces[1][1]
    extra = [X.degens[0][0]]
    for n in range(N):
        extra.append(X.degens[n + 1][n + 1 if side == "last" else 0])
    return AugSSet(D, X.base_of[0], eps, extra, SMap(D, X, canon), side)


def validate_augmented(A: AugSSet) -> ValidationReport:
    """Simplicial identities plus the contraction identities of the extra degeneracies."""
    rep = ss.validate_sset(A.sset)
    D = A.sset
    if D.trunc >= 1 and not np.array_equal(A.eps[D.faces[1][0]], A.eps[D.faces[1][1]]):
        rep.add("augmentation does not coequalize d_0, d_1", 1, None)
    ex = A.extra
    top = "last" == A.side
    # the Dec face that the extra degeneracy splits
    if not np.array_equal(A.eps[ex[0]], np.arange(len(A.minus_one))):
        rep.add("augmentation is not split by the extra degeneracy", -1, None)
    for n in range(D.trunc):
        s = ex[n + 1]
        k = n + 1 if top else 0
        if not np.array_equal(D.faces[n + 1][k][s], np.arange(D.count(n))):
            rep.add("extra degeneracy is not split", n, None)
        for i in range(n + 2):
            if i == k:
                continue
            j = i if top else i - 1
            if n == 0:
                want = ex[0][A.eps]
            else:
                want = ex[n][D.faces[n][j]]
            got = D.faces[n + 1][i][s]
            if not np.array_equal(got, want):
                rep.add(f"d_{i} does not commute with the extra degeneracy", n, int(np.argmax(got != want)))
    for n in range(D.trunc - 1):
        for i in range(n + 1):
            lhs = D.degens[n + 1][i][ex[n + 1]]
            if top:
                rhs = ex[n + 2][D.degens[n][i]]
            elif i == 0:
                rhs = ex[n + 2][ex[n + 1]]
            else:
                rhs = ex[n + 2][D.degens[n][i - 1]]
            if not np.array_equal(lhs, rhs):
                rep.add(f"s_{i} does not commute with the extra degeneracy", n, int(np.argmax(lhs != rhs)))
    can = A.canonical
    rep.extend(ss.validate_smap(can), "canonical map: ")
    for n in range(D.trunc):
        if not np.array_equal(can.level_maps[n + 1][ex[n + 1]], np.arange(D.count(n))):
            rep.add("canonical map is not split by the extra degeneracy", n, None)
    return rep


# ------------------------------------------------------------------ Dec


def dec_total(X: TruncSSet) -> BisSet:
    """(p, q) ↦ X_{p+q+1}; horizontal indices 0..p, vertical p+1..p+q+1."""
    if X.trunc < 1:
        raise TruncationError("total décalage needs truncation at least 1")
    N = X.trunc - 1
    cells = {(p, q): [(p, q, x) for x in range(X.count(p + q + 1))]
             for p in range(N + 1) for q in range(N + 1) if p + q <= N}
    return bis_from_labels(
        cells,
        hface=lambda p, q, i, a: (p - 1, q, X.face(p + q + 1, i, a[2])),
        hdegen=lambda p, q, i, a: (p + 1, q, X.degen(p + q + 1, i, a[2])),
        vface=lambda p, q, j, a: (p, q - 1, X.face(p + q + 1, p + 1 + j, a[2])),
        vdegen=lambda p, q, j, a: (p, q + 1, X.degen(p + q + 1, p + 1 + j, a[2])),
        base=lambda p, q, a: int(X.base_of[p + q + 1][a[2]]),
        nbase=X.nbase,
    )


def vertical_dec(W: BisSet) -> BisSet:
    """Shift in the vertical direction, stripping d^v_0 and s^v_0."""
    cells = {(p, q): [(p, q + 1, x) for x in range(W.count(p, q + 1))]
             for (p, q) in W.base_of if W.has(p, q + 1)}
    return bis_from_labels(
        cells,
        hface=lambda p, q, i, a: (p - 1, q + 1, int(W.hface[(p, q + 1)][i][a[2]])),
        hdegen=lambda p, q, i, a: (p + 1, q + 1, int(W.hdegen[(p, q + 1)][i][a[2]])),
        vface=lambda p, q, j, a: (p, q, int(W.vface[(p, q + 1)][j + 1][a[2]])),
        vdegen=lambda p, q, j, a: (p, q + 2, int(W.vdegen[(p, q + 1)][j + 1][a[2]])),
        base=lambda p, q, a: int(W.base_of[(p, q + 1)][a[2]]),
        nbase=W.nbase,
    )


# ------------------------------------------------------------------ T


def total_T(W: BisSet, N: int | None = None, budget: int = ss.DEFAULT_BUDGET) -> TruncSSet:
    """Codiagonal: n-simplices are (x_0..x_n), x_i ∈ W_{i,n-i}, d^v_0 x_i = d^h_{i+1} x_{i+1}.

    Tuples are listed in lexicographic order; labels are the tuples.
    """
    if N is None:
        N = min(W.Np, W.Nq, W.Ntot)
    for n in range(N + 1):
        for i in range(n + 1):
            if not W.has(i, n - i):
                raise TruncationError(f"cell ({i}, {n - i}) missing for degree {n}")
    levels = []
    work = 0
    for n in range(N + 1):
        rows = np.arange(W.count(0, n), dtype=np.int64)[:, None]
        for i in range(n):
            # join on d^v_0 x_i = d^h_{i+1} x_{i+1}
            want = W.vface[(i, n - i)][0][rows[:, -1]]
            last = W.hface[(i + 1, n - i - 1)][i + 1]
            order = np.argsort(last, kind="stable")
            lo = np.searchsorted(last[order], want, "left")
            hi = np.searchsorted(last[order], want, "right")
            reps = hi - lo
            work += int(reps.sum())
            if work > budget:
                raise BudgetExceeded("total complex enumeration exceeded budget")
            parent = np.repeat(np.arange(len(rows)), reps)
            offs = np.arange(len(parent)) - np.repeat(np.cumsum(reps) - reps, reps)
            rows = np.hstack([rows[parent], order[np.repeat(lo, reps) + offs][:, None]])
        levels.append(rows)

    finders = [_row_finder(levels[n], [W.count(i, n - i) for i in range(n + 1)]) for n in range(N + 1)]
    base_of = [W.base_of[(0, n)][levels[n][:, 0]] for n in range(N + 1)]
    faces = [np.zeros((0, len(levels[0])), dtype=np.int64)]
    for n in range(1, N + 1):
        x = levels[n]
        tab = np.empty((n + 1, len(x)), dtype=np.int64)
        for i in range(n + 1):
            cols = [W.vface[(j, n - j)][i - j][x[:, j]] for j in range(i)]
            cols += [W.hface[(j, n - j)][i][x[:, j]] for j in range(i + 1, n + 1)]
            tab[i] = finders[n - 1](np.stack(cols, axis=1))
        faces.append(tab)
    degens = []
    for n in range(N):
        x = levels[n]
        tab = np.empty((n + 1, len(x)), dtype=np.int64)
        for i in range(n + 1):
            cols = [W.vdegen[(j, n - j)][i - j][x[:, j]] for j in range(i + 1)]
            cols += [W.hdegen[(j, n - j)][i][x[:, j]] for j in range(i, n + 1)]
            tab[i] = finders[n + 1](np.stack(cols, axis=1))
        degens.append(tab)
    labels = [list(map(tuple, lv.tolist())) for lv in levels]
    return TruncSSet(N, W.nbase, base_of, faces, degens, labels)


def _row_finder(rows, radix):
    """Index lookup for rows of a lexicographically sorted integer table."""
    radix = [max(int(r), 1) for r in radix]
    total = 1
    for r in radix:
        total *= r
    if total < 1 << 62:
        strides = np.ones(len(radix), dtype=np.int64)
        for k in range(len(radix) - 2, -1, -1):
            strides[k] = strides[k + 1] * radix[k + 1]
        codes = rows @ strides if len(rows) else np.zeros(0, dtype=np.int64)

        def find(q):
            c = np.asarray(q, dtype=np.int64) @ strides
            pos = np.searchsorted(codes, c)
            if (pos >= len(codes)).any() or (codes[np.minimum(pos, len(codes) - 1)] != c).any():
                raise KeyError("structure map leaves the total complex")
            return pos

        return find
    table = {t: k for k, t in enumerate(map(tuple, rows.tolist()))}
    return lambda q: np.array([table[t] for t in map(tuple, np.asarray(q).tolist())], dtype=np.int64)


# ------------------------------------------------------------------ adjunction


@dataclass(eq=False)
class BisMap:
    source: BisSet
    target: BisSet
    cell_maps: dict

    def key(self):
        return tuple(self.cell_maps[c].tobytes() for c in sorted(self.cell_maps))


def validate_bismap(f: BisMap) -> ValidationReport:
    rep = ValidationReport()
    S, T = f.source, f.target
    mm = _kernels.compose_mismatch
    for c, m in f.cell_maps.items():
        p, q = c
        if (T.base_of[c][m] != S.base_of[c]).any():
            rep.add("map changes base", c, None)
        for i in range(p + 1):
            if p:
                bad = mm(f.cell_maps[(p - 1, q)], S.hface[c][i], T.hface[c][i], m)
                if len(bad):
                    rep.add(f"does not commute with d^h_{i}", c, int(bad[0]))
            if (p + 1, q) in f.cell_maps:
                bad = mm(f.cell_maps[(p + 1, q)], S.hdegen[c][i], T.hdegen[c][i], m)
                if len(bad):
                    rep.add(f"does not commute with s^h_{i}", c, int(bad[0]))
        for j in range(q + 1):
            if q:
                bad = mm(f.cell_maps[(p, q - 1)], S.vface[c][j], T.vface[c][j], m)
                if len(bad):
                    rep.add(f"does not commute with d^v_{j}", c, int(bad[0]))
            if (p, q + 1) in f.cell_maps:
                bad = mm(f.cell_maps[(p, q + 1)], S.vdegen[c][j], T.vdegen[c][j], m)
                if len(bad):
                    rep.add(f"does not commute with s^v_{j}", c, int(bad[0]))
    return rep


def hom_bis(S: BisSet, T: BisSet, budget: int = ss.DEFAULT_BUDGET):
    """All bisimplicial maps S → T on the cells both carry, canonically ordered."""
    cells = [c for c in S.cells() if T.has(*c)]
    # forced values for degenerate elements: (x, kind, index, source)
    forced, free = {}, {}
    for c in cells:
        p, q = c
        fx = {}
        ids = np.arange(S.count(p, q))
        for i in range(p):
            src = S.hface[c][i]
            hit = S.hdegen[(p - 1, q)][i][src] == ids
            for x in np.nonzero(hit)[0]:
                fx.setdefault(int(x), ("h", i, int(src[x])))
        for j in range(q):
            src = S.vface[c][j]
            hit = S.vdegen[(p, q - 1)][j][src] == ids
            for x in np.nonzero(hit)[0]:
                fx.setdefault(int(x), ("v", j, int(src[x])))
        forced[c] = sorted(fx.items())
        free[c] = [x for x in range(S.count(p, q)) if x not in fx]
    lookup = {}
    for c in cells:
        p, q = c
        parts = [T.base_of[c][None, :]]
        if p:
            parts.append(T.hface[c])
        if q:
            parts.append(T.vface[c])
        keys = np.vstack(parts).T
        d = {}
        for y, k in enumerate(map(tuple, keys.tolist())):
            d.setdefault(k, []).append(y)
        lookup[c] = d
    vals = {c: np.full(S.count(*c), -1, dtype=np.int64) for c in cells}
    out = []
    nodes = [0]

    def fill(c):
        p, q = c
        for x, (kind, i, y) in forced[c]:
            if kind == "h":
                vals[c][x] = T.hdegen[(p - 1, q)][i][vals[(p - 1, q)][y]]
            else:
                vals[c][x] = T.vdegen[(p, q - 1)][i][vals[(p, q - 1)][y]]

    def rec(ci, k):
        nodes[0] += 1
        if nodes[0] > budget:
            raise BudgetExceeded("bisimplicial hom enumeration exceeded budget")
        if ci == len(cells):
            f = BisMap(S, T, {c: v.copy() for c, v in vals.items()})
            if validate_bismap(f).ok:
                out.append(f)
            return
        c = cells[ci]
        p, q = c
        if k == 0:
            fill(c)
        if k == len(free[c]):
            rec(ci + 1, 0)
            return
        x = free[c][k]
        key = [int(S.base_of[c][x])]
        if p:
            key += [int(vals[(p - 1, q)][S.hface[c][i][x]]) for i in range(p + 1)]
        if q:
            key += [int(vals[(p, q - 1)][S.vface[c][j][x]]) for j in range(q + 1)]
        for y in lookup[c].get(tuple(key), ()):
            vals[c][x] = y
            rec(ci, k + 1)
        vals[c][x] = -1

    rec(0, 0)
    return out


def transpose_to_bis(psi: SMap, W: BisSet, DX: BisSet) -> BisMap:
    """X → TW gives Dec X → W: y ∈ X_{p+q+1} ↦ d^v_0 of coordinate p of ψ(y)."""
    TW = psi.target
    maps = {}
    for (p, q) in DX.base_of:
        n = p + q + 1
        if n > psi.trunc or not W.has(p, q):
            continue
        coords = np.array([TW.labels[n][t][p] for t in psi.level_maps[n]], dtype=np.int64)
        maps[(p, q)] = W.vface[(p, q + 1)][0][coords] if len(coords) else coords
    return BisMap(DX, W, maps)


def adjunction_check(X: TruncSSet, W: BisSet, N: int | None = None, budget: int = ss.DEFAULT_BUDGET) -> bool:
    """Compare hom(Dec X, W) with hom(X, TW) through the explicit transpose.

    X is taken at truncation N + 1 and T W at N + 1, while Dec X then has
    cells with p + q ≤ N.  For X without nondegenerate simplices above
    degree N this is an exact comparison.
    """
    if N is None:
        N = min(X.trunc - 1, W.Ntot - 1, W.Np - 1, W.Nq - 1)
    Xn = X.truncate(N + 1)
    DX = dec_total(Xn)
    TW = total_T(W, N + 1, budget)
    left = hom_bis(DX, W, budget)
    right = ss.hom_enumerate(Xn, TW, budget)
    if len(left) != len(right):
        return False
    keys = {f.key(): k for k, f in enumerate(left)}
    hit = set()
    for psi in right:
        phi = transpose_to_bis(psi, W, DX)
        if not validate_bismap(phi).ok:
            return False
        k = keys.get(phi.key())
        if k is None or k in hit:
            return False
        hit.add(k)
    return len(hit) == len(left)


# ------------------------------------------------------------------ dDec, paths


def diagonal_dec(X: TruncSSet) -> TruncSSet:
    """(dDec X)_n = X_{2n+1}; d_i = d_i d_{n+1+i}, s_i = s_i s_{n+1+i}."""
    N = (X.trunc - 1) // 2
    if N < 0:
        raise TruncationError("diagonal décalage needs truncation at least 1")
    base_of = [X.base_of[2 * n + 1] for n in range(N + 1)]
    faces = [np.zeros((0, X.count(1)), dtype=np.int64)]
    for n in range(1, N + 1):
        faces.append(np.stack([X.faces[2 * n][i][X.faces[2 * n + 1][n + 1 + i]] for i in range(n + 1)]))
    degens = []
    for n in range(N):
        degens.append(np.stack([X.degens[2 * n + 2][i][X.degens[2 * n + 1][n + 1 + i]] for i in range(n + 1)]))
    labels = None if X.labels is None else [X.labels[2 * n + 1] for n in range(N + 1)]
    return TruncSSet(N, X.nbase, base_of, faces, degens, labels)


def prism(n: int, N: int | None = None):
    """Δ[n] × Δ[1] with its simplices labelled by pairs of vertex tuples."""
    N = n + 1 if N is None else N
    P, _, _ = ss.product(ss.standard_simplex(n, N), ss.standard_simplex(1, N))
    A, B = ss.standard_simplex(n, N), ss.standard_simplex(1, N)
    labels = [[(A.labels[m][a], B.labels[m][b]) for a, b in P.labels[m]] for m in range(N + 1)]
    return TruncSSet(P.trunc, P.nbase, P.base_of, P.faces, P.degens, labels)


def yoneda_map(X: TruncSSet, m: int, z: int, N: int) -> SMap:
    """Map Δ[m] → X (truncated at N) sending the top simplex to z."""
    D = ss.standard_simplex(m, N)
    maps = []
    for k in range(N + 1):
        arr = np.empty(D.count(k), dtype=np.int64)
        for idx, a in enumerate(D.labels[k]):
            arr[idx] = restrict_along(X, m, z, a)
        maps.append(arr)
    return SMap(D, X, maps)


def restrict_along(X: TruncSSet, m: int, z: int, a) -> int:
    """α^* z for a monotone vertex tuple α: [k] → [m]."""
    image = sorted(set(a))
    x, deg = z, m
    for j in range(m, -1, -1):
        if j not in image:
            x = X.face(deg, j, x)
            deg -= 1
    for t in range(len(a) - 1):
        if a[t] == a[t + 1]:
            x = X.degen(deg, t, x)
            deg += 1
    return x


def _map_key(levels, upto):
    return tuple(np.asarray(levels[k]).tobytes() for k in range(upto + 1))


@dataclass(eq=False)
class PathObject:
    sset: TruncSSet
    maps: list  # per degree: list of level-map lists for Δ[n] × Δ[1] → X
    prisms: list
    ev0: SMap
    ev1: SMap


def path_object(X: TruncSSet, N: int | None = None, budget: int = ss.DEFAULT_BUDGET) -> PathObject:
    """Degree n = maps Δ[n] × Δ[1] → X, with the two endpoint evaluations."""
    N = X.trunc - 1 if N is None else N
    if N + 1 > X.trunc:
        raise TruncationError("path object degree n needs X up to degree n + 1")
    prisms = [prism(n, n + 2) for n in range(N + 2)]
    maps, index = [], []
    for n in range(N + 1):
        hs = ss.hom_enumerate(prisms[n].truncate(n + 1), X.truncate(n + 1), budget)
        lvls = [list(h.level_maps) for h in hs]
        if n + 2 <= X.trunc:
            # top level of the prism is all degenerate, so values are forced
            forced = [ss.is_degenerate(prisms[n], n + 2, x) for x in range(prisms[n].count(n + 2))]
            for lv in lvls:
                lv.append(np.array([X.degen(n + 1, i, int(lv[n + 1][y])) for i, y in forced], dtype=np.int64))
        maps.append(lvls)
        index.append({_map_key(lv, n + 1): k for k, lv in enumerate(lvls)})

    def pre(n_src, n_dst, op):
        # prism(n_src) → prism(n_dst) induced by the vertex map op on the Δ factor
        P, Q = prisms[n_src], prisms[n_dst]
        out = []
        for m in range(n_src + 2):
            qi = {lab: k for k, lab in enumerate(Q.labels[m])}
            out.append(np.array([qi[(tuple(op[v] for v in a), b)] for a, b in P.labels[m]], dtype=np.int64))
        return out

    faces = [np.zeros((0, len(maps[0])), dtype=np.int64)]
    for n in range(1, N + 1):
        tab = np.zeros((n + 1, len(maps[n])), dtype=np.int64)
        for i in range(n + 1):
            pm = pre(n - 1, n, [v if v < i else v + 1 for v in range(n)])
            for k, lv in enumerate(maps[n]):
                tab[i, k] = index[n - 1][_map_key([lv[m][pm[m]] for m in range(n + 1)], n)]
        faces.append(tab)
    degens = []
    for n in range(N):
        tab = np.zeros((n + 1, len(maps[n])), dtype=np.int64)
        for i in range(n + 1):
            pm = pre(n + 1, n, [v if v <= i else v - 1 for v in range(n + 2)])
            for k, lv in enumerate(maps[n]):
                tab[i, k] = index[n + 1][_map_key([lv[m][pm[m]] for m in range(n + 3)], n + 2)]
        degens.append(tab)
    base_of = []
    for n in range(N + 1):
        base_of.append(np.array([X.base_of[0][lv[0][0]] for lv in maps[n]], dtype=np.int64))
    P = TruncSSet(N, X.nbase, base_of, faces, degens)
    ev = []
    for e in (0, 1):
        lm = []
        for n in range(N + 1):
            lab = (tuple(range(n + 1)), (e,) * (n + 1))
            pos = prisms[n].labels[n].index(lab)
            lm.append(np.array([lv[n][pos] for lv in maps[n]], dtype=np.int64))
        ev.append(SMap(P, X, lm))
    return PathObject(P, maps, prisms, ev[0], ev[1])
