"""Finite truncated simplicial sets over a finite base.

A :class:`TruncSSet` stores, for each degree ``n <= trunc``, the number of
simplices, a base label per simplex, and face/degeneracy index tables.
``faces[n]`` has shape ``(n + 1, count[n])``: ``faces[n][i][x]`` is the index
of ``d_i x`` in degree ``n - 1``.  ``degens[n]`` likewise has shape
``(n + 1, count[n])`` for ``n < trunc``.

Most constructions elsewhere in the package go through :func:`from_labels`,
which turns hashable simplex labels plus label-level face/degeneracy
functions into index tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence

import numpy as np

from . import _kernels

IntArray = np.ndarray


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its configured budget."""


class TruncationError(ValueError):
    """Not enough degrees are available for the requested construction."""


DEFAULT_BUDGET = 2_000_000


@dataclass(eq=False)
class TruncSSet:
    trunc: int
    nbase: int
    base_of: list
    faces: list
    degens: list
    labels: list | None = field(default=None, repr=False)

    def count(self, n: int) -> int:
        return len(self.base_of[n])

    @property
    def counts(self) -> list[int]:
        return [len(b) for b in self.base_of]

    def face(self, n: int, i: int, x: int) -> int:
        return int(self.faces[n][i][x])

    def degen(self, n: int, i: int, x: int) -> int:
        return int(self.degens[n][i][x])

    def label(self, n: int, x: int):
        return self.labels[n][x] if self.labels is not None else x

    def index_of(self, n: int):
        """Dict from label to index in degree n."""
        return {lab: k for k, lab in enumerate(self.labels[n])}

    def truncate(self, N: int) -> "TruncSSet":
        if N > self.trunc:
            raise TruncationError(f"cannot raise truncation {self.trunc} to {N}")
        degens = [d for d in self.degens[:N]]
        return TruncSSet(
            N, self.nbase, self.base_of[: N + 1], self.faces[: N + 1], degens,
            None if self.labels is None else self.labels[: N + 1],
        )

    def same_tables(self, other: "TruncSSet") -> bool:
        if self.trunc != other.trunc or self.nbase != other.nbase:
            return False
        for n in range(self.trunc + 1):
            if not np.array_equal(self.base_of[n], other.base_of[n]):
                return False
            if not np.array_equal(self.faces[n], other.faces[n]):
                return False
            if n < self.trunc and not np.array_equal(self.degens[n], other.degens[n]):
                return False
        return True


@dataclass(eq=False)
class SMap:
    """Simplicial map given by one index array per degree."""

    source: TruncSSet
    target: TruncSSet
    level_maps: list

    @property
    def trunc(self) -> int:
        return min(self.source.trunc, self.target.trunc, len(self.level_maps) - 1)

    def __call__(self, n: int, x: int) -> int:
        return int(self.level_maps[n][x])


@dataclass
class ValidationReport:
    entries: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def add(self, what: str, degree: int | None = None, witness=None):
        self.entries.append({"violation": what, "degree": degree, "witness": witness})

    def extend(self, other: "ValidationReport", prefix: str = ""):
        for e in other.entries:
            self.entries.append(dict(e, violation=prefix + e["violation"]))
        self.notes.extend(other.notes)

    @property
    def ok(self) -> bool:
        return not self.entries

    def __bool__(self):
        # truthy means "something is wrong", mirroring a non-empty list
        return bool(self.entries)

    def __len__(self):
        return len(self.entries)

    def summary(self, limit: int = 5) -> str:
        if self.ok:
            return "ok"
        lines = [f"{len(self.entries)} violation(s)"]
        for e in self.entries[:limit]:
            lines.append(f"  {e['violation']} (degree {e['degree']}, witness {e['witness']})")
        return "\n".join(lines)


# ------------------------------------------------------------------ builders


def from_labels(
    levels: Sequence[Sequence[Hashable]],
    face: Callable[[int, int, Hashable], Hashable],
    degen: Callable[[int, int, Hashable], Hashable],
    base: Callable[[int, Hashable], int],
    nbase: int = 1,
    keep_labels: bool = True,
) -> TruncSSet:
    """Build index tables from labelled simplices.

    ``levels[n]`` lists the n-simplices; their order becomes the index order.
    A face or degeneracy label missing from the adjacent level is an internal
    error and raises ``KeyError``.
    """
    N = len(levels) - 1
    index = [{lab: k for k, lab in enumerate(lv)} for lv in levels]
    for n, lv in enumerate(levels):
        if len(index[n]) != len(lv):
            raise ValueError(f"duplicate labels in degree {n}")
    base_of = [np.array([base(n, lab) for lab in lv], dtype=np.int64) for n, lv in enumerate(levels)]
    faces = [np.zeros((n + 1 if n else 0, len(levels[n])), dtype=np.int64) for n in range(N + 1)]
    for n in range(1, N + 1):
        low = index[n - 1]
        tab = faces[n]
        for k, lab in enumerate(levels[n]):
            for i in range(n + 1):
                tab[i, k] = low[face(n, i, lab)]
    degens = []
    for n in range(N):
        high = index[n + 1]
        tab = np.zeros((n + 1, len(levels[n])), dtype=np.int64)
        for k, lab in enumerate(levels[n]):
            for i in range(n + 1):
                tab[i, k] = high[degen(n, i, lab)]
        degens.append(tab)
    return TruncSSet(N, nbase, base_of, faces, degens,
                     [list(lv) for lv in levels] if keep_labels else None)


def relabel(X: TruncSSet, new_labels: Sequence[Sequence[Hashable]], sort: bool = True) -> TruncSSet:
    """Same simplicial set with new labels, reindexed in sorted label order."""
    perms = []
    labels = []
    for n in range(X.trunc + 1):
        lv = list(new_labels[n])
        order = sorted(range(len(lv)), key=lambda k: lv[k]) if sort else list(range(len(lv)))
        perms.append(np.array(order, dtype=np.int64))
        labels.append([lv[k] for k in order])
    return permute(X, perms, labels)


def permute(X: TruncSSet, perms, labels=None) -> TruncSSet:
    """Reindex: new simplex k of degree n is old simplex perms[n][k]."""
    inv = []
    for p in perms:
        q = np.empty_like(p)
        q[p] = np.arange(len(p))
        inv.append(q)
    base_of = [X.base_of[n][perms[n]] for n in range(X.trunc + 1)]
    faces = [np.zeros((0, len(perms[0])), dtype=np.int64)]
    for n in range(1, X.trunc + 1):
        faces.append(inv[n - 1][X.faces[n][:, perms[n]]])
    degens = [inv[n + 1][X.degens[n][:, perms[n]]] for n in range(X.trunc)]
    return TruncSSet(X.trunc, X.nbase, base_of, faces, degens, labels)


# ---------------------------------------------------------------- validation


def _identity_checks(X: TruncSSet):
    """Yield (name, degree, lhs_outer, lhs_inner, rhs_outer, rhs_inner).

    Each identity is phrased as outer1[inner1[x]] == outer2[inner2[x]] over
    all x of the stated degree, so one kernel checks them all.
    """
    F, S, N = X.faces, X.degens, X.trunc
    for n in range(2, N + 1):
        for j in range(1, n + 1):
            for i in range(j):
                yield (f"d_{i} d_{j} = d_{j - 1} d_{i}", n, F[n - 1][i], F[n][j], F[n - 1][j - 1], F[n][i])
    for n in range(0, N):
        for j in range(n + 1):
            # d_j s_j = id = d_{j+1} s_j
            ident = np.arange(X.count(n), dtype=np.int64)
            yield (f"d_{j} s_{j} = id", n, F[n + 1][j], S[n][j], ident, ident)
            yield (f"d_{j + 1} s_{j} = id", n, F[n + 1][j + 1], S[n][j], ident, ident)
            for i in range(n + 2):
                if i < j:
                    yield (f"d_{i} s_{j} = s_{j - 1} d_{i}", n, F[n + 1][i], S[n][j], S[n - 1][j - 1], F[n][i])
                elif i > j + 1:
                    yield (f"d_{i} s_{j} = s_{j} d_{i - 1}", n, F[n + 1][i], S[n][j], S[n - 1][j], F[n][i - 1])
    for n in range(0, N - 1):
        for j in range(n + 1):
            for i in range(j + 1):
                yield (f"s_{i} s_{j} = s_{j + 1} s_{i}", n, S[n + 1][i], S[n][j], S[n + 1][j + 1], S[n][i])


def validate_sset(X: TruncSSet) -> ValidationReport:
    """Every violated simplicial identity, with a witnessing simplex index."""
    rep = ValidationReport()
    counts = X.counts
    if X.nbase < 1:
        rep.add("empty base", None, None)
    for n in range(X.trunc + 1):
        b = X.base_of[n]
        if len(b) and (b.min() < 0 or b.max() >= X.nbase):
            rep.add("base label out of range", n, int(np.argmax((b < 0) | (b >= X.nbase))))
        if n >= 1:
            f = X.faces[n]
            if f.shape != (n + 1, counts[n]):
                rep.add("face table shape", n, f.shape)
                return rep
            if f.size and (f.min() < 0 or f.max() >= counts[n - 1]):
                rep.add("face index out of range", n, None)
                return rep
        if n < X.trunc:
            s = X.degens[n]
            if s.shape != (n + 1, counts[n]):
                rep.add("degeneracy table shape", n, s.shape)
                return rep
            if s.size and (s.min() < 0 or s.max() >= counts[n + 1]):
                rep.add("degeneracy index out of range", n, None)
                return rep
    for name, n, o1, i1, o2, i2 in _identity_checks(X):
        bad = _kernels.compose_mismatch(o1, i1, o2, i2)
        if len(bad):
            rep.add(name, n, int(bad[0]))
    for n in range(1, X.trunc + 1):
        for i in range(n + 1):
            bad = np.nonzero(X.base_of[n - 1][X.faces[n][i]] != X.base_of[n])[0]
            if len(bad):
                rep.add(f"d_{i} changes base", n, int(bad[0]))
    for n in range(X.trunc):
        for i in range(n + 1):
            bad = np.nonzero(X.base_of[n + 1][X.degens[n][i]] != X.base_of[n])[0]
            if len(bad):
                rep.add(f"s_{i} changes base", n, int(bad[0]))
    return rep


def validate_smap(f: SMap) -> ValidationReport:
    rep = ValidationReport()
    X, Y = f.source, f.target
    N = f.trunc
    for n in range(N + 1):
        m = f.level_maps[n]
        if len(m) != X.count(n) or (len(m) and (m.min() < 0 or m.max() >= Y.count(n))):
            rep.add("level map out of range", n, None)
            return rep
        bad = np.nonzero(Y.base_of[n][m] != X.base_of[n])[0]
        if len(bad):
            rep.add("map changes base", n, int(bad[0]))
    for n in range(1, N + 1):
        for i in range(n + 1):
            bad = _kernels.compose_mismatch(f.level_maps[n - 1], X.faces[n][i], Y.faces[n][i], f.level_maps[n])
            if len(bad):
                rep.add(f"map does not commute with d_{i}", n, int(bad[0]))
    for n in range(N):
        for i in range(n + 1):
            bad = _kernels.compose_mismatch(f.level_maps[n + 1], X.degens[n][i], Y.degens[n][i], f.level_maps[n])
            if len(bad):
                rep.add(f"map does not commute with s_{i}", n, int(bad[0]))
    return rep


# ------------------------------------------------------------------ examples


def monotone_maps(n: int, m: int):
    """Nondecreasing tuples of length n+1 in 0..m, lexicographic."""
    return list(itertools.combinations_with_replacement(range(m + 1), n + 1))


def standard_simplex(m: int, N: int) -> TruncSSet:
    levels = [monotone_maps(n, m) for n in range(N + 1)]
    return from_labels(
        levels,
        face=lambda n, i, a: a[:i] + a[i + 1:],
        degen=lambda n, i, a: a[: i + 1] + a[i:],
        base=lambda n, a: 0,
    )


def point(N: int, nbase: int = 1) -> TruncSSet:
    """Terminal object over a base with nbase points."""
    levels = [[(b,) for b in range(nbase)] for _ in range(N + 1)]
    return from_labels(levels, lambda n, i, a: a, lambda n, i, a: a, lambda n, a: a[0], nbase)


def circle(N: int) -> TruncSSet:
    """Simplicial circle: one vertex, one nondegenerate edge.

    Simplices of degree n are labelled by the surjection-or-constant data of
    Δ[1]/∂Δ[1]: a monotone map [n]→[1] with both end values collapsed to a
    single "base" label when it is constant.
    """
    def norm(a):
        return ("*",) if len(set(a)) == 1 else a

    levels = []
    for n in range(N + 1):
        lv = [("*",)] + [a for a in monotone_maps(n, 1) if len(set(a)) == 2]
        levels.append(lv)

    def face(n, i, a):
        if a == ("*",):
            return a
        return norm(a[:i] + a[i + 1:])

    def degen(n, i, a):
        if a == ("*",):
            return a
        return a[: i + 1] + a[i:]

    return from_labels(levels, face, degen, lambda n, a: 0)


def from_vertex_sets(simplices: Sequence[Sequence[int]], N: int) -> TruncSSet:
    """Simplicial set generated by a simplicial complex (ordered vertices).

    Degree-n simplices are nondecreasing vertex tuples whose support is a face
    of one of the given simplices.
    """
    faces = set()
    for s in simplices:
        s = tuple(sorted(set(s)))
        for r in range(1, len(s) + 1):
            faces.update(itertools.combinations(s, r))
    verts = sorted({v for f in faces for v in f})
    levels = []
    for n in range(N + 1):
        lv = [a for a in itertools.combinations_with_replacement(verts, n + 1)
              if tuple(sorted(set(a))) in faces]
        levels.append(lv)
    return from_labels(levels, lambda n, i, a: a[:i] + a[i + 1:],
                       lambda n, i, a: a[: i + 1] + a[i:], lambda n, a: 0)


# ------------------------------------------------------------------ maps


def identity_map(X: TruncSSet) -> SMap:
    return SMap(X, X, [np.arange(c, dtype=np.int64) for c in X.counts])


def compose(g: SMap, f: SMap) -> SMap:
    N = min(f.trunc, g.trunc)
    return SMap(f.source, g.target, [g.level_maps[n][f.level_maps[n]] for n in range(N + 1)])


def to_point(X: TruncSSet) -> SMap:
    P = point(X.trunc, X.nbase)
    return SMap(X, P, [X.base_of[n].copy() for n in range(X.trunc + 1)])


def fiber_product(f: SMap, g: SMap):
    """Degreewise pullback X ×_Z Y with its two projections."""
    X, Y, Z = f.source, g.source, f.target
    if g.target is not Z and not g.target.same_tables(Z):
        raise ValueError("maps have different targets")
    if X.trunc != Y.trunc or f.trunc != g.trunc:
        raise TruncationError("truncation mismatch in fiber product")
    if X.nbase != Y.nbase:
        raise ValueError("base mismatch")
    N = f.trunc
    levels = []
    for n in range(N + 1):
        fy = {}
        for y in range(Y.count(n)):
            fy.setdefault(int(g.level_maps[n][y]), []).append(y)
        lv = []
        for x in range(X.count(n)):
            for y in fy.get(int(f.level_maps[n][x]), ()):
                if X.base_of[n][x] == Y.base_of[n][y]:
                    lv.append((x, y))
        levels.append(lv)
    P = from_labels(
        levels,
        face=lambda n, i, p: (X.face(n, i, p[0]), Y.face(n, i, p[1])),
        degen=lambda n, i, p: (X.degen(n, i, p[0]), Y.degen(n, i, p[1])),
        base=lambda n, p: int(X.base_of[n][p[0]]),
        nbase=X.nbase,
    )
    p1 = SMap(P, X, [np.array([p[0] for p in lv], dtype=np.int64) for lv in levels])
    p2 = SMap(P, Y, [np.array([p[1] for p in lv], dtype=np.int64) for lv in levels])
    return P, p1, p2


def product(X: TruncSSet, Y: TruncSSet):
    """Product over the base."""
    P, p1, p2 = fiber_product(to_point(X), to_point(Y))
    return P, p1, p2


# ---------------------------------------------------------- degeneracy data


def is_degenerate(X: TruncSSet, n: int, x: int):
    """(i, y) with x = s_i y for the smallest such i, or None."""
    if n == 0:
        return None
    for i in range(n):
        y = X.face(n, i, x)
        if X.degen(n - 1, i, y) == x:
            return i, y
    return None


def degenerate_mask(X: TruncSSet, n: int) -> np.ndarray:
    """Boolean mask of degenerate n-simplices (vectorized)."""
    mask = np.zeros(X.count(n), dtype=bool)
    if n == 0:
        return mask
    idx = np.arange(X.count(n))
    for i in range(n):
        mask |= X.degens[n - 1][i][X.faces[n][i]] == idx
    return mask


def nondegenerate(X: TruncSSet, n: int) -> np.ndarray:
    return np.nonzero(~degenerate_mask(X, n))[0]


def ez_decomposition(X: TruncSSet, n: int, x: int):
    """(ops, z): x = s_{i_1} ... s_{i_k} z with z nondegenerate.

    ``ops`` lists the degeneracy indices outermost first.
    """
    ops = []
    while True:
        d = is_degenerate(X, n, x)
        if d is None:
            return ops, (n, x)
        i, x = d
        ops.append(i)
        n -= 1


# ------------------------------------------------------------ enumeration


def hom_enumerate(X: TruncSSet, Y: TruncSSet, budget: int = DEFAULT_BUDGET, limit: int | None = None):
    """All simplicial maps X → Y over the base, in canonical order.

    Backtracks over the nondegenerate simplices of X by ascending degree;
    values on degenerate simplices are forced.  Candidates come from a
    dictionary keyed on (base, faces).  Raises :class:`BudgetExceeded` when
    more than ``budget`` search nodes would be visited.
    """
    N = min(X.trunc, Y.trunc)
    if X.nbase != Y.nbase:
        raise ValueError("base mismatch")
    nondeg = [nondegenerate(X, n) for n in range(N + 1)]
    # candidate index per degree
    lookup = []
    for n in range(N + 1):
        table = {}
        if n == 0:
            keys = Y.base_of[0].reshape(-1, 1)
        else:
            keys = np.vstack([Y.base_of[n][None, :], Y.faces[n]]).T
        for y, key in enumerate(map(tuple, keys.tolist())):
            table.setdefault(key, []).append(y)
        lookup.append(table)
    # degenerate simplices: (i, y) with x = s_i y, smallest i
    forced = []
    for n in range(N + 1):
        fx = []
        if n:
            for x in np.nonzero(degenerate_mask(X, n))[0]:
                i, y = is_degenerate(X, n, int(x))
                fx.append((int(x), i, y))
        forced.append(fx)

    vals = [np.full(X.count(n), -1, dtype=np.int64) for n in range(N + 1)]
    out = []
    nodes = [0]

    def fill(n):
        for x, i, y in forced[n]:
            vals[n][x] = Y.degens[n - 1][i][vals[n - 1][y]]

    def rec(n, k):
        nodes[0] += 1
        if nodes[0] > budget:
            raise BudgetExceeded(f"hom enumeration exceeded budget {budget}")
        if n > N:
            f = SMap(X, Y, [v.copy() for v in vals])
            if validate_smap(f).ok:
                out.append(f)
            return limit is not None and len(out) >= limit
        if k == len(nondeg[n]):
            if n < N:
                fill(n + 1)
            return rec(n + 1, 0)
        x = int(nondeg[n][k])
        if n == 0:
            key = (int(X.base_of[0][x]),)
        else:
            key = (int(X.base_of[n][x]),) + tuple(int(vals[n - 1][X.faces[n][i][x]]) for i in range(n + 1))
        for y in lookup[n].get(key, ()):
            vals[n][x] = y
            if rec(n, k + 1):
                return True
        vals[n][x] = -1
        return False

    rec(0, 0)
    return out


def count_maps(X: TruncSSet, Y: TruncSSet, budget: int = DEFAULT_BUDGET) -> int:
    return len(hom_enumerate(X, Y, budget))


def find_isomorphism(X: TruncSSet, Y: TruncSSet, budget: int = DEFAULT_BUDGET):
    """An isomorphism X → Y over the base, or None."""
    if X.counts != Y.counts or X.nbase != Y.nbase:
        return None
    for f in _iter_injective(X, Y, budget):
        return f
    return None


def _iter_injective(X, Y, budget):
    # isomorphisms are bijective maps; filter the enumeration
    for f in hom_enumerate(X, Y, budget):
        if all(len(np.unique(m)) == len(m) for m in f.level_maps):
            yield f


# ------------------------------------------------------------ coskeleton


def coskeleton(X: TruncSSet, n: int, N: int, budget: int = DEFAULT_BUDGET) -> TruncSSet:
    """n-coskeleton up to degree N; higher simplices are boundary tuples."""
    if n > X.trunc:
        raise TruncationError("coskeleton degree above truncation")
    if N <= n:
        return X.truncate(N)
    low = X.truncate(n)
    levels = [[("x", k) for k in range(low.count(m))] for m in range(n + 1)]
    faces_of = {}  # (degree, label) -> tuple of face labels
    base_lab = {}

    def lab_face(m, i, lab):
        if lab[0] == "x":
            return ("x", low.face(m, i, lab[1]))
        return lab[1][i]

    def lab_base(m, lab):
        if lab[0] == "x":
            return int(low.base_of[m][lab[1]])
        return base_lab[lab]

    work = [0]
    for p in range(n + 1, N + 1):
        prev = levels[p - 1]
        # previous simplices keyed by (base, d_0, ..., d_{j-1})
        by_prefix = [dict() for _ in range(p + 1)]
        for lab in prev:
            fs = [lab_face(p - 1, i, lab) for i in range(p)] if p > 1 else []
            b = lab_base(p - 1, lab)
            for j in range(1, p + 1):
                by_prefix[j].setdefault((b,) + tuple(fs[:j]), []).append(lab)
        cur = []

        def extend(tup, b):
            work[0] += 1
            if work[0] > budget:
                raise BudgetExceeded("coskeleton enumeration exceeded budget")
            j = len(tup)
            if j == p + 1:
                lab = ("c", tuple(tup))
                base_lab[lab] = b
                cur.append(lab)
                return
            if j == 0:
                for y in prev:
                    extend([y], lab_base(p - 1, y))
                return
            # d_i y_j = d_{j-1} y_i for every i < j
            want = tuple(lab_face(p - 1, j - 1, y) for y in tup) if p > 1 else ()
            for y in by_prefix[j].get((b,) + want, ()):
                extend(tup + [y], b)

        extend([], None)
        levels.append(cur)

    def face(m, i, lab):
        return lab_face(m, i, lab)

    def degen(m, i, lab):
        if m < n:
            return ("x", low.degen(m, i, lab[1]))
        # s_i of an m-simplex, as the tuple of its faces
        tup = []
        for k in range(m + 2):
            if k < i:
                tup.append(degen(m - 1, i - 1, face(m, k, lab)))
            elif k in (i, i + 1):
                tup.append(lab)
            else:
                tup.append(degen(m - 1, i, face(m, k - 1, lab)))
        return ("c", tuple(tup))

    return from_labels(levels, face, degen, lab_base, X.nbase)


# ------------------------------------------------------------ latching


@dataclass
class LatchingObject:
    degree: int
    # element (i, y) stands for s_i y, y an (n-1)-simplex
    elements: list
    class_of: np.ndarray
    classes: list  # least representative element index per class
    to_simplices: np.ndarray  # class -> n-simplex of X

    @property
    def size(self) -> int:
        return len(self.classes)


def latching(X: TruncSSet, n: int) -> LatchingObject:
    """L_nX as the coequalizer of the degeneracy overlaps."""
    if n > X.trunc:
        raise TruncationError("latching degree above truncation")
    if n == 0:
        return LatchingObject(0, [], np.zeros(0, dtype=np.int64), [], np.zeros(0, dtype=np.int64))
    c = X.count(n - 1)
    elements = [(i, y) for i in range(n) for y in range(c)]
    left, right = [], []
    if n >= 2:
        c2 = X.count(n - 2)
        for j in range(1, n):
            for i in range(j):
                # s_i s_{j-1} x = s_j s_i x
                sj1 = X.degens[n - 2][j - 1]
                si = X.degens[n - 2][i]
                left.extend((i * c + sj1).tolist())
                right.extend((j * c + si).tolist())
    cls = _kernels.union_find_classes(len(elements), left, right)
    k = int(cls.max()) + 1 if len(cls) else 0
    reps = [-1] * k
    for e, cl in enumerate(cls.tolist()):
        if reps[cl] < 0:
            reps[cl] = e
    to_simp = np.array([X.degen(n - 1, *elements[r]) for r in reps], dtype=np.int64)
    return LatchingObject(n, elements, cls, reps, to_simp)


def verify_latching_pushout(X: TruncSSet, n: int) -> bool:
    """Check L_nX → X_n, L_nX → L_n(Dec₀X) has pushout L_{n+1}X."""
    from .decalage import dec0

    if n + 1 > X.trunc:
        raise TruncationError("need degree n+1 within truncation")
    L = latching(X, n)
    D = dec0(X).sset  # last-face décalage, (Dec₀X)_m = X_{m+1}
    LD = latching(D, n) if n <= D.trunc else None
    L1 = latching(X, n + 1)
    cx = X.count(n)
    nd = LD.size if LD is not None else 0
    # pushout of LD <- L -> X_n, as classes over LD ⊔ X_n
    left, right = [], []
    for e, (i, z) in enumerate(L.elements):
        # L_nX -> L_n Dec₀X sends (i, z) to (i, s_{n-1} z)
        w = X.degen(n - 1, n - 1, z)
        left.append(int(LD.class_of[i * cx + w]))
        right.append(nd + int(L.to_simplices[L.class_of[e]]))
    po = _kernels.union_find_classes(nd + cx, left, right)
    # comparison to L_{n+1}X: (i, w) -> (i, w); y in X_n -> (n, y)
    target = np.empty(nd + cx, dtype=np.int64)
    for cl, r in enumerate(LD.classes if LD is not None else []):
        i, w = LD.elements[r]
        target[cl] = L1.class_of[i * cx + w]
    for y in range(cx):
        target[nd + y] = L1.class_of[n * cx + y]
    npo = int(po.max()) + 1 if len(po) else 0
    image = np.full(npo, -1, dtype=np.int64)
    for e in range(nd + cx):
        if image[po[e]] < 0:
            image[po[e]] = target[e]
        elif image[po[e]] != target[e]:
            return False  # not well defined
    if len(np.unique(image)) != npo or npo != L1.size:
        return False
    # maps to X_{n+1} agree
    for cl, r in enumerate(LD.classes if LD is not None else []):
        i, w = LD.elements[r]
        if X.degen(n, i, w) != L1.to_simplices[target[cl]]:
            return False
    for y in range(cx):
        if X.degen(n, n, y) != L1.to_simplices[target[nd + y]]:
            return False
    return True


# ------------------------------------------------------------ base handling


def disjoint_union(parts: Sequence[TruncSSet]) -> TruncSSet:
    """Block-diagonal union; part k's base points are shifted past part k-1's."""
    N = min(p.trunc for p in parts)
    parts = [p.truncate(N) for p in parts]
    base_off = np.cumsum([0] + [p.nbase for p in parts])
    base_of, faces, degens = [], [], []
    for n in range(N + 1):
        offs = np.cumsum([0] + [p.count(n) for p in parts])
        base_of.append(np.concatenate([p.base_of[n] + base_off[k] for k, p in enumerate(parts)]))
        if n == 0:
            faces.append(np.zeros((0, int(offs[-1])), dtype=np.int64))
        else:
            lo = np.cumsum([0] + [p.count(n - 1) for p in parts])
            faces.append(np.hstack([p.faces[n] + lo[k] for k, p in enumerate(parts)]))
        if n < N:
            hi = np.cumsum([0] + [p.count(n + 1) for p in parts])
            degens.append(np.hstack([p.degens[n] + hi[k] for k, p in enumerate(parts)]))
    labels = None
    if all(p.labels is not None for p in parts):
        labels = [[(k, lab) for k, p in enumerate(parts) for lab in p.labels[n]] for n in range(N + 1)]
    return TruncSSet(N, int(base_off[-1]), base_of, faces, degens, labels)


def restrict_to_base(X: TruncSSet, points: Sequence[int]) -> tuple[TruncSSet, list]:
    """Sub-object over the given base points, renumbered 0..len(points)-1.

    Returns the restriction and, per degree, the old indices kept.
    """
    pts = list(points)
    remap = {b: k for k, b in enumerate(pts)}
    keep = [np.nonzero(np.isin(X.base_of[n], pts))[0] for n in range(X.trunc + 1)]
    inv = []
    for n in range(X.trunc + 1):
        q = np.full(X.count(n), -1, dtype=np.int64)
        q[keep[n]] = np.arange(len(keep[n]))
        inv.append(q)
    base_of = [np.array([remap[int(b)] for b in X.base_of[n][keep[n]]], dtype=np.int64)
               for n in range(X.trunc + 1)]
    faces = [np.zeros((0, len(keep[0])), dtype=np.int64)]
    for n in range(1, X.trunc + 1):
        faces.append(inv[n - 1][X.faces[n][:, keep[n]]])
    degens = [inv[n + 1][X.degens[n][:, keep[n]]] for n in range(X.trunc)]
    labels = None if X.labels is None else [[X.labels[n][k] for k in keep[n]] for n in range(X.trunc + 1)]
    return TruncSSet(X.trunc, len(pts), base_of, faces, degens, labels), keep
