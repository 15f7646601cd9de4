"""Finite groups, truncated simplicial groups over a base, and their nerves."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import sset as ss
from .sset import TruncSSet, ValidationReport

# beyond this many products a check switches to generator form or sampling
CHECK_BUDGET = 4_000_000
# fibers up to this size get a cached dense product table for scalar products
DENSE_LIMIT = 1024


class FinGroup:
    """Group given by its full multiplication table."""

    def __init__(self, table, identity: int = 0, name: str = ""):
        self.table = np.asarray(table, dtype=np.int64)
        self.identity = int(identity)
        self.name = name
        n = self.order
        inv = np.full(n, -1, dtype=np.int64)
        rows, cols = np.nonzero(self.table == self.identity)
        inv[rows] = cols
        self.inverse = inv

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def mul(self, a, b):
        return self.table[a, b]

    def inv(self, a):
        return self.inverse[a]

    def generators(self) -> list[int]:
        if not hasattr(self, "_gens"):
            self._gens = _greedy_generators(self)
        return list(self._gens)

    def components(self):
        return [self]


class ProductGroup:
    """Direct product; element index is the mixed-radix code, first factor most significant.

    Nested products are flattened into their leaf groups for arithmetic.
    """

    def __init__(self, factors, name: str = ""):
        self.factors = list(factors)
        self.name = name
        self.leaves = []
        for f in self.factors:
            self.leaves.extend(f.leaves if isinstance(f, ProductGroup) else [f])
        self.sizes = np.array([f.order for f in self.factors], dtype=np.int64)
        self.strides = _strides(self.sizes)
        self.leaf_sizes = np.array([f.order for f in self.leaves], dtype=np.int64)
        self.leaf_strides = _strides(self.leaf_sizes)
        self.identity = int(self.encode([f.identity for f in self.factors]))

    @property
    def order(self) -> int:
        return int(np.prod(self.sizes)) if len(self.sizes) else 1

    def encode(self, comps):
        comps = [np.asarray(c, dtype=np.int64) for c in comps]
        out = np.zeros_like(comps[0]) if comps else np.int64(0)
        for c, s in zip(comps, self.strides):
            out = out + c * s
        return out

    def decode(self, a):
        a = np.asarray(a, dtype=np.int64)
        return [(a // s) % z for s, z in zip(self.strides, self.sizes)]

    def _leafwise(self, fn, *args):
        if not self.leaves:
            return np.zeros_like(np.asarray(args[0]))
        args = [np.asarray(a, dtype=np.int64) for a in args]
        out = np.zeros(np.broadcast(*args).shape, dtype=np.int64)
        for f, s, z in zip(self.leaves, self.leaf_strides, self.leaf_sizes):
            out += fn(f, *[(a // s) % z for a in args]) * s
        return out

    def mul(self, a, b):
        return self._leafwise(lambda f, x, y: f.mul(x, y), a, b)

    def inv(self, a):
        return self._leafwise(lambda f, x: f.inv(x), a)

    def generators(self) -> list[int]:
        gens = []
        ids = [f.identity for f in self.factors]
        for k, f in enumerate(self.factors):
            for g in f.generators():
                comps = list(ids)
                comps[k] = g
                gens.append(int(self.encode(comps)))
        return gens

    def components(self):
        return self.factors


def _strides(sizes):
    strides = np.ones(len(sizes), dtype=np.int64)
    for k in range(len(sizes) - 2, -1, -1):
        strides[k] = strides[k + 1] * sizes[k + 1]
    return strides


def _greedy_generators(G) -> list[int]:
    """Small generating set: add the least element outside the span so far."""
    n = G.order
    span = np.zeros(n, dtype=bool)
    span[G.identity] = True
    gens = []
    for g in range(n):
        if span[g]:
            continue
        gens.append(g)
        # close under right multiplication by generators
        frontier = np.nonzero(span)[0]
        while len(frontier):
            new = []
            for s in gens:
                prod = np.asarray(G.mul(frontier, np.full(len(frontier), s)))
                fresh = prod[~span[prod]]
                span[fresh] = True
                new.append(fresh)
            frontier = np.unique(np.concatenate(new)) if new else frontier[:0]
    return gens


def cyclic(k: int) -> FinGroup:
    a = np.arange(k)
    return FinGroup((a[:, None] + a[None, :]) % k, 0, f"C{k}")


def trivial_group() -> FinGroup:
    return cyclic(1)


def symmetric(n: int) -> FinGroup:
    """Symmetric group; elements are permutations in lexicographic order.

    The product is composition (a*b)(i) = a(b(i)).
    """
    perms = list(itertools.permutations(range(n)))
    idx = {p: k for k, p in enumerate(perms)}
    table = [[idx[tuple(a[b[i]] for i in range(n))] for b in perms] for a in perms]
    return FinGroup(table, idx[tuple(range(n))], f"S{n}")


def validate_group(G, budget: int = CHECK_BUDGET) -> ValidationReport:
    """Identity, inverse and associativity laws, with witnesses.

    Associativity is checked on all triples when affordable, otherwise in the
    generator form (ab)s = a(bs) for s in a generating set, which implies it.
    Product groups beyond that are checked factorwise.
    """
    rep = ValidationReport()
    n = G.order
    a = np.arange(n)
    e = G.identity
    if isinstance(G, FinGroup):
        t = G.table
        if t.shape != (n, n) or t.min() < 0 or t.max() >= n:
            rep.add("table entries out of range", None, None)
            return rep
        for r in range(n):
            if len(np.unique(t[r])) != n:
                rep.add("row is not a permutation", None, r)
                return rep
    if not np.array_equal(G.mul(np.full(n, e), a), a) or not np.array_equal(G.mul(a, np.full(n, e)), a):
        rep.add("identity law", None, e)
    inv = np.asarray(G.inv(a))
    if (inv < 0).any() or not (np.asarray(G.mul(a, inv)) == e).all():
        rep.add("inverse law", None, int(np.argmax(np.asarray(G.mul(a, inv)) != e)))
    if n ** 3 <= budget:
        x, y, z = (m.ravel() for m in np.meshgrid(a, a, a, indexing="ij"))
        bad = np.nonzero(G.mul(G.mul(x, y), z) != G.mul(x, G.mul(y, z)))[0]
        if len(bad):
            k = bad[0]
            rep.add("associativity", None, (int(x[k]), int(y[k]), int(z[k])))
    elif n * n * max(1, len(G.generators())) <= budget:
        x, y = (m.ravel() for m in np.meshgrid(a, a, indexing="ij"))
        for s in G.generators():
            z = np.full(len(x), s)
            bad = np.nonzero(G.mul(G.mul(x, y), z) != G.mul(x, G.mul(y, z)))[0]
            if len(bad):
                k = bad[0]
                rep.add("associativity", None, (int(x[k]), int(y[k]), s))
                break
    elif isinstance(G, ProductGroup):
        rep.notes.append(f"order {n}: associativity checked on the factors")
        for f in G.factors:
            rep.extend(validate_group(f, budget), "factor: ")
    else:
        rep.notes.append(f"order {n}: associativity not checked (budget)")
    return rep


@dataclass(eq=False)
class SimpGroup:
    """Simplicial group over a base.

    ``groups[n][b]`` is the group on the fiber over base point b in degree n;
    ``members[n][b][a]`` is the simplex index of local element a.
    """

    sset: TruncSSet
    groups: list
    members: list
    local: list

    @property
    def trunc(self) -> int:
        return self.sset.trunc

    def group_of(self, n, x):
        return self.groups[n][int(self.sset.base_of[n][x])]

    def unit(self, n: int, b: int) -> int:
        g = self.groups[n][b]
        return int(self.members[n][b][g.identity])

    def units(self, n: int) -> np.ndarray:
        return np.array([self.unit(n, b) for b in range(self.sset.nbase)], dtype=np.int64)

    def dense_table(self, n: int):
        """Full product table on degree-n simplices (−1 across base points), cached."""
        cache = self.__dict__.setdefault("_dense", {})
        if n not in cache:
            c = self.sset.count(n)
            tab = np.full((c, c), -1, dtype=np.int64)
            for b in range(self.sset.nbase):
                mem = self.members[n][b]
                g = self.groups[n][b]
                a = np.arange(g.order)
                tab[np.ix_(mem, mem)] = mem[g.mul(a[:, None], a[None, :])]
            cache[n] = tab
        return cache[n]

    def mul(self, n: int, x, y):
        """Product of simplices x, y (arrays allowed) lying over equal base points."""
        if type(x) is int and type(y) is int and self.sset.count(n) <= DENSE_LIMIT:
            v = int(self.dense_table(n)[x, y])
            if v < 0:
                raise ValueError("product of simplices over different base points")
            return v
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        bx = self.sset.base_of[n][x]
        out = np.empty(np.broadcast(x, y).shape, dtype=np.int64)
        xb, yb, bb = np.broadcast_arrays(x, y, bx)
        for b in np.unique(bb):
            m = bb == b
            g = self.groups[n][int(b)]
            out[m] = self.members[n][int(b)][g.mul(self.local[n][xb[m]], self.local[n][yb[m]])]
        if (self.sset.base_of[n][yb] != bb).any():
            raise ValueError("product of simplices over different base points")
        return out if out.shape else int(out)

    def inv(self, n: int, x):
        x = np.asarray(x, dtype=np.int64)
        bx = np.broadcast_to(self.sset.base_of[n][x], x.shape)
        out = np.empty(x.shape, dtype=np.int64)
        for b in np.unique(bx):
            m = bx == b
            g = self.groups[n][int(b)]
            out[m] = self.members[n][int(b)][g.inv(self.local[n][x[m]])]
        return out if out.shape else int(out)


def make_simp_group(X: TruncSSet, groups, local_codes) -> SimpGroup:
    """Attach groups to X.  ``local_codes[n][x]`` is simplex x's group element."""
    members, local = [], []
    for n in range(X.trunc + 1):
        loc = np.asarray(local_codes[n], dtype=np.int64)
        mem = []
        for b in range(X.nbase):
            m = np.full(groups[n][b].order, -1, dtype=np.int64)
            sel = np.nonzero(X.base_of[n] == b)[0]
            m[loc[sel]] = sel
            mem.append(m)
        members.append(mem)
        local.append(loc)
    return SimpGroup(X, groups, members, local)


def validate_sgroup(G: SimpGroup, budget: int = CHECK_BUDGET) -> ValidationReport:
    rep = validate_sset(G.sset)
    if not rep.ok:
        return rep
    X = G.sset
    seen = {}
    for n in range(X.trunc + 1):
        for b in range(X.nbase):
            grp = G.groups[n][b]
            sel = np.nonzero(X.base_of[n] == b)[0]
            mem = G.members[n][b]
            if len(sel) != grp.order or (mem < 0).any() or not np.array_equal(np.sort(mem), sel):
                rep.add("fiber is not in bijection with its group", n, b)
                continue
            if not np.array_equal(G.local[n][mem], np.arange(grp.order)):
                rep.add("local index table inconsistent", n, b)
            if id(grp) not in seen:
                seen[id(grp)] = validate_group(grp, budget)
            sub = seen[id(grp)]
            for e in sub.entries:
                rep.add(f"group law: {e['violation']}", n, (b, e["witness"]))
            rep.notes.extend(f"degree {n} base {b}: {t}" for t in sub.notes)
    if not rep.ok:
        return rep
    # structure maps are homomorphisms: f(e) = e and f(a s) = f(a) f(s) for generators s
    for n in range(X.trunc + 1):
        for b in range(X.nbase):
            grp = G.groups[n][b]
            elems = G.members[n][b]
            gens = [int(elems[s]) for s in grp.generators()]
            maps = []
            if n >= 1:
                maps += [(f"d_{i}", n - 1, X.faces[n][i]) for i in range(n + 1)]
            if n < X.trunc:
                maps += [(f"s_{i}", n + 1, X.degens[n][i]) for i in range(n + 1)]
            for name, m, f in maps:
                if f[G.unit(n, b)] != G.unit(m, b):
                    rep.add(f"{name} does not preserve the unit", n, b)
                for s in gens:
                    lhs = f[G.mul(n, elems, np.full(len(elems), s))]
                    rhs = G.mul(m, f[elems], np.full(len(elems), f[s]))
                    bad = np.nonzero(lhs != rhs)[0]
                    if len(bad):
                        rep.add(f"{name} is not a homomorphism", n, (int(elems[bad[0]]), s))
                        break
    return rep


def validate_sset(X):
    return ss.validate_sset(X)


# ---------------------------------------------------------------- examples


def constant_group(H, N: int, nbase: int = 1) -> SimpGroup:
    """H in every degree with identity structure maps; H may be a list per base point."""
    Hs = list(H) if isinstance(H, (list, tuple)) else [H] * nbase
    levels = [[(b, h) for b in range(nbase) for h in range(Hs[b].order)] for _ in range(N + 1)]
    X = ss.from_labels(levels, lambda n, i, a: a, lambda n, i, a: a, lambda n, a: a[0], nbase)
    groups = [list(Hs) for _ in range(N + 1)]
    codes = [[lab[1] for lab in levels[n]] for n in range(N + 1)]
    return make_simp_group(X, groups, codes)


def nerve_face(tup, i, mul):
    """Face of a nerve simplex (g_1, ..., g_p) of a group."""
    p = len(tup)
    if i == 0:
        return tup[1:]
    if i == p:
        return tup[:-1]
    return tup[: i - 1] + (mul(tup[i - 1], tup[i]),) + tup[i + 1:]


def nerve_degen(tup, i, unit):
    return tup[:i] + (unit,) + tup[i:]


def nerve_cyclic_group(k: int, N: int, nbase: int = 1) -> SimpGroup:
    """Nerve of C_k as a simplicial abelian group: degree n is C_k^n."""
    C = cyclic(k)

    def add(a, b):
        return (a + b) % k

    levels = [[(b,) + t for b in range(nbase) for t in itertools.product(range(k), repeat=n)]
              for n in range(N + 1)]
    X = ss.from_labels(
        levels,
        face=lambda n, i, a: (a[0],) + nerve_face(a[1:], i, add),
        degen=lambda n, i, a: (a[0],) + nerve_degen(a[1:], i, 0),
        base=lambda n, a: a[0],
        nbase=nbase,
    )
    groups, codes = [], []
    for n in range(N + 1):
        grp = ProductGroup([C] * n, f"C{k}^{n}")
        groups.append([grp] * nbase)
        codes.append([int(grp.encode(list(lab[1:]))) if n else 0 for lab in levels[n]])
    return make_simp_group(X, groups, codes)


# ---------------------------------------------------------------- actions


@dataclass(eq=False)
class GroupAction:
    """Right action P ×_B G → P; ``act[n][x, g]`` is x·g (−1 off the fiber)."""

    P: TruncSSet
    G: SimpGroup
    act: list


def regular_action(G: SimpGroup) -> GroupAction:
    """G acting on itself by right multiplication."""
    X = G.sset
    act = []
    for n in range(X.trunc + 1):
        c = X.count(n)
        tab = np.full((c, c), -1, dtype=np.int64)
        for b in range(X.nbase):
            mem = G.members[n][b]
            xs, gs = np.meshgrid(mem, mem, indexing="ij")
            tab[xs, gs] = G.mul(n, xs, gs)
        act.append(tab)
    return GroupAction(X, G, act)


def validate_action(A: GroupAction) -> ValidationReport:
    """Unit, associativity and compatibility with structure maps.

    Both associativity and compatibility are checked against a generating
    set of each fiber group; given associativity that covers every element.
    """
    rep = ValidationReport()
    P, G = A.P, A.G
    N = min(P.trunc, G.trunc)
    for n in range(N + 1):
        tab = A.act[n]
        for b in range(P.nbase):
            xs = np.nonzero(P.base_of[n] == b)[0]
            elems = G.members[n][b]
            if not len(xs):
                continue
            vals = tab[np.ix_(xs, elems)]
            if (vals < 0).any() or (P.base_of[n][vals] != b).any():
                rep.add("action leaves the fiber", n, int(xs[0]))
                continue
            if not np.array_equal(tab[xs, G.unit(n, b)], xs):
                rep.add("unit does not act trivially", n, int(xs[0]))
            for s in [int(elems[g]) for g in G.groups[n][b].generators()]:
                gs = G.mul(n, elems, np.full(len(elems), s))
                lhs = tab[vals, s]
                rhs = tab[xs[:, None], gs[None, :]]
                bad = np.argwhere(lhs != rhs)
                if len(bad):
                    i, j = bad[0]
                    rep.add("action is not associative", n, (int(xs[i]), int(elems[j]), s))
                    break
        # d_i(x·g) = d_i x · d_i g and s_i likewise
        ops = []
        if n >= 1:
            ops += [(f"d_{i}", n - 1, P.faces[n][i], G.sset.faces[n][i]) for i in range(n + 1)]
        if n < N:
            ops += [(f"s_{i}", n + 1, P.degens[n][i], G.sset.degens[n][i]) for i in range(n + 1)]
        for b in range(P.nbase):
            xs = np.nonzero(P.base_of[n] == b)[0]
            if not len(xs):
                continue
            gens = [int(G.members[n][b][g]) for g in G.groups[n][b].generators()]
            for name, m, fp, fg in ops:
                for s in gens:
                    lhs = fp[tab[xs, s]]
                    rhs = A.act[m][fp[xs], fg[s]]
                    bad = np.nonzero(lhs != rhs)[0]
                    if len(bad):
                        rep.add(f"action does not commute with {name}", n, (int(xs[bad[0]]), s))
                        break
    return rep


# ---------------------------------------------------------------- nerves


def nerve_NG(G: SimpGroup, Np: int | None = None, Ntot: int | None = None):
    """Bisimplicial nerve: (p, q) ↦ G_q^p, horizontal = nerve of G_q, vertical from G.

    Cells are built for p ≤ Np and p + q ≤ Ntot (default: trunc).  Ntot may
    exceed the truncation of G by one, since the p = 0 column is just the
    base; the total complex up to degree N needs Ntot = N.
    """
    from .decalage import bis_from_labels

    X = G.sset
    Ntot = X.trunc if Ntot is None else Ntot
    if Ntot > X.trunc + 1:
        raise ss.TruncationError("nerve needs the group up to degree Ntot - 1")
    Np = Ntot if Np is None else Np
    cells = {}
    for p in range(Np + 1):
        for q in range(Ntot + 1):
            if p + q > Ntot:
                continue
            if p == 0:
                cells[(p, q)] = [(b,) for b in range(X.nbase)]
                continue
            lv = []
            for b in range(X.nbase):
                mem = G.members[q][b].tolist()
                lv.extend((b,) + t for t in itertools.product(mem, repeat=p))
            cells[(p, q)] = lv

    def hface(p, q, i, lab):
        return (lab[0],) + nerve_face(lab[1:], i, lambda a, b: G.mul(q, a, b))

    def hdegen(p, q, i, lab):
        return (lab[0],) + nerve_degen(lab[1:], i, G.unit(q, lab[0]))

    def vface(p, q, j, lab):
        return (lab[0],) + tuple(X.face(q, j, g) for g in lab[1:])

    def vdegen(p, q, j, lab):
        return (lab[0],) + tuple(X.degen(q, j, g) for g in lab[1:])

    return bis_from_labels(cells, hface, hdegen, vface, vdegen, lambda p, q, lab: lab[0], X.nbase)


def nerve_action_groupoid(A: GroupAction, Np: int | None = None, Ntot: int | None = None):
    """Nerve of P//G: (p, q) ↦ P_q × G_q^p.

    A simplex (x; g_1, ..., g_p) has d_0 = (x·g_1; g_2, ...), inner faces
    multiplying neighbours, and d_p dropping g_p.  Forgetting x is a map to
    the nerve of G.
    """
    from .decalage import bis_from_labels

    P, G = A.P, A.G
    rep = validate_action(A)
    if not rep.ok:
        raise ValueError("invalid action: " + rep.summary())
    Nq = min(P.trunc, G.trunc)
    Np = Nq if Np is None else Np
    Ntot = max(Np, Nq) if Ntot is None else Ntot
    cells = {}
    for p in range(Np + 1):
        for q in range(Nq + 1):
            if p + q > Ntot:
                continue
            lv = []
            for x in range(P.count(q)):
                mem = G.members[q][int(P.base_of[q][x])].tolist()
                lv.extend((x,) + t for t in itertools.product(mem, repeat=p))
            cells[(p, q)] = lv

    def hface(p, q, i, lab):
        x, gs = lab[0], lab[1:]
        if i == 0:
            return (int(A.act[q][x, gs[0]]),) + gs[1:]
        return (x,) + nerve_face(gs, i, lambda a, b: G.mul(q, a, b))

    def hdegen(p, q, i, lab):
        return (lab[0],) + nerve_degen(lab[1:], i, G.unit(q, int(P.base_of[q][lab[0]])))

    def vface(p, q, j, lab):
        return (P.face(q, j, lab[0]),) + tuple(G.sset.face(q, j, g) for g in lab[1:])

    def vdegen(p, q, j, lab):
        return (P.degen(q, j, lab[0]),) + tuple(G.sset.degen(q, j, g) for g in lab[1:])

    return bis_from_labels(cells, hface, hdegen, vface, vdegen,
                           lambda p, q, lab: int(P.base_of[q][lab[0]]), P.nbase)


def disjoint_union_groups(parts) -> SimpGroup:
    """Block-diagonal union of simplicial groups over disjoint bases."""
    X = ss.disjoint_union([g.sset for g in parts])
    N = X.trunc
    groups, codes = [], []
    for n in range(N + 1):
        groups.append([grp for g in parts for grp in g.groups[n]])
        codes.append(np.concatenate([g.local[n] for g in parts]))
    return make_simp_group(X, groups, codes)


def truncate_group(G: SimpGroup, N: int) -> SimpGroup:
    if N > G.trunc:
        raise ss.TruncationError(f"cannot raise truncation {G.trunc} to {N}")
    return SimpGroup(G.sset.truncate(N), G.groups[: N + 1], G.members[: N + 1], G.local[: N + 1])


def restrict_group(G: SimpGroup, points) -> SimpGroup:
    X, keep = ss.restrict_to_base(G.sset, points)
    groups = [[G.groups[n][b] for b in points] for n in range(X.trunc + 1)]
    codes = [G.local[n][keep[n]] for n in range(X.trunc + 1)]
    return make_simp_group(X, groups, codes)
