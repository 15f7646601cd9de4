"""Random valid instances, deterministic in (seed, size).

All randomness comes from ``numpy.random.default_rng`` (PCG64) seeded with
a single 64-bit integer; item ``i`` of a suite uses the child stream
``SeedSequence(seed, spawn_key=(i,))``.

Simplicial sets are built as free degeneracy closures: nondegenerate
simplices are drawn with random compatible faces, and every simplex is
stored as an Eilenberg–Zilber pair (surjection, nondegenerate simplex).
"""

from __future__ import annotations

import numpy as np

from . import bundles as bd
from . import classify as cl
from . import sgroup as sg
from . import sset as ss
from .sset import BudgetExceeded, TruncSSet

KINDS = ("tsset", "sgroup", "twist", "torsor", "gerbe")


def rng_for(seed: int, item: int | None = None):
    if item is None:
        return np.random.default_rng(np.random.SeedSequence(seed))
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(item,)))


# ------------------------------------------------------------ free degeneracy closure


def _is_surj(tau, k):
    return len(set(tau)) == k + 1


def _surjections(n, k):
    # monotone surjections [n] → [k] as value tuples
    from itertools import combinations

    out = []
    for jumps in combinations(range(1, n + 1), k):
        v, tup = 0, []
        for j in range(n + 1):
            if j in jumps:
                v += 1
            tup.append(v)
        out.append(tuple(tup))
    return out


class _Closure:
    """Simplices are (σ, (k, j)): σ a surjection [n] → [k], j a nondegenerate k-simplex."""

    def __init__(self):
        self.nd = []  # nd[k] = list of face-label tuples
        self.base = []  # base[k][j]

    def face(self, n, i, lab):
        sig, (k, j) = lab
        tau = sig[:i] + sig[i + 1:]
        if _is_surj(tau, k):
            return (tau, (k, j))
        v = next(x for x in range(k + 1) if x not in tau)
        tau2 = tuple(x if x < v else x - 1 for x in tau)
        rho, z = self.nd[k][j][v]
        return (tuple(rho[x] for x in tau2), z)

    def degen(self, n, i, lab):
        sig, y = lab
        return (sig[: i + 1] + sig[i:], y)

    def base_of(self, lab):
        k, j = lab[1]
        return self.base[k][j]

    def level(self, n):
        out = []
        for k in range(min(n, len(self.nd) - 1) + 1):
            for sig in _surjections(n, k):
                out += [(sig, (k, j)) for j in range(len(self.nd[k]))]
        return out


def _random_boundary(C: _Closure, n, rng, budget=20000):
    """Faces (x_0, ..., x_n) with d_i x_j = d_{j-1} x_i for i < j, all over one base point."""
    low = C.level(n - 1)
    order = rng.permutation(len(low))
    fcache = {}

    def f(i, x):
        key = (i, x)
        if key not in fcache:
            fcache[key] = C.face(n - 1, i, low[x])
        return fcache[key]

    work = [0]

    def rec(chosen):
        work[0] += 1
        if work[0] > budget:
            raise BudgetExceeded("random boundary search")
        j = len(chosen)
        if j == n + 1:
            return chosen
        b = C.base_of(low[chosen[0]]) if chosen else None
        for x in rng.permutation(order) if j else order:
            x = int(x)
            if b is not None and C.base_of(low[x]) != b:
                continue
            if n >= 2 and any(f(i, x) != f(j - 1, chosen[i]) for i in range(j)):
                continue
            got = rec(chosen + [x])
            if got is not None:
                return got
        return None

    got = rec([])
    return tuple(low[x] for x in got)


def random_sset(rng, N: int = 3, counts=None, nbase: int = 1) -> TruncSSet:
    """Free degeneracy closure of random nondegenerate simplices up to degree N."""
    if counts is None:
        counts = [int(rng.integers(1, 4)), int(rng.integers(0, 4)), int(rng.integers(0, 3)),
                  int(rng.integers(0, 2))]
    counts = list(counts)[: N + 1] + [0] * max(0, N + 1 - len(counts))
    C = _Closure()
    C.nd.append([()] * counts[0])
    bases = list(range(nbase)) + [int(b) for b in rng.integers(0, nbase, max(0, counts[0] - nbase))]
    C.base.append(bases[: max(counts[0], nbase)])
    C.nd[0] = [()] * len(C.base[0])
    for n in range(1, N + 1):
        C.nd.append([])
        C.base.append([])
        for _ in range(counts[n]):
            fs = _random_boundary(C, n, rng)
            C.nd[n].append(fs)
            C.base[n].append(C.base_of(fs[0]))
    levels = [C.level(n) for n in range(N + 1)]
    return ss.from_labels(levels, C.face, C.degen, lambda n, lab: C.base_of(lab), nbase)


# ------------------------------------------------------------ groups, twistings, torsors


def random_sgroup(rng, N: int = 3, nbase: int = 1) -> sg.SimpGroup:
    choice = int(rng.integers(0, 6))
    if choice == 0:
        return sg.constant_group(sg.cyclic(int(rng.integers(1, 5))), N, nbase)
    if choice == 1:
        return sg.constant_group(sg.symmetric(3), N, nbase)
    if choice in (2, 3):
        return sg.nerve_cyclic_group(2, N, nbase)
    if choice == 4:
        return sg.nerve_cyclic_group(3, min(N, 3), nbase)
    return sg.constant_group(sg.cyclic(2), N, nbase)


def random_twist(rng, size: int = 1, budget: int = 200_000) -> bd.TwistFn:
    """A random valid twisting function by randomized degreewise constraint solving."""
    N = 3
    M = random_sset(rng, N, _counts(rng, size))
    G = random_sgroup(rng, N)
    G = sg.truncate_group(G, min(G.trunc, N))
    M = M.truncate(min(N, G.trunc + 1))
    ts = bd.twist_search(M, G, budget, rng=rng, limit=1)
    if not ts:
        raise BudgetExceeded("no twisting function found")
    return ts[0]


def random_torsor(rng, size: int = 1) -> bd.Torsor:
    t = random_twist(rng, size)
    G = t.group
    N = min(t.base.trunc, G.trunc)
    M = t.base.truncate(N)
    t = bd.TwistFn(M, sg.truncate_group(G, N), t.maps[: N + 1])
    return bd.twisted_product(M, t.group, t)


def _counts(rng, size):
    hi = 1 + size
    return [int(rng.integers(1, hi + 1)), int(rng.integers(0, hi + 1)), int(rng.integers(0, hi)),
            int(rng.integers(0, max(1, size)))]


def generate(kind: str, seed: int, size: int = 1):
    """One valid instance of the given kind."""
    rng = rng_for(seed)
    if kind == "tsset":
        return random_sset(rng, 3, _counts(rng, size))
    if kind == "sgroup":
        return random_sgroup(rng, 2 + size)
    if kind == "twist":
        return random_twist(rng, size)
    if kind == "torsor":
        return random_torsor(rng, size)
    if kind == "gerbe":
        return cl.random_gerbe(rng, max_y0=min(4, 1 + size + 1), max_m=2, max_k=3)
    raise ValueError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")


def break_twisting(t: bd.TwistFn, rng, tries: int = 200) -> tuple[bd.TwistFn, tuple]:
    """Change one value of t so that some (T) identity fails at that simplex.

    The failure is established by :func:`identity_violations`, which checks
    the identities one simplex at a time and shares no code with the
    vectorized validator.  Returns the broken function and (degree, simplex).
    """
    M, G = t.base, t.group
    N = min(t.trunc, M.trunc, G.trunc + 1)
    cands = [(n, m) for n in range(1, N + 1) for m in range(M.count(n))]
    for _ in range(tries):
        n, m = cands[int(rng.integers(len(cands)))]
        b = int(M.base_of[n][m])
        others = [int(g) for g in G.members[n - 1][b] if g != t.maps[n][m]]
        if not others:
            continue
        maps = [a.copy() for a in t.maps]
        maps[n][m] = others[int(rng.integers(len(others)))]
        u = bd.TwistFn(M, G, maps)
        if identity_violations(u):
            return u, (n, m)
    raise BudgetExceeded("could not break the twisting function (group too small?)")


def identity_violations(t: bd.TwistFn) -> list:
    """Per-simplex check of the (T) identities; returns (identity, degree, simplex) triples."""
    M, G = t.base, t.group
    X = G.sset
    N = min(t.trunc, M.trunc, G.trunc + 1)
    out = []
    for n in range(1, N + 1):
        for m in range(M.count(n)):
            v = int(t.maps[n][m])
            if n >= 2:
                a = int(t.maps[n - 1][M.face(n, 1, m)])
                c = int(t.maps[n - 1][M.face(n, 0, m)])
                if X.face(n - 1, 0, v) != int(G.mul(n - 2, a, G.inv(n - 2, c))):
                    out.append(("d0", n, m))
                for i in range(1, n):
                    if X.face(n - 1, i, v) != int(t.maps[n - 1][M.face(n, i + 1, m)]):
                        out.append((f"d{i}", n, m))
            if n < N:
                for i in range(n):
                    if X.degen(n - 1, i, v) != int(t.maps[n + 1][M.degen(n, i + 1, m)]):
                        out.append((f"s{i}", n, m))
        if n <= N:
            for m in range(M.count(n - 1)):
                if int(t.maps[n][M.degen(n - 1, 0, m)]) != G.unit(n - 1, int(M.base_of[n - 1][m])):
                    out.append(("unit", n - 1, m))
    return out
