"""Hot loops with a numba path and a plain numpy path.

Set ``ARTIFACT_DISABLE_NUMBA=1`` to force the numpy path (also used when
numba is not importable).  Both paths must return identical results; the
benchmark script in ``benchmarks/`` compares them.
"""

import os

import numpy as np

_DISABLED = os.environ.get("ARTIFACT_DISABLE_NUMBA", "") not in ("", "0")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    HAVE_NUMBA = False

# int64 SNF gives up once an entry passes this bound
SNF_LIMIT = 1 << 31


def backend():
    return "numba" if HAVE_NUMBA else "numpy"


# ---------------------------------------------------------------- numpy path


def _compose_mismatch_np(outer1, inner1, outer2, inner2):
    return np.nonzero(outer1[inner1] != outer2[inner2])[0]


def _uf_classes_np(n, left, right):
    parent = np.arange(n, dtype=np.int64)

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for a, b in zip(left.tolist(), right.tolist()):
        ra, rb = find(a), find(b)
        if ra != rb:
            # least index wins, so roots are canonical
            if ra < rb:
                parent[rb] = ra
            else:
                parent[ra] = rb
    roots = np.array([find(i) for i in range(n)], dtype=np.int64)
    return _relabel(roots)


def _relabel(roots):
    # roots are least members, so first-occurrence order = order of least index
    _, first, inv = np.unique(roots, return_index=True, return_inverse=True)
    order = np.argsort(first, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))
    return rank[inv].astype(np.int64)


def _snf_diag_np(a):
    """Invariant factors with exact Python ints (mirrors the numba loop)."""
    a = [[int(v) for v in row] for row in np.asarray(a).tolist()]
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                v = abs(a[i][j])
                if v and (piv is None or v < piv[2]):
                    piv = (i, j, v)
        if piv is None:
            break
        bi, bj, _ = piv
        a[t], a[bi] = a[bi], a[t]
        for row in a:
            row[t], row[bj] = row[bj], row[t]
        while True:
            p = a[t][t]
            done = True
            for r in range(t + 1, m):
                if a[r][t]:
                    q = a[r][t] // p
                    rt, rr = a[t], a[r]
                    for c in range(t, n):
                        rr[c] -= q * rt[c]
                    if rr[t]:
                        done = False
            for c in range(t + 1, n):
                if a[t][c]:
                    q = a[t][c] // p
                    for r in range(t, m):
                        a[r][c] -= q * a[r][t]
                    if a[t][c]:
                        done = False
            if not done:
                piv = None
                for r in range(t, m):
                    v = abs(a[r][t])
                    if v and (piv is None or v < piv[2]):
                        piv = (r, t, v)
                for c in range(t, n):
                    v = abs(a[t][c])
                    if v and (piv is None or v < piv[2]):
                        piv = (t, c, v)
                if piv[0] != t:
                    a[t], a[piv[0]] = a[piv[0]], a[t]
                elif piv[1] != t:
                    for row in a:
                        row[t], row[piv[1]] = row[piv[1]], row[t]
                continue
            bad = next((r for r in range(t + 1, m)
                        if any(a[r][c] % p for c in range(t + 1, n))), None)
            if bad is not None:
                a[t] = [x + y for x, y in zip(a[t], a[bad])]
                continue
            break
        diag.append(abs(a[t][t]))
        t += 1
    return diag


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:

    @njit(cache=True)
    def _compose_mismatch_nb(outer1, inner1, outer2, inner2):
        out = np.empty(inner1.shape[0], dtype=np.int64)
        k = 0
        for x in range(inner1.shape[0]):
            if outer1[inner1[x]] != outer2[inner2[x]]:
                out[k] = x
                k += 1
        return out[:k]

    @njit(cache=True)
    def _find(parent, x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            nxt = parent[x]
            parent[x] = root
            x = nxt
        return root

    @njit(cache=True)
    def _uf_roots_nb(n, left, right):
        parent = np.arange(n)
        for k in range(left.shape[0]):
            ra = _find(parent, left[k])
            rb = _find(parent, right[k])
            if ra < rb:
                parent[rb] = ra
            elif rb < ra:
                parent[ra] = rb
        roots = np.empty(n, dtype=np.int64)
        for i in range(n):
            roots[i] = _find(parent, i)
        return roots

    @njit(cache=True)
    def _snf_diag_nb(a, limit):
        m, n = a.shape
        diag = np.zeros(min(m, n), dtype=np.int64)
        t = 0
        while t < min(m, n):
            # pivot: smallest nonzero magnitude
            bi, bj, bv = -1, -1, 0
            for i in range(t, m):
                for j in range(t, n):
                    v = abs(a[i, j])
                    if v != 0 and (bi < 0 or v < bv):
                        bi, bj, bv = i, j, v
            if bi < 0:
                break
            for j in range(n):
                a[t, j], a[bi, j] = a[bi, j], a[t, j]
            for i in range(m):
                a[i, t], a[i, bj] = a[i, bj], a[i, t]
            while True:
                p = a[t, t]
                done = True
                for r in range(t + 1, m):
                    if a[r, t] != 0:
                        q = a[r, t] // p
                        for c in range(t, n):
                            a[r, c] -= q * a[t, c]
                            if abs(a[r, c]) > limit:
                                return diag, -1
                        if a[r, t] != 0:
                            done = False
                for c in range(t + 1, n):
                    if a[t, c] != 0:
                        q = a[t, c] // p
                        for r in range(t, m):
                            a[r, c] -= q * a[r, t]
                            if abs(a[r, c]) > limit:
                                return diag, -1
                        if a[t, c] != 0:
                            done = False
                if not done:
                    bi, bj, bv = -1, -1, 0
                    for r in range(t, m):
                        v = abs(a[r, t])
                        if v != 0 and (bi < 0 or v < bv):
                            bi, bj, bv = r, t, v
                    for c in range(t, n):
                        v = abs(a[t, c])
                        if v != 0 and (bi < 0 or v < bv):
                            bi, bj, bv = t, c, v
                    if bi != t:
                        for c in range(n):
                            a[t, c], a[bi, c] = a[bi, c], a[t, c]
                    elif bj != t:
                        for r in range(m):
                            a[r, t], a[r, bj] = a[r, bj], a[r, t]
                    continue
                bad = -1
                for r in range(t + 1, m):
                    for c in range(t + 1, n):
                        if a[r, c] % p != 0:
                            bad = r
                            break
                    if bad >= 0:
                        break
                if bad >= 0:
                    for c in range(n):
                        a[t, c] += a[bad, c]
                        if abs(a[t, c]) > limit:
                            return diag, -1
                    continue
                break
            diag[t] = abs(a[t, t])
            t += 1
        return diag[:t], t


# ---------------------------------------------------------------- dispatch


def compose_mismatch(outer1, inner1, outer2, inner2):
    """Indices x where outer1[inner1[x]] != outer2[inner2[x]]."""
    if HAVE_NUMBA and len(inner1):
        return _compose_mismatch_nb(
            np.ascontiguousarray(outer1, dtype=np.int64),
            np.ascontiguousarray(inner1, dtype=np.int64),
            np.ascontiguousarray(outer2, dtype=np.int64),
            np.ascontiguousarray(inner2, dtype=np.int64),
        )
    return _compose_mismatch_np(outer1, inner1, outer2, inner2)


def union_find_classes(n, left, right):
    """Class id per element; classes numbered by their least member."""
    left = np.asarray(left, dtype=np.int64)
    right = np.asarray(right, dtype=np.int64)
    if HAVE_NUMBA:
        return _relabel(_uf_roots_nb(n, left, right))
    return _uf_classes_np(n, left, right)


def snf_diagonal(matrix):
    """Nonzero invariant factors of an integer matrix.

    The numba path works in int64 and bails out when an entry would exceed
    ``SNF_LIMIT``; the caller then gets the exact object-dtype result.
    """
    a = np.asarray(matrix)
    if a.size == 0:
        return []
    if HAVE_NUMBA and a.dtype != object and np.abs(a).max() <= SNF_LIMIT:
        diag, status = _snf_diag_nb(a.astype(np.int64).copy(), SNF_LIMIT)
        if status >= 0:
            return [int(v) for v in diag]
    return _snf_diag_np(a)
