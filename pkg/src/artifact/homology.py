"""Integral homology and C_k cohomology of truncated simplicial sets.

Chains are normalized (nondegenerate simplices only).  Invariant factors
come from :func:`artifact._kernels.snf_diagonal`, which uses exact integers
once entries outgrow int64.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from . import _kernels
from .sset import TruncationError, TruncSSet, degenerate_mask


class ChainError(RuntimeError):
    """∂∂ ≠ 0: the input tables are not simplicial."""


@dataclass
class ChainComplex:
    ranks: list
    boundary: list  # boundary[n] has shape (ranks[n], ranks[n-1]); boundary[0] is empty
    basis: list = field(default_factory=list, repr=False)  # simplex index of each basis element


@dataclass(frozen=True)
class AbelianGroup:
    betti: int
    torsion: tuple = ()

    def __str__(self):
        parts = [f"Z^{self.betti}" if self.betti > 1 else "Z"] if self.betti else []
        parts += [f"Z/{d}" for d in self.torsion]
        return " ⊕ ".join(parts) if parts else "0"

    @property
    def order(self):
        """Order of a finite group; None when infinite."""
        if self.betti:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def to_json(self):
        return {"betti": self.betti, "torsion": list(self.torsion)}


def abelian_group(betti: int, cyclic_orders) -> AbelianGroup:
    """Normal form of Z^betti ⊕ ⊕ Z/a (invariant factors, each dividing the next)."""
    orders = [int(a) for a in cyclic_orders if int(a) != 1]
    betti += sum(1 for a in orders if a == 0)
    orders = [a for a in orders if a > 1]
    if not orders:
        return AbelianGroup(betti, ())
    factors, _ = smith_normal_form(np.diag(np.array(orders, dtype=object)))
    return AbelianGroup(betti, tuple(d for d in factors if d > 1))


def normalized_chains(X: TruncSSet, top: int | None = None) -> ChainComplex:
    """Nondegenerate chains with ∂ = Σ (−1)^i d_i, degenerate faces dropped."""
    top = X.trunc if top is None else top
    if top > X.trunc:
        raise TruncationError("chains requested above truncation")
    basis, pos = [], []
    for n in range(top + 1):
        nd = np.nonzero(~degenerate_mask(X, n))[0]
        basis.append(nd)
        p = np.full(X.count(n), -1, dtype=np.int64)
        p[nd] = np.arange(len(nd))
        pos.append(p)
    ranks = [len(b) for b in basis]
    boundary = [np.zeros((ranks[0], 0), dtype=np.int64)]
    for n in range(1, top + 1):
        D = np.zeros((ranks[n], ranks[n - 1]), dtype=np.int64)
        rows = np.arange(ranks[n])
        for i in range(n + 1):
            col = pos[n - 1][X.faces[n][i][basis[n]]]
            keep = col >= 0
            np.add.at(D, (rows[keep], col[keep]), (-1) ** i)
        boundary.append(D)
    for n in range(2, top + 1):
        if (boundary[n] @ boundary[n - 1]).any():
            raise ChainError(f"boundary squared is nonzero in degree {n}")
    return ChainComplex(ranks, boundary, basis)


def smith_normal_form(A):
    """(invariant factors, rank) of an integer matrix."""
    A = np.asarray(A)
    if A.size == 0:
        return [], 0
    diag = _kernels.snf_diagonal(A)
    factors = sorted(abs(int(d)) for d in diag if d != 0)
    return factors, len(factors)


def _check_degree(X: TruncSSet, n: int, allow_edge: bool):
    if n < 0:
        raise ValueError("negative degree")
    if not allow_edge and n >= X.trunc - 1:
        raise TruncationError(
            f"H_{n} of a simplicial set truncated at {X.trunc} may be an artifact of the truncation; "
            "pass allow_edge=True (--allow-truncation-edge) to compute it anyway")
    if n + 1 > X.trunc:
        raise TruncationError(f"H_{n} needs chains in degree {n + 1}")


def homology_groups(X: TruncSSet, n: int, allow_edge: bool = False, C: ChainComplex | None = None) -> AbelianGroup:
    _check_degree(X, n, allow_edge)
    C = normalized_chains(X, n + 1) if C is None else C
    _, r_in = smith_normal_form(C.boundary[n]) if n else ([], 0)
    f_out, r_out = smith_normal_form(C.boundary[n + 1])
    return AbelianGroup(C.ranks[n] - r_in - r_out, tuple(d for d in f_out if d > 1))


def cohomology_coeffs(X: TruncSSet, k: int, n: int, allow_edge: bool = False) -> AbelianGroup:
    """H^n(X; C_k) = Hom(H_n, C_k) ⊕ Ext(H_{n−1}, C_k)."""
    if k < 1:
        raise ValueError("k must be positive")
    _check_degree(X, n, allow_edge)
    C = normalized_chains(X, n + 1)
    Hn = homology_groups(X, n, allow_edge, C)
    orders = [k] * Hn.betti + [gcd(d, k) for d in Hn.torsion]
    if n:
        Hm = homology_groups(X, n - 1, True, C)
        orders += [gcd(d, k) for d in Hm.torsion]
    return abelian_group(0, orders)


def cohomology_rank_mod_p(X: TruncSSet, p: int, n: int) -> int:
    """dim H^n(X; F_p) straight from the dual complex, for prime p."""
    C = normalized_chains(X, n + 1)
    r_in = rank_mod_p(C.boundary[n], p) if n else 0
    r_out = rank_mod_p(C.boundary[n + 1], p)
    return C.ranks[n] - r_in - r_out


def rank_mod_p(A, p: int) -> int:
    A = np.asarray(A, dtype=np.int64) % p
    m, n = A.shape
    r = 0
    for c in range(n):
        piv = np.nonzero(A[r:, c])[0]
        if not len(piv):
            continue
        i = r + piv[0]
        A[[r, i]] = A[[i, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        others = np.nonzero(A[:, c])[0]
        others = others[others != r]
        A[others] = (A[others] - np.outer(A[others, c], A[r])) % p
        r += 1
        if r == m:
            break
    return r


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def howell_form(A, k: int) -> np.ndarray:
    """Row-reduced form over Z/k closed under annihilators (Howell form, unordered zero rows dropped).

    Every row is reduced with unimodular 2×2 moves; after fixing a pivot a
    in column c the row (k / gcd(a, k))·row, which vanishes in column c, is
    fed back into the pool so that constraints implied by zero divisors
    stay visible to back substitution.
    """
    A = [list(map(int, r)) for r in (np.asarray(A, dtype=np.int64) % k).tolist()]
    ncol = len(A[0]) if A else 0
    out = []
    pool = [r for r in A if any(r)]
    for c in range(ncol):
        hits = [r for r in pool if r[c] % k]
        pool = [r for r in pool if not r[c] % k]
        if not hits:
            continue
        piv = hits[0]
        for r in hits[1:]:
            g, s, t = _xgcd(piv[c], r[c])
            a, b = piv[c] // g, r[c] // g
            new_piv = [(s * x + t * y) % k for x, y in zip(piv, r)]
            rest = [(b * x - a * y) % k for x, y in zip(piv, r)]
            piv = new_piv
            if any(rest):
                pool.append(rest)
        # normalize the pivot to a divisor of k
        g, s, _ = _xgcd(piv[c], k)
        u = s % k
        if gcd(u, k) == 1:
            piv = [(u * x) % k for x in piv]
        ann = [(k // gcd(piv[c], k) * x) % k for x in piv]
        if any(ann):
            pool.append(ann)
        out.append(piv)
    # rows that vanish in every column never made it into out; all-zero is fine
    return np.array(out, dtype=np.int64).reshape(-1, ncol)


def solve_mod(A, y, k: int):
    """Some x with A x ≡ y (mod k), or None."""
    A = np.asarray(A, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64).reshape(-1)
    m, n = A.shape
    if k == 1:
        return np.zeros(n, dtype=np.int64)
    aug = np.concatenate([A % k, (y % k)[:, None]], axis=1)
    H = howell_form(aug, k)
    x = np.zeros(n, dtype=np.int64)
    for row in H[::-1].tolist():
        lead = next((j for j, v in enumerate(row) if v), None)
        if lead == n:
            return None  # 0 = nonzero
        rhs = (row[n] - sum(row[j] * int(x[j]) for j in range(lead + 1, n))) % k
        g = gcd(row[lead], k)
        if rhs % g:
            return None
        kk = k // g
        x[lead] = (rhs // g) * pow(row[lead] // g, -1, kk) % kk if kk > 1 else 0
    if ((A @ x - y) % k).any():
        return None
    return x
