"""The acceptance suite: ten property checks with time limits.

Each check returns ``(ok, detail)``; :func:`run` times it.  The suite is
used by ``tests/test_acceptance.py`` and by the ``selftest`` command.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import bundles as bd
from . import classify as cl
from . import decalage as dc
from . import formats as fm
from . import fuzz as fz
from . import homology as hm
from . import sgroup as sg
from . import sset as ss


@dataclass
class Result:
    number: int
    title: str
    ok: bool
    detail: str
    seconds: float
    limit: float

    @property
    def passed(self) -> bool:
        return self.ok and self.seconds < self.limit

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        over = "" if self.seconds < self.limit else " (over time limit)"
        return (f"criterion {self.number:2d} {status}  {self.title}  "
                f"[{self.seconds:.2f}s / {self.limit:.0f}s{over}]  {self.detail}")


def standard_groups(N: int) -> dict:
    return {
        "const C2": sg.constant_group(sg.cyclic(2), N),
        "const C3": sg.constant_group(sg.cyclic(3), N),
        "const S3": sg.constant_group(sg.symmetric(3), N),
        "nerve C2": sg.nerve_cyclic_group(2, N),
        "nerve C3": sg.nerve_cyclic_group(3, N),
    }


def _fail(bad):
    return (not bad), ("all checks hold" if not bad else "; ".join(bad[:4]))


# ------------------------------------------------------------ 1-10


def wbar_equality(seed=0, groups=None, N=5):
    bad = []
    for name, G in (groups or standard_groups(N)).items():
        A = bd.wbar_via_T(G, N)
        B = bd.wbar_via_formula(G, N)
        if not (A.same_tables(B) and A.labels == B.labels):
            bad.append(f"{name}: constructions differ")
    return _fail(bad)


def universal_bundle(seed=0, groups=None, N=4):
    bad = []
    for name, G in (groups or standard_groups(N)).items():
        U = bd.wg(G, N)
        rep = bd.validate_universal(U, G)
        if not rep.ok:
            bad.append(f"{name}: {rep.summary(2)}")
    return _fail(bad)


def periodic_resolution_homology(k: int, n: int) -> hm.AbelianGroup:
    """H_n(C_k; Z) from Z[C_k] ← Z[C_k] ← ... with maps t − 1 and 1 + t + ... + t^{k−1}.

    After tensoring with Z the maps become 0 (odd n) and multiplication by
    k (even n ≥ 2); homology of a complex of copies of Z is read off directly.
    """
    def d(j):  # Z_j → Z_{j-1}
        return 0 if j % 2 else k

    ker_free = n == 0 or d(n) == 0
    im = d(n + 1)
    if not ker_free:
        return hm.AbelianGroup(0, ())
    if im == 0:
        return hm.AbelianGroup(1, ())
    return hm.AbelianGroup(0, (im,) if im > 1 else ())


def contractibility(seed=0):
    bad = []
    for k in (2, 3):
        G = sg.constant_group(sg.cyclic(k), 5)
        U = bd.wg(G, 5)
        got = [hm.homology_groups(U.torsor.total, n) for n in range(4)]
        if got != [hm.AbelianGroup(1)] + [hm.AbelianGroup(0)] * 3:
            bad.append(f"WG(const C{k}): {[str(g) for g in got]}")
    W = bd.wbar(sg.constant_group(sg.cyclic(2), 6), 6, check=False)
    got = [hm.homology_groups(W, n) for n in range(5)]
    want = [periodic_resolution_homology(2, n) for n in range(5)]
    if got != want:
        bad.append(f"W̄(const C2): {[str(g) for g in got]} vs {[str(g) for g in want]}")
    return _fail(bad)


def adjunction(seed=0, nbase=1):
    bad = []
    Xs = {"Δ[0]": ss.standard_simplex(0, 3), "Δ[1]": ss.standard_simplex(1, 3),
          "Δ[2]": ss.standard_simplex(2, 3), "circle": ss.circle(3)}
    Ws = {"N(C2)": sg.nerve_NG(sg.constant_group(sg.cyclic(2), 3, nbase), Ntot=3),
          "Dec Δ[2]": dc.dec_total(ss.standard_simplex(2, 4))}
    for xn, X in Xs.items():
        if nbase > 1:
            X = ss.disjoint_union([X] * nbase)
        for wn, W in Ws.items():
            if nbase > 1 and W.nbase != nbase:
                continue
            if not dc.adjunction_check(X, W, 2):
                bad.append(f"{xn} vs {wn}")
    return _fail(bad)


def twisting_soundness(seed=0, count=50):
    bad = []
    good = broken = 0
    item = 0
    while good < count or broken < count:
        rng = fz.rng_for(seed, item)
        item += 1
        t = fz.random_twist(rng, 2)
        if good < count:
            T = bd.twisted_product(t.base.truncate(min(t.base.trunc, t.group.trunc)), t.group,
                                   bd.TwistFn(t.base, t.group, t.maps[: t.group.trunc + 1]))
            r1, r2 = bd.validate_torsor(T), bd.validate_pseudo_section(T)
            if not (r1.ok and r2.ok):
                bad.append(f"item {item}: twisted product invalid")
            good += 1
        if broken < count:
            try:
                u, where = fz.break_twisting(t, rng)
            except fz.BudgetExceeded:
                continue  # trivial group: nothing to break
            if bd.validate_twisting(u.base, u.group, u).ok:
                bad.append(f"item {item}: broken value at {where} not detected")
            broken += 1
    ok, detail = _fail(bad)
    return ok, f"{good} valid, {broken} broken; {detail}"


def classification_round_trip(seed=0, count=50):
    bad = []
    for k in (2, 3, 4):
        S = ss.circle(3)
        H = bd.h1_enumerate(S, sg.constant_group(sg.cyclic(k), 3))
        coh = hm.cohomology_coeffs(ss.circle(4), k, 1)
        if H.count != k or coh.order != k:
            bad.append(f"circle C{k}: {H.count} classes, |H^1| = {coh.order}")
        for T in H.representatives:
            if not cl.verify_classification(T, cl.classifying_map(T)):
                bad.append(f"circle C{k}: representative not classified")
    for i in range(count):
        T = fz.random_torsor(fz.rng_for(seed, 1000 + i), 2)
        if not cl.verify_classification(T, cl.classifying_map(T)):
            bad.append(f"fuzz {i}: not classified")
    return _fail(bad)


def latching(seed=0, count=50):
    bad = []
    for i in range(count):
        X = fz.random_sset(fz.rng_for(seed, 2000 + i), 3, fz._counts(fz.rng_for(seed, 3000 + i), 2))
        for n in range(X.trunc):
            if not ss.verify_latching_pushout(X, n):
                bad.append(f"fuzz {i} degree {n}")
    return _fail(bad)


def homotopy_combinatorics(seed=0):
    bad = []
    for name in ("C2", "C3", "S3"):
        H = sg.cyclic(int(name[1])) if name[0] == "C" else sg.symmetric(3)
        if not cl.ddec_vs_cech(sg.constant_group(H, 5), 2):
            bad.append(f"dDec W̄ ≠ Čech for const {name}")
    W = bd.wbar(sg.constant_group(sg.cyclic(2), 5), 5, check=False)
    P = cl.ddec_to_path(W, 2)
    rep = cl.check_diamond(P)
    if not rep.ok:
        bad.append("diamond: " + rep.summary(2))
    if not any((P.ends[0].level_maps[n] != P.ends[1].level_maps[n]).any() for n in range(3)):
        bad.append("endpoint maps coincide")
    for n in range(4):
        f = cl.prism_map(n)
        verts = {lab: int(f.level_maps[0][k]) for k, lab in enumerate(f.source.labels[0])}
        want = {((i,), (e,)): (i + e * (n + 1),) for i in range(n + 1) for e in (0, 1)}
        got = {lab: f.target.labels[0][v] for lab, v in verts.items()}
        if got != want or not cl.check_prism_naturality(n) or not ss.validate_smap(f).ok:
            bad.append(f"prism map n={n}")
    return _fail(bad)


def gerbe_dictionary(seed=0, count=20):
    bad = []
    for i in range(count):
        g = cl.random_gerbe(fz.rng_for(seed, 4000 + i))
        if not cl.validate_gerbe(g).ok:
            bad.append(f"gerbe {i}: generator produced an invalid gerbe")
            continue
        H = cl.cosk1_hypercover(g, 3)
        t = cl.gerbe_to_twisting(g, H)
        if not bd.validate_twisting(H.sset, t.group, t).ok:
            bad.append(f"gerbe {i}: twisting invalid")
            continue
        L = cl.twisting_to_gerbe(H, t)
        phi = cl.find_gerbe_isomorphism(g, L)
        if phi is None:
            bad.append(f"gerbe {i}: round trip not isomorphic")
            continue
        HL = cl.cosk1_hypercover(L, 3)
        tL = cl.gerbe_to_twisting(L, HL)
        look = {(tuple(a), tuple(b)): s for s, (a, b) in enumerate(zip(HL.verts[2].tolist(), HL.edges[2].tolist()))}
        m = np.array([look[(tuple(a), tuple(phi[b]))] for a, b in zip(H.verts[2].tolist(), H.edges[2].tolist())])
        if not cl.same_class(H.sset, cl.twisting_cochain(H, t), cl.twisting_cochain(HL, tL)[m], g.k):
            bad.append(f"gerbe {i}: class changed")
    return _fail(bad)


# ------------------------------------------------------------ 10: fiberwise


def _timed(fn, *a):
    t = time.perf_counter()
    out = fn(*a)
    return out, time.perf_counter() - t


def fiberwise(seed=0):
    """Block-diagonal inputs over two base points split into the per-fiber results."""
    bad = []
    slack = 0.1  # timer noise on sub-second runs
    timing = []

    def check_time(name, t_union, t_parts):
        timing.append((name, t_union, t_parts))
        if t_union > 2 * t_parts + slack:
            bad.append(f"{name}: {t_union:.2f}s over B=2 vs {t_parts:.2f}s per fiber")

    pairs = [("const C2", "nerve C3"), ("const S3", "nerve C2")]
    # 1 and 2: W̄ and WG
    for a, b in pairs:
        G1, G2 = standard_groups(4)[a], standard_groups(4)[b]
        GU = sg.disjoint_union_groups([G1, G2])
        (W1, W2), tp = _timed(lambda: (bd.wbar(G1, 4), bd.wbar(G2, 4)))
        WU, tu = _timed(bd.wbar, GU, 4)
        check_time(f"W̄ {a}+{b}", tu, tp)
        for bpt, Wb in ((0, W1), (1, W2)):
            R, _ = ss.restrict_to_base(WU, [bpt])
            if not R.same_tables(Wb):
                bad.append(f"W̄ {a}+{b}: fiber {bpt} differs")
        (U1, U2), tp = _timed(lambda: (bd.wg(G1, 4), bd.wg(G2, 4)))
        UU, tu = _timed(bd.wg, GU, 4)
        check_time(f"WG {a}+{b}", tu, tp)
        if not bd.validate_universal(UU, GU).ok:
            bad.append(f"WG {a}+{b}: invalid")
        for bpt, Ub in ((0, U1), (1, U2)):
            R, _ = ss.restrict_to_base(UU.torsor.total, [bpt])
            if not R.same_tables(Ub.torsor.total):
                bad.append(f"WG {a}+{b}: fiber {bpt} differs")
    # B = point is byte-identical
    for name, G in standard_groups(4).items():
        one = sg.disjoint_union_groups([G])
        if fm.dumps(fm.tsset_doc(bd.wbar(one, 4), labels=False)) != fm.dumps(fm.tsset_doc(bd.wbar(G, 4), labels=False)):
            bad.append(f"B = point changes W̄ for {name}")
        if fm.dumps(fm.tsset_doc(bd.wg(one, 4).torsor.total, labels=False)) != \
                fm.dumps(fm.tsset_doc(bd.wg(G, 4).torsor.total, labels=False)):
            bad.append(f"B = point changes WG for {name}")
    # 3: homology is additive
    G1, G2 = sg.constant_group(sg.cyclic(2), 5), sg.constant_group(sg.cyclic(3), 5)
    T1, T2 = bd.wbar(G1, 5, check=False), bd.wbar(G2, 5, check=False)
    TU = bd.wbar(sg.disjoint_union_groups([G1, G2]), 5, check=False)
    for n in range(4):
        a, b, u = hm.homology_groups(T1, n), hm.homology_groups(T2, n), hm.homology_groups(TU, n)
        if u != hm.abelian_group(a.betti + b.betti, a.torsion + b.torsion):
            bad.append(f"homology degree {n} not additive")
    # 4: adjunction over two base points
    ok, detail = adjunction(seed, nbase=2)
    if not ok:
        bad.append("adjunction over B=2: " + detail)
    # 5 and 6: twisted products and H¹ counts multiply
    S = ss.circle(3)
    C2, C3 = sg.constant_group(sg.cyclic(2), 3), sg.constant_group(sg.cyclic(3), 3)
    (h2, h3), tp = _timed(lambda: (bd.h1_enumerate(S, C2), bd.h1_enumerate(S, C3)))
    hu, tu = _timed(bd.h1_enumerate, ss.disjoint_union([S, S]), sg.disjoint_union_groups([C2, C3]))
    check_time("H¹ circle", tu, tp)
    if hu.count != h2.count * h3.count:
        bad.append(f"H¹ over B=2: {hu.count} ≠ {h2.count}·{h3.count}")
    for T in hu.representatives:
        if not (bd.validate_torsor(T).ok and cl.verify_classification(T, cl.classifying_map(T))):
            bad.append("B=2 representative fails validation or classification")
    # 7: latching on a union
    X1 = fz.random_sset(fz.rng_for(seed, 5000), 3)
    X2 = fz.random_sset(fz.rng_for(seed, 5001), 3)
    XU = ss.disjoint_union([X1, X2])
    for n in range(3):
        if not ss.verify_latching_pushout(XU, n):
            bad.append(f"latching over B=2, degree {n}")
    # 8: dDec vs Čech over two base points
    if not cl.ddec_vs_cech(sg.disjoint_union_groups([sg.constant_group(sg.cyclic(2), 5),
                                                    sg.constant_group(sg.cyclic(3), 5)]), 2):
        bad.append("dDec vs Čech over B=2")
    # 9: a gerbe over two points restricts to its fibers
    g = cl.gerbe_from_cocycle([0, 1, 0, 1], 2, 2, lambda u, v, w: 0)
    H = cl.cosk1_hypercover(g, 3)
    for m, fib in ((0, [0, 2]), (1, [1, 3])):
        gm = cl.trivial_gerbe([0, 0], 1, 2)
        R, _ = ss.restrict_to_base(H.sset, [m])
        if R.counts != cl.cosk1_hypercover(gm, 3).sset.counts:
            bad.append(f"gerbe fiber {m} differs in size")
    t = cl.gerbe_to_twisting(g, H)
    if not bd.validate_twisting(H.sset, t.group, t).ok:
        bad.append("gerbe over B=2: twisting invalid")
    ok, detail = _fail(bad)
    return ok, detail


CRITERIA = {
    1: ("W̄ via total complex equals product formula", 10.0, wbar_equality),
    2: ("universal bundle structure", 10.0, universal_bundle),
    3: ("contractibility and group-homology oracle", 60.0, contractibility),
    4: ("Dec ⊣ T adjunction", 60.0, adjunction),
    5: ("twisting-function soundness", 60.0, twisting_soundness),
    6: ("classification round trip", 120.0, classification_round_trip),
    7: ("latching pushout", 30.0, latching),
    8: ("dDec, Čech nerve, prism and path object", 30.0, homotopy_combinatorics),
    9: ("gerbe dictionary", 60.0, gerbe_dictionary),
    10: ("fiberwise consistency", 120.0, fiberwise),
}


def run(number: int, seed: int = 0) -> Result:
    title, limit, fn = CRITERIA[number]
    t = time.perf_counter()
    try:
        ok, detail = fn(seed)
    except Exception as e:  # a crash is a failed criterion, reported as such
        ok, detail = False, f"{type(e).__name__}: {e}"
    return Result(number, title, ok, detail, time.perf_counter() - t, limit)


def run_all(seed: int = 0) -> list:
    return [run(n, seed) for n in sorted(CRITERIA)]
