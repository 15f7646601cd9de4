"""Time the numba kernels against the plain numpy path.

    python benchmarks/bench_kernels.py [--repeat 5]

The numpy path is run in a subprocess with ARTIFACT_DISABLE_NUMBA=1 so
both backends see identical inputs; results are compared for equality.
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

CASES = ["snf", "snf_dense", "union_find", "compose"]


def inputs(case, rng):
    if case == "snf":
        # boundary matrix of W̄(const S3) in degree 4, the shape homology sees
        from artifact import bundles as bd, homology as hm, sgroup as sg

        W = bd.wbar(sg.constant_group(sg.symmetric(3), 5), 5, check=False)
        return (hm.normalized_chains(W, 4).boundary[4],)
    if case == "snf_dense":
        # entries blow past int64 quickly, so both backends end up on exact integers
        return (rng.integers(-3, 4, (120, 90)),)
    if case == "union_find":
        n = 200_000
        return n, rng.integers(0, n, 150_000), rng.integers(0, n, 150_000)
    n = 2_000_000
    a = rng.integers(0, 1000, n)
    return rng.integers(0, 50, 1000), a, rng.integers(0, 50, 1000), a


def worker(repeat):
    from artifact import _kernels as k

    fns = {"snf": k.snf_diagonal, "snf_dense": k.snf_diagonal, "union_find": k.union_find_classes, "compose": k.compose_mismatch}
    out = {"backend": k.backend()}
    for case in CASES:
        args = inputs(case, np.random.default_rng(0))
        res = fns[case](*args)  # warm-up (numba compiles here)
        times = []
        for _ in range(repeat):
            t = time.perf_counter()
            fns[case](*args)
            times.append(time.perf_counter() - t)
        res = sorted(abs(int(x)) for x in res) if case.startswith("snf") else np.asarray(res).tolist()
        out[case] = {"best": min(times), "digest": hash(tuple(res))}
    print(json.dumps(out))


def run(disable, repeat):
    env = dict(os.environ, ARTIFACT_DISABLE_NUMBA="1" if disable else "0")
    p = subprocess.run([sys.executable, __file__, "--worker", "--repeat", str(repeat)],
                       env=env, capture_output=True, text=True, check=True)
    return json.loads(p.stdout)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--worker", action="store_true")
    args = ap.parse_args()
    if args.worker:
        worker(args.repeat)
        return
    fast, slow = run(False, args.repeat), run(True, args.repeat)
    print(f"{'kernel':<12}{fast['backend']:>10}{slow['backend']:>10}{'speedup':>10}  same result")
    for case in CASES:
        a, b = fast[case], slow[case]
        print(f"{case:<12}{a['best']:>10.4f}{b['best']:>10.4f}{b['best'] / a['best']:>10.1f}  "
              f"{a['digest'] == b['digest']}")


if __name__ == "__main__":
    main()
