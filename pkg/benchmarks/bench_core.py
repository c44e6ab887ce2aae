"""Compiled core against the numpy fallback.

    python benchmarks/bench_core.py [--repeat 3] [--json out.json]

Kernel timings call both implementations directly on identical inputs and
assert identical results; the end-to-end timing runs a g = 5 isogeny type in
two subprocesses, one with UCRYSTAL_PURE=1.
"""
import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from ucrystal import _pycore
from ucrystal.crystal import mod_from_newton, mod_wedge2, nygaard_system
from ucrystal.linalg import affine_solver
from ucrystal.npoly import NewtonPolygon
from ucrystal.solver.count import circulant_matrix, dfs_tables, lattice_matrix, system_for

try:
    from ucrystal import _fastcore
except ImportError:
    _fastcore = None


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def kernel_cases():
    rng = np.random.default_rng(7)
    rref_in = rng.integers(0, 3, (160, 160)).astype(np.int64)
    M = mod_from_newton(NewtonPolygon.parse("1/2x5"), precision=3)
    sysn = nygaard_system(mod_wedge2(M), 3)
    snf_in = circulant_matrix(sysn, 7).astype(np.int64)
    small = mod_from_newton(NewtonPolygon.parse("1/2x3"), precision=3)
    s3 = system_for(mod_wedge2(small), 3, 2)
    E = lattice_matrix(s3)
    cons, part, kern = affine_solver(E % 3, 3)
    dfs_args = (cons, part, kern, dfs_tables(s3), 3, 2, 3, 10 ** 7)
    return [
        ("fp_rref 160x160 over F_3", "fp_rref", lambda core: core.fp_rref(rref_in.copy(), 3)),
        (f"Smith valuations {snf_in.shape[0]}x{snf_in.shape[1]} over Z/27", "zn_snf_valuations",
         lambda core: core.zn_snf_valuations(snf_in.copy(), 3, 3)),
        ("layered DFS, wedge2 of 1/2x3 over F_9, n=3", "dfs_count",
         lambda core: core.dfs_count(*dfs_args)),
    ]


E2E = ("from ucrystal.crystal import mod_from_newton; from ucrystal.npoly import NewtonPolygon;"
       "from ucrystal.solver.isogeny import isogeny_type; import time;"
       "nu = NewtonPolygon.parse('1/2x5'); M = mod_from_newton(nu, precision=1);"
       "t = time.perf_counter(); it = isogeny_type(M, nu=nu);"
       "print(time.perf_counter() - t, it.parts)")


def end_to_end(pure):
    env = dict(os.environ)
    env.pop("UCRYSTAL_PURE", None)
    if pure:
        env["UCRYSTAL_PURE"] = "1"
    out = subprocess.run([sys.executable, "-c", E2E], env=env, capture_output=True, text=True,
                         check=True).stdout.split(maxsplit=1)
    return float(out[0]), out[1].strip()


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json")
    args = ap.parse_args(argv)
    if _fastcore is None:
        print("compiled core not built; run `pip install -e . --no-build-isolation`")
        return 1
    rows = []
    for label, name, fn in kernel_cases():
        tp, rp = best_of(lambda: fn(_pycore), args.repeat)
        tc, rc = best_of(lambda: fn(_fastcore), args.repeat)
        if rp != rc:
            raise AssertionError(f"{name}: backends disagree ({rp} vs {rc})")
        rows.append({"case": label, "python_s": tp, "cython_s": tc, "speedup": tp / tc})
    tp, parts_p = end_to_end(True)
    tc, parts_c = end_to_end(False)
    if parts_p != parts_c:
        raise AssertionError("end-to-end types differ between backends")
    rows.append({"case": f"isogeny_type 1/2x5 -> {parts_c}", "python_s": tp, "cython_s": tc,
                 "speedup": tp / tc})
    w = max(len(r["case"]) for r in rows)
    print(f"{'case'.ljust(w)}  {'python s':>9}  {'cython s':>9}  {'speedup':>8}")
    for r in rows:
        print(f"{r['case'].ljust(w)}  {r['python_s']:9.4f}  {r['cython_s']:9.4f}  {r['speedup']:7.1f}x")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
