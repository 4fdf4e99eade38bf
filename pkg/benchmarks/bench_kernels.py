"""Compare the numba-compiled and pure-numpy kernel backends.

Runs the tangent-field kernel in isolation and a full backward flow, under
each backend, by re-importing the package in a subprocess with
TNN_STRATA_BACKEND set.  Usage: python benchmarks/bench_kernels.py
"""

import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
import tnn_strata.kernels as K
from tnn_strata.flow import flow, random_cell_point
from tnn_strata.perms import Permutation
import random

rng = random.Random(0)
u = Permutation.parse("2,1,3,4")
w = Permutation.longest(4)
x = np.array(random_cell_point(w, rng).to_floats())
u0, uinv0 = K.perm_arrays(u)
nu = K.nu_vector(4)

# warm-up (jit compile on the numba path)
K.psi_tangent(x, u0, uinv0, nu)
flow(x.copy(), u, "backward")

reps = 20_000
t0 = time.perf_counter()
for _ in range(reps):
    K.psi_tangent(x, u0, uinv0, nu)
tangent_us = (time.perf_counter() - t0) / reps * 1e6

flows = 30
t0 = time.perf_counter()
for _ in range(flows):
    flow(x.copy(), u, "backward")
flow_ms = (time.perf_counter() - t0) / flows * 1e3

print(json.dumps({
    "backend": "numba" if K.USING_NUMBA else "numpy",
    "psi_tangent_us": round(tangent_us, 2),
    "backward_flow_ms": round(flow_ms, 2),
}))
"""


def run(backend: str) -> dict:
    env = dict(os.environ, TNN_STRATA_BACKEND=backend)
    out = subprocess.run(
        [sys.executable, "-c", WORKER], env=env, capture_output=True, text=True
    )
    if out.returncode != 0:
        raise RuntimeError(f"{backend} worker failed:\n{out.stderr}")
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    results = [run("numpy"), run("numba")]
    print(f"{'backend':<8} {'psi_tangent (us)':>18} {'backward flow (ms)':>20}")
    for r in results:
        print(
            f"{r['backend']:<8} {r['psi_tangent_us']:>18} {r['backward_flow_ms']:>20}"
        )
    a, b = results
    if a["backend"] != b["backend"]:
        speedup = a["psi_tangent_us"] / max(b["psi_tangent_us"], 1e-9)
        print(f"\nnumba speedup on psi_tangent: {speedup:.1f}x")


if __name__ == "__main__":
    main()
