"""Time the compiled and pure-Python kernels on the same workloads.

Each backend runs in its own interpreter (the choice is made at import), so
the numbers include nothing but the work itself.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, random, sys, time
from pfcert.exact._backend import BACKEND, kernel
from pfcert.cli import load_family
from pfcert.forms import JacobianData, picard_fuchs_full

repeat = int(sys.argv[1])
rng = random.Random(1)
polys = [[rng.randint(-99, 99) for _ in range(rng.randint(8, 20))] for _ in range(200)]
polys = [p for p in polys if p[-1]]

def best(fn):
    out = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        out.append(time.perf_counter() - t0)
    return min(out)

def gcds():
    for a, b in zip(polys, polys[1:]):
        kernel.gcd_poly(kernel.mul(a, b), kernel.mul(b, b))

def muls():
    for a, b in zip(polys, polys[1:]):
        kernel.mul(a, b)

def quartic():
    spec = load_family("mirror_quartic")
    picard_fuchs_full(spec, jd=JacobianData(spec))

def legendre():
    picard_fuchs_full(load_family("legendre"))

print(json.dumps({"backend": BACKEND, "mul": best(muls), "gcd": best(gcds),
                  "legendre_pf": best(legendre), "quartic_pf": best(quartic)}))
"""


def run(pure: bool, repeat: int) -> dict:
    env = dict(os.environ)
    if pure:
        env["PFCERT_PURE_PYTHON"] = "1"
    else:
        env.pop("PFCERT_PURE_PYTHON", None)
    out = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    fast = run(False, args.repeat)
    slow = run(True, args.repeat)
    if fast["backend"] != "cython":
        print("compiled kernel not available; both rows use the Python fallback")
    print(f"{'workload':<14}{'cython (s)':>12}{'python (s)':>12}{'speedup':>10}")
    for key in ("mul", "gcd", "legendre_pf", "quartic_pf"):
        a, b = fast[key], slow[key]
        print(f"{key:<14}{a:>12.4f}{b:>12.4f}{b / a:>9.2f}x")


if __name__ == "__main__":
    main()
