"""Throughput comparison of the compiled and python walker backends.

Runs the three batch kernels (lattice, renewal, neighbor-table) on every
importable backend, checks that both backends give bit-identical output,
and prints million steps per second plus the speedup of compiled over
python.  Run from the repo root:

    python3 benchmarks/bench_backends.py
    python3 benchmarks/bench_backends.py --steps 4000 --replicas 400
"""

import argparse
import time

import numpy as np

from ppwalk import EnvironmentConfig, backend, prf
from ppwalk.corrector import TorusEnvironment


def _time(fn, repeats):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_case(name, make_call, total_steps, mods, repeats):
    rows = {}
    outputs = {}
    for bname, mod in mods.items():
        dt, out = _time(make_call(mod), repeats)
        rows[bname] = total_steps / dt / 1e6
        outputs[bname] = out
    names = sorted(outputs)
    agree = all(
        all(np.array_equal(a, b) for a, b in
            zip(outputs[names[0]], outputs[n]))
        for n in names[1:]
    )
    return name, rows, agree


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=2000)
    ap.add_argument("--replicas", type=int, default=200)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    mods = backend.available()
    print(f"backends: {', '.join(sorted(mods))}   "
          f"steps={args.steps} replicas={args.replicas}")
    if len(mods) == 1:
        print("note: compiled extension not built, timing python only")

    n, m = args.steps, args.replicas
    total = n * m
    thr = prf.bernoulli_threshold(0.5)

    torus = TorusEnvironment.from_config(
        EnvironmentConfig(dimension=2, kind="bernoulli", density=0.5, seed=1),
        64,
    )

    cases = [
        ("lattice full d=2 quenched",
         lambda mod: lambda: mod.walk_lattice_batch(
             2, n, 1, 7, 0, m, 0, True, False, 10**6)),
        ("lattice bern(.5) d=2 annealed",
         lambda mod: lambda: mod.walk_lattice_batch(
             2, n, 1, 7, 0, m, thr, False, True, 10**6)),
        ("lattice bern(.7) d=3 quenched",
         lambda mod: lambda: mod.walk_lattice_batch(
             3, n, 2, 7, 0, m, prf.bernoulli_threshold(0.7), False, False,
             10**6)),
        ("renewal nu={1,2} annealed",
         lambda mod: lambda: mod.walk_renewal_batch(
             n, 3, 7, 0, m, True,
             *prf.renewal_cdf_u64(((1, 0.5), (2, 0.5))))),
        ("table torus L=64 bern(.5)",
         lambda mod: lambda: mod.walk_table_batch(
             torus.nbr, torus.disp, 2, n, 7, 0, m, torus.origin)),
    ]

    width = max(len(c[0]) for c in cases)
    header = f"{'case':<{width}}  " + "".join(
        f"{bn + ' Msteps/s':>18}" for bn in sorted(mods))
    if len(mods) > 1:
        header += f"{'speedup':>10}{'match':>7}"
    print(header)
    for name, make_call in cases:
        case, rows, agree = bench_case(name, make_call, total, mods,
                                       args.repeats)
        line = f"{case:<{width}}  " + "".join(
            f"{rows[bn]:>18.2f}" for bn in sorted(rows))
        if len(mods) > 1:
            line += f"{rows['compiled'] / rows['python']:>10.1f}x"
            line += f"{'yes' if agree else 'NO':>7}"
        print(line)
        if not agree:
            raise SystemExit(f"backend outputs disagree on: {case}")


if __name__ == "__main__":
    main()
