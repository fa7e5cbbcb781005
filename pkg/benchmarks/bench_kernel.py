"""Compare the compiled and pure-Python shooting kernels.

    python3 benchmarks/bench_kernel.py [--points 60] [--repeat 3]

Each backend shoots the inflow adjoint problem at every point of the
standard contour; the table reports the best-of-N wall time per shot and
the largest relative difference between the backends' results.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from blevans import EvansEvaluator, LayerParams, semicircle
from blevans import kernel


def _jobs(params, points):
    ev = EvansEvaluator(params)
    prof = ev.profile
    jobs = []
    for lam in semicircle(10.0, points).distinct():
        seed, mu = ev.seed(lam)
        jobs.append(
            (complex(lam), complex(np.conj(mu)), True, params.gamma, params.a, prof.anchor,
             prof.offset_at(prof.far_end), prof.far_end, 0.0, tuple(complex(c) for c in seed),
             ev.options.abs_tol, ev.options.rel_tol)
        )
    return jobs


def _time(shoot, jobs, repeat):
    best = float("inf")
    results = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        results = [shoot(*j) for j in jobs]
        best = min(best, time.perf_counter() - t0)
    return best / len(jobs), results


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=60)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--gamma", type=float, default=5.0 / 3.0)
    ap.add_argument("--v-plus", dest="v_plus", type=float, default=1e-4)
    ap.add_argument("--v0", type=float, default=0.6)
    args = ap.parse_args(argv)

    params = LayerParams.create(args.gamma, args.v_plus, args.v0)
    jobs = _jobs(params, args.points)
    timings = {}
    outputs = {}
    for name in kernel.available_backends():
        timings[name], outputs[name] = _time(kernel.get_backend(name), jobs, args.repeat)

    steps = int(np.mean([r[2] for r in next(iter(outputs.values()))]))
    print(f"{len(jobs)} shots, about {steps} steps each (gamma={args.gamma:g}, v_plus={args.v_plus:g}, v0={args.v0:g})")
    print(f"{'backend':<10}{'ms/shot':>10}{'speedup':>10}")
    ref = timings["python"]
    for name, t in timings.items():
        print(f"{name:<10}{t * 1e3:>10.3f}{ref / t:>10.1f}")
    if len(outputs) == 2:
        a, b = outputs["cython"], outputs["python"]
        diff = max(np.max(np.abs(np.array(x[0]) - np.array(y[0]))) / np.max(np.abs(y[0])) for x, y in zip(a, b))
        print(f"max relative difference between backends: {diff:.1e}")
    else:
        print("compiled kernel not available; only the Python backend was timed")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
