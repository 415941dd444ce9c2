#!/usr/bin/env python3
"""Compare the two exact-rational backends (gmpy2.mpq vs fractions.Fraction).

The backend is chosen when ``cubicmotives.rationals`` is imported, so each
measurement runs in a fresh subprocess with ``CUBICMOTIVES_RATIONALS`` set.
Workloads are the three hottest call paths: deriving the correction class,
verifying the kernel identities, and building + certifying Γ for random
fourfold pairs.  Results are exact either way; only speed differs.

Usage: python3 benchmarks/bench_rationals.py [--repeat N] [--pairs N]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

WORKLOADS = ("derive-p", "kernels", "gamma-pairs")


def _run_workloads(repeat: int, pairs: int) -> dict:
    from cubicmotives import rationals
    from cubicmotives.motiveiso import build_gamma, random_fourfold_pair, verify_frobenius
    from cubicmotives.realization import RealizationConfig, derive_P, verify_kernel_identities
    from cubicmotives.suites import random_gram

    timings = {}

    t0 = time.perf_counter()
    for i in range(repeat):
        derive_P(RealizationConfig.with_gram(random_gram(i, rank=22)))
    timings["derive-p"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    for i in range(repeat):
        checks = verify_kernel_identities(RealizationConfig.with_gram(random_gram(i, rank=22)))
        assert all(c["passed"] for c in checks)
    timings["kernels"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    for i in range(pairs):
        dx, dy, iso = random_fourfold_pair(seed=i)
        cert = build_gamma(dx, dy, iso)
        checks = cert.checks + verify_frobenius(cert)
        assert all(c["passed"] for c in checks)
    timings["gamma-pairs"] = time.perf_counter() - t0

    return {"backend": rationals.BACKEND, "timings": timings}


def _measure(backend: str, repeat: int, pairs: int):
    env = dict(os.environ, CUBICMOTIVES_RATIONALS=backend)
    proc = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--worker",
         "--repeat", str(repeat), "--pairs", str(pairs)],
        capture_output=True, text=True, env=env)
    if proc.returncode != 0:
        return None, proc.stderr.strip().splitlines()[-1] if proc.stderr else "worker failed"
    return json.loads(proc.stdout), None


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5,
                    help="iterations of derive-p and kernels per backend (default 5)")
    ap.add_argument("--pairs", type=int, default=10,
                    help="random fourfold pairs for the Γ workload (default 10)")
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args(argv)

    if args.worker:
        json.dump(_run_workloads(args.repeat, args.pairs), sys.stdout)
        return 0

    results = {}
    for backend in ("fraction", "gmpy2"):
        res, err = _measure(backend, args.repeat, args.pairs)
        if res is None:
            print(f"note: backend {backend!r} skipped ({err})", file=sys.stderr)
        else:
            results[res["backend"]] = res["timings"]

    if not results:
        print("no backend produced results", file=sys.stderr)
        return 1

    cols = sorted(results)
    header = ["workload"] + [f"{b} (s)" for b in cols]
    if len(cols) == 2:
        header.append("speedup")
    rows = []
    for work in WORKLOADS:
        row = [work] + [f"{results[b][work]:.3f}" for b in cols]
        if len(cols) == 2:
            fast, slow = results["gmpy2"][work], results["fraction"][work]
            row.append(f"{slow / fast:.2f}x" if fast > 0 else "-")
        rows.append(row)

    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    print(f"repeat={args.repeat} pairs={args.pairs}")
    print(fmt.format(*header))
    print(fmt.format(*("-" * w for w in widths)))
    for row in rows:
        print(fmt.format(*row))
    if len(cols) == 2:
        print("\nspeedup = fraction time / gmpy2 time (higher favors gmpy2)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
