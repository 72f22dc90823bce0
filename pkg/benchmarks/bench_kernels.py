"""Numba kernels vs. the pure-numpy fallback.

Times the raw kernels in-process, then runs the weighted inverse end to end
in two child processes, one with PINVDB_DISABLE_NUMBA=1, and checks that both
produce bit-identical results.

    python3 benchmarks/bench_kernels.py --sizes 10 40 80 --samples 7
"""

import argparse
import json
import os
import subprocess
import sys

from pinvdb import bench

CHILD = """
import hashlib, json, statistics, sys
import numpy as np
from pinvdb import bench
from pinvdb.pinv import WeightPair, weighted_pinv
n, samples, seed = map(int, sys.argv[1:])
rng = np.random.default_rng(seed)
A = bench.random_matrix(rng, n, n)
W = WeightPair(bench.random_spd(rng, n), bench.random_spd(rng, n))
out = []
durations = bench.time_call(lambda: out.append(weighted_pinv(A, W)), samples)
digest = hashlib.sha256(out[-1].to_numpy().tobytes()).hexdigest()
print(json.dumps({"median_s": statistics.median(durations), "digest": digest}))
"""


def end_to_end(n, samples, seed, disable_numba):
    env = dict(os.environ)
    env.pop("PINVDB_DISABLE_NUMBA", None)
    if disable_numba:
        env["PINVDB_DISABLE_NUMBA"] = "1"
    done = subprocess.run(
        [sys.executable, "-c", CHILD, str(n), str(samples), str(seed)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(done.stdout.strip().splitlines()[-1])


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--sizes", type=int, nargs="+", default=[10, 40, 80])
    parser.add_argument("--samples", type=int, default=bench.MIN_SAMPLES)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--json", metavar="OUT")
    args = parser.parse_args(argv)

    report = bench.bench_kernels(args.sizes, args.samples, args.seed)
    print(report.format_table())

    identical = True
    print("\nweighted inverse, end to end")
    print(f"{'size':>8} {'numba s':>12} {'numpy s':>12} {'numpy/numba':>12}")
    for n in args.sizes:
        fast = end_to_end(n, args.samples, args.seed, False)
        slow = end_to_end(n, args.samples, args.seed, True)
        identical &= fast["digest"] == slow["digest"]
        ratio = slow["median_s"] / fast["median_s"]
        report.rows.append({"kernels": "both", "case": "weighted_pinv", "size": f"{n}x{n}",
                            "numba_median_s": fast["median_s"], "numpy_median_s": slow["median_s"]})
        report.ratios[f"{n}x{n} weighted_pinv numpy/numba"] = ratio
        print(f"{n:>8} {fast['median_s']:>12.6f} {slow['median_s']:>12.6f} {ratio:>12.2f}")
    report.verdicts["end_to_end_identical"] = identical
    print(f"\nbit-identical results across kernels: {identical and report.verdicts['identical_across_kernels']}")
    if args.json:
        report.to_json(args.json)
    return 0 if identical else 1


if __name__ == "__main__":
    sys.exit(main())
