"""Compare the numba and numpy orbit kernels.

    python3 benchmarks/bench_kernels.py [--n 20000] [--repeat 5]

Also times a full realness certificate with each path by re-running this
script in a child process with ``REALDYN_NO_NUMBA=1``.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from realdyn import _kernels
from realdyn.families import chebyshev, hermite
from realdyn.ratmap import _fixed_point_data


def _best(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_rows(n: int, repeat: int) -> list[dict]:
    rows = []
    xs = np.linspace(-1.5, 1.5, n)
    for name, f, k in (("chebyshev2", chebyshev(2), 8), ("hermite3", hermite(3), 5), ("hermite6", hermite(6), 4)):
        hp, hq = f.homogeneous()
        pc = np.array(hp, dtype=np.float64)
        qc = np.array(hq, dtype=np.float64)
        ref = _kernels.orbit_residual_numpy(pc, qc, xs, k)
        row = {"case": name, "k": k, "n": n}
        row["numpy_s"] = _best(lambda: _kernels.orbit_residual_numpy(pc, qc, xs, k), repeat)
        if _kernels.numba_enabled():
            out = _kernels._orbit_residual_jit(pc, qc, xs, k)  # compile outside the timing
            row["max_rel_diff"] = float(np.max(np.abs(out[0] - ref[0]) / np.maximum(np.abs(ref[0]), 1e-300)))
            row["numba_s"] = _best(lambda: _kernels._orbit_residual_jit(pc, qc, xs, k), repeat)
            row["speedup"] = row["numpy_s"] / row["numba_s"]
        rows.append(row)
    return rows


def certificate_time() -> float:
    """Wall time for the realness check of ``T_2`` at degree 1024, cold caches."""
    t0 = time.perf_counter()
    data = _fixed_point_data(chebyshev(2), 10, 400)
    assert data.all_real
    return time.perf_counter() - t0


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--certificate-only", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.certificate_only:
        print(json.dumps({"numba": _kernels.numba_enabled(), "seconds": certificate_time()}))
        return
    print(f"numba available and enabled: {_kernels.numba_enabled()}")
    for row in kernel_rows(args.n, args.repeat):
        print(json.dumps({k: round(v, 6) if isinstance(v, float) else v for k, v in row.items()}))
    for flag in ("0", "1"):
        env = dict(os.environ, REALDYN_NO_NUMBA=flag)
        res = subprocess.run(
            [sys.executable, __file__, "--certificate-only"], env=env, capture_output=True, text=True, check=True
        )
        print(f"REALDYN_NO_NUMBA={flag}: certificate T_2^10 {res.stdout.strip()}")


if __name__ == "__main__":
    main()
