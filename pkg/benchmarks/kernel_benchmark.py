#!/usr/bin/env python3
"""Benchmark: compiled measurement kernel vs the pure-NumPy fallback.

Times the workloads that dominate real runs: single-basis objective calls
(the Nelder-Mead refinement loop), mid-size grid batches (optimizer seeding),
the exhaustive qubit oracle batch, and one full two-way discord report.

Usage: python benchmarks/kernel_benchmark.py [--repeats N] [--json]
"""
from __future__ import annotations

import argparse
import json
import time

import numpy as np

from discordlab import DensityOperator, HilbertFactorization, _kernels_py, kernels
from discordlab.correlations import _bloch_vectors, full_report
from discordlab.tensor_ops import split_bipartition

try:
    from discordlab import _ckernels
except ImportError:
    _ckernels = None


def two_qubit_state(seed: int = 7) -> DensityOperator:
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = g @ g.conj().T
    return DensityOperator(rho / np.trace(rho).real, HilbertFactorization([2, 2]))


def timeit(fn, repeats: int) -> float:
    fn()  # warm up
    start = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - start) / repeats


def build_workloads(backend):
    state = two_qubit_state()
    blocks = split_bipartition(state.matrix, state.dims, [0], [1])
    rng = np.random.default_rng(3)
    grid_small = _bloch_vectors(rng.uniform(0, np.pi, 1024),
                                rng.uniform(0, 2 * np.pi, 1024))
    thetas = np.linspace(0, np.pi, 256)
    phis = np.linspace(0, 2 * np.pi, 256, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    grid_oracle = _bloch_vectors(tt.ravel(), pp.ravel())
    single = grid_small[:1]
    return {
        "single_basis_eval": lambda: backend.conditional_entropy_batch(blocks,
                                                                       single),
        "bloch_angle_eval": lambda: backend.conditional_entropy_bloch(blocks,
                                                                      0.9, 1.3),
        "grid_batch_1024": lambda: backend.conditional_entropy_batch(blocks,
                                                                     grid_small),
        "oracle_batch_65536": lambda: backend.conditional_entropy_batch(
            blocks, grid_oracle),
    }


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=20)
    parser.add_argument("--json", action="store_true")
    args = parser.parse_args()

    backends = {"python": _kernels_py}
    if _ckernels is not None:
        backends["compiled"] = _ckernels

    rows = {}
    for name, backend in backends.items():
        workloads = build_workloads(backend)
        rows[name] = {label: timeit(fn, args.repeats)
                      for label, fn in workloads.items()}

    # one full report through the selected (default) backend for context
    state = two_qubit_state()
    rows.setdefault("selected:" + kernels.backend_name(), {})[
        "full_two_way_report"] = timeit(lambda: full_report(state, ([0], [1])),
                                        max(3, args.repeats // 4))

    if args.json:
        print(json.dumps(rows, indent=2, sort_keys=True))
        return 0

    labels = sorted({label for times in rows.values() for label in times})
    width = max(len(label) for label in labels) + 2
    header = f"{'workload':<{width}}" + "".join(f"{name:>14}" for name in rows)
    print(header)
    print("-" * len(header))
    for label in labels:
        cells = []
        for name in rows:
            value = rows[name].get(label)
            cells.append(f"{value * 1e6:>11.1f} us" if value is not None
                         else f"{'-':>14}")
        print(f"{label:<{width}}" + "".join(cells))
    if "compiled" in rows and "python" in rows:
        print()
        for label in sorted(rows["compiled"]):
            speedup = rows["python"][label] / rows["compiled"][label]
            print(f"speedup {label}: {speedup:.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
