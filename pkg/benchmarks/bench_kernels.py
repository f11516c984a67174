"""Benchmark: compiled gate kernels vs. the numpy fallback.

Times a sweep of single-qubit Hadamards and a layer of random two-qubit
gates over register widths up to 2^20 amplitudes.  Run from the repo root:

    python3 benchmarks/bench_kernels.py [--max-qubits 20] [--repeats 5]
"""
import argparse
import math
import time

import numpy as np

from ketsim import _kernels_py

try:
    from ketsim import _kernels_cy
except ImportError:
    _kernels_cy = None


def random_state(rng, n_qubits):
    z = rng.normal(size=1 << n_qubits) + 1j * rng.normal(size=1 << n_qubits)
    return np.ascontiguousarray(z / np.linalg.norm(z))


def random_u(rng, dim):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, _ = np.linalg.qr(z)
    return np.ascontiguousarray(q)


def time_backend(kernels, state, h, u2, n_qubits, repeats):
    best = math.inf
    for _ in range(repeats):
        work = state
        start = time.perf_counter()
        for t in range(n_qubits):
            work = kernels.apply_single_qubit(work, h, t)
        for t in range(0, n_qubits - 1, 2):
            work = kernels.apply_multi_qubit(work, u2, (t, t + 1))
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-qubits", type=int, default=20)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    h = np.ascontiguousarray(np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2))
    u2 = random_u(rng, 4)

    backends = [("numpy", _kernels_py)]
    if _kernels_cy is not None:
        backends.append(("compiled", _kernels_cy))
    else:
        print("compiled kernels not built; showing fallback only")

    header = f"{'qubits':>6} {'amplitudes':>11}" + "".join(
        f" {name + ' (ms)':>15}" for name, _ in backends
    )
    if len(backends) == 2:
        header += f" {'speedup':>9}"
    print(header)
    for n_qubits in range(8, args.max_qubits + 1, 2):
        state = random_state(rng, n_qubits)
        times = [
            time_backend(impl, state, h, u2, n_qubits, args.repeats)
            for _, impl in backends
        ]
        row = f"{n_qubits:>6} {1 << n_qubits:>11}" + "".join(
            f" {1e3 * t:>15.3f}" for t in times
        )
        if len(times) == 2:
            row += f" {times[0] / times[1]:>8.2f}x"
        print(row)


if __name__ == "__main__":
    main()
