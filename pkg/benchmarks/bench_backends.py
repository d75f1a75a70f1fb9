"""Time the compiled kernels against the pure-Python fallback.

Run:  python benchmarks/bench_backends.py

Each workload integrates a built-in kernel end to end (stepping plus
right-hand sides); reported numbers are the best of three runs.
"""

import time

from circkep._core import kinds, pykernel

try:
    from circkep._core import _speedups
except ImportError:
    _speedups = None

WORKLOADS = [
    # (label, kind, packed params, initial state, t_end)
    ("reduced Kepler, drag-free e=0.75, t=200",
     kinds.KIND_REDUCED, (0.0, 0.0, 0.0, -3.0, 3.0),
     [0.25, 0.0, 0.6614378277661477, 0.0, 0.0], 200.0),
    ("gamma<0 chart spiral, tau=2000",
     kinds.KIND_GAMMA_NEG, (1.0, 0.0, 0.1, -2.0, 2.0),
     [1.3, 0.1, 0.7, 0.0, 0.0], 2000.0),
    ("gamma>0 chart collapse, tau=2000",
     kinds.KIND_GAMMA_POS_APOS, (1.0, 2.0, 0.5, 2.0, -2.0),
     [0.7, -0.3, 1.2, 0.0, 0.0], 2000.0),
    ("critical chart focus, tau=2000",
     kinds.KIND_CRITICAL, (1.0, 1.0, 0.3, 0.0, 0.0),
     [1.1, -0.2, 0.8, 0.0, 0.0], 2000.0),
]


def run_backend(impl, kind, P, y0, t_end):
    best = float("inf")
    steps = 0
    for _ in range(3):
        t0 = time.perf_counter()
        out = impl.integrate_kernel(kind, P, list(y0), 0.0, t_end,
                                    1e-9, 1e-12, 0.0, 0.0, 5_000_000, 1, 0.0, [])
        best = min(best, time.perf_counter() - t0)
        steps = out[3]
    return best, steps


def main():
    backends = [("python", pykernel)]
    if _speedups is not None:
        backends.append(("compiled", _speedups))
    else:
        print("compiled backend not built; timing the fallback only\n")

    header = f"{'workload':<38}" + "".join(f"{name:>12}" for name, _ in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}{'steps':>10}"
    print(header)
    print("-" * len(header))
    for label, kind, P, y0, t_end in WORKLOADS:
        row = f"{label:<38}"
        times = []
        steps = 0
        for _, impl in backends:
            secs, steps = run_backend(impl, kind, P, y0, t_end)
            times.append(secs)
            row += f"{secs * 1e3:>10.1f}ms"
        if len(times) == 2:
            row += f"{times[0] / times[1]:>9.1f}x{steps:>10}"
        print(row)


if __name__ == "__main__":
    main()
