"""Compiled kernels against the numpy fallback.

Times every hot kernel under both backends on fixed inputs, checks that the
outputs agree, and reports the speed-up.  Run with ``python3 benchmarks/bench_kernels.py``;
``--csv`` prints machine-readable rows instead of the table.
"""
from __future__ import annotations

import argparse
import sys
import timeit

import numpy as np

from sptrack import _backend


def _inputs(seed: int = 0) -> dict:
    rng = np.random.default_rng(seed)
    image = rng.random((64, 64))
    centers = rng.uniform(8, 56, size=(30, 2))
    mean = rng.random(144)
    basis, _ = np.linalg.qr(rng.standard_normal((144, 4)))
    pairs = sorted({(int(i), int(j)) for i, j in rng.integers(0, 40, size=(120, 2))})
    mi = np.array([p[0] for p in pairs])
    mj = np.array([p[1] for p in pairs])
    gain = rng.random(len(pairs)) + 0.5
    return {
        "kbest_paths": (mi, mj, gain, 8),
        "sample_patches": (image, centers, 12, 12),
        "sq_residuals": (image, centers, 12, 12, mean, basis),
        "ncc_map": (image, image[20:32, 30:42].copy()),
    }


def _same(a, b) -> bool:
    if isinstance(a, list):
        return len(a) == len(b) and all(abs(x[0] - y[0]) < 1e-9 and x[1] == y[1] for x, y in zip(a, b))
    return np.allclose(a, b, rtol=0, atol=1e-10)


def run(repeat: int = 5, number: int = 20) -> list[tuple[str, float, float, bool]]:
    if "compiled" not in _backend.BACKENDS:
        raise SystemExit("compiled kernels are not built; run pip install -e . --no-build-isolation")
    py, cy = _backend.BACKENDS["python"], _backend.BACKENDS["compiled"]
    rows = []
    for name, args in _inputs().items():
        f_py, f_cy = getattr(py, name), getattr(cy, name)
        t_py = min(timeit.repeat(lambda: f_py(*args), repeat=repeat, number=number)) / number
        t_cy = min(timeit.repeat(lambda: f_cy(*args), repeat=repeat, number=number)) / number
        rows.append((name, t_py, t_cy, _same(f_py(*args), f_cy(*args))))
    return rows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=20)
    ap.add_argument("--csv", action="store_true")
    args = ap.parse_args(argv)
    rows = run(args.repeat, args.number)
    if args.csv:
        print("kernel,python_s,compiled_s,speedup,agree")
        for name, tp, tc, ok in rows:
            print(f"{name},{tp:.3e},{tc:.3e},{tp / tc:.2f},{int(ok)}")
    else:
        print(f"{'kernel':<16}{'python':>12}{'compiled':>12}{'speed-up':>10}  agree")
        for name, tp, tc, ok in rows:
            print(f"{name:<16}{tp * 1e3:>10.3f}ms{tc * 1e3:>10.3f}ms{tp / tc:>9.1f}x  {'yes' if ok else 'NO'}")
    return 0 if all(r[3] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
