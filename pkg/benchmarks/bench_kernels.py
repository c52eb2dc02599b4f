"""Compare the compiled and pure-Python word kernels.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import sys
import timeit

from freefix._kernels import compiled_kernels, python_kernels


def workloads(rng):
    n = 3
    letters = [i for i in range(1, n + 1)] + [-i for i in range(1, n + 1)]
    raw = [tuple(rng.choice(letters) for _ in range(400)) for _ in range(200)]
    images = ((1,), (2, 1, 3, 3, 2, -3, -3, -2, -1), ())
    words = [python_kernels.reduce_word(w)[:60] for w in raw]
    phi = ((1,), (2,), (3, 2))
    return {
        "reduce_word": lambda k: [k.reduce_word(w) for w in raw],
        "apply_images": lambda k: [k.apply_images(images, w) for w in words],
        "fixed_words": lambda k: k.fixed_words([phi], n, 7),
    }


def run(repeat=5, out=sys.stdout):
    if compiled_kernels is None:
        print("compiled extension not built; only the Python kernels are available", file=out)
    rows = []
    for name, job in workloads(random.Random(0)).items():
        py = min(timeit.repeat(lambda: job(python_kernels), number=1, repeat=repeat))
        if compiled_kernels is not None:
            assert job(compiled_kernels) == job(python_kernels), name
            cy = min(timeit.repeat(lambda: job(compiled_kernels), number=1, repeat=repeat))
        else:
            cy = float("nan")
        rows.append((name, py, cy))
        print(f"{name:14s} python {py * 1e3:9.2f} ms   cython {cy * 1e3:9.2f} ms   "
              f"speedup {py / cy:6.1f}x", file=out)
    return rows


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    run(ap.parse_args().repeat)
