"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_backends.py [--repeat 5]
"""
import argparse
import math
import timeit

import numpy as np

from hiddencorr import _backend
from hiddencorr.correlations import bloch_decomposition, symmetric_discord
from hiddencorr.families import family_lambda, sample_random_classical


def cases(rng):
    h8 = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    h8 = (h8 + h8.conj().T) / 2
    h4 = h8[:4, :4].copy()
    red = family_lambda(0.3).reduced()
    ra, rb, corr = bloch_decomposition(red.matrix)
    thetas = np.linspace(0, math.pi, 24)
    phis = np.linspace(0, 2 * math.pi, 24, endpoint=False)
    return [
        ("eigh 4x4", 2000, lambda: _backend.kernels().eigh(h4)),
        ("eigh 8x8", 2000, lambda: _backend.kernels().eigh(h8)),
        ("grid_search 24^4", 5, lambda: _backend.kernels().grid_search(ra, rb, corr, thetas, phis)),
        ("symmetric_discord", 5, lambda: symmetric_discord(red)),
        ("sample 1000 states", 1, lambda: list(sample_random_classical(1000, seed=1))),
    ]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    backends = _backend.available()
    rng = np.random.default_rng(0)
    print(f"{'case':<22}" + "".join(f"{b:>14}" for b in backends) + f"{'ratio':>10}")
    for label, number, fn in cases(rng):
        per_call = {}
        for b in backends:
            with _backend.use_backend(b):
                fn()  # warm up
                best = min(timeit.repeat(fn, number=number, repeat=args.repeat))
            per_call[b] = best / number
        ratio = per_call["python"] / per_call["compiled"] if "compiled" in per_call else float("nan")
        row = "".join(f"{per_call[b] * 1e3:>11.3f} ms" for b in backends)
        print(f"{label:<22}{row}{ratio:>9.2f}x")


if __name__ == "__main__":
    main()
