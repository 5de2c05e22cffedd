"""Compiled vs pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json]

Reports the best-of-``repeat`` time per call for the Jacobi eigensolver and
the local projective channel, plus a full simplex search that exercises both.
"""
import argparse
import json
import timeit

import numpy as np

from cohloss import _backend, linalg
from cohloss.search import LossObjective, search_simplex
from cohloss.states import DensityMatrix, counterexample_state, random_density


def hermitian(dim, seed):
    g = linalg.random_ginibre(dim, seed)
    return (g + g.conj().T) / 2


def time_call(fn, repeat):
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat=repeat, number=number)) / number


def kernel_cases():
    for dim in (2, 4, 8, 16, 32, 64):
        h = hermitian(dim, dim)
        tol = linalg.JACOBI_TOL * max(1.0, float(np.linalg.norm(h)))
        yield f"jacobi d={dim}", lambda k, h=h, tol=tol: k.jacobi_eigh(h, tol, linalg.JACOBI_MAX_SWEEPS)
    for dA, dB in ((2, 2), (3, 3), (4, 8), (8, 8)):
        rho = random_density(dA * dB, dA * dB, 1).mat
        u = linalg.random_unitary(dB, 2)
        yield f"project {dA}x{dB}", lambda k, rho=rho, u=u, dA=dA, dB=dB: k.project_local(rho, dA, dB, u, True)


def search_cases():
    yield "simplex 2x2 counterexample", LossObjective(counterexample_state(), "B", "l1")
    rho = DensityMatrix(random_density(9, 9, 3).mat, 3, 3)
    yield "simplex 3x3 relent", LossObjective(rho, "B", "relent")


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--json", action="store_true")
    args = p.parse_args(argv)

    names = _backend.available()
    kernels = {n: _backend.load(n) for n in names}
    rows = []
    for label, call in kernel_cases():
        rows.append((label, {n: time_call(lambda k=k: call(k), args.repeat) for n, k in kernels.items()}))

    original = _backend.kernels
    try:
        for label, obj in search_cases():
            times = {}
            for n, k in kernels.items():
                _backend.kernels = k
                times[n] = min(timeit.repeat(lambda: search_simplex(obj, 2, 150, 0), repeat=max(1, args.repeat // 2), number=1))
            rows.append((label, times))
    finally:
        _backend.kernels = original

    if args.json:
        print(json.dumps([{"case": label, "seconds": t} for label, t in rows], indent=2))
        return
    header = f"{'case':<28}" + "".join(f"{n:>14}" for n in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for label, t in rows:
        line = f"{label:<28}" + "".join(f"{t[n] * 1e6:>12.1f}us" for n in names)
        if len(names) == 2:
            line += f"{t['python'] / t['cython']:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
