"""Benchmark the numba kernels against their pure-numpy fallbacks.

The RK4 integrator over the flattened coefficient representation dominates
the runtime of the ODE cross-checks, so it is the headline number; the two
matrix-product contractions are also timed. Both paths compute the same
quantities, so the max deviation column should sit at rounding level.

Run:  python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from ncalg import _kernels
from ncalg.algebra import make_algebra
from ncalg.biring import random_matrix
from ncalg.diffeq import LinearOde, OdeForm


def timeit(fn, *args, repeat=5):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    if not _kernels.HAVE_NUMBA:
        print("numba path unavailable (NCALG_NO_NUMBA set or numba missing); "
              "timing the numpy fallback only.")

    alg = make_algebra("quaternion")
    rng = np.random.default_rng(42)
    a = random_matrix(alg, 2, 2, rng, scale=0.5)
    init = [
        [float(c) for c in rng.uniform(-1, 1, 4)],
        [float(c) for c in rng.uniform(-1, 1, 4)],
    ]
    from ncalg.algebra import Element

    ode = LinearOde(a, OdeForm.RC_LEFT, tuple(Element(alg, c) for c in init))
    m = ode.real_matrix()
    x0 = np.concatenate([np.asarray(c) for c in init])

    rows = []

    def bench(name, nb_fn, np_fn, args):
        if nb_fn is not None:
            nb_fn(*args)  # warm the JIT before timing
            t_nb, out_nb = timeit(nb_fn, *args)
        else:
            t_nb, out_nb = float("nan"), None
        t_np, out_np = timeit(np_fn, *args)
        dev = float(np.abs(out_nb - out_np).max()) if out_nb is not None else float("nan")
        rows.append((name, t_nb, t_np, dev))

    def rk4_many_nb(m, x0):
        for _ in range(20):
            out = _kernels.rk4_linear(m, x0, 1.0, 10_000)
        return out

    def rk4_many_np(m, x0):
        for _ in range(20):
            out = _kernels.rk4_linear_np(m, x0, 1.0, 10_000)
        return out

    big = random_matrix(alg, 6, 6, rng)
    bench(
        "rk4_linear (20 x 1e4 steps, 8x8)",
        rk4_many_nb if _kernels.HAVE_NUMBA else None,
        rk4_many_np,
        (m, x0),
    )
    bench(
        "rc_contract (6x6 quaternion)",
        (lambda *a: _kernels.rc_contract(*a)) if _kernels.HAVE_NUMBA else None,
        _kernels.rc_contract_np,
        (alg.table, big.data, big.data),
    )
    bench(
        "cr_contract (6x6 quaternion)",
        (lambda *a: _kernels.cr_contract(*a)) if _kernels.HAVE_NUMBA else None,
        _kernels.cr_contract_np,
        (alg.table, big.data, big.data),
    )

    print(f"{'kernel':36s} {'numba [s]':>12s} {'numpy [s]':>12s} {'max deviation':>15s}")
    for name, t_nb, t_np, dev in rows:
        print(f"{name:36s} {t_nb:12.6f} {t_np:12.6f} {dev:15.3e}")


if __name__ == "__main__":
    main()
