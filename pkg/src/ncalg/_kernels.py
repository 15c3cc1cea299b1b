"""Hot numeric kernels: numba-jitted loops with pure-numpy fallbacks.

Set the environment variable ``NCALG_NO_NUMBA=1`` to force the numpy path
(useful on platforms where numba is unavailable or for benchmarking; see
benchmarks/bench_kernels.py). The selection happens once at import time.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("NCALG_NO_NUMBA", "") not in ("", "0")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


# ---------------------------------------------------------------------------
# pure-numpy implementations


def rc_contract_np(table, a, b):
    """Row-over-column matrix product with entry products taken in the algebra.

    a: (m, p, d), b: (p, n, d), table: (d, d, d) structure constants.
    C[i,j] = sum_k a[i,k] * b[k,j], left factor's entry on the left.
    """
    return np.einsum("ikp,kjq,pqs->ijs", a, b, table, optimize=True)


def cr_contract_np(table, a, b):
    """Column-over-row product: C[i,j] = sum_k a[k,j] * b[i,k] (a's entry left)."""
    return np.einsum("kjp,ikq,pqs->ijs", a, b, table, optimize=True)


def rk4_linear_np(m, x0, t, steps):
    """State of x' = m x after ``steps`` classical RK4 steps from x(0) = x0.

    For a linear autonomous system one RK4 step is exactly multiplication by
    the degree-4 Taylor polynomial of exp(h m), so the fallback accumulates
    that step matrix by binary powering instead of looping over steps.
    """
    h = t / steps
    hm = h * m
    hm2 = hm @ hm
    phi = np.eye(m.shape[0]) + hm + hm2 / 2.0 + (hm2 @ hm) / 6.0 + (hm2 @ hm2) / 24.0
    x = x0.copy()
    n = steps
    while n:
        if n & 1:
            x = phi @ x
        n >>= 1
        if n:
            phi = phi @ phi
    return x


# ---------------------------------------------------------------------------
# numba implementations (loop forms of the same contractions)

if HAVE_NUMBA:

    @njit(cache=True)
    def _rc_contract_nb(table, a, b):  # pragma: no cover - exercised via dispatch
        m, p, d = a.shape
        n = b.shape[1]
        out = np.zeros((m, n, d))
        for i in range(m):
            for j in range(n):
                for k in range(p):
                    for u in range(d):
                        av = a[i, k, u]
                        if av == 0.0:
                            continue
                        for v in range(d):
                            bv = b[k, j, v]
                            if bv == 0.0:
                                continue
                            for s in range(d):
                                out[i, j, s] += av * bv * table[u, v, s]
        return out

    @njit(cache=True)
    def _cr_contract_nb(table, a, b):  # pragma: no cover
        p, m, d = a.shape
        n = b.shape[0]
        out = np.zeros((n, m, d))
        for i in range(n):
            for j in range(m):
                for k in range(p):
                    for u in range(d):
                        av = a[k, j, u]
                        if av == 0.0:
                            continue
                        for v in range(d):
                            bv = b[i, k, v]
                            if bv == 0.0:
                                continue
                            for s in range(d):
                                out[i, j, s] += av * bv * table[u, v, s]
        return out

    @njit(cache=True)
    def _rk4_linear_nb(m, x0, t, steps):  # pragma: no cover
        h = t / steps
        x = x0.copy()
        for _ in range(steps):
            k1 = m @ x
            k2 = m @ (x + 0.5 * h * k1)
            k3 = m @ (x + 0.5 * h * k2)
            k4 = m @ (x + h * k3)
            x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        return x

    def rc_contract(table, a, b):
        return _rc_contract_nb(table, np.ascontiguousarray(a), np.ascontiguousarray(b))

    def cr_contract(table, a, b):
        return _cr_contract_nb(table, np.ascontiguousarray(a), np.ascontiguousarray(b))

    def rk4_linear(m, x0, t, steps):
        return _rk4_linear_nb(np.ascontiguousarray(m), np.ascontiguousarray(x0), float(t), steps)

else:
    rc_contract = rc_contract_np
    cr_contract = cr_contract_np
    rk4_linear = rk4_linear_np
