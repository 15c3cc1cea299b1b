"""Series-defined maps on algebra elements and matrices.

All series are summed termwise with a relative truncation rule; none of them
rescale their argument, so inputs are expected at desk scale (norm up to
roughly 10). The quasiexponent generalizes the exponent: it is the order-n
derivative of exp evaluated at fixed directions, and like exp it satisfies
dy/dx o 1 = y.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import Element, one, scale as el_scale
from .biring import BiMatrix, cr_mul, rc_mul
from .tensor import so_set, X


@dataclass(frozen=True)
class SeriesParams:
    """Truncation control: stop when a term is small relative to the sum."""

    rel_tol: float = 1e-14
    max_terms: int = 64

    def __post_init__(self):
        if self.rel_tol <= 0 or self.max_terms < 1:
            raise ValueError("rel_tol must be > 0 and max_terms >= 1")


DEFAULT_PARAMS = SeriesParams()


class SeriesBudgetError(ArithmeticError):
    """Series failed to converge within max_terms."""


def exp_el(x: Element, p: SeriesParams = DEFAULT_PARAMS) -> Element:
    """exp(x) = sum x^n / n!."""
    total = np.zeros(x.algebra.dim)
    term = one(x.algebra)
    for n in range(1, p.max_terms + 1):
        total = total + term.coeffs
        term = term * x * (1.0 / n)
        if term.norm() <= p.rel_tol * (1.0 + float(np.linalg.norm(total))):
            return Element(x.algebra, total + term.coeffs)
    raise SeriesBudgetError("series budget exceeded in exp")


def exp_at(a: Element, t: float, p: SeriesParams = DEFAULT_PARAMS) -> Element:
    """exp(a t) for real t; (a t)^n = a^n t^n, so this is exp_el(a*t)."""
    return exp_el(el_scale(a, t), p)


def _parity_series(x: Element, start: int, stride: int, signs: int,
                   p: SeriesParams) -> Element:
    """Sum x^n/n! over n = start, start+stride, ... with optional sign flips.

    signs = +1 keeps all terms positive (sinh/cosh); signs = -1 alternates
    (sin/cos). Stops once two consecutive contributions are negligible, so
    cancellation between neighbours cannot fake convergence.
    """
    total = np.zeros(x.algebra.dim)
    power = one(x.algebra)  # x^k / k!
    k = 0
    sign = 1.0
    small = 0
    for _ in range(p.max_terms):
        while k < start:
            k += 1
            power = power * x * (1.0 / k)
        total = total + sign * power.coeffs
        if power.norm() <= p.rel_tol * (1.0 + float(np.linalg.norm(total))):
            small += 1
            if small >= 2:
                return Element(x.algebra, total)
        else:
            small = 0
        start += stride
        sign *= signs
    raise SeriesBudgetError("series budget exceeded in parity series")


def sinh_el(x: Element, p: SeriesParams = DEFAULT_PARAMS) -> Element:
    return _parity_series(x, 1, 2, 1, p)


def cosh_el(x: Element, p: SeriesParams = DEFAULT_PARAMS) -> Element:
    return _parity_series(x, 0, 2, 1, p)


def sin_el(x: Element, p: SeriesParams = DEFAULT_PARAMS) -> Element:
    return _parity_series(x, 1, 2, -1, p)


def cos_el(x: Element, p: SeriesParams = DEFAULT_PARAMS) -> Element:
    return _parity_series(x, 0, 2, -1, p)


# ---------------------------------------------------------------------------
# quasiexponent


def _degree_contribution(cs: Sequence[Element], x_powers: list[Element], deg: int) -> Element:
    """(1/deg!) sum over arg placements of the x^deg monomial derivative."""
    alg = cs[0].algebra
    n = len(cs)
    total = np.zeros(alg.dim)
    for labels in so_set(n, deg):
        # evaluate runs of x between args through precomputed powers
        acc = None
        run = 0
        for lab in labels:
            if lab == X:
                run += 1
            else:
                seg = x_powers[run]
                acc = seg if acc is None else acc * seg
                acc = acc * cs[lab]
                run = 0
        seg = x_powers[run]
        acc = seg if acc is None else acc * seg
        total = total + acc.coeffs
    return Element(alg, total * (1.0 / _factorial(deg)))


def _factorial(n: int) -> float:
    out = 1.0
    for i in range(2, n + 1):
        out *= i
    return out


def quasiexp(cs: Sequence[Element], x: Element, p: SeriesParams = DEFAULT_PARAMS) -> Element:
    """e[c_1..c_n]^x: the order-n derivative of exp at directions c_1..c_n.

    Degree N of x^N contributes (1/N!) times the sum over all placements of
    the n directions among the N gaps (x fills the rest); degrees are summed
    from N = n upward until two consecutive contributions are negligible.
    """
    cs = list(cs)
    if not cs:
        raise ValueError("need at least one direction")
    n = len(cs)
    alg = x.algebra
    total = np.zeros(alg.dim)
    x_powers = [one(alg)]
    small = 0
    for deg in range(n, n + p.max_terms):
        while len(x_powers) <= deg:
            x_powers.append(x_powers[-1] * x)
        contrib = _degree_contribution(cs, x_powers, deg)
        total = total + contrib.coeffs
        if contrib.norm() <= p.rel_tol * (1.0 + float(np.linalg.norm(total))):
            small += 1
            if small >= 2:
                return Element(alg, total)
        else:
            small = 0
    raise SeriesBudgetError("series budget exceeded in quasiexp")


def quasiexp_at(c: Element, a: Element, t: float, p: SeriesParams = DEFAULT_PARAMS) -> Element:
    """e[c]^{at} = sum_n t^n/(n+1)! sum_{m<=n} a^m c a^{n-m}."""
    alg = a.algebra
    total = np.zeros(alg.dim)
    a_pows = [one(alg)]
    tn = 1.0
    small = 0
    for n in range(p.max_terms):
        while len(a_pows) <= n:
            a_pows.append(a_pows[-1] * a)
        inner = np.zeros(alg.dim)
        for m in range(n + 1):
            inner = inner + (a_pows[m] * c * a_pows[n - m]).coeffs
        contrib = inner * (tn / _factorial(n + 1))
        total = total + contrib
        tn *= t
        if float(np.linalg.norm(contrib)) <= p.rel_tol * (1.0 + float(np.linalg.norm(total))):
            small += 1
            if small >= 2:
                return Element(alg, total)
        else:
            small = 0
    raise SeriesBudgetError("series budget exceeded in quasiexp_at")


# ---------------------------------------------------------------------------
# matrix exponentials, one per product


def _mexp(x: BiMatrix, mul, p: SeriesParams) -> BiMatrix:
    if x.rows != x.cols:
        raise ValueError("square matrix required")
    total = BiMatrix.identity(x.algebra, x.rows)
    term = BiMatrix.identity(x.algebra, x.rows)
    for n in range(1, p.max_terms + 1):
        term = mul(term, x) * (1.0 / n)
        total = total + term
        if term.max_entry_norm() <= p.rel_tol * (1.0 + total.max_entry_norm()):
            return total
    raise SeriesBudgetError("series budget exceeded in matrix exponent")


def mexp_rc(x: BiMatrix, p: SeriesParams = DEFAULT_PARAMS) -> BiMatrix:
    """Sum of rc-powers x^n/n!; solves y' = x rc y with y(0) = identity."""
    return _mexp(x, rc_mul, p)


def mexp_cr(x: BiMatrix, p: SeriesParams = DEFAULT_PARAMS) -> BiMatrix:
    """Sum of cr-powers x^n/n!; transpose-dual of mexp_rc."""
    return _mexp(x, cr_mul, p)
