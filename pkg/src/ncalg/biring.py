"""Matrices over a division algebra with both biring products.

The row-column (rc) product is the familiar contraction
(a rc b)[i][j] = sum_k a[i][k] b[k][j]; the column-row (cr) product is its
transpose dual, (a cr b)[i][j] = sum_k a[k][j] b[i][k], with the left
factor's entries staying on the left in every summand. Transposition swaps
the two worlds: (a rc b)^T = a^T cr b^T, and likewise for powers, inverses
and quasideterminants, so the cr routines here delegate to the rc ones
through transposes wherever the duality makes that exact.

Inverses are built from quasideterminants: the (i, j) entry of the
rc-inverse is the inverse of the (j, i) quasideterminant, which is the
Schur-complement-like expression entry - row . inv(interior) . column.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .algebra import (
    AlgebraDesc,
    AlgebraError,
    Element,
    element_from_data,
    element_to_data,
    inv as el_inv,
    make_algebra,
    one,
    random_element,
)
from .report import Report
from .tensor import Tensor, eval_power, star_product

PIVOT_RTOL = 1e-10


class SingularMatrixError(ArithmeticError):
    """Matrix has no inverse under the requested product."""


class QuasideterminantUndefinedError(ArithmeticError):
    """The interior submatrix of the requested quasideterminant is singular."""


class BiMatrix:
    """Rectangular matrix of Elements, stored as an (m, n, dim) array."""

    __slots__ = ("algebra", "data")

    def __init__(self, algebra: AlgebraDesc, data: np.ndarray):
        arr = np.asarray(data, dtype=np.float64)
        if arr.ndim != 3 or arr.shape[2] != algebra.dim:
            raise AlgebraError(f"matrix data must be (m, n, {algebra.dim}), got {arr.shape}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "data", arr)

    def __setattr__(self, name, value):
        raise AttributeError("BiMatrix is immutable")

    # -- construction --------------------------------------------------------

    @classmethod
    def from_elements(cls, rows: Sequence[Sequence[Element]]) -> "BiMatrix":
        algebra = rows[0][0].algebra
        m, n = len(rows), len(rows[0])
        arr = np.zeros((m, n, algebra.dim))
        for i, row in enumerate(rows):
            if len(row) != n:
                raise AlgebraError("ragged rows")
            for j, e in enumerate(row):
                if e.algebra != algebra:
                    raise AlgebraError("mixed algebras in matrix")
                arr[i, j] = e.coeffs
        return cls(algebra, arr)

    @classmethod
    def identity(cls, algebra: AlgebraDesc, n: int) -> "BiMatrix":
        arr = np.zeros((n, n, algebra.dim))
        arr[np.arange(n), np.arange(n), 0] = 1.0
        return cls(algebra, arr)

    @classmethod
    def zeros(cls, algebra: AlgebraDesc, m: int, n: int) -> "BiMatrix":
        return cls(algebra, np.zeros((m, n, algebra.dim)))

    # -- shape and access -----------------------------------------------------

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def entry(self, i: int, j: int) -> Element:
        return Element(self.algebra, self.data[i, j])

    def column(self, j: int) -> list[Element]:
        return [self.entry(i, j) for i in range(self.rows)]

    def row_elements(self, i: int) -> list[Element]:
        return [self.entry(i, j) for j in range(self.cols)]

    def max_entry_norm(self) -> float:
        if self.data.size == 0:
            return 0.0
        return float(np.sqrt((self.data ** 2).sum(axis=2)).max())

    def __add__(self, other: "BiMatrix") -> "BiMatrix":
        if other.algebra != self.algebra or other.data.shape != self.data.shape:
            raise AlgebraError("shape or algebra mismatch in matrix sum")
        return BiMatrix(self.algebra, self.data + other.data)

    def __sub__(self, other: "BiMatrix") -> "BiMatrix":
        if other.algebra != self.algebra or other.data.shape != self.data.shape:
            raise AlgebraError("shape or algebra mismatch in matrix difference")
        return BiMatrix(self.algebra, self.data - other.data)

    def __mul__(self, s: float) -> "BiMatrix":
        return BiMatrix(self.algebra, self.data * float(s))

    __rmul__ = __mul__

    def close(self, other: "BiMatrix", tol: float = 1e-9) -> bool:
        return (
            self.algebra == other.algebra
            and self.data.shape == other.data.shape
            and float(np.abs(self.data - other.data).max()) <= tol
        )

    def __repr__(self):
        return f"BiMatrix({self.algebra.tag}, {self.rows}x{self.cols})"


def diff_norm(a: BiMatrix, b: BiMatrix) -> float:
    return float(np.abs(a.data - b.data).max())


# ---------------------------------------------------------------------------
# products, transpose, Hadamard inverse, powers


def rc_mul(a: BiMatrix, b: BiMatrix) -> BiMatrix:
    if a.algebra != b.algebra:
        raise AlgebraError("algebra mismatch")
    if a.cols != b.rows:
        raise AlgebraError(f"rc shape mismatch: {a.cols} columns vs {b.rows} rows")
    return BiMatrix(a.algebra, _kernels.rc_contract(a.algebra.table, a.data, b.data))


def cr_mul(a: BiMatrix, b: BiMatrix) -> BiMatrix:
    if a.algebra != b.algebra:
        raise AlgebraError("algebra mismatch")
    if a.rows != b.cols:
        raise AlgebraError(f"cr shape mismatch: {a.rows} rows vs {b.cols} columns")
    return BiMatrix(a.algebra, _kernels.cr_contract(a.algebra.table, a.data, b.data))


def transpose(a: BiMatrix) -> BiMatrix:
    return BiMatrix(a.algebra, a.data.transpose(1, 0, 2))


def add(a: BiMatrix, b: BiMatrix) -> BiMatrix:
    return a + b


def hadamard_inv(a: BiMatrix) -> BiMatrix:
    """Entrywise inverse combined with transposition: (Ha)[i][j] = a[j][i]^-1."""
    m, n = a.rows, a.cols
    out = np.zeros((n, m, a.algebra.dim))
    for i in range(n):
        for j in range(m):
            e = a.entry(j, i)
            if e.norm() == 0.0:
                raise ZeroDivisionError("Hadamard inverse undefined: zero entry")
            out[i, j] = el_inv(e).coeffs
    return BiMatrix(a.algebra, out)


def _require_square(a: BiMatrix) -> int:
    if a.rows != a.cols:
        raise AlgebraError("square matrix required")
    return a.rows


def rc_pow(a: BiMatrix, n: int) -> BiMatrix:
    _require_square(a)
    if n < 0:
        raise ValueError("power must be >= 0")
    acc = BiMatrix.identity(a.algebra, a.rows)
    for _ in range(n):
        acc = rc_mul(acc, a)
    return acc


def cr_pow(a: BiMatrix, n: int) -> BiMatrix:
    _require_square(a)
    if n < 0:
        raise ValueError("power must be >= 0")
    acc = BiMatrix.identity(a.algebra, a.rows)
    for _ in range(n):
        acc = cr_mul(acc, a)
    return acc


# ---------------------------------------------------------------------------
# minors


@dataclass(frozen=True)
class MinorSelector:
    """Sorted row/column index sets picking a square minor."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]


def submatrix(a: BiMatrix, rows: Iterable[int], cols: Iterable[int]) -> BiMatrix:
    rows = list(rows)
    cols = list(cols)
    return BiMatrix(a.algebra, a.data[np.ix_(rows, cols)])


# ---------------------------------------------------------------------------
# quasideterminants and inverses

# Inverting through the full quasideterminant matrix needs all n^2 pivots
# defined and invertible, which fails whenever the inverse has a zero entry
# (diagonal matrices already break it). Instead each recursion level picks
# one pivot position (i, j) whose interior minor inverts, forms that single
# quasideterminant, and assembles the inverse from the block identities
#   x[j, i]  = q^-1,           x[j, C]  = -q^-1 (r B^-1),
#   x[C, i]  = -(B^-1 c) q^-1, x[C, C'] = B^-1 + (B^-1 c) q^-1 (r B^-1),
# where B is the interior, r/c the deleted row/column and q the pivot
# quasideterminant. Pivots are searched in lexicographic order and the
# candidate is residual-verified, so results are deterministic.


def _entry_norms(data: np.ndarray) -> np.ndarray:
    return np.sqrt((data ** 2).sum(axis=2))


def _inv_element(alg: AlgebraDesc, coeffs: np.ndarray, pivot_tol: float) -> np.ndarray:
    n2 = float(coeffs @ coeffs)
    if np.sqrt(n2) <= pivot_tol:
        raise SingularMatrixError("pivot below tolerance")
    c = coeffs.copy()
    c[1:] = -c[1:]
    return c / n2


def _mul(alg: AlgebraDesc, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum("p,q,pqk->k", a, b, alg.table)


def _quasidet_raw(alg: AlgebraDesc, data: np.ndarray, i: int, j: int, pivot_tol: float) -> np.ndarray:
    """Quasideterminant at (row i, col j): entry - row . inv(interior) . col."""
    n = data.shape[0]
    if n == 1:
        return data[0, 0].copy()
    keep_r = [r for r in range(n) if r != i]
    keep_c = [c for c in range(n) if c != j]
    interior = data[np.ix_(keep_r, keep_c)]
    interior_inv = _rc_inv_raw(alg, interior, pivot_tol)
    row = data[i][keep_c]  # (n-1, dim)
    col = data[np.ix_(keep_r, [j])][:, 0, :]  # (n-1, dim)
    acc = np.zeros(alg.dim)
    for r in range(n - 1):
        for c in range(n - 1):
            acc += _mul(alg, _mul(alg, row[r], interior_inv[r, c]), col[c])
    return data[i, j] - acc


def _rc_inv_raw(alg: AlgebraDesc, data: np.ndarray, pivot_tol: float) -> np.ndarray:
    n = data.shape[0]
    if n == 1:
        return _inv_element(alg, data[0, 0], pivot_tol).reshape(1, 1, -1)
    delta = np.zeros_like(data)
    delta[np.arange(n), np.arange(n), 0] = 1.0
    last_err = None
    for i in range(n):
        for j in range(n):
            keep_r = [r for r in range(n) if r != i]
            keep_c = [c for c in range(n) if c != j]
            try:
                b_inv = _rc_inv_raw(alg, data[np.ix_(keep_r, keep_c)], pivot_tol)
            except SingularMatrixError as err:
                last_err = err
                continue
            r_binv = _kernels.rc_contract(alg.table, data[[i]][:, keep_c], b_inv)  # 1 x (n-1)
            binv_c = _kernels.rc_contract(alg.table, b_inv, data[np.ix_(keep_r, [j])])  # (n-1) x 1
            q = data[i, j] - _kernels.rc_contract(
                alg.table, r_binv, data[np.ix_(keep_r, [j])]
            )[0, 0]
            try:
                q_inv = _inv_element(alg, q, pivot_tol)
            except SingularMatrixError as err:
                last_err = err
                continue
            out = np.zeros_like(data)
            out[j, i] = q_inv
            q_inv3 = q_inv.reshape(1, 1, -1)
            out[np.ix_([j], keep_r)] = -_kernels.rc_contract(alg.table, q_inv3, r_binv)
            out[np.ix_(keep_c, [i])] = -_kernels.rc_contract(alg.table, binv_c, q_inv3)
            out[np.ix_(keep_c, keep_r)] = b_inv + _kernels.rc_contract(
                alg.table, _kernels.rc_contract(alg.table, binv_c, q_inv3), r_binv
            )
            resid = _kernels.rc_contract(alg.table, data, out) - delta
            resid2 = _kernels.rc_contract(alg.table, out, data) - delta
            # scale the acceptance with the conditioning actually encountered
            check_tol = 1e-9 * (1.0 + float(_entry_norms(data).max()) * float(_entry_norms(out).max()) * n)
            if max(np.abs(resid).max(), np.abs(resid2).max()) <= check_tol:
                return out
            last_err = SingularMatrixError("inverse candidate failed residual check")
    raise SingularMatrixError("rc-singular") from last_err


def _pivot_tol(a: BiMatrix) -> float:
    return PIVOT_RTOL * (1.0 + a.max_entry_norm())


def quasidet_rc(a: BiMatrix, i: int, j: int) -> Element:
    """(i, j) rc-quasideterminant; the inverse matrix's (j, i) entry inverted."""
    n = _require_square(a)
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError("quasideterminant index out of range")
    try:
        q = _quasidet_raw(a.algebra, a.data, i, j, _pivot_tol(a))
    except SingularMatrixError as err:
        raise QuasideterminantUndefinedError(
            f"quasideterminant undefined at ({i}, {j}): interior submatrix is rc-singular"
        ) from err
    return Element(a.algebra, q)


def quasidet_cr(a: BiMatrix, i: int, j: int) -> Element:
    """cr-quasideterminant via the transpose duality."""
    return quasidet_rc(transpose(a), j, i)


def rc_inv(a: BiMatrix) -> BiMatrix:
    _require_square(a)
    return BiMatrix(a.algebra, _rc_inv_raw(a.algebra, a.data, _pivot_tol(a)))


def cr_inv(a: BiMatrix) -> BiMatrix:
    """cr-inverse via duality: transpose of the rc-inverse of the transpose."""
    return transpose(rc_inv(transpose(a)))


def is_rc_singular(a: BiMatrix) -> bool:
    try:
        rc_inv(a)
        return False
    except SingularMatrixError:
        return True


# ---------------------------------------------------------------------------
# linear systems


def solve_rc(a: BiMatrix, b: Sequence[Element]) -> list[Element]:
    """Unique solution x of a rc x = b for rc-nonsingular square a."""
    n = _require_square(a)
    b = list(b)
    if len(b) != n:
        raise AlgebraError("right-hand side height mismatch")
    col = BiMatrix.from_elements([[e] for e in b])
    x = rc_mul(rc_inv(a), col)
    resid = rc_mul(a, x) - col
    bnorm = max((e.norm() for e in b), default=0.0)
    if float(np.abs(resid.data).max()) > 1e-8 * (1.0 + bnorm):
        raise SingularMatrixError("solution residual above tolerance")
    return x.column(0)


# ---------------------------------------------------------------------------
# rank


def rc_rank(a: BiMatrix) -> tuple[int, MinorSelector]:
    """Largest k with an rc-nonsingular k x k minor, plus one such selector.

    Sizes are searched downward; within a size the index sets run in
    lexicographic order, and the first nonsingular minor wins.
    """
    m, n = a.rows, a.cols
    for k in range(min(m, n), 0, -1):
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                sub = submatrix(a, rows, cols)
                if not is_rc_singular(sub):
                    return k, MinorSelector(rows, cols)
    return 0, MinorSelector((), ())


def left_dependency(a: BiMatrix, rank: int, sel: MinorSelector) -> list[Element] | None:
    """Row coefficients lam with lam rc a = 0 when rank < number of rows.

    Expresses the first row outside the major minor as a left combination of
    the minor's rows (coefficients from row . inv(major)); returns the full
    length-m coefficient list with -1 at that row, or None when rank is full.
    """
    m = a.rows
    if rank >= m:
        return None
    major_inv = rc_inv(submatrix(a, sel.rows, sel.cols))
    p = next(r for r in range(m) if r not in sel.rows)
    row_p = BiMatrix(a.algebra, a.data[[p]][:, list(sel.cols)])
    coeffs = rc_mul(row_p, major_inv)  # 1 x k
    lam = [Element(a.algebra, np.zeros(a.algebra.dim)) for _ in range(m)]
    for idx, r in enumerate(sel.rows):
        lam[r] = coeffs.entry(0, idx)
    lam[p] = -one(a.algebra)
    return lam


def bordered_quasidet(a: BiMatrix, sel: MinorSelector, p: int, r: int) -> Element:
    """Quasideterminant of the minor bordered by row p and column r, at (p, r)."""
    rows = tuple(sorted(sel.rows + (p,)))
    cols = tuple(sorted(sel.cols + (r,)))
    sub = submatrix(a, rows, cols)
    return quasidet_rc(sub, rows.index(p), cols.index(r))


# ---------------------------------------------------------------------------
# eigenvalue utilities


def verify_eigen_rc(a: BiMatrix, b: Element, v: Sequence[Element], tol: float = 1e-9) -> Report:
    """Check a rc v = b v and report the residual plus singularity of a - bE."""
    n = _require_square(a)
    v = list(v)
    col = BiMatrix.from_elements([[e] for e in v])
    av = rc_mul(a, col)
    bv = BiMatrix.from_elements([[b * e] for e in v])
    residual = diff_norm(av, bv)
    shifted = a - BiMatrix.from_elements(
        [[b if i == j else Element(a.algebra, np.zeros(a.algebra.dim)) for j in range(n)] for i in range(n)]
    )
    singular = is_rc_singular(shifted)
    return Report(
        verdict=residual <= tol,
        residual=residual,
        metrics={"shifted_matrix_singular": singular},
    )


def eigen_offdiag(f: Element) -> tuple[Element, Element]:
    """Both eigenvalues of [[0, f], [f, 0]]: f and -f."""
    if f.norm() == 0.0:
        raise ValueError("off-diagonal entry must be nonzero")
    return f, -f


def elliptic_eigen_sample(algebra: AlgebraDesc, seed: int) -> Element:
    """A unit pure-imaginary quaternion b (so b*b = -1), seed-deterministic."""
    if algebra.tag != "quaternion":
        raise AlgebraError("pure-imaginary unit samples need the quaternions")
    rng = np.random.default_rng(seed)
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    return Element(algebra, np.concatenate(([0.0], v)))


# ---------------------------------------------------------------------------
# matrices of tensors (entrywise star product under the rc pattern)


def tmat_identity(algebra: AlgebraDesc, n: int) -> list[list[Tensor]]:
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(Tensor(algebra, 0, ((one(algebra),),)))
            else:
                row.append(Tensor(algebra, 0, ()))
        out.append(row)
    return out


def tmat_rc(a: Sequence[Sequence[Tensor]], b: Sequence[Sequence[Tensor]]) -> list[list[Tensor]]:
    m, p, n = len(a), len(b), len(b[0])
    out = []
    for i in range(m):
        row = []
        for j in range(n):
            acc = None
            for k in range(p):
                term = star_product(a[i][k], b[k][j])
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def tmat_pow(a: Sequence[Sequence[Tensor]], n: int) -> list[list[Tensor]]:
    algebra = a[0][0].algebra
    acc = tmat_identity(algebra, len(a))
    for _ in range(n):
        acc = tmat_rc(acc, a)
    return acc


def tmat_eval(a: Sequence[Sequence[Tensor]], x: Element) -> BiMatrix:
    return BiMatrix.from_elements([[eval_power(t, x) for t in row] for row in a])


# ---------------------------------------------------------------------------
# data form


def matrix_to_data(a: BiMatrix) -> dict:
    return {
        "algebra": a.algebra.tag,
        "entries": [[element_to_data(a.entry(i, j)) for j in range(a.cols)] for i in range(a.rows)],
    }


def matrix_from_data(data: dict) -> BiMatrix:
    entries = [[element_from_data(e) for e in row] for row in data["entries"]]
    mat = BiMatrix.from_elements(entries)
    if mat.algebra != make_algebra(data["algebra"]):
        raise AlgebraError("entry algebras disagree with the declared tag")
    return mat


def random_matrix(algebra: AlgebraDesc, m: int, n: int, rng, scale: float = 1.0) -> BiMatrix:
    if not hasattr(rng, "uniform"):
        rng = np.random.default_rng(rng)
    return BiMatrix.from_elements(
        [[random_element(algebra, rng, scale) for _ in range(n)] for _ in range(m)]
    )
