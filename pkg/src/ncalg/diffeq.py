"""Differential-equation layer: integrability, exactness, and linear systems.

Derivative verification here is numeric: central finite differences certify
or refute stated solutions instead of re-deriving them symbolically. The
linear systems come in four product forms (row-column / column-row product,
coefficient matrix on either side); each has a matrix-exponential closed
form, and an independent RK4 oracle runs on the flattened real coefficient
representation, where every one of the four forms is an ordinary linear
system.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .algebra import (
    AlgebraDesc,
    Element,
    basis,
    in_centralizer,
    inv as el_inv,
    left_matrix,
    one,
    random_element,
    right_matrix,
    zero,
)
from .biring import BiMatrix, cr_mul, cr_pow, matrix_from_data, matrix_to_data, rc_mul, rc_pow
from .report import Report
from .series import DEFAULT_PARAMS, SeriesParams, exp_at, mexp_cr, mexp_rc
from .tensor import SlotTensor, X, eval_args, slot_derivative

FD_STEP = 1e-5
FD_TOL = 1e-6
DEFAULT_PROBES = 32
WITNESS_FLOOR = 1e-3


def _fd_step(scale: float) -> float:
    return FD_STEP * (1.0 + scale)


# ---------------------------------------------------------------------------
# one-variable differential forms


class FormPoly:
    """Polynomial-coefficient linear-map-valued form x -> (h -> g(x) o h).

    Stored as labelled tensor components with exactly one argument slot; the
    x gaps encode the polynomial dependence on the variable.
    """

    __slots__ = ("algebra", "components")

    def __init__(self, components: Sequence[SlotTensor]):
        comps = tuple(components)
        if not comps:
            raise ValueError("need at least one component")
        for c in comps:
            if c.arg_slots != 1:
                raise ValueError("form components must have exactly one argument slot")
        object.__setattr__(self, "algebra", comps[0].algebra)
        object.__setattr__(self, "components", comps)

    def __setattr__(self, name, value):
        raise AttributeError("FormPoly is immutable")

    def __call__(self, x: Element, h: Element) -> Element:
        total = zero(self.algebra)
        for c in self.components:
            total = total + eval_args(c, [h], x)
        return total

    def derivative(self) -> list[SlotTensor]:
        """x-derivative of every component; each gains a second arg slot."""
        out = []
        for c in self.components:
            d = slot_derivative(c)
            if d.terms:
                out.append(d)
        return out


def sandwich_form(algebra: AlgebraDesc, left_xpow: int, right_xpow: int, coeff: float = 1.0) -> SlotTensor:
    """The form h -> coeff * x^left_xpow . h . x^right_xpow as one labelled term."""
    n = left_xpow + 1 + right_xpow
    coeffs = [one(algebra)] * (n + 1)
    coeffs[0] = coeff * coeffs[0]
    labels = (X,) * left_xpow + (0,) + (X,) * right_xpow
    return SlotTensor(algebra, left_xpow + right_xpow, 1, [(coeffs, labels)])


def integrability_check(g: FormPoly, probes: int = DEFAULT_PROBES, seed: int = 0,
                        tol: float = 1e-9) -> Report:
    """Integrable iff the x-derivative of the form is a symmetric bilinear map.

    The derivative is formed symbolically (one more labelled slot per
    component) and antisymmetry is probed at seeded random (x, h1, h2)
    triples; a non-integrable verdict carries a witness triple whose
    violation clears the separation floor.
    """
    dg = g.derivative()
    rng = np.random.default_rng(seed)
    alg = g.algebra
    worst = 0.0
    witness = None
    for _ in range(probes):
        x = random_element(alg, rng)
        h1 = random_element(alg, rng)
        h2 = random_element(alg, rng)
        v12 = zero(alg)
        v21 = zero(alg)
        for comp in dg:
            v12 = v12 + eval_args(comp, [h1, h2], x)
            v21 = v21 + eval_args(comp, [h2, h1], x)
        violation = (v12 - v21).norm()
        if violation > worst:
            worst = violation
            witness = {"x": list(x.coeffs), "h1": list(h1.coeffs), "h2": list(h2.coeffs),
                       "violation": violation}
    if worst <= tol:
        return Report(verdict=True, residual=worst, metrics={"probes": probes})
    clear = worst > WITNESS_FLOOR
    return Report(verdict=False, residual=worst, witness=witness,
                  metrics={"probes": probes, "violation_above_floor": clear})


def antiderivative_residual(y: Callable[[Element], Element], g, points: Sequence[Element],
                            dirs: Sequence[Element], tol: float = FD_TOL) -> Report:
    """Does dy/dx = g hold? Central differences of y against g over a probe grid.

    g may be a FormPoly or any callable (x, h) -> Element.
    """
    worst = 0.0
    witness = None
    for x in points:
        s = _fd_step(x.norm())
        for h in dirs:
            fd = (y(x + s * h) - y(x - s * h)) * (1.0 / (2.0 * s))
            r = (fd - g(x, h)).norm()
            if r > worst:
                worst = r
                witness = {"x": list(x.coeffs), "h": list(h.coeffs), "residual": r}
    verdict = worst <= tol
    return Report(verdict=verdict, residual=worst, witness=None if verdict else witness)


# ---------------------------------------------------------------------------
# two-variable forms and exact equations


class BiForm:
    """One piece M(x, y) o dx of a two-variable equation, as an evaluator.

    The callable must be linear in its differential argument; that is spot
    checked at construction on seeded probes.
    """

    __slots__ = ("algebra", "fn")

    def __init__(self, algebra: AlgebraDesc, fn: Callable[[Element, Element, Element], Element],
                 check_seed: int = 7):
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "fn", fn)
        rng = np.random.default_rng(check_seed)
        for _ in range(3):
            x, y, d1, d2 = (random_element(algebra, rng) for _ in range(4))
            a, b = rng.uniform(-2, 2, 2)
            lhs = fn(x, y, float(a) * d1 + float(b) * d2)
            rhs = float(a) * fn(x, y, d1) + float(b) * fn(x, y, d2)
            if not lhs.close(rhs, 1e-8 * (1 + lhs.norm())):
                raise ValueError("BiForm evaluator is not linear in its differential")

    def __setattr__(self, name, value):
        raise AttributeError("BiForm is immutable")

    def __call__(self, x: Element, y: Element, d: Element) -> Element:
        return self.fn(x, y, d)


def _sym_defect(form: BiForm, x: Element, y: Element, d1: Element, d2: Element,
                wrt_x: bool) -> float:
    """Symmetry defect of the form's own-variable derivative at one probe."""
    s = _fd_step(max(x.norm(), y.norm()))
    if wrt_x:
        d_a = (form(x + s * d2, y, d1) - form(x - s * d2, y, d1)) * (1.0 / (2 * s))
        d_b = (form(x + s * d1, y, d2) - form(x - s * d1, y, d2)) * (1.0 / (2 * s))
    else:
        d_a = (form(x, y + s * d2, d1) - form(x, y - s * d2, d1)) * (1.0 / (2 * s))
        d_b = (form(x, y + s * d1, d2) - form(x, y - s * d1, d2)) * (1.0 / (2 * s))
    return (d_a - d_b).norm()


def exactness_check(m: BiForm, n: BiForm, probes: int = DEFAULT_PROBES, seed: int = 0,
                    tol: float = 1e-5) -> Report:
    """Three conditions for M o dx + N o dy = 0 to admit a potential.

    dM/dx and dN/dy must be symmetric, and the cross condition matches
    dM/dy o (dx, dy) with dN/dx o (dy, dx) - the argument order matters, the
    first slot is the form's own differential, the second the direction of
    differentiation.
    """
    rng = np.random.default_rng(seed)
    alg = m.algebra
    worst = {"sym_x": 0.0, "sym_y": 0.0, "cross": 0.0}
    witness = None
    for _ in range(probes):
        x, y, dx1, dx2, dy1 = (random_element(alg, rng) for _ in range(5))
        s = _fd_step(max(x.norm(), y.norm()))
        worst["sym_x"] = max(worst["sym_x"], _sym_defect(m, x, y, dx1, dx2, wrt_x=True))
        worst["sym_y"] = max(worst["sym_y"], _sym_defect(n, x, y, dx1, dy1, wrt_x=False))
        cross_a = (m(x, y + s * dy1, dx1) - m(x, y - s * dy1, dx1)) * (1.0 / (2 * s))
        cross_b = (n(x + s * dx1, y, dy1) - n(x - s * dx1, y, dy1)) * (1.0 / (2 * s))
        c = (cross_a - cross_b).norm()
        if c > worst["cross"]:
            worst["cross"] = c
            witness = {"x": list(x.coeffs), "y": list(y.coeffs),
                       "dx": list(dx1.coeffs), "dy": list(dy1.coeffs), "violation": c}
    residual = max(worst.values())
    verdict = residual <= tol
    return Report(verdict=verdict, residual=residual,
                  witness=None if verdict else witness, metrics=dict(worst))


def implicit_solution_check(u: Callable[[Element, Element], Element], m: BiForm, n: BiForm,
                            probes: int = DEFAULT_PROBES, seed: int = 0,
                            tol: float = FD_TOL) -> Report:
    """Do the partials of u reproduce M and N? Checked by central differences."""
    rng = np.random.default_rng(seed)
    alg = m.algebra
    worst = 0.0
    witness = None
    for _ in range(probes):
        x, y, dx, dy = (random_element(alg, rng) for _ in range(4))
        s = _fd_step(max(x.norm(), y.norm()))
        rx = ((u(x + s * dx, y) - u(x - s * dx, y)) * (1.0 / (2 * s)) - m(x, y, dx)).norm()
        ry = ((u(x, y + s * dy) - u(x, y - s * dy)) * (1.0 / (2 * s)) - n(x, y, dy)).norm()
        r = max(rx, ry)
        if r > worst:
            worst = r
            witness = {"x": list(x.coeffs), "y": list(y.coeffs), "residual": r}
    verdict = worst <= tol
    return Report(verdict=verdict, residual=worst, witness=None if verdict else witness)


# ---------------------------------------------------------------------------
# homogeneous linear systems in the four product forms


class OdeForm(enum.Enum):
    RC_LEFT = "rc_left"     # x' = a rc x, column state
    CR_RIGHT = "cr_right"   # x' = x cr a, column state
    CR_LEFT = "cr_left"     # x' = a cr x, row state
    RC_RIGHT = "rc_right"   # x' = x rc a, row state


_ROW_FORMS = (OdeForm.CR_LEFT, OdeForm.RC_RIGHT)


@dataclass(frozen=True)
class LinearOde:
    """x' = (a, x product per form) with x(0) = init."""

    a: BiMatrix
    form: OdeForm
    init: tuple[Element, ...]

    def __post_init__(self):
        if self.a.rows != self.a.cols:
            raise ValueError("coefficient matrix must be square")
        init = tuple(self.init)
        if len(init) != self.a.rows:
            raise ValueError("initial condition length must match the system size")
        object.__setattr__(self, "init", init)

    @property
    def size(self) -> int:
        return self.a.rows

    @property
    def algebra(self) -> AlgebraDesc:
        return self.a.algebra

    def rhs(self, xs: Sequence[Element]) -> tuple[Element, ...]:
        mat = _state_matrix(self, xs)
        if self.form is OdeForm.RC_LEFT:
            out = rc_mul(self.a, mat)
        elif self.form is OdeForm.CR_RIGHT:
            out = cr_mul(mat, self.a)
        elif self.form is OdeForm.CR_LEFT:
            out = cr_mul(self.a, mat)
        else:
            out = rc_mul(mat, self.a)
        return _state_tuple(self, out)

    def real_matrix(self) -> np.ndarray:
        """The rhs as a real linear map on stacked coefficient vectors."""
        n, d = self.size, self.algebra.dim
        m = np.zeros((n * d, n * d))
        for i in range(n):
            for j in range(n):
                if self.form is OdeForm.RC_LEFT:
                    block = left_matrix(self.a.entry(i, j))
                elif self.form is OdeForm.CR_RIGHT:
                    block = right_matrix(self.a.entry(i, j))
                elif self.form is OdeForm.CR_LEFT:
                    block = left_matrix(self.a.entry(j, i))
                else:
                    block = right_matrix(self.a.entry(j, i))
                m[i * d:(i + 1) * d, j * d:(j + 1) * d] = block
        return m


def _state_matrix(ode: LinearOde, xs: Sequence[Element]) -> BiMatrix:
    xs = list(xs)
    if ode.form in _ROW_FORMS:
        return BiMatrix.from_elements([xs])
    return BiMatrix.from_elements([[x] for x in xs])


def _state_tuple(ode: LinearOde, mat: BiMatrix) -> tuple[Element, ...]:
    if ode.form in _ROW_FORMS:
        return tuple(mat.entry(0, j) for j in range(mat.cols))
    return tuple(mat.entry(i, 0) for i in range(mat.rows))


@dataclass(frozen=True)
class SolutionCurve:
    """Evaluable candidate solution with a provenance tag."""

    evaluator: Callable[[float], tuple[Element, ...]]
    provenance: str
    t_span: tuple[float, float] = (-math.inf, math.inf)

    def __call__(self, t: float) -> tuple[Element, ...]:
        return self.evaluator(float(t))


def closed_form_solution(ode: LinearOde, p: SeriesParams = DEFAULT_PARAMS) -> SolutionCurve:
    """Matrix exponential of t*a combined with the initial value per form."""
    init_mat = _state_matrix(ode, ode.init)

    def evaluate(t: float) -> tuple[Element, ...]:
        if t == 0.0:
            return ode.init
        if ode.form is OdeForm.RC_LEFT:
            out = rc_mul(mexp_rc(ode.a * t, p), init_mat)
        elif ode.form is OdeForm.CR_RIGHT:
            out = cr_mul(init_mat, mexp_cr(ode.a * t, p))
        elif ode.form is OdeForm.CR_LEFT:
            out = cr_mul(mexp_cr(ode.a * t, p), init_mat)
        else:
            out = rc_mul(init_mat, mexp_rc(ode.a * t, p))
        return _state_tuple(ode, out)

    return SolutionCurve(evaluate, "closed-form")


def successive_powers(ode: LinearOde, n: int) -> list[BiMatrix]:
    """[a^0, ..., a^n] under the ode's product; the k-th gives d^k x/dt^k."""
    power = rc_pow if ode.form in (OdeForm.RC_LEFT, OdeForm.RC_RIGHT) else cr_pow
    return [power(ode.a, k) for k in range(n + 1)]


def eigen_solution(b: Element, c: Sequence[Element], side: str = "left") -> SolutionCurve:
    """Curve t -> e^{bt} c (side="left") or t -> c e^{bt} (side="right")."""
    c = tuple(c)
    if all(e.norm() == 0.0 for e in c):
        raise ValueError("eigen solution needs a nonzero vector")
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")

    def evaluate(t: float) -> tuple[Element, ...]:
        e = exp_at(b, t)
        if side == "left":
            return tuple(e * ci for ci in c)
        return tuple(ci * e for ci in c)

    return SolutionCurve(evaluate, "eigen")


def eigen_conditions(ode: LinearOde, b: Element, c: Sequence[Element],
                     tol: float = 1e-9) -> Report:
    """Sufficient conditions for e^{bt}-type curves to solve the system.

    Either every coefficient entry or every component of c must commute
    with b; when neither holds the report flags "conditions not met".
    """
    a_ok = all(
        in_centralizer(ode.a.entry(i, j), b, tol)
        for i in range(ode.size)
        for j in range(ode.size)
    )
    c_ok = all(in_centralizer(ci, b, tol) for ci in c)
    met = a_ok or c_ok
    return Report(
        verdict=met,
        metrics={
            "matrix_entries_commute": a_ok,
            "vector_entries_commute": c_ok,
            "note": None if met else "conditions not met",
        },
    )


def solution_residual(ode: LinearOde, curve: SolutionCurve, ts: Sequence[float],
                      tol: float = FD_TOL) -> Report:
    """Max over ts of |finite-difference d curve/dt - rhs(curve(t))|."""
    worst = 0.0
    witness = None
    for t in ts:
        s = _fd_step(abs(t))
        plus = curve(t + s)
        minus = curve(t - s)
        rhs = ode.rhs(curve(t))
        for i in range(ode.size):
            fd = (plus[i] - minus[i]) * (1.0 / (2 * s))
            r = (fd - rhs[i]).norm()
            if r > worst:
                worst = r
                witness = {"t": t, "component": i, "residual": r}
    verdict = worst <= tol
    return Report(verdict=verdict, residual=worst, witness=None if verdict else witness,
                  metrics={"provenance": curve.provenance})


def rk4_steps_for(t_end: float, tol: float = FD_TOL) -> int:
    """Step count making the O(h^4) global error a tenth of the tolerance."""
    return max(1, math.ceil(abs(t_end) / (0.1 * tol) ** 0.25))


def rk4_integrate(ode: LinearOde, t_end: float, steps: int) -> SolutionCurve:
    """Classical RK4 on the flattened real coefficient representation.

    The returned curve re-integrates from 0 on every evaluation, keeping the
    step size at or below t_end/steps (so the stated global error bound holds
    at every requested time, including slightly outside [0, t_end] for
    finite-difference probes).
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    m = ode.real_matrix()
    x0 = np.concatenate([e.coeffs for e in ode.init])
    h_target = abs(t_end) / steps if t_end else 1.0 / steps
    alg, n, d = ode.algebra, ode.size, ode.algebra.dim

    def evaluate(t: float) -> tuple[Element, ...]:
        if t == 0.0:
            return ode.init
        nsteps = max(1, math.ceil(abs(t) / h_target))
        vec = _kernels.rk4_linear(m, x0, t, nsteps)
        return tuple(Element(alg, vec[i * d:(i + 1) * d]) for i in range(n))

    return SolutionCurve(evaluate, "rk4", t_span=(0.0, t_end))


# ---------------------------------------------------------------------------
# the elliptic quaternion system and its constructed curves


def elliptic_ode(algebra: AlgebraDesc) -> LinearOde:
    """x1' = x2, x2' = -x1 with x(0) = (0, 1), in rc-left form."""
    o, z = one(algebra), zero(algebra)
    a = BiMatrix.from_elements([[z, o], [-o, z]])
    return LinearOde(a, OdeForm.RC_LEFT, (z, o))


def hyperbolic_ode(algebra: AlgebraDesc, f: Element | None = None) -> LinearOde:
    """x1' = f x2, x2' = f x1 with x(0) = (0, 1), in rc-left form."""
    if f is None:
        f = one(algebra)
    z = zero(algebra)
    a = BiMatrix.from_elements([[z, f], [f, z]])
    return LinearOde(a, OdeForm.RC_LEFT, (z, one(algebra)))


def elliptic_two_exp_curve(algebra: AlgebraDesc, b1: Element | None = None,
                           b2: Element | None = None) -> SolutionCurve:
    """Left-combination of two imaginary-axis exponentials matching x(0) = (0, 1).

    x1 = C (e^{b1 t} - e^{b2 t}), x2 = C (b1 e^{b1 t} - b2 e^{b2 t}) with
    C = (b1 - b2)^{-1}; both b's square to -1, so each summand solves the
    elliptic system and the combination pins the initial condition.
    """
    if algebra.tag != "quaternion":
        raise ValueError("the constructed elliptic curves live in the quaternions")
    if b1 is None:
        b1 = basis(algebra, 1)
    if b2 is None:
        b2 = basis(algebra, 2)
    c = el_inv(b1 - b2)

    def evaluate(t: float) -> tuple[Element, Element]:
        e1 = exp_at(b1, t)
        e2 = exp_at(b2, t)
        return (c * (e1 - e2), c * (b1 * e1 - b2 * e2))

    return SolutionCurve(evaluate, "two-exponential")


def elliptic_family(c_param: Element) -> SolutionCurve:
    """Three-exponential family solving the elliptic system for every parameter.

    x1 = C1 e^{it} + C2 e^{jt} + C3 e^{kt} and x2 = x1' with
    C1 = C, C2 = ((k - j) + C(-1 + i + j + k))/2,
    C3 = ((j - k) - C(1 + i + j + k))/2; for every C the curve satisfies
    x(0) = (0, 1).
    """
    algebra = c_param.algebra
    if algebra.tag != "quaternion":
        raise ValueError("the three-exponential family lives in the quaternions")
    e0, i, j, k = (basis(algebra, m) for m in range(4))
    c1 = c_param
    c2 = 0.5 * (-(j - k) + c_param * (-e0 + i + j + k))
    c3 = 0.5 * ((j - k) - c_param * (e0 + i + j + k))
    pairs = ((c1, i), (c2, j), (c3, k))

    def evaluate(t: float) -> tuple[Element, Element]:
        x1 = zero(algebra)
        x2 = zero(algebra)
        for coeff, b in pairs:
            e = exp_at(b, t)
            x1 = x1 + coeff * e
            x2 = x2 + coeff * (b * e)
        return (x1, x2)

    return SolutionCurve(evaluate, "three-exponential-family")


# ---------------------------------------------------------------------------
# data forms

_FORM_BY_NAME = {f.value: f for f in OdeForm}


def ode_to_data(ode: LinearOde) -> dict:
    from .algebra import element_to_data

    return {
        "matrix": matrix_to_data(ode.a),
        "form": ode.form.value,
        "init": [element_to_data(e) for e in ode.init],
    }


def ode_from_data(data: dict) -> LinearOde:
    from .algebra import element_from_data

    return LinearOde(
        matrix_from_data(data["matrix"]),
        _FORM_BY_NAME[data["form"]],
        tuple(element_from_data(e) for e in data["init"]),
    )


def run_ode_fixture(data: dict, p: SeriesParams = DEFAULT_PARAMS) -> Report:
    """Run a scenario fixture: {"ode": {...}, "checks": [...]}.

    Supported checks: {"kind": "residual", "ts": [...], "tol": ...} verifies
    the closed-form curve against the equation, and {"kind": "rk4-match",
    "t_end": ..., "steps": ..., "points": ..., "tol": ...} compares it with
    the RK4 oracle. The combined verdict requires every check to pass.
    """
    ode = ode_from_data(data["ode"])
    closed = closed_form_solution(ode, p)
    verdict = True
    worst = 0.0
    details = []
    for check in data["checks"]:
        kind = check["kind"]
        tol = float(check.get("tol", FD_TOL))
        if kind == "residual":
            rep = solution_residual(ode, closed, check["ts"], tol=tol)
            verdict = verdict and rep.verdict
            worst = max(worst, rep.residual)
            details.append({"kind": kind, "residual": rep.residual, "ok": rep.verdict})
        elif kind == "rk4-match":
            rk = rk4_integrate(ode, float(check["t_end"]), int(check["steps"]))
            gap = 0.0
            for t in np.linspace(0.0, float(check["t_end"]), int(check.get("points", 11))):
                gap = max(gap, max((u - v).norm() for u, v in zip(closed(t), rk(t))))
            ok = gap <= tol
            verdict = verdict and ok
            worst = max(worst, gap)
            details.append({"kind": kind, "gap": gap, "ok": ok})
        else:
            raise ValueError(f"unknown check kind {kind!r}")
    return Report(verdict=verdict, residual=worst, metrics={"checks": details})
