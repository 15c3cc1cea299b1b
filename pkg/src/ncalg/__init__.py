"""Calculus and linear algebra over noncommutative division algebras.

The package covers arithmetic in the reals, complexes and quaternions
(algebra), symbolic tensor-monomial polynomials with order-k derivatives
(tensor), matrices under both biring products with quasideterminants,
inverses and rank (biring), series exponentials and quasiexponentials
(series), and integrability/exactness checking plus homogeneous linear
systems in four product forms (diffeq). The cli module exposes batch
scenarios over the worked examples.
"""

from .algebra import (
    AlgebraDesc,
    AlgebraError,
    Element,
    NotInvertibleError,
    make_algebra,
)
from .biring import (
    BiMatrix,
    MinorSelector,
    QuasideterminantUndefinedError,
    SingularMatrixError,
)
from .diffeq import BiForm, FormPoly, LinearOde, OdeForm, SolutionCurve
from .report import Report
from .series import SeriesBudgetError, SeriesParams
from .tensor import SlotTensor, Tensor, TensorPolynomial

__all__ = [
    "AlgebraDesc",
    "AlgebraError",
    "BiForm",
    "BiMatrix",
    "Element",
    "FormPoly",
    "LinearOde",
    "MinorSelector",
    "NotInvertibleError",
    "OdeForm",
    "QuasideterminantUndefinedError",
    "Report",
    "SeriesBudgetError",
    "SeriesParams",
    "SingularMatrixError",
    "SlotTensor",
    "SolutionCurve",
    "Tensor",
    "TensorPolynomial",
    "make_algebra",
]

__version__ = "0.1.0"
