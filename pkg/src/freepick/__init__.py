"""freepick: numerics for free (noncommutative) function calculus.

Free power series on matrix tuples, localizing-matrix monotonicity
certificates, Choi/Kraus analysis of derivative maps, Nevanlinna
type 1-4 representations with asymptotic classification, Herglotz
models on the free polydisk, and Szego-kernel interpolation in the
coefficient Hardy space.
"""

from .hardy import SzegoFrame, min_norm_interpolate, szego_kernels
from .herglotz import HerglotzModel, eval_herglotz, lurking_unitary_reduce
from .matcore import CalcError, MatrixTuple, cayley, psd_min_eig
from .monotone import certify_monotone, choi_at, hamburger_factor, localizing_matrix
from .nevanlinna import (
    RepresentationSpec,
    asymptotic_probe,
    classify_type,
    eval_representation,
)
from .series import FreeSeries, axiom_verify, derivative, eval_series

__version__ = "0.1.0"

__all__ = [
    "CalcError",
    "FreeSeries",
    "HerglotzModel",
    "MatrixTuple",
    "RepresentationSpec",
    "SzegoFrame",
    "asymptotic_probe",
    "axiom_verify",
    "cayley",
    "certify_monotone",
    "choi_at",
    "classify_type",
    "derivative",
    "eval_herglotz",
    "eval_representation",
    "eval_series",
    "hamburger_factor",
    "localizing_matrix",
    "min_norm_interpolate",
    "psd_min_eig",
    "szego_kernels",
    "__version__",
]
