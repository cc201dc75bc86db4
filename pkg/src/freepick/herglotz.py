"""Herglotz models on the free polydisk and the Cayley bridges.

A model is a unitary U on a d-fold direct sum H_d = H + ... + H together
with a unit vector v in H_d (a rank-one isometry from C) and a real shift
a. Two evaluation forms are provided: the Cayley form

    h(X) = (v* (x) I)(I + (U (x) I) delta(X))(I - (U (x) I) delta(X))^{-1}(v (x) I)

and the resolvent form

    h(X) = -i a I + (v* (x) I)(U (x) I - delta(X))^{-1}(U (x) I + delta(X))(v (x) I),

where delta(X) is the block-diagonal sum of the I_m (x) X_i. Both have
positive real part on strict contraction tuples and h(0) = I when a = 0.
The two forms are distinct parameterizations of the class, not the same
function of (U, v) in general; for scalar models both reduce to Moebius
maps, which coincide exactly when U is real.

The bridges move between the Pick class on the matricial half-plane and
the Herglotz class on the polydisk through the coordinatewise Cayley
transform, and schur_cayley passes on to the contractive Schur class.
lurking_unitary_reduce is the block-compression step that shrinks a
structured isometry [[A, B], [C, D]] to D - C (I + A)^{-1} B.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import numpy.linalg as la

from .matcore import (
    CONTRACTION_MARGIN,
    DISK_TO_HALF,
    HALF_TO_DISK,
    DomainError,
    MatrixTuple,
    as_complex_matrix,
    cayley,
    checked_solve,
    spectral_norm,
)

UNITARITY_TOL = 1e-10
UNIT_NORM_TOL = 1e-12

CAYLEY_FORM = "cayley"
RESOLVENT_FORM = "resolvent"
FORMS = (CAYLEY_FORM, RESOLVENT_FORM)

PICK_TO_HERGLOTZ = "pick_to_herglotz"
HERGLOTZ_TO_PICK = "herglotz_to_pick"


@dataclass(frozen=True)
class HerglotzModel:
    """Model data (U unitary on H_d, unit vector v, real shift a)."""

    d: int
    m: int
    U: np.ndarray
    v: np.ndarray
    a: float = 0.0

    def __post_init__(self) -> None:
        if self.d < 1 or self.m < 1:
            raise ValueError("d and m must be positive")
        size = self.d * self.m
        U = as_complex_matrix(self.U, "U")
        if U.shape != (size, size):
            raise ValueError(f"U must be {size}x{size} (dm x dm), got {U.shape}")
        if spectral_norm(U.conj().T @ U - np.eye(size)) > UNITARITY_TOL:
            raise ValueError(f"U is not unitary within {UNITARITY_TOL:g}")
        v = np.asarray(self.v, dtype=np.complex128).reshape(-1)
        if v.shape != (size,):
            raise ValueError(f"v must have length {size}, got {v.shape[0]}")
        if abs(la.norm(v) - 1.0) > UNIT_NORM_TOL:
            raise ValueError(f"v must be a unit vector within {UNIT_NORM_TOL:g}")
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "a", float(self.a))


def delta(X: MatrixTuple, m: int) -> np.ndarray:
    """Block-diagonal sum of the I_m (x) X_i, a dmn x dmn matrix."""
    n = X.n
    size = X.d * m * n
    out = np.zeros((size, size), dtype=np.complex128)
    step = m * n
    for i, Xi in enumerate(X.mats):
        out[i * step : (i + 1) * step, i * step : (i + 1) * step] = np.kron(np.eye(m), Xi)
    return out


def _require_strict_contractions(X: MatrixTuple) -> None:
    for i, Xi in enumerate(X.mats, start=1):
        r = spectral_norm(Xi)
        if r > 1.0 - CONTRACTION_MARGIN:
            raise DomainError(
                f"coordinate {i} has norm {r:.6g}; evaluation needs "
                f"strict contractions (norm <= {1.0 - CONTRACTION_MARGIN})"
            )


def eval_herglotz(model: HerglotzModel, X: MatrixTuple, form: str = CAYLEY_FORM) -> np.ndarray:
    """Evaluate the model at a strict contraction tuple in either form."""
    if form not in FORMS:
        raise ValueError(f"form must be one of {FORMS}, got {form!r}")
    if X.d != model.d:
        raise ValueError(f"X has {X.d} coordinates, the model has {model.d}")
    _require_strict_contractions(X)
    n = X.n
    eye_n = np.eye(n)
    D = delta(X, model.m)
    v_col = np.kron(model.v.reshape(-1, 1), eye_n)
    v_row = np.kron(model.v.conj().reshape(1, -1), eye_n)
    UI = np.kron(model.U, eye_n)
    if form == CAYLEY_FORM:
        full = np.eye(D.shape[0])
        sol = checked_solve(full - UI @ D, v_col, "Herglotz Cayley kernel")
        return v_row @ (full + UI @ D) @ sol
    sol = checked_solve(UI - D, (UI + D) @ v_col, "Herglotz resolvent")
    return -1j * model.a * eye_n + v_row @ sol


def herglotz_evaluator(model: HerglotzModel, form: str = CAYLEY_FORM) -> Callable[[MatrixTuple], np.ndarray]:
    """The model as a black-box evaluator (axiom fuzzing, bridges)."""

    def ev(X: MatrixTuple) -> np.ndarray:
        return eval_herglotz(model, X, form)

    return ev


def pick_herglotz_bridge(
    fn: Callable[[MatrixTuple], np.ndarray], direction: str
) -> Callable[[MatrixTuple], np.ndarray]:
    """Conjugate an evaluator by the coordinatewise Cayley transform.

    pick_to_herglotz turns f on the matricial half-plane into
    h(X) = -i f(Z(X)) on the polydisk, with Z_i = i (I - X_i)^{-1}(I + X_i);
    herglotz_to_pick is the inverse, f(Z) = i h(X(Z)). The two compose to
    the identity wherever the coordinate transforms are defined.
    """
    if direction == PICK_TO_HERGLOTZ:

        def bridged(X: MatrixTuple) -> np.ndarray:
            return -1j * fn(cayley(X, DISK_TO_HALF))

    elif direction == HERGLOTZ_TO_PICK:

        def bridged(Z: MatrixTuple) -> np.ndarray:
            return 1j * fn(cayley(Z, HALF_TO_DISK))

    else:
        raise ValueError(
            f"direction must be {PICK_TO_HERGLOTZ!r} or {HERGLOTZ_TO_PICK!r}, got {direction!r}"
        )
    return bridged


def schur_cayley(
    h_eval: Callable[[MatrixTuple], np.ndarray]
) -> Callable[[MatrixTuple], np.ndarray]:
    """Cayley image phi(X) = (h(X) - I)(h(X) + I)^{-1} of a Herglotz evaluator."""

    def phi(X: MatrixTuple) -> np.ndarray:
        h = np.asarray(h_eval(X))
        eye = np.eye(h.shape[0])
        return checked_solve((h + eye).T, (h - eye).T, "Schur Cayley step").T

    return phi


def lurking_unitary_reduce(W: np.ndarray, top_dim: int, tol: float = 1e-9) -> np.ndarray:
    """Compress a block isometry [[A, B], [C, D]] to U = D - C (I + A)^{-1} B.

    A is the leading top_dim x top_dim block. If W is an isometry the
    output is one (a unitary stays unitary); validation happens here for W
    and is left to the caller for U, whose defect the reduction bounds by
    the input defect. The inversion needs I + A nonsingular, a precondition
    the compression formula itself imposes.
    """
    W = as_complex_matrix(W, "W")
    rows, cols = W.shape
    if not 0 < top_dim < min(rows, cols):
        raise ValueError(f"top_dim must split {W.shape} into four blocks, got {top_dim}")
    defect = spectral_norm(W.conj().T @ W - np.eye(cols))
    if defect > tol:
        raise DomainError(f"W is not an isometry within {tol:g} (defect {defect:.3e})")
    A = W[:top_dim, :top_dim]
    B = W[:top_dim, top_dim:]
    C = W[top_dim:, :top_dim]
    D = W[top_dim:, top_dim:]
    return D - C @ checked_solve(np.eye(top_dim) + A, B, "lurking-unitary compression")
