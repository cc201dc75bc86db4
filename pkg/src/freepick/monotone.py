"""Monotonicity certification for real free power series.

The x_k-localizing matrix of a series sum c_I X^I is the word-indexed matrix
with entry (I, J) = c_{I* x_k J}. A locally monotone series has every such
matrix positive semidefinite, so a negative eigenvalue at any truncation
degree refutes monotonicity of the truncated series near 0, while a PSD
verdict is an explicit degree-L certificate (a necessary-condition check of
the infinite statement, never a proof for the untruncated function).

The PSD square roots of the localizing matrices give the factorized
(Hamburger) form of the derivative, and freezing the evaluation point turns
the derivative into a linear map whose complete positivity is checked
through its Choi matrix and Kraus operators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.linalg as la

from . import words as W
from .matcore import (
    DEFAULT_PSD_TOL,
    DomainError,
    MatrixTuple,
    PsdReport,
    hermitianize,
    psd_min_eig,
    sample,
    spectral_norm,
)
from .series import (
    FreeSeries,
    derivative,
    eval_series,
    monomial_vector,
    require_real_free,
)


@dataclass(frozen=True)
class Witness:
    """Refutation data: a unit vector u with u* M_k u = min_eig < -tol."""

    k: int
    vector: np.ndarray
    min_eig: float


@dataclass(frozen=True)
class LocalizingCertificate:
    d: int
    degree: int
    matrices: tuple[np.ndarray, ...]
    reports: tuple[PsdReport, ...]
    verdict: str  # "certified_psd" | "refuted"
    witness: Witness | None
    #: localizing entries read coefficients up to this degree (absent -> 0)
    coefficient_horizon: int

    @property
    def certified(self) -> bool:
        return self.verdict == CERTIFIED_PSD


CERTIFIED_PSD = "certified_psd"
REFUTED = "refuted"


def localizing_matrix(f: FreeSeries, k: int, L: int, budget: int = W.WORD_BUDGET) -> np.ndarray:
    """The truncated x_k-localizing matrix (c_{I* x_k J})_{I,J}, |I|,|J| <= L."""
    if not 1 <= k <= f.d:
        raise ValueError(f"letter k={k} is outside 1..{f.d}")
    order = W.enumerate_words(f.d, L, budget=budget)
    count = len(order)
    M = np.zeros((count, count), dtype=np.complex128)
    for i, I in enumerate(order.words):
        left = W.involute(I) + (k,)
        for j, J in enumerate(order.words):
            c = f.coeffs.get(left + J)
            if c is not None:
                M[i, j] = c
    return M


def certify_monotone(f: FreeSeries, L: int, tol: float = DEFAULT_PSD_TOL) -> LocalizingCertificate:
    """PSD-check every letter's localizing matrix at degree L.

    Refutation carries the worst letter's unit eigenvector as a witness.
    The verdict is invariant under scaling f by a positive constant.
    """
    require_real_free(f, "certify_monotone")
    matrices = []
    reports = []
    worst: tuple[int, float] | None = None
    for k in range(1, f.d + 1):
        M = localizing_matrix(f, k, L)
        matrices.append(M)
        rep = psd_min_eig(M, tol)
        reports.append(rep)
        if not rep.is_psd and (worst is None or rep.min_eig < worst[1]):
            worst = (k, rep.min_eig)
    witness = None
    verdict = CERTIFIED_PSD
    if worst is not None:
        verdict = REFUTED
        k = worst[0]
        vals, vecs = la.eigh(hermitianize(matrices[k - 1]))
        witness = Witness(k=k, vector=vecs[:, 0], min_eig=float(vals[0]))
    return LocalizingCertificate(
        d=f.d,
        degree=L,
        matrices=tuple(matrices),
        reports=tuple(reports),
        verdict=verdict,
        witness=witness,
        coefficient_horizon=2 * L + 1,
    )


@dataclass(frozen=True)
class HamburgerModel:
    """PSD square roots F_k of the localizing matrices at degree L.

    reconstruct(X, H) evaluates the factorized derivative
    sum_k m_X* (F_k (x) I)(I (x) H_k)(F_k (x) I) m_X, which converges to
    Df(X)[H] as L grows on decay-validated series.
    """

    degree: int
    factors: tuple[np.ndarray, ...]
    certificate: LocalizingCertificate

    def reconstruct(self, X: MatrixTuple, H: MatrixTuple) -> np.ndarray:
        m = monomial_vector(X, self.degree)
        count = m.shape[0] // X.n
        eye_n = np.eye(X.n)
        eye_c = np.eye(count)
        acc = np.zeros((X.n, X.n), dtype=np.complex128)
        for F, Hk in zip(self.factors, H.mats):
            S = np.kron(F, eye_n)
            acc += m.conj().T @ S @ np.kron(eye_c, Hk) @ S @ m
        return acc


def hamburger_factor(f: FreeSeries, L: int, tol: float = DEFAULT_PSD_TOL) -> HamburgerModel:
    """Factor each localizing matrix as F_k* F_k with F_k its PSD square root.

    Eigenvalues in [-tol * (1 + ||M||), 0] are clipped to 0; anything more
    negative means the certificate refused and this raises instead.
    """
    cert = certify_monotone(f, L, tol)
    if not cert.certified:
        w = cert.witness
        raise DomainError(
            f"localizing matrix for letter {w.k} has min_eig {w.min_eig:.3e}; "
            "no PSD factorization (see the refuting certificate)"
        )
    factors = []
    for M in cert.matrices:
        vals, vecs = la.eigh(hermitianize(M))
        vals = np.clip(vals, 0.0, None)
        factors.append((vecs * np.sqrt(vals)) @ vecs.conj().T)
    return HamburgerModel(degree=L, factors=tuple(factors), certificate=cert)


@dataclass(frozen=True)
class ChoiCoordinate:
    k: int
    choi: np.ndarray
    report: PsdReport
    kraus: tuple[np.ndarray, ...]
    reconstruction_residual: float | None


@dataclass(frozen=True)
class ChoiReport:
    coordinates: tuple[ChoiCoordinate, ...]

    @property
    def min_eig(self) -> float:
        return min(c.report.min_eig for c in self.coordinates)

    @property
    def all_cp(self) -> bool:
        return all(c.report.is_psd for c in self.coordinates)


def choi_at(f: FreeSeries, X: MatrixTuple, tol: float = DEFAULT_PSD_TOL) -> ChoiReport:
    """Choi/Kraus analysis of the per-coordinate derivative maps at X.

    For each coordinate k, D_k(H) = Df(X)[H in slot k] and the Choi matrix
    is C_k = sum_{p,q} E_pq (x) D_k(E_pq). If C_k is PSD, the Kraus
    operators from its spectral decomposition reconstruct D_k as
    sum_j V_j* H V_j; a negative eigenvalue reports failure of complete
    positivity (local monotonicity fails at X).
    """
    if not X.is_selfadjoint():
        raise DomainError("choi_at needs a self-adjoint tuple")
    if f.decay_rate is not None and f.d * X.max_norm() >= f.decay_rate:
        raise DomainError(
            f"point radius {X.max_norm():.3g} is outside the evaluation domain "
            f"(d * rho >= decay_rate {f.decay_rate:.3g})"
        )
    n = X.n
    zero = np.zeros((n, n))
    coords = []
    for k in range(1, f.d + 1):
        images = {}
        C = np.zeros((n * n, n * n), dtype=np.complex128)
        for p in range(n):
            for q in range(n):
                E = np.zeros((n, n))
                E[p, q] = 1.0
                H = MatrixTuple(tuple(E if i == k - 1 else zero for i in range(f.d)))
                D = derivative(f, X, H, method="block")
                images[(p, q)] = D
                C[p * n : (p + 1) * n, q * n : (q + 1) * n] = D
        rep = psd_min_eig(C, tol)
        kraus: tuple[np.ndarray, ...] = ()
        residual = None
        if rep.is_psd:
            vals, vecs = la.eigh(hermitianize(C))
            trace = float(np.trace(C).real)
            cutoff = tol * max(trace, 0.0)
            ops = []
            for j in range(len(vals) - 1, -1, -1):
                if vals[j] <= cutoff:
                    break
                ops.append(np.conj(np.sqrt(vals[j]) * vecs[:, j]).reshape(n, n))
            kraus = tuple(ops)
            residual = 0.0
            for (p, q), D in images.items():
                E = np.zeros((n, n))
                E[p, q] = 1.0
                rebuilt = sum((V.conj().T @ E @ V for V in kraus), start=np.zeros((n, n), dtype=np.complex128))
                residual = max(residual, spectral_norm(D - rebuilt) / (1 + spectral_norm(D)))
        coords.append(
            ChoiCoordinate(k=k, choi=C, report=rep, kraus=kraus, reconstruction_residual=residual)
        )
    return ChoiReport(coordinates=tuple(coords))


@dataclass(frozen=True)
class MonotoneSampleReport:
    trials: int
    violations: int
    worst_min_eig: float

    @property
    def clean(self) -> bool:
        return self.violations == 0


def sample_monotone_test(
    f: FreeSeries,
    n: int,
    trials: int = 100,
    seed: int = 0,
    tol: float = DEFAULT_PSD_TOL,
) -> MonotoneSampleReport:
    """Sampled check of monotonicity: X <= Y implies f(X) <= f(Y), locally too.

    Per trial draws a self-adjoint X in the evaluation domain, a PSD
    perturbation P with Y = X + eps P still inside, and a PSD direction H;
    checks f(Y) - f(X) >= -tol and Df(X)[H] >= -tol (relative verdicts).
    """
    require_real_free(f, "sample_monotone_test")
    if f.decay_rate is not None:
        radius = 0.45 * f.decay_rate / f.d
    else:
        radius = 0.5
    violations = 0
    worst = float("inf")
    for t in range(trials):
        base = sample("hermitian_tuple", n, f.d, seed + 31 * t)
        X = MatrixTuple(
            tuple(M * (radius / max(spectral_norm(M), 1e-30)) for M in base.mats)
        )
        P = sample("psd_direction", n, f.d, seed + 31 * t + 1)
        eps = 0.1 * radius / max(max(spectral_norm(M) for M in P.mats), 1e-30)
        Y = MatrixTuple(tuple(Xi + eps * Pi for Xi, Pi in zip(X.mats, P.mats)))
        gap = eval_series(f, Y).value - eval_series(f, X).value
        rep_gap = psd_min_eig(hermitianize(gap), tol)
        H = sample("psd_direction", n, f.d, seed + 31 * t + 2)
        D = derivative(f, X, H, method="block")
        rep_der = psd_min_eig(hermitianize(D), tol)
        for rep in (rep_gap, rep_der):
            worst = min(worst, rep.min_eig)
            if not rep.is_psd:
                violations += 1
    return MonotoneSampleReport(trials=trials, violations=violations, worst_min_eig=worst)
