"""Finite-dimensional Nevanlinna representations of free Pick functions.

A representation is built from a self-adjoint operator A on C^m, a vector v,
a real constant a, and a positive decomposition of the identity: PSD
operators Y_1..Y_d with sum I (kinds 1-3), or pairwise-orthogonal
projections P_1..P_d (kind 4, where the space splits as N (+) K with A
acting on K alone). Evaluation at a tuple Z in the matricial half-plane
Pi^d goes through the structured resolvent of the kind, and the kind is
recoverable from growth of h along the ray (is, ..., is):

    kind 1: s|h(is chi)| stays bounded,
    kind 2: s Im h(is chi) stays bounded,
    kind 3: (1/s) Im h(is chi) -> 0,
    kind 4: no growth condition.

In finite dimensions kinds 2 and 3 collapse (v always lies in the domain of
A), so a kind-3 built function classifies as type 2. The classifier takes
the lowest-numbered criterion that its three-point limit heuristic accepts
and always ships the raw sequences so a caller can re-decide.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import numpy.linalg as la

from .matcore import (
    DEFAULT_PSD_TOL,
    DomainError,
    MatrixTuple,
    checked_solve,
    imag_part,
    psd_min_eig,
    sample,
    spectral_norm,
)

STRUCTURE_TOL = 1e-10
PROBE_REL_TOL = 1e-3
PROBE_ABS_TOL = 1e-9


def _as_vector(v, m: int) -> np.ndarray:
    arr = np.asarray(v, dtype=np.complex128).reshape(-1)
    if arr.shape != (m,):
        raise ValueError(f"v must be a length-{m} vector, got shape {np.asarray(v).shape}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError("v has non-finite entries")
    return arr


def _check_hermitian(A: np.ndarray, name: str) -> None:
    if spectral_norm(A - A.conj().T) > STRUCTURE_TOL:
        raise ValueError(f"{name} is not Hermitian within {STRUCTURE_TOL:g}")


@dataclass(frozen=True)
class RepresentationSpec:
    """Data of a type 1-4 Nevanlinna representation on C^m.

    kinds 1-3 carry a positive decomposition Y (kind 1 additionally has
    a = 0); kind 4 carries orthogonal projections P, the size dimN of the
    N block (the space is ordered N-first), and A on the K block only.
    """

    kind: int
    a: float
    m: int
    A: np.ndarray
    v: np.ndarray
    Y: tuple[np.ndarray, ...] | None = None
    P: tuple[np.ndarray, ...] | None = None
    dimN: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in (1, 2, 3, 4):
            raise ValueError(f"kind must be 1..4, got {self.kind}")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "A", np.asarray(self.A, dtype=np.complex128))
        object.__setattr__(self, "v", _as_vector(self.v, self.m))
        if self.kind == 1 and self.a != 0.0:
            raise ValueError("kind 1 requires a = 0")
        if self.kind == 4:
            self._check_kind4()
        else:
            self._check_positive_decomposition()

    def _check_positive_decomposition(self) -> None:
        if self.Y is None:
            raise ValueError(f"kind {self.kind} requires a positive decomposition Y")
        if self.P is not None:
            raise ValueError("Y-kinds do not take projections P")
        mats = tuple(np.asarray(Yi, dtype=np.complex128) for Yi in self.Y)
        object.__setattr__(self, "Y", mats)
        if self.A.shape != (self.m, self.m):
            raise ValueError(f"A must be {self.m}x{self.m}, got {self.A.shape}")
        _check_hermitian(self.A, "A")
        total = np.zeros((self.m, self.m), dtype=np.complex128)
        for i, Yi in enumerate(mats, start=1):
            if Yi.shape != (self.m, self.m):
                raise ValueError(f"Y_{i} must be {self.m}x{self.m}, got {Yi.shape}")
            _check_hermitian(Yi, f"Y_{i}")
            if la.eigvalsh((Yi + Yi.conj().T) / 2).min() < -STRUCTURE_TOL:
                raise ValueError(f"Y_{i} is not PSD within {STRUCTURE_TOL:g}")
            total += Yi
        if spectral_norm(total - np.eye(self.m)) > STRUCTURE_TOL:
            raise ValueError("sum of Y_i differs from the identity")

    def _check_kind4(self) -> None:
        if self.P is None or self.dimN is None:
            raise ValueError("kind 4 requires projections P and dimN")
        if self.Y is not None:
            raise ValueError("kind 4 does not take a positive decomposition Y")
        if not 0 <= self.dimN <= self.m:
            raise ValueError(f"dimN must lie in 0..{self.m}, got {self.dimN}")
        mats = tuple(np.asarray(Pi, dtype=np.complex128) for Pi in self.P)
        object.__setattr__(self, "P", mats)
        k = self.m - self.dimN
        if self.A.shape != (k, k):
            raise ValueError(
                f"A must act on the K block alone ({k}x{k}), got {self.A.shape}"
            )
        _check_hermitian(self.A, "A")
        total = np.zeros((self.m, self.m), dtype=np.complex128)
        for i, Pi in enumerate(mats, start=1):
            if Pi.shape != (self.m, self.m):
                raise ValueError(f"P_{i} must be {self.m}x{self.m}, got {Pi.shape}")
            _check_hermitian(Pi, f"P_{i}")
            if spectral_norm(Pi @ Pi - Pi) > STRUCTURE_TOL:
                raise ValueError(f"P_{i} is not idempotent within {STRUCTURE_TOL:g}")
            total += Pi
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                if spectral_norm(mats[i] @ mats[j]) > STRUCTURE_TOL:
                    raise ValueError(f"P_{i + 1} P_{j + 1} is not zero")
        if spectral_norm(total - np.eye(self.m)) > STRUCTURE_TOL:
            raise ValueError("sum of P_i differs from the identity")

    @property
    def d(self) -> int:
        return len(self.Y if self.Y is not None else self.P)

    @property
    def decomposition(self) -> tuple[np.ndarray, ...]:
        return self.Y if self.Y is not None else self.P


def delta_Y(spec: RepresentationSpec, Z: MatrixTuple) -> np.ndarray:
    """sum_i Y_i (x) Z_i (projections for kind 4), an mn x mn matrix."""
    if Z.d != spec.d:
        raise ValueError(f"Z has {Z.d} coordinates, the decomposition has {spec.d}")
    n = Z.n
    acc = np.zeros((spec.m * n, spec.m * n), dtype=np.complex128)
    for Yi, Zi in zip(spec.decomposition, Z.mats):
        acc += np.kron(Yi, Zi)
    return acc


def _require_half_plane(Z: MatrixTuple) -> None:
    for i, Zi in enumerate(Z.mats, start=1):
        if la.eigvalsh(imag_part(Zi)).min() <= 0:
            raise DomainError(f"coordinate {i} is not in the open matricial half-plane")


def eval_representation(spec: RepresentationSpec, Z: MatrixTuple) -> np.ndarray:
    """Evaluate the structured resolvent of spec.kind at Z in Pi^d."""
    _require_half_plane(Z)
    n = Z.n
    eye_n = np.eye(n)
    delta = delta_Y(spec, Z)
    v_col = np.kron(spec.v.reshape(-1, 1), eye_n)
    if spec.kind in (1, 2):
        G = np.kron(spec.A, eye_n) - delta
        sol = checked_solve(G, v_col, "structured resolvent")
        core = np.kron(spec.v.conj().reshape(1, -1), eye_n) @ sol
    elif spec.kind == 3:
        B = np.eye(spec.m) - 1j * spec.A
        G = np.kron(spec.A, eye_n) - delta
        w = la.solve(B, spec.v)
        mid = np.kron(w.reshape(-1, 1), eye_n)
        mid = mid + delta @ np.kron(spec.A, eye_n) @ mid
        sol = checked_solve(G, mid, "structured resolvent")
        core = np.kron((spec.v.conj() @ B).reshape(1, -1), eye_n) @ sol
    else:
        nN = spec.dimN
        k = spec.m - nN
        T = np.zeros((spec.m, spec.m), dtype=np.complex128)
        T[:nN, :nN] = -1j * np.eye(nN)
        T[nN:, nN:] = np.eye(k) - 1j * spec.A
        D1 = np.zeros((spec.m, spec.m), dtype=np.complex128)
        D1[:nN, :nN] = np.eye(nN)
        D1[nN:, nN:] = spec.A
        EK = np.zeros((spec.m, spec.m), dtype=np.complex128)
        EK[nN:, nN:] = np.eye(k)
        G = np.kron(D1, eye_n) - delta @ np.kron(EK, eye_n)
        R = delta @ np.kron(D1, eye_n) + np.kron(EK, eye_n)
        tv = la.solve(T, spec.v)
        sol = checked_solve(G, R @ np.kron(tv.reshape(-1, 1), eye_n), "structured resolvent")
        core = np.kron((spec.v.conj() @ T).reshape(1, -1), eye_n) @ sol
    return spec.a * eye_n + core


def representation_evaluator(spec: RepresentationSpec) -> Callable[[MatrixTuple], np.ndarray]:
    """The representation as a black-box evaluator (axiom fuzzing, probes)."""

    def ev(Z: MatrixTuple) -> np.ndarray:
        return eval_representation(spec, Z)

    return ev


def scalar_evaluator(spec: RepresentationSpec) -> Callable[[complex], complex]:
    """h restricted to scalar points (z, ..., z), identified with C."""

    def ev(z: complex) -> complex:
        Z = MatrixTuple(tuple(np.array([[z]]) for _ in range(spec.d)))
        return complex(eval_representation(spec, Z)[0, 0])

    return ev


def pi_sampler(d: int) -> Callable[[int, int], MatrixTuple]:
    """Half-plane point sampler with the (n, seed) shape axiom_verify wants."""

    def sampler(n: int, seed: int) -> MatrixTuple:
        return sample("pi_point", n, d, seed)

    return sampler


@dataclass(frozen=True)
class SequenceSummary:
    values: tuple[float, ...]
    limit: float | None
    converged: bool


def _summarize(values: list[float]) -> SequenceSummary:
    tail = values[-3:]
    if len(tail) == 3 and all(abs(x) < PROBE_ABS_TOL for x in tail):
        return SequenceSummary(tuple(values), 0.0, True)
    converged = False
    if len(tail) == 3 and all(np.isfinite(tail)):
        rel = max(
            abs(x - y) / max(abs(x), abs(y), 1e-300)
            for x, y in ((tail[0], tail[1]), (tail[0], tail[2]), (tail[1], tail[2]))
        )
        converged = rel <= PROBE_REL_TOL
    limit = values[-1] if converged else None
    return SequenceSummary(tuple(values), limit, converged)


@dataclass(frozen=True)
class AsymptoticProbe:
    """Growth of h along (is, ..., is) on a geometric grid of s.

    scaled_modulus carries s|h|, scaled_imag carries s Im h, damped_imag
    carries (1/s) Im h. Limit estimates repeat the value at the largest s;
    a sequence counts as converged when its last three values agree to
    relative 1e-3, or are all below 1e-9 in absolute value (limit 0).
    """

    grid: tuple[float, ...]
    scaled_modulus: SequenceSummary
    scaled_imag: SequenceSummary
    damped_imag: SequenceSummary


def asymptotic_probe(evaluator: Callable[[complex], complex], smax: float = 2.0**20) -> AsymptoticProbe:
    """Probe a scalar-level evaluator h along is for s = 1, 2, 4, ... <= smax."""
    grid: list[float] = []
    s = 1.0
    while s <= smax:
        grid.append(s)
        s *= 2.0
    mods: list[float] = []
    scaled: list[float] = []
    damped: list[float] = []
    for s in grid:
        h = complex(evaluator(1j * s))
        mods.append(s * abs(h))
        scaled.append(s * h.imag)
        damped.append(h.imag / s)
    return AsymptoticProbe(
        grid=tuple(grid),
        scaled_modulus=_summarize(mods),
        scaled_imag=_summarize(scaled),
        damped_imag=_summarize(damped),
    )


@dataclass(frozen=True)
class TypeVerdict:
    type: int
    evidence: AsymptoticProbe
    inconclusive: bool


def classify_type(probe: AsymptoticProbe) -> TypeVerdict:
    """Lowest-numbered type whose growth criterion the probe accepts.

    Type 1 needs s|h| bounded (detected: converged), type 2 needs s Im h
    bounded, type 3 needs (1/s) Im h -> 0, type 4 is unconditional. When
    the (1/s) Im h sequence never settles the type-4 fallback is flagged
    inconclusive; the caller has the raw sequences either way.
    """
    if probe.scaled_modulus.converged:
        return TypeVerdict(1, probe, False)
    if probe.scaled_imag.converged:
        return TypeVerdict(2, probe, False)
    if probe.damped_imag.converged and probe.damped_imag.limit == 0.0:
        return TypeVerdict(3, probe, False)
    return TypeVerdict(4, probe, not probe.damped_imag.converged)


@dataclass(frozen=True)
class PickPositivityReport:
    samples: int
    levels: tuple[int, ...]
    min_imag_eig: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.min_imag_eig >= -self.tol


def pick_positivity_check(
    spec: RepresentationSpec,
    samples: int = 100,
    seed: int = 0,
    tol: float = DEFAULT_PSD_TOL,
    levels: tuple[int, ...] = (1, 2, 3),
) -> PickPositivityReport:
    """Sampled check that Im h(Z) stays PSD over half-plane points."""
    worst = float("inf")
    for t in range(samples):
        n = levels[t % len(levels)]
        Z = sample("pi_point", n, spec.d, seed + 104729 * t)
        h = eval_representation(spec, Z)
        rep = psd_min_eig(imag_part(h), tol)
        worst = min(worst, rep.min_eig)
    return PickPositivityReport(samples=samples, levels=levels, min_imag_eig=worst, tol=tol)
