"""Biorthogonal eigenvectors and the quantities derived from them.

For the complex symmetric two-level matrix the left eigenvector is the
transpose of the right one, so the biorthogonal product is the unconjugated
``v_k @ v_l``.  Right eigenvectors are normalized to ``v_k @ v_k = 1``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import InconsistentSpectrum, ZeroVector
from .spectral import SpectralPair, TwoLevelSystem, eigenvalues

__all__ = [
    "EP_TOL",
    "EigenvectorPair",
    "MixingTable",
    "ep_tol",
    "eigenvectors",
    "phase_rigidity",
    "mixing_coefficients",
    "coalescence_metric",
]

EP_TOL = 1e-8  # relative to TwoLevelSystem.scale


def ep_tol(sys: TwoLevelSystem) -> float:
    return EP_TOL * sys.scale


@dataclass(frozen=True)
class EigenvectorPair:
    v1: np.ndarray
    v2: np.ndarray
    rigidity1: complex
    rigidity2: complex
    defect_flag: bool = False

    @property
    def rigidities(self) -> tuple[complex, complex]:
        return self.rigidity1, self.rigidity2


@dataclass(frozen=True)
class MixingTable:
    b: np.ndarray
    theta: np.ndarray
    defect_flag: bool = False

    @property
    def weights(self) -> np.ndarray:
        """|b_kl|**2."""
        return np.abs(self.b) ** 2


def _fix_phase(v: np.ndarray) -> np.ndarray:
    # first nonzero component gets its argument in (-pi/2, pi/2]
    tiny = 1e-14 * float(np.linalg.norm(v))
    for c in v:
        if abs(c) > tiny:
            if c.real > 0 or (c.real == 0 and c.imag > 0):
                return v
            return -v
    return v


def _biorthonormal(v: np.ndarray) -> np.ndarray:
    s = complex(v @ v)
    # v / sqrt(v^T v) makes v^T v = 1 exactly real
    return _fix_phase(v / cmath.sqrt(s))


def _candidate(sys: TwoLevelSystem, ev: complex) -> np.ndarray:
    a = np.array([sys.omega, ev - sys.eps1], dtype=complex)
    b = np.array([ev - sys.eps2, sys.omega], dtype=complex)
    v = a if np.abs(a).max() >= np.abs(b).max() else b
    # rescale so tiny couplings do not underflow in the norms below
    return v / np.abs(v).max()


def _check_spectrum(sys: TwoLevelSystem, spec: SpectralPair) -> None:
    scale = sys.scale
    trace = sys.eps1 + sys.eps2
    det = sys.eps1 * sys.eps2 - sys.omega**2
    if abs(spec.ev1 + spec.ev2 - trace) > 1e-10 * scale or abs(
        spec.ev1 * spec.ev2 - det
    ) > 1e-10 * scale**2:
        raise InconsistentSpectrum(
            f"eigenvalues {spec.ev1}, {spec.ev2} do not belong to {sys}"
        )


def eigenvectors(sys: TwoLevelSystem, spec: SpectralPair | None = None) -> EigenvectorPair:
    """Right eigenvectors of ``sys`` matching ``spec.ev1`` and ``spec.ev2``.

    Near a coalescence (|Z| below :func:`ep_tol`) the biorthogonal norm
    vanishes; both slots then hold the single Euclidean-normalized
    eigenvector, rigidities are 0 and ``defect_flag`` is set.  A decoupled
    system (omega == 0) always returns the standard basis.
    """
    if spec is None:
        spec = eigenvalues(sys)
    else:
        _check_spectrum(sys, spec)

    e0 = np.array([1.0, 0.0], dtype=complex)
    e1 = np.array([0.0, 1.0], dtype=complex)
    if sys.omega == 0:
        # diagonal: assign each basis vector to the nearer eigenvalue
        if abs(spec.ev1 - sys.eps1) <= abs(spec.ev1 - sys.eps2):
            return EigenvectorPair(e0, e1, 1 + 0j, 1 + 0j)
        return EigenvectorPair(e1, e0, 1 + 0j, 1 + 0j)

    if abs(spec.z) < ep_tol(sys):
        mean = 0.5 * (spec.ev1 + spec.ev2)
        v = _candidate(sys, mean)
        v = _fix_phase(v / np.linalg.norm(v))
        return EigenvectorPair(v, v.copy(), 0j, 0j, defect_flag=True)

    v1 = _biorthonormal(_candidate(sys, spec.ev1))
    v2 = _biorthonormal(_candidate(sys, spec.ev2))
    return EigenvectorPair(v1, v2, phase_rigidity(v1), phase_rigidity(v2))


def phase_rigidity(v) -> complex:
    """(v^T v) / (v^dagger v) for a single eigenvector."""
    v = np.asarray(v, dtype=complex)
    norm2 = float(np.vdot(v, v).real)
    if norm2 == 0.0:
        raise ZeroVector("phase rigidity of a zero vector")
    return complex(v @ v) / norm2


def mixing_coefficients(pair: EigenvectorPair) -> MixingTable:
    """Components b_kl of each eigenvector in the bare (standard) basis."""
    b = np.vstack([pair.v1, pair.v2]).astype(complex)
    theta = np.arctan2(b.imag, b.real)
    return MixingTable(b, theta, pair.defect_flag)


def coalescence_metric(pair: EigenvectorPair) -> float:
    """|v1^dagger v2| / (|v1| |v2|): 0 for orthogonal, 1 for parallel vectors."""
    n1 = float(np.linalg.norm(pair.v1))
    n2 = float(np.linalg.norm(pair.v2))
    if n1 == 0.0 or n2 == 0.0:
        raise ZeroVector("coalescence metric with a zero vector")
    return min(abs(complex(np.vdot(pair.v1, pair.v2))) / (n1 * n2), 1.0)


def norm_ratio(v) -> float:
    """v^dagger v for a vector normalized to v^T v = 1 (i.e. 1/|r|)."""
    v = np.asarray(v, dtype=complex)
    return float(np.vdot(v, v).real) / abs(complex(v @ v))

