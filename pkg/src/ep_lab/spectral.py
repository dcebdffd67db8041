"""Two-level non-Hermitian Hamiltonian and its closed-form spectrum.

The Hamiltonian is the complex symmetric matrix::

    [[e1 + i g1/2,  omega       ],
     [omega,        e2 + i g2/2 ]]

with signed widths ``g`` (negative for loss, positive for gain) and a single
complex coupling ``omega`` in both off-diagonal slots.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

__all__ = [
    "TwoLevelSystem",
    "SpectralPair",
    "discriminant",
    "discriminant_squared",
    "eigenvalues",
    "matrix",
]


@dataclass(frozen=True)
class TwoLevelSystem:
    e1: float
    e2: float
    g1: float
    g2: float
    omega: complex = 0j

    def __post_init__(self):
        for name in ("e1", "e2", "g1", "g2"):
            value = getattr(self, name)
            if isinstance(value, complex) or not math.isfinite(value):
                raise ConfigError(f"{name} must be a finite real number, got {value!r}")
            object.__setattr__(self, name, float(value))
        omega = complex(self.omega)
        if not cmath.isfinite(omega):
            raise ConfigError(f"omega must be finite, got {omega!r}")
        object.__setattr__(self, "omega", omega)

    @property
    def eps1(self) -> complex:
        return complex(self.e1, 0.5 * self.g1)

    @property
    def eps2(self) -> complex:
        return complex(self.e2, 0.5 * self.g2)

    @property
    def scale(self) -> float:
        """Magnitude used for relative tolerances: max(|eps1|, |eps2|, |omega|, 1)."""
        return max(abs(self.eps1), abs(self.eps2), abs(self.omega), 1.0)

    def swapped(self) -> "TwoLevelSystem":
        return TwoLevelSystem(self.e2, self.e1, self.g2, self.g1, self.omega)


@dataclass(frozen=True)
class SpectralPair:
    ev1: complex
    ev2: complex
    z: complex

    @property
    def energies(self) -> tuple[float, float]:
        return self.ev1.real, self.ev2.real

    @property
    def widths(self) -> tuple[float, float]:
        """Full widths Gamma_k = 2 Im(ev_k)."""
        return 2.0 * self.ev1.imag, 2.0 * self.ev2.imag


def discriminant_squared(sys: TwoLevelSystem) -> complex:
    """Z**2 = ((eps1 - eps2)/2)**2 + omega**2, evaluated in factored form.

    The product (h + i omega)(h - i omega) keeps the vanishing factor free of
    cancellation near a coalescence, so Z**2 = 0 is representable exactly.
    """
    half = 0.5 * (sys.eps1 - sys.eps2)
    iw = 1j * sys.omega
    return (half + iw) * (half - iw)


def discriminant(sys: TwoLevelSystem) -> complex:
    # principal branch; continuity along a sweep is handled by the tracker
    return cmath.sqrt(discriminant_squared(sys))


def eigenvalues(sys: TwoLevelSystem) -> SpectralPair:
    z = discriminant(sys)
    if sys.omega == 0:
        # decoupled: return the diagonal exactly, still ordered by the sign of Z
        half = 0.5 * (sys.eps1 - sys.eps2)
        if abs(z - half) <= abs(z + half):
            return SpectralPair(sys.eps1, sys.eps2, z)
        return SpectralPair(sys.eps2, sys.eps1, z)
    mean = 0.5 * (sys.eps1 + sys.eps2)
    return SpectralPair(mean + z, mean - z, z)


def matrix(sys: TwoLevelSystem) -> np.ndarray:
    return np.array([[sys.eps1, sys.omega], [sys.omega, sys.eps2]], dtype=complex)
