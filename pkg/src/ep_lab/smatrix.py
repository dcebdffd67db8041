"""One- and two-resonance S-matrix, double pole form and cross-section line shapes.

Widths enter with their sign as produced by the spectrum (negative for
decay); every product-form factor is unitary for real E either way.
No background (direct reaction) term is included.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ConfigError, PoleOnRealAxis, TooFewPoints

__all__ = [
    "Resonance",
    "ResonanceSet",
    "s_one",
    "s_two",
    "s_double_pole",
    "s_matrix",
    "cross_section",
    "CrossSection",
    "line_shape_features",
]


@dataclass(frozen=True)
class Resonance:
    energy: float
    width: float

    def __post_init__(self):
        if not (math.isfinite(self.energy) and math.isfinite(self.width)):
            raise ConfigError("resonance energy and width must be finite")


class ResonanceSet(tuple):
    """One or two resonances (E_k, Gamma_k)."""

    def __new__(cls, items: Iterable):
        res = [r if isinstance(r, Resonance) else Resonance(*map(float, r)) for r in items]
        if not 1 <= len(res) <= 2:
            raise ConfigError(f"1 or 2 resonances required, got {len(res)}")
        return super().__new__(cls, res)

    @property
    def degenerate(self) -> Resonance | None:
        """(E_d, Gamma_d) when both entries coincide, else None."""
        if len(self) == 2 and self[0] == self[1]:
            return self[0]
        return None


def _check_pole(energy: float, width: float, E) -> None:
    if width == 0.0 and np.any(np.asarray(E) == energy):
        raise PoleOnRealAxis(f"E = {energy} coincides with a pole on the real axis (width 0)")


def s_one(energy: float, width: float, E):
    """(E - E_k + i G/2) / (E - E_k - i G/2)."""
    _check_pole(energy, width, E)
    d = np.asarray(E, dtype=float) - energy
    if width == 0.0:
        # complex division of d/d is not always exactly 1
        s = np.ones_like(d, dtype=complex)
        return s if np.ndim(s) else complex(s)
    s = (d + 0.5j * width) / (d - 0.5j * width)
    return s if np.ndim(s) else complex(s)


def s_two(res: Sequence, E):
    res = ResonanceSet(res)
    if len(res) != 2:
        raise ConfigError("s_two needs exactly two resonances")
    return s_one(res[0].energy, res[0].width, E) * s_one(res[1].energy, res[1].width, E)


def s_double_pole(E_d: float, G_d: float, E):
    """1 + 2i G/(E - E_d - iG/2) - G**2/(E - E_d - iG/2)**2."""
    if G_d == 0.0:
        raise PoleOnRealAxis("double pole with zero width lies on the real axis")
    x = np.asarray(E, dtype=float) - E_d - 0.5j * G_d
    q = G_d / x  # factored so tiny widths do not underflow in x**2
    s = 1 + q * (2j - q)
    return s if np.ndim(s) else complex(s)


def s_matrix(res: Sequence, E):
    res = ResonanceSet(res)
    if len(res) == 1:
        return s_one(res[0].energy, res[0].width, E)
    return s_two(res, E)


@dataclass(frozen=True)
class CrossSection:
    energy: np.ndarray
    sigma: np.ndarray
    s: np.ndarray

    def rows(self):
        return zip(self.energy, self.sigma, self.s.real, self.s.imag)


def cross_section(sampler: Callable, grid) -> CrossSection:
    """sigma(E) = |1 - S(E)|**2 on a sorted energy grid."""
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ConfigError("energy grid must be a non-empty 1-d array")
    if not np.all(np.isfinite(grid)):
        raise ConfigError("energy grid must be finite")
    if np.any(np.diff(grid) < 0):
        raise ConfigError("energy grid must be sorted")
    s = np.asarray(sampler(grid), dtype=complex)
    return CrossSection(grid, np.abs(1 - s) ** 2, s)


def _half_crossing(E, sigma, i, half, direction):
    j = i
    while 0 <= j + direction < len(sigma):
        k = j + direction
        if sigma[k] <= half:
            # linear interpolation between j and k
            t = (sigma[j] - half) / (sigma[j] - sigma[k])
            return abs(E[j] + t * (E[k] - E[j]) - E[i])
        j = k
    return None


def line_shape_features(energy, sigma) -> dict:
    """Interior peaks and minima of a sampled cross section.

    Each peak carries its half-height half-widths to either side and the
    asymmetry ``(right - left) / (right + left)``; a side that never drops
    to half height inside the table gives ``None``.
    """
    E = np.asarray(energy, dtype=float)
    s = np.asarray(sigma, dtype=float)
    if E.shape != s.shape or E.ndim != 1:
        raise ConfigError("energy and sigma must be 1-d arrays of equal length")
    if E.size < 3:
        raise TooFewPoints("line shape analysis needs at least 3 points")

    peaks, minima = [], []
    for i in range(1, len(s) - 1):
        if s[i] > s[i - 1] and s[i] >= s[i + 1]:
            half = 0.5 * s[i]
            left = _half_crossing(E, s, i, half, -1)
            right = _half_crossing(E, s, i, half, +1)
            asym = None
            if left is not None and right is not None and left + right > 0:
                asym = (right - left) / (right + left)
            peaks.append(
                {
                    "E": float(E[i]),
                    "sigma": float(s[i]),
                    "left_half_width": left,
                    "right_half_width": right,
                    "asymmetry": asym,
                }
            )
        elif s[i] < s[i - 1] and s[i] <= s[i + 1]:
            minima.append({"E": float(E[i]), "sigma": float(s[i])})
    return {"peaks": peaks, "minima": minima}
