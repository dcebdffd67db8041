"""Parameter sweeps over a scenario family with continuous branch tracking."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .eigensystem import EP_TOL, eigenvectors, mixing_coefficients
from .errors import ConfigError, EpLabError, NumericError
from .scenario import ScenarioConfig
from .spectral import eigenvalues

__all__ = [
    "COLUMNS",
    "BranchTracking",
    "SweepResult",
    "track_branches",
    "run_sweep",
    "resolve_threads",
    "NEIGHBOURHOOD_FACTOR",
]

COLUMNS = (
    "a", "E1", "E2", "G1_half", "G2_half",
    "b11sq", "b12sq", "b21sq", "b22sq",
    "r1_abs", "r2_abs", "Z_abs", "defect", "e1_bare", "e2_bare",
)

# pairing is frozen where |Z| < NEIGHBOURHOOD_FACTOR * ep_tol
NEIGHBOURHOOD_FACTOR = 100


def resolve_threads(threads: int | None = None) -> int:
    """Worker count: explicit value, else EP_LAB_THREADS, else 1; 0 means auto."""
    if threads is None:
        raw = os.environ.get("EP_LAB_THREADS", "1").strip() or "1"
        try:
            threads = int(raw)
        except ValueError:
            raise ConfigError(f"EP_LAB_THREADS must be an integer, got {raw!r}") from None
    if threads < 0:
        raise ConfigError("thread count must be >= 0")
    if threads == 0:
        threads = os.cpu_count() or 1
    return threads


@dataclass(frozen=True)
class BranchTracking:
    perm: np.ndarray       # (n, 2): raw slot feeding tracked branch k
    swapped: np.ndarray    # pairing changed relative to the previous step
    ambiguous: np.ndarray  # frozen inside an EP neighbourhood


def track_branches(pairs, frozen=None) -> BranchTracking:
    """Follow two eigenvalue branches through consecutive grid points.

    At each step the pairing (identity or swap) minimizing the summed complex
    distance to the previous tracked values is chosen.  Where ``frozen`` is
    set the previous pairing is kept and the step marked ambiguous.
    """
    pairs = np.asarray(pairs, dtype=complex)
    n = len(pairs)
    frozen = np.zeros(n, bool) if frozen is None else np.asarray(frozen, bool)
    perm = np.zeros((n, 2), dtype=int)
    swapped = np.zeros(n, bool)
    ambiguous = frozen.copy()
    if n == 0:
        return BranchTracking(perm, swapped, ambiguous)
    perm[0] = (0, 1)
    prev = pairs[0]
    for i in range(1, n):
        if frozen[i]:
            perm[i] = perm[i - 1]
        else:
            r0, r1 = pairs[i]
            keep = abs(r0 - prev[0]) + abs(r1 - prev[1])
            swap = abs(r1 - prev[0]) + abs(r0 - prev[1])
            perm[i] = (0, 1) if keep <= swap else (1, 0)
        swapped[i] = perm[i, 0] != perm[i - 1, 0]
        prev = pairs[i][perm[i]]
    return BranchTracking(perm, swapped, ambiguous)


@dataclass(frozen=True)
class SweepResult:
    config: ScenarioConfig
    a: np.ndarray
    ev: np.ndarray          # (n, 2) tracked complex eigenvalues
    b: np.ndarray           # (n, 2, 2) tracked mixing coefficients
    rigidity: np.ndarray    # (n, 2) complex phase rigidities
    z_abs: np.ndarray
    defect: np.ndarray
    e1_bare: np.ndarray
    e2_bare: np.ndarray
    tracking: BranchTracking

    def __len__(self):
        return len(self.a)

    @property
    def energies(self) -> np.ndarray:
        return self.ev.real

    @property
    def half_widths(self) -> np.ndarray:
        """Gamma_k / 2 = Im(ev_k)."""
        return self.ev.imag

    @property
    def mixing(self) -> np.ndarray:
        return np.abs(self.b) ** 2

    def columns(self) -> dict[str, np.ndarray]:
        w = self.mixing
        return {
            "a": self.a,
            "E1": self.ev[:, 0].real,
            "E2": self.ev[:, 1].real,
            "G1_half": self.ev[:, 0].imag,
            "G2_half": self.ev[:, 1].imag,
            "b11sq": w[:, 0, 0],
            "b12sq": w[:, 0, 1],
            "b21sq": w[:, 1, 0],
            "b22sq": w[:, 1, 1],
            "r1_abs": np.abs(self.rigidity[:, 0]),
            "r2_abs": np.abs(self.rigidity[:, 1]),
            "Z_abs": self.z_abs,
            "defect": self.defect.astype(int),
            "e1_bare": self.e1_bare,
            "e2_bare": self.e2_bare,
        }

    def nearest(self, a: float) -> int:
        return int(np.argmin(np.abs(self.a - a)))


def _evaluate(cfg: ScenarioConfig, indices, grid):
    out = []
    for i in indices:
        a = float(grid[i])
        try:
            sys = cfg.system_at(a)
            spec = eigenvalues(sys)
            pair = eigenvectors(sys, spec)
            mix = mixing_coefficients(pair)
        except (EpLabError, ArithmeticError, ValueError) as exc:
            raise NumericError(str(exc), index=i) from exc
        values = (spec.ev1, spec.ev2, spec.z, pair.rigidity1, pair.rigidity2, *mix.b.ravel())
        if not all(math.isfinite(v.real) and math.isfinite(v.imag) for v in map(complex, values)):
            raise NumericError("non-finite eigen data", index=i)
        out.append((spec, pair, mix, sys.scale, sys.e1, sys.e2))
    return out


def run_sweep(cfg: ScenarioConfig, threads: int | None = None) -> SweepResult:
    """Evaluate spectrum and eigenvectors on ``cfg``'s grid and track branches.

    Grid points may be evaluated by several threads (``threads`` or
    EP_LAB_THREADS); results are assembled in grid order so the output does
    not depend on the worker count.
    """
    grid = cfg.grid()
    n = len(grid)
    workers = min(resolve_threads(threads), n)
    chunks = [list(c) for c in np.array_split(np.arange(n), workers)]
    if workers == 1:
        parts = [_evaluate(cfg, chunks[0], grid)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: _evaluate(cfg, c, grid), chunks))
    points = [p for part in parts for p in part]

    raw = np.array([(s.ev1, s.ev2) for s, *_ in points], dtype=complex)
    z_abs = np.array([abs(s.z) for s, *_ in points])
    scale = np.array([p[3] for p in points])
    frozen = z_abs < NEIGHBOURHOOD_FACTOR * EP_TOL * scale
    tracking = track_branches(raw, frozen)

    idx = np.arange(n)[:, None]
    ev = raw[idx, tracking.perm]
    b_raw = np.array([m.b for _, _, m, *_ in points])
    r_raw = np.array([(p.rigidity1, p.rigidity2) for _, p, *_ in points], dtype=complex)
    return SweepResult(
        config=cfg,
        a=grid,
        ev=ev,
        b=b_raw[idx, tracking.perm],
        rigidity=r_raw[idx, tracking.perm],
        z_abs=z_abs,
        defect=np.array([p.defect_flag for _, p, *_ in points], bool),
        e1_bare=np.array([p[4] for p in points]),
        e2_bare=np.array([p[5] for p in points]),
        tracking=tracking,
    )
