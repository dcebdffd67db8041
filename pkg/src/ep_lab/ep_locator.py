"""Locating exceptional points (Z = 0) of two-level families.

Three routes:

* ``eps_imaginary_coupling`` -- equal widths, purely imaginary coupling,
  energies varying with ``a``: EPs where ``e1(a) - e2(a) = +-2 omega_i``.
* ``eps_gainloss_real_coupling`` -- equal energies, unequal widths, real
  coupling: ``omega_r = +-(g1 - g2)/4``.
* ``ep_newton`` -- any two of ``a, omega_r, omega_i`` free; damped Newton on
  ``(Re Z**2, Im Z**2)`` with a central-difference Jacobian.

A double-precision EP can generally only be located to |Z**2| of order
``eps * scale**2`` because |Z| grows like the square root of the parameter
error.  Solutions are accepted at ``(1e-10 scale)**2`` or, failing that, at
the roundoff floor returned by :func:`z2_tolerance`; the reported residual is
always the honest |Z| recomputed through :mod:`ep_lab.spectral`.
"""

from __future__ import annotations

import enum
import math
import sys as _sys
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import ConfigError, DegenerateWidths, FamilyMismatch, LeftBox, NoConvergence, NoRootInInterval
from .scenario import ScenarioConfig
from .spectral import TwoLevelSystem, discriminant, discriminant_squared

__all__ = [
    "EpKind",
    "Branch",
    "BranchContext",
    "EpSolution",
    "NoEpCertificate",
    "UNKNOWNS",
    "RESIDUAL_TOL",
    "z2_tolerance",
    "classify_branch",
    "eps_imaginary_coupling",
    "eps_gainloss_real_coupling",
    "family_system",
    "seed_from_grid",
    "ep_newton",
    "no_ep_certificate",
]

RESIDUAL_TOL = 1e-10
BRANCH_TOL = 1e-12
_EPS = _sys.float_info.epsilon

UNKNOWNS = ("a", "omega_r", "omega_i", "omega_abs")


class EpKind(str, enum.Enum):
    ANALYTIC_IMAG_COUPLING = "analytic_imag_coupling"
    ANALYTIC_GAINLOSS_REAL_COUPLING = "analytic_gainloss_real_coupling"
    NEWTON_GENERAL = "newton_general"


class Branch(str, enum.Enum):
    Z_REAL = "Z_real"
    Z_IMAG = "Z_imag"
    Z_COMPLEX = "Z_complex"


class BranchContext(str, enum.Enum):
    Z_REAL_SIDE = "Z_real_side"
    Z_IMAG_SIDE = "Z_imag_side"
    NONE = "none"


@dataclass(frozen=True)
class EpSolution:
    params: dict
    residual: float
    kind: EpKind
    branch_context: BranchContext = BranchContext.NONE
    iterations: int = 0

    def to_dict(self) -> dict:
        return {
            "params": dict(self.params),
            "residual": self.residual,
            "kind": self.kind.value,
            "branch_context": self.branch_context.value,
        }


@dataclass(frozen=True)
class NoEpCertificate:
    """Grid evidence that a purely-imaginary-coupling family has no EP.

    ``case`` is ``"balanced_gain_loss"`` (e1 = e2, g1 = -g2) where
    |2Z|**2 = g1**2 + 4 omega_i**2 is bounded below, or ``"energy_width_obstruction"``
    where Im(4 Z**2) = (e1 - e2)(g1 - g2) never vanishes.
    """

    case: str
    lower_bound: float
    obstruction: float
    min_abs_z: float
    a_at_min: float
    grid_size: int

    @property
    def certified(self) -> bool:
        return self.lower_bound > 0 and self.min_abs_z > 0

    def text(self) -> str:
        if self.case == "balanced_gain_loss":
            head = (
                "no EP: e1 = e2, g1 = -g2 and omega purely imaginary give "
                f"|2Z|^2 = g^2 + 4 omega_i^2 >= {self.lower_bound:.6g} > 0"
            )
        else:
            head = (
                "no EP: omega_r = 0 and (e1 - e2)(g1 - g2) != 0 "
                f"(min |(e1 - e2)(g1 - g2)| = {self.obstruction:.6g}), so Im Z^2 != 0"
            )
        return f"{head}; min |Z| = {self.min_abs_z:.6g} at a = {self.a_at_min:.6g} over {self.grid_size} grid points"

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "lower_bound": self.lower_bound,
            "obstruction": self.obstruction,
            "min_abs_z": self.min_abs_z,
            "a_at_min": self.a_at_min,
            "grid_size": self.grid_size,
            "certified": self.certified,
        }


def z2_tolerance(sys: TwoLevelSystem) -> float:
    """Acceptance bound on |Z**2| for a located EP.

    The larger of the nominal ``(1e-10 scale)**2`` and the roundoff floor of
    the factored Z**2 evaluation, ``16 eps scale (|h| + |omega|)`` with
    ``h = (eps1 - eps2)/2``.
    """
    scale = sys.scale
    half = 0.5 * (sys.eps1 - sys.eps2)
    floor = 16 * _EPS * scale * (abs(half) + abs(sys.omega))
    return max((RESIDUAL_TOL * scale) ** 2, floor)


def classify_branch(sys: TwoLevelSystem) -> Branch:
    z = discriminant(sys)
    tol = BRANCH_TOL * sys.scale
    if abs(z.imag) <= tol:
        return Branch.Z_REAL
    if abs(z.real) <= tol:
        return Branch.Z_IMAG
    return Branch.Z_COMPLEX


def _context(sys: TwoLevelSystem) -> BranchContext:
    return {
        Branch.Z_REAL: BranchContext.Z_REAL_SIDE,
        Branch.Z_IMAG: BranchContext.Z_IMAG_SIDE,
    }.get(classify_branch(sys), BranchContext.NONE)


def _offset(x: float) -> float:
    return x + 1e-6 * max(1.0, abs(x))


# --- analytic: imaginary coupling, equal widths --------------------------------


def _bisect(f: Callable[[float], float], lo: float, hi: float, flo: float) -> float:
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo if abs(f(lo)) <= abs(f(hi)) else hi


def eps_imaginary_coupling(
    e1: Callable[[float], float],
    e2: Callable[[float], float],
    gamma: float,
    omega_i: float,
    interval: tuple[float, float],
    samples: int = 1024,
) -> list[EpSolution]:
    """EPs of ``[[e1(a) + i gamma/2, i omega_i], [i omega_i, e2(a) + i gamma/2]]``.

    Roots of ``e1(a) - e2(a) = +-2 omega_i`` are bracketed on ``samples``
    uniform sub-intervals of ``interval`` and bisected to adjacent floats.
    Tangential roots without a sign change are not detected.
    """
    lo, hi = map(float, interval)
    if not hi > lo:
        raise ConfigError("interval must satisfy lo < hi")
    grid = np.linspace(lo, hi, samples + 1)
    roots: list[float] = []
    for sign in (1.0, -1.0):
        # same factor the factored discriminant evaluates, so Z**2 hits zero where g does
        def g(a, s=sign):
            return 0.5 * (e1(a) - e2(a)) - s * omega_i

        values = [g(a) for a in grid]
        for i, (a, ga) in enumerate(zip(grid, values)):
            if ga == 0.0:
                roots.append(float(a))
            elif i + 1 < len(grid) and values[i + 1] != 0.0 and (ga < 0) != (values[i + 1] < 0):
                roots.append(_bisect(g, float(a), float(grid[i + 1]), ga))

    roots.sort()
    unique: list[float] = []
    for r in roots:
        if not unique or abs(r - unique[-1]) > 1e-12 * max(1.0, abs(r)):
            unique.append(r)
    if not unique:
        raise NoRootInInterval(f"e1(a) - e2(a) = +-{2 * omega_i:g} has no root in [{lo:g}, {hi:g}]")

    out = []
    for a in unique:
        sys = TwoLevelSystem(e1(a), e2(a), gamma, gamma, 1j * omega_i)
        z2 = discriminant_squared(sys)
        if abs(z2) > z2_tolerance(sys):
            raise NoConvergence(f"root a={a!r} fails the residual check (|Z^2| = {abs(z2):.3g})")
        side = TwoLevelSystem(e1(_offset(a)), e2(_offset(a)), gamma, gamma, 1j * omega_i)
        out.append(
            EpSolution({"a": a}, math.sqrt(abs(z2)), EpKind.ANALYTIC_IMAG_COUPLING, _context(side))
        )
    return out


# --- analytic: gain/loss, equal energies, real coupling ------------------------


def eps_gainloss_real_coupling(g1: float, g2: float, e: float = 0.0) -> list[EpSolution]:
    """Critical real couplings ``omega_r = +-(g1 - g2)/4`` for ``e1 = e2 = e``.

    Returned in ascending order of ``omega_r``.
    """
    if g1 == g2:
        raise DegenerateWidths("g1 == g2: equal widths give no EP for real coupling")
    w = abs((g1 - g2) / 4)
    out = []
    for omega_r in (-w, w):
        sys = TwoLevelSystem(e, e, g1, g2, omega_r)
        side = TwoLevelSystem(e, e, g1, g2, _offset(omega_r))
        out.append(
            EpSolution(
                {"omega_r": omega_r},
                abs(discriminant(sys)),
                EpKind.ANALYTIC_GAINLOSS_REAL_COUPLING,
                _context(side),
            )
        )
    return out


# --- general: damped Newton on Z**2 --------------------------------------------


def _check_unknowns(unknowns: Sequence[str]) -> tuple[str, str]:
    unknowns = tuple(unknowns)
    if len(unknowns) != 2 or len(set(unknowns)) != 2:
        raise ConfigError(f"exactly two distinct unknowns required, got {unknowns!r}")
    for u in unknowns:
        if u not in UNKNOWNS:
            raise ConfigError(f"unknown {u!r} not in {UNKNOWNS}")
    if "omega_abs" in unknowns and ({"omega_r", "omega_i"} & set(unknowns)):
        raise ConfigError("omega_abs cannot be combined with omega_r/omega_i")
    return unknowns  # type: ignore[return-value]


def family_system(cfg: ScenarioConfig, values: Mapping[str, float]) -> TwoLevelSystem:
    """System of ``cfg`` with ``a`` and coupling components overridden by ``values``.

    ``omega_r``/``omega_i`` replace the real/imaginary part of omega(a);
    ``omega_abs`` rescales omega(a) to that modulus keeping its phase.
    """
    if "a" not in values:
        raise ConfigError("parameter 'a' must be an unknown or fixed")
    a = float(values["a"])
    omega = cfg.omega(a)
    if "omega_abs" in values:
        if omega == 0:
            raise ConfigError("omega_abs needs a nonzero omega(a) to define the phase")
        omega = values["omega_abs"] * omega / abs(omega)
    if "omega_r" in values:
        omega = complex(values["omega_r"], omega.imag)
    if "omega_i" in values:
        omega = complex(omega.real, values["omega_i"])
    return TwoLevelSystem(cfg.e1(a), cfg.e2(a), cfg.g1, cfg.g2, omega)


def _default_box(cfg: ScenarioConfig, unknowns: Iterable[str]) -> dict:
    box = {}
    for u in unknowns:
        if u == "a":
            box[u] = (cfg.a_grid.start, cfg.a_grid.stop)
        else:
            # spectrum depends on omega**2 only, so one sign suffices
            box[u] = (0.0, 1.0)
    return box


def _resolve_box(cfg, unknowns, box) -> list[tuple[float, float]]:
    if box is None:
        box = _default_box(cfg, unknowns)
    if isinstance(box, Mapping):
        pairs = [tuple(map(float, box[u])) for u in unknowns]
    else:
        flat = [float(b) for b in np.ravel(box)]
        if len(flat) != 4:
            raise ConfigError("box must be (lo1, hi1, lo2, hi2)")
        pairs = [(flat[0], flat[1]), (flat[2], flat[3])]
    for lo, hi in pairs:
        if not (math.isfinite(lo) and math.isfinite(hi) and hi > lo):
            raise ConfigError(f"invalid box interval ({lo}, {hi})")
    return pairs


def seed_from_grid(cfg, unknowns, box=None, fixed=None, n: int = 101) -> tuple[float, float]:
    """Grid point of smallest |Z**2| on an n x n grid over the box."""
    unknowns = _check_unknowns(unknowns)
    pairs = _resolve_box(cfg, unknowns, box)
    fixed = dict(fixed or {})
    xs = np.linspace(*pairs[0], n)
    ys = np.linspace(*pairs[1], n)
    best, best_val = None, math.inf
    for x in xs:
        for y in ys:
            val = abs(discriminant_squared(family_system(cfg, {**fixed, unknowns[0]: x, unknowns[1]: y})))
            if val < best_val:
                best, best_val = (float(x), float(y)), val
    return best


def _fmt(x) -> tuple:
    return tuple(float(v) for v in x)


def _inside(x, pairs) -> bool:
    return all(lo <= xi <= hi for xi, (lo, hi) in zip(x, pairs))


def _polish(z2abs, x: np.ndarray, pairs, span: int = 8) -> np.ndarray:
    # search neighbouring floats: at the roundoff floor the continuous model is gone
    cands0 = _ulp_neighbours(x[0], span)
    cands1 = _ulp_neighbours(x[1], span)
    best, best_val = x, z2abs(x)
    for c0 in cands0:
        for c1 in cands1:
            y = np.array([c0, c1])
            if not _inside(y, pairs):
                continue
            val = z2abs(y)
            if val < best_val:
                best, best_val = y, val
    return best


def _ulp_neighbours(v: float, span: int) -> list[float]:
    out = [v]
    up = down = v
    for _ in range(span):
        up = math.nextafter(up, math.inf)
        down = math.nextafter(down, -math.inf)
        out += [up, down]
    return out


def ep_newton(
    cfg: ScenarioConfig,
    unknowns: Sequence[str] = ("a", "omega_r"),
    seed: Sequence[float] | None = None,
    box=None,
    fixed: Mapping[str, float] | None = None,
    max_iter: int = 200,
    max_halvings: int = 30,
) -> EpSolution:
    """Solve Re Z**2 = Im Z**2 = 0 for two unknowns of the family ``cfg``.

    Parameters not listed in ``unknowns`` come from ``fixed`` or from the
    family itself (omega(a)).  Without a seed, the search starts at the grid
    minimum of |Z**2| over ``box`` (see :func:`seed_from_grid`).

    Raises :class:`NoConvergence` when iterations run out, the Jacobian is
    singular (e.g. Z**2 independent of an unknown) or the iteration stalls
    above the roundoff floor; :class:`LeftBox` when Newton steps keep leaving
    the box.
    """
    unknowns = _check_unknowns(unknowns)
    pairs = _resolve_box(cfg, unknowns, box)
    fixed = dict(fixed or {})
    clash = set(fixed) & set(unknowns)
    if clash:
        raise ConfigError(f"parameters both fixed and unknown: {sorted(clash)}")

    def system(x) -> TwoLevelSystem:
        return family_system(cfg, {**fixed, unknowns[0]: float(x[0]), unknowns[1]: float(x[1])})

    def residual_vec(x) -> np.ndarray:
        z2 = discriminant_squared(system(x))
        return np.array([z2.real, z2.imag])

    def z2abs(x) -> float:
        return abs(discriminant_squared(system(x)))

    if seed is None:
        seed = seed_from_grid(cfg, unknowns, pairs, fixed)
    x = np.array(seed, dtype=float)
    if x.shape != (2,) or not _inside(x, pairs):
        raise ConfigError(f"seed {_fmt(x)} must be a point inside the box {pairs}")

    def finish(x, iterations) -> EpSolution:
        sys = system(x)
        offset = x.copy()
        offset[0] = _offset(offset[0])
        return EpSolution(
            {unknowns[0]: float(x[0]), unknowns[1]: float(x[1])},
            abs(discriminant(sys)),
            EpKind.NEWTON_GENERAL,
            _context(system(offset)),
            iterations,
        )

    for it in range(max_iter):
        sys = system(x)
        f = residual_vec(x)
        fabs = math.hypot(*f)
        if fabs <= (RESIDUAL_TOL * sys.scale) ** 2:
            return finish(x, it)

        jac = np.empty((2, 2))
        for j in range(2):
            h = 1e-6 * max(1.0, abs(x[j]))
            xp, xm = x.copy(), x.copy()
            xp[j] += h
            xm[j] -= h
            jac[:, j] = (residual_vec(xp) - residual_vec(xm)) / (xp[j] - xm[j])
        if not np.all(np.isfinite(jac)) or np.linalg.cond(jac) > 1e12:
            if fabs <= z2_tolerance(sys):
                return finish(x, it)
            flat = [u for j, u in enumerate(unknowns) if np.linalg.norm(jac[:, j]) == 0.0]
            why = f"Z^2 does not depend on {', '.join(flat)}" if flat else "Jacobian of Z^2 is singular"
            raise NoConvergence(
                f"Newton search failed at {_fmt(x)}: {why} (degenerate family)",
                diagnostic=why,
                last=_fmt(x),
            )
        step = np.linalg.solve(jac, -f)

        t, moved, left = 1.0, False, False
        for _ in range(max_halvings + 1):
            xn = x + t * step
            if not _inside(xn, pairs):
                left = True
            elif z2abs(xn) < fabs:
                moved = True
                break
            t *= 0.5
        if moved:
            x = xn
            continue
        if left and not _inside(x + step * 0.5**max_halvings, pairs):
            raise LeftBox(f"Newton iterate left the box {pairs} from {_fmt(x)}", last=_fmt(x))
        x = _polish(z2abs, x, pairs)
        if z2abs(x) <= z2_tolerance(system(x)):
            return finish(x, it)
        raise NoConvergence(
            f"Newton stalled at {_fmt(x)} with |Z^2| = {z2abs(x):.3g}",
            diagnostic="stalled above the roundoff floor (no nearby EP)",
            last=_fmt(x),
        )
    raise NoConvergence(f"no convergence in {max_iter} iterations", last=_fmt(x))


# --- certificate for pure imaginary coupling -----------------------------------


def no_ep_certificate(cfg: ScenarioConfig, grid: Sequence[float] | None = None) -> NoEpCertificate:
    """Certify that a family with purely imaginary omega(a) has no EP on ``grid``."""
    om = cfg.omega_expr
    if om.c0.real != 0.0 or om.c1.real != 0.0:
        raise FamilyMismatch("coupling is not purely imaginary along the family")
    grid = cfg.grid() if grid is None else np.asarray(grid, dtype=float)

    zs = np.array([abs(discriminant(cfg.system_at(a))) for a in grid])
    i = int(np.argmin(zs))
    balanced = cfg.e1_expr == cfg.e2_expr and cfg.g1 == -cfg.g2 and cfg.g1 != 0.0
    if balanced:
        bound = min(cfg.g1**2 + 4 * cfg.omega(a).imag ** 2 for a in grid)
        return NoEpCertificate("balanced_gain_loss", bound, 0.0, float(zs[i]), float(grid[i]), len(grid))

    obstruction = np.array([abs((cfg.e1(a) - cfg.e2(a)) * (cfg.g1 - cfg.g2)) for a in grid])
    if np.any(obstruction == 0.0):
        raise FamilyMismatch("(e1 - e2)(g1 - g2) vanishes on the grid; no certificate applies")
    omin = float(obstruction.min())
    return NoEpCertificate("energy_width_obstruction", omin, omin, float(zs[i]), float(grid[i]), len(grid))
