"""Two-level open quantum systems with loss and gain, their exceptional points and line shapes."""

__version__ = "0.1.0"

from .spectral import SpectralPair, TwoLevelSystem, discriminant, eigenvalues, matrix
from .eigensystem import (
    EigenvectorPair,
    MixingTable,
    coalescence_metric,
    eigenvectors,
    mixing_coefficients,
    phase_rigidity,
)
from .scenario import PRESETS, ScenarioConfig, preset
from .ep_locator import (
    EpSolution,
    classify_branch,
    ep_newton,
    eps_gainloss_real_coupling,
    eps_imaginary_coupling,
    no_ep_certificate,
)
from .smatrix import cross_section, line_shape_features, s_double_pole, s_one, s_two
from .sweep import SweepResult, run_sweep, track_branches
