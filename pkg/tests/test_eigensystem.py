import numpy as np
import pytest
from hypothesis import assume, given, settings

from ep_lab.eigensystem import (
    EP_TOL,
    coalescence_metric,
    eigenvectors,
    mixing_coefficients,
    norm_ratio,
    phase_rigidity,
)
from ep_lab.errors import InconsistentSpectrum, ZeroVector
from ep_lab.spectral import SpectralPair, TwoLevelSystem, eigenvalues, matrix

from oracles import eig_oracle
from strategies import systems


def fig1_left(a, omega=0.055):
    return TwoLevelSystem(1 - 0.5 * a, a, 2 * -0.05, 2 * 0.06, omega)


def test_decoupled_gives_standard_basis():
    pair = eigenvectors(TwoLevelSystem(0.8, 0.1, -0.2, -0.1, 0))
    assert np.array_equal(pair.v1, [1, 0])
    assert np.array_equal(pair.v2, [0, 1])
    assert pair.rigidities == (1, 1)
    assert not pair.defect_flag


def test_decoupled_basis_follows_eigenvalue_order():
    sys = TwoLevelSystem(0.1, 0.8, -0.2, -0.1, 0)
    spec = eigenvalues(sys)
    pair = eigenvectors(sys, spec)
    for ev, v in ((spec.ev1, pair.v1), (spec.ev2, pair.v2)):
        assert np.allclose(matrix(sys) @ v, ev * v, atol=0)


def test_diabolic_point_is_not_defective():
    pair = eigenvectors(TwoLevelSystem(0.5, 0.5, -0.1, -0.1, 0))
    assert not pair.defect_flag
    assert coalescence_metric(pair) == 0


def test_exceptional_point_eigenvector_shape():
    sys = TwoLevelSystem(2 / 3, 2 / 3, -0.1, 0.12, 0.055)
    pair = eigenvectors(sys)
    assert pair.defect_flag
    assert pair.rigidities == (0, 0)
    ratio = pair.v1[1] / pair.v1[0]
    assert min(abs(ratio - 1j), abs(ratio + 1j)) < 1e-12
    assert coalescence_metric(pair) == pytest.approx(1, abs=1e-6)
    w = mixing_coefficients(pair).weights
    assert w[0, 0] == pytest.approx(w[0, 1], abs=1e-12)
    assert np.linalg.norm(matrix(sys) @ pair.v1 - eigenvalues(sys).ev1 * pair.v1) < 1e-12


def test_far_from_ep_rigidity_near_one():
    pair = eigenvectors(fig1_left(0.0))
    # frozen from a 40-digit general eigen-solver run
    assert abs(pair.rigidity1) == pytest.approx(0.999930191610659, abs=1e-12)
    assert abs(pair.rigidity2) == pytest.approx(0.999930191610659, abs=1e-12)
    assert abs(abs(pair.rigidity1) - 1) < 1e-2


def test_mixing_fig1_left_a02_against_oracle():
    sys = fig1_left(0.2)
    spec = eigenvalues(sys)
    mix = mixing_coefficients(eigenvectors(sys, spec))
    for ev, row in ((spec.ev1, mix.b[0]), (spec.ev2, mix.b[1])):
        ref = min(eig_oracle(sys.eps1, sys.eps2, sys.omega), key=lambda p: abs(p[0] - ev))[1]
        assert np.allclose(row, ref, atol=1e-12)
    # frozen from the 40-digit oracle: state near E = 0.904 is mostly level 1
    big = 0 if spec.ev1.real > spec.ev2.real else 1
    w = mix.weights
    assert w[big] == pytest.approx([0.994354403544512, 0.00592288924995641], abs=1e-12)
    assert w[1 - big] == pytest.approx([0.00592288924995641, 0.994354403544512], abs=1e-12)


def test_mixing_identity_when_decoupled():
    mix = mixing_coefficients(eigenvectors(TwoLevelSystem(0.9, 0.1, -0.1, -0.2, 0)))
    assert np.array_equal(mix.weights, np.eye(2))
    assert np.array_equal(mix.theta, np.zeros((2, 2)))


def test_theta_is_the_argument():
    mix = mixing_coefficients(eigenvectors(fig1_left(0.6, 0.04 + 0.03j)))
    b = mix.b
    nz = b.real != 0
    assert np.allclose(np.tan(mix.theta[nz]), b.imag[nz] / b.real[nz])
    assert np.allclose(np.abs(b) * np.exp(1j * mix.theta), b)


def test_phase_rigidity_examples():
    assert phase_rigidity([1.0, 0.0]) == 1
    assert phase_rigidity(np.array([0.6, 0.8])) == pytest.approx(1)
    assert abs(phase_rigidity(np.array([1, 1j]) / np.sqrt(2))) < 1e-16
    # (1 + (0.5i)^2) / (1 + 0.25) = 0.6, normalization-independent
    v = np.array([1, 0.5j])
    assert phase_rigidity(v) == pytest.approx(0.6)
    assert phase_rigidity(v / np.sqrt(0.75)) == pytest.approx(0.6)
    with pytest.raises(ZeroVector):
        phase_rigidity([0, 0])


def test_coalescence_midway_against_direct_arithmetic():
    sys = fig1_left(0.5)
    pair = eigenvectors(sys)
    (_, u), (_, w) = eig_oracle(sys.eps1, sys.eps2, sys.omega)
    direct = abs(np.conj(u) @ w) / (np.sqrt(np.conj(u) @ u).real * np.sqrt(np.conj(w) @ w).real)
    assert coalescence_metric(pair) == pytest.approx(direct, abs=1e-12)
    assert 0 < coalescence_metric(pair) < 1


def test_inconsistent_spectrum_rejected():
    sys = fig1_left(0.3)
    with pytest.raises(InconsistentSpectrum):
        eigenvectors(sys, SpectralPair(0.1 + 0j, 0.2 + 0j, 0.05 + 0j))


def test_rigidity_tends_to_one_as_coupling_vanishes():
    values = [abs(eigenvectors(fig1_left(0.2, w)).rigidity1) for w in 10.0 ** -np.arange(1, 7)]
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert values[-1] == pytest.approx(1, abs=1e-9)


def test_norm_grows_approaching_the_ep():
    ratios = [norm_ratio(eigenvectors(fig1_left(2 / 3 + d)).v1) for d in 10.0 ** -np.arange(2, 8)]
    assert all(b > a for a, b in zip(ratios, ratios[1:]))
    # |Z| ~ sqrt(distance), so v^dagger v grows like distance^(-1/2)
    assert ratios[-1] / ratios[-2] == pytest.approx(10**0.5, rel=0.01)


@settings(max_examples=300)
@given(systems)
def test_eigenvector_residual_and_biorthonormality(sys):
    spec = eigenvalues(sys)
    pair = eigenvectors(sys, spec)
    m = matrix(sys)
    if pair.defect_flag:
        return
    scale = sys.scale
    for ev, v in ((spec.ev1, pair.v1), (spec.ev2, pair.v2)):
        assert np.linalg.norm(m @ v - ev * v) <= 1e-10 * scale
        assert abs(v @ v - 1) <= 1e-10
        lead = v[0] if abs(v[0]) > 1e-14 * np.linalg.norm(v) else v[1]
        assert -np.pi / 2 < np.angle(lead) <= np.pi / 2 or lead.real > 0
    for r in pair.rigidities:
        assert abs(r) <= 1 + 1e-12
    if abs(spec.z) > 10 * EP_TOL * scale:
        assert abs(pair.v1 @ pair.v2) <= 1e-8


@given(systems)
def test_defect_flag_tracks_discriminant(sys):
    spec = eigenvalues(sys)
    pair = eigenvectors(sys, spec)
    assume(sys.omega != 0)
    assert pair.defect_flag == (abs(spec.z) < EP_TOL * sys.scale)
