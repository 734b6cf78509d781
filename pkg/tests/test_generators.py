import math

import numpy as np
import pytest

import qvplab as q
from qvplab import Direction
from qvplab.hilbert import _forward_cdft

PI = math.pi


# ------------------------------------------------------------ construction

def test_commuting_pair_fields(grid64):
    pair = q.build_commuting(grid64, 2.0)
    assert pair.lam == 0.0
    assert pair.scale == 2.0
    assert pair.regime is q.Regime.COMMUTING


def test_weyl_pair_rejects_zero_lam(grid64):
    with pytest.raises(ValueError, match="build_commuting"):
        q.build_weyl_pair(grid64, 0.0)
    with pytest.raises(ValueError):
        q.build_weyl_pair(grid64, -1.0)


# ---------------------------------------------------------------- evolve

def test_commuting_translation(grid64):
    pair = q.build_commuting(grid64, 1.5)
    psi = q.gaussian_state(grid64, 0.0, 1.0)
    out = q.evolve(pair, psi, 2.0, Direction.FORWARD)
    mean, var = q.density_moments(out)
    assert mean == pytest.approx(1.5 * 2.0, rel=0.01)
    assert var == pytest.approx(0.5, rel=0.01)  # free translation keeps the width


def test_commuting_unwind(grid64):
    pair = q.build_commuting(grid64, 1.0)
    psi = q.gaussian_state(grid64, 0.0, 1.0)
    back = q.evolve(pair, q.evolve(pair, psi, 3.0, Direction.FORWARD),
                    3.0, Direction.BACKWARD)
    assert q.fidelity(back, psi) >= 1.0 - 1e-10


def test_weyl_forward_shift(weyl_pair_pi):
    psi = q.gaussian_state(weyl_pair_pi.space, 0.0, 1.0)
    out = q.evolve(weyl_pair_pi, psi, 2.0, Direction.FORWARD)
    mean, _ = q.density_moments(out)
    assert mean == pytest.approx(math.sqrt(PI) * 2.0, rel=0.01)


def test_weyl_backward_shift(weyl_pair_pi):
    psi = q.gaussian_state(weyl_pair_pi.space, 0.0, 1.0)
    out = q.evolve(weyl_pair_pi, psi, 2.0, Direction.BACKWARD)
    mean, _ = q.density_moments(out)
    assert mean == pytest.approx(-math.sqrt(PI) * 2.0, rel=0.01)


def test_weyl_forward_backward_not_inverse(weyl_pair_pi):
    psi = q.gaussian_state(weyl_pair_pi.space, 0.0, 1.0)
    round_trip = q.evolve(weyl_pair_pi, q.evolve(weyl_pair_pi, psi, 0.5, Direction.FORWARD),
                          0.5, Direction.BACKWARD)
    fid = q.fidelity(round_trip, psi)
    assert fid < 0.999
    # composite is a pure conjugate boost exp(i*sqrt(lam)*0.5*Q): overlap exp(-b^2/2)
    assert fid == pytest.approx(math.exp(-PI * 0.25 / 2.0), rel=0.01)


def test_evolve_continuity_at_zero(weyl_pair_pi):
    psi = q.gaussian_state(weyl_pair_pi.space, 0.0, 1.0)
    out = q.evolve(weyl_pair_pi, psi, 1e-8, Direction.FORWARD)
    assert q.fidelity(out, psi) >= 1.0 - 1e-6


def test_evolve_rejects_nonpositive_duration(weyl_pair_pi):
    psi = q.gaussian_state(weyl_pair_pi.space, 0.0, 1.0)
    with pytest.raises(ValueError):
        q.evolve(weyl_pair_pi, psi, 0.0, Direction.FORWARD)
    with pytest.raises(ValueError):
        q.evolve(weyl_pair_pi, psi, -1.0, Direction.BACKWARD)


def test_evolve_forward_matches_dense_exponential():
    # dense-matrix oracle: exact exponential of the conjugate-coordinate
    # operator on a small grid
    g = q.make_grid(32, 16.0)
    pair = q.build_commuting(g, 1.0)
    psi = q.gaussian_state(g, 0.0, 1.2)
    F = np.array([_forward_cdft(g, col) for col in np.eye(g.dim, dtype=complex)]).T
    P = F.conj().T @ np.diag(g.conjugate_coordinates) @ F
    w, V = np.linalg.eigh(P)
    U = (V * np.exp(-1j * 0.7 * w)) @ V.conj().T
    expected = U @ psi.amplitudes
    got = q.evolve(pair, psi, 0.7, Direction.FORWARD)
    assert np.abs(got.amplitudes - expected).max() < 1e-10


# --------------------------------------------------------- commutator_check

def test_commutator_weyl(grid64):
    space = q.make_grid(512, 64.0)
    pair = q.build_weyl_pair(space, PI)
    probes = [q.gaussian_state(space, c, w)
              for c, w in ((0.0, 1.0), (2.0, 1.5), (-1.0, 0.8))]
    assert q.commutator_check(pair, probes) <= 1e-6


def test_commutator_commuting(grid64):
    pair = q.build_commuting(grid64, 1.0)
    probes = [q.gaussian_state(grid64, 0.0, 1.0)]
    assert q.commutator_check(pair, probes) <= 1e-10


def test_commutator_rejects_edge_probe(weyl_pair_pi):
    edgy = q.gaussian_state(weyl_pair_pi.space, 27.0, 1.0)
    with pytest.raises(q.BoundaryError):
        q.commutator_check(weyl_pair_pi, [edgy])


# ------------------------------------------------------------ time_reversal

def test_time_reversal_conjugation_identity(weyl_pair_pi):
    delta = 0.1
    for center in (0.0, 1.5, -2.0):
        psi = q.gaussian_state(weyl_pair_pi.space, center, 1.0)
        lhs = q.time_reversal(
            weyl_pair_pi,
            q.evolve(weyl_pair_pi, q.time_reversal(weyl_pair_pi, psi),
                     delta, Direction.FORWARD))
        rhs = q.evolve(weyl_pair_pi, psi, delta, Direction.BACKWARD)
        assert np.linalg.norm(lhs.amplitudes - rhs.amplitudes) <= 1e-8


def test_time_reversal_squares_to_identity(weyl_pair_pi):
    psi = q.gaussian_state(weyl_pair_pi.space, 1.0, 1.0)
    twice = q.time_reversal(weyl_pair_pi, q.time_reversal(weyl_pair_pi, psi))
    assert np.abs(twice.amplitudes - psi.amplitudes).max() < 1e-12


def test_time_reversal_antilinear(weyl_pair_pi):
    psi = q.gaussian_state(weyl_pair_pi.space, 1.0, 1.0)
    scaled = q.StateVector(weyl_pair_pi.space, 1j * psi.amplitudes)
    lhs = q.time_reversal(weyl_pair_pi, scaled)
    rhs = -1j * q.time_reversal(weyl_pair_pi, psi).amplitudes
    assert np.abs(lhs.amplitudes - rhs).max() < 1e-12


def test_time_reversal_commuting_flips_translation(grid64):
    # conjugation with T must turn forward evolution into backward evolution
    pair = q.build_commuting(grid64, 1.0)
    psi = q.gaussian_state(grid64, 0.0, 1.0)
    lhs = q.time_reversal(pair, q.evolve(pair, q.time_reversal(pair, psi),
                                         2.0, Direction.FORWARD))
    rhs = q.evolve(pair, psi, 2.0, Direction.BACKWARD)
    assert np.linalg.norm(lhs.amplitudes - rhs.amplitudes) <= 1e-10


# ---------------------------------------------------------------- phen_pair

def test_phen_coefficients_three_pi(weyl_pair_pi):
    pp = q.phen_pair(weyl_pair_pi, 3.0 * PI)
    assert pp.a_plus == pytest.approx(1.25, abs=1e-12)
    assert pp.a_minus == pytest.approx(0.25, abs=1e-12)


def test_phen_coefficients_223_pi(weyl_pair_pi):
    pp = q.phen_pair(weyl_pair_pi, 2.23 * PI)
    assert pp.a_plus == pytest.approx(1.0575, abs=1e-12)
    assert pp.a_minus == pytest.approx(0.0575, abs=1e-12)


def test_phen_linear_identities(weyl_pair_pi):
    for theta in (2.1 * PI, 2.77 * PI, 3.9 * PI):
        pp = q.phen_pair(weyl_pair_pi, theta)
        assert pp.a_plus - pp.a_minus == pytest.approx(1.0, abs=1e-12)
        assert pp.a_plus + pp.a_minus == pytest.approx(theta / (2 * PI), abs=1e-12)


def test_phen_theta_range(weyl_pair_pi):
    for bad in (2.0 * PI, 4.0 * PI, 1.0, 13.0):
        with pytest.raises(ValueError):
            q.phen_pair(weyl_pair_pi, bad)


def test_phen_requires_weyl(grid64):
    with pytest.raises(ValueError):
        q.phen_pair(q.build_commuting(grid64, 1.0), 3.0 * PI)


def test_phen_advance_equals_composite(weyl_pair_pi):
    # exp(-i d H_phen_F) equals forward a+ d then backward a- d up to a
    # global phase (the central correction)
    theta = 2.23 * PI
    pair = q.build_weyl_pair(weyl_pair_pi.space, theta)
    pp = q.phen_pair(pair, theta)
    psi = q.gaussian_state(pair.space, 0.0, 1.0)
    delta = 0.8
    direct = q.phen_evolve_forward(pp, psi, delta)
    composite = q.evolve(pair, q.evolve(pair, psi, pp.a_plus * delta, Direction.FORWARD),
                         pp.a_minus * delta, Direction.BACKWARD)
    assert q.fidelity(direct, composite) >= 1.0 - 1e-8


def test_phen_advance_moves_clock_coordinate(weyl_pair_pi):
    theta = 3.0 * PI
    pair = q.build_weyl_pair(weyl_pair_pi.space, theta)
    pp = q.phen_pair(pair, theta)
    psi = q.gaussian_state(pair.space, 0.0, 1.0)
    t = 1.5
    out = q.phen_evolve_forward(pp, psi, t)
    mean, _ = q.density_moments(out)
    assert mean == pytest.approx(pair.scale * t, rel=0.01)
    back = q.phen_evolve_backward(pp, psi, t)
    mean_b, _ = q.density_moments(back)
    assert mean_b == pytest.approx(-pair.scale * t, rel=0.01)
