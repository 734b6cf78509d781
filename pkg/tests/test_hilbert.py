import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import qvplab as q
from qvplab import Representation


def random_state(space, seed=0):
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=space.dim) + 1j * rng.normal(size=space.dim)
    return q.StateVector(space, amps / np.linalg.norm(amps))


# ---------------------------------------------------------------- make_grid

def test_make_grid_basic():
    g = q.make_grid(8, 8.0)
    assert g.spacing == 1.0
    assert g.origin_index == 4
    assert np.array_equal(g.coordinates, np.arange(-4.0, 4.0))


def test_make_grid_fine_spacing():
    assert q.make_grid(1024, 128.0).spacing == 0.125


def test_make_grid_rejects_odd_and_tiny():
    with pytest.raises(ValueError):
        q.make_grid(7, 8.0)
    with pytest.raises(ValueError):
        q.make_grid(6, 8.0)
    with pytest.raises(ValueError):
        q.make_grid(16, -1.0)


# ----------------------------------------------------------- gaussian_state

def test_gaussian_moments(grid64):
    psi = q.gaussian_state(grid64, 0.0, 1.0)
    mean, var = q.density_moments(psi)
    assert abs(mean) < 1e-9
    assert abs(var - 0.5) < 0.005  # density variance is width^2 / 2


def test_gaussian_self_fidelity(grid64):
    a = q.gaussian_state(grid64, 1.0, 1.5)
    assert q.fidelity(a, a) == pytest.approx(1.0, abs=1e-12)


def test_gaussian_overlap_closed_form(grid64):
    # |<g(0,1)|g(d,1)>| = exp(-d^2/4); cross-checked by direct quadrature
    # of the continuum integrand on an independent fine grid.
    d = 2.0
    x = np.linspace(-25.0, 25.0, 400001)
    f = np.exp(-x ** 2 / 2.0) * np.exp(-(x - d) ** 2 / 2.0)
    norm = np.trapezoid(np.exp(-x ** 2), x)
    quadrature = np.trapezoid(f, x) / norm
    assert quadrature == pytest.approx(math.exp(-1.0), abs=1e-9)

    a = q.gaussian_state(grid64, 0.0, 1.0)
    b = q.gaussian_state(grid64, d, 1.0)
    assert abs(q.inner(a, b)) == pytest.approx(0.36787944117144233, abs=1e-6)


def test_gaussian_fidelity_value(grid64):
    a = q.gaussian_state(grid64, 0.0, 1.0)
    b = q.gaussian_state(grid64, 2.0, 1.0)
    assert q.fidelity(a, b) == pytest.approx(0.1353352832366127, abs=1e-6)


def test_gaussian_boundary_rejection(grid64):
    with pytest.raises(q.BoundaryError):
        q.gaussian_state(grid64, 30.0, 1.0)
    with pytest.raises(ValueError):
        q.gaussian_state(grid64, 0.0, 0.01)  # unresolvable width


# ------------------------------------------------------- conjugate_transform

def test_transform_involution(grid64):
    psi = random_state(grid64, seed=1)
    back = q.conjugate_transform(q.conjugate_transform(psi))
    assert np.abs(back.amplitudes - psi.amplitudes).max() < 1e-12
    assert back.representation is Representation.COORDINATE


def test_transform_unitary(grid64):
    psi = random_state(grid64, seed=2)
    assert abs(q.conjugate_transform(psi).norm() - 1.0) < 1e-12


def test_transform_preserves_inner_products(grid64):
    a, b = random_state(grid64, 3), random_state(grid64, 4)
    lhs = q.inner(a, b)
    rhs = q.inner(q.conjugate_transform(a), q.conjugate_transform(b))
    assert abs(lhs - rhs) < 1e-12


def test_transform_width_reciprocal(grid64):
    # Gaussian of width w maps to width 1/w; check the conjugate density
    # variance 1/(2 w^2) within 2%.
    w = 2.0
    tilde = q.conjugate_transform(q.gaussian_state(grid64, 0.0, w))
    rho = np.abs(tilde.amplitudes) ** 2
    p = grid64.conjugate_coordinates
    mean = np.sum(p * rho)
    var = np.sum((p - mean) ** 2 * rho)
    assert var == pytest.approx(1.0 / (2.0 * w * w), rel=0.02)


def test_transform_translation_direction(grid64):
    # multiplying by exp(-i a p) in the conjugate representation moves
    # coordinate wavepackets by +a; integer-spacing shifts match np.roll
    psi = q.gaussian_state(grid64, 0.0, 1.0)
    k = 8
    shifted = q.weyl_displace(psi, dq=k * grid64.spacing)
    assert np.abs(shifted.amplitudes - np.roll(psi.amplitudes, k)).max() < 1e-10


# ------------------------------------------------------- apply_diagonal_phase

def test_phase_zero_is_identity(grid64):
    psi = random_state(grid64, 5)
    out = q.apply_diagonal_phase(psi, lambda x: np.zeros_like(x))
    assert np.abs(out.amplitudes - psi.amplitudes).max() < 1e-15


def test_phase_constant_is_global(grid64):
    psi = random_state(grid64, 6)
    out = q.apply_diagonal_phase(psi, lambda x: np.full_like(x, 0.7))
    assert q.fidelity(out, psi) == pytest.approx(1.0, abs=1e-12)


def test_phase_additivity(grid64):
    psi = random_state(grid64, 7)
    f = lambda x: 0.3 * x
    g = lambda x: np.sin(x)
    two = q.apply_diagonal_phase(q.apply_diagonal_phase(psi, f), g)
    one = q.apply_diagonal_phase(psi, lambda x: f(x) + g(x))
    assert np.abs(two.amplitudes - one.amplitudes).max() < 1e-12


def test_phase_representation_mismatch(grid64):
    tilde = q.conjugate_transform(random_state(grid64, 8))
    with pytest.raises(q.RepresentationError):
        q.apply_diagonal_phase(tilde, lambda x: x)


# ------------------------------------------------------------ density tools

def test_density_moments_delta(grid64):
    amps = np.zeros(grid64.dim, dtype=complex)
    idx = grid64.origin_index + int(round(3.0 / grid64.spacing))
    amps[idx] = 1.0
    mean, var = q.density_moments(q.StateVector(grid64, amps))
    assert mean == pytest.approx(3.0, abs=1e-12)
    assert var == pytest.approx(0.0, abs=1e-12)


def test_density_moments_symmetric_superposition(grid64):
    a = 4.0
    amps = np.zeros(grid64.dim, dtype=complex)
    step = int(round(a / grid64.spacing))
    amps[grid64.origin_index - step] = 1.0 / math.sqrt(2)
    amps[grid64.origin_index + step] = 1.0 / math.sqrt(2)
    mean, var = q.density_moments(q.StateVector(grid64, amps))
    assert mean == pytest.approx(0.0, abs=1e-12)
    assert var == pytest.approx(a * a, abs=1e-9)


def test_fidelity_orthogonal_deltas(grid64):
    a = np.zeros(grid64.dim, dtype=complex)
    b = np.zeros(grid64.dim, dtype=complex)
    a[10], b[20] = 1.0, 1.0
    assert q.fidelity(q.StateVector(grid64, a), q.StateVector(grid64, b)) == 0.0


def test_fidelity_space_mismatch(grid64):
    other = q.make_grid(512, 64.0)
    with pytest.raises(ValueError):
        q.fidelity(q.gaussian_state(grid64, 0, 1), q.gaussian_state(other, 0, 1))


def test_boundary_mass_monitor(grid64):
    centered = q.gaussian_state(grid64, 0.0, 1.0)
    assert q.boundary_mass(centered) < 1e-12
    edgy = q.gaussian_state(grid64, 27.0, 1.0)
    assert q.boundary_mass(edgy) > 1e-6
    with pytest.raises(q.BoundaryError):
        q.check_boundary(edgy)


# --------------------------------------------------------------- properties

@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_property_transform_norm_preserving(seed):
    g = q.make_grid(128, 32.0)
    psi = random_state(g, seed)
    assert abs(q.conjugate_transform(psi).norm() - 1.0) < 1e-12


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10_000), center=st.floats(-5, 5), width=st.floats(0.5, 2))
def test_property_fidelity_bounds_and_symmetry(seed, center, width):
    g = q.make_grid(256, 64.0)
    a = random_state(g, seed)
    b = q.gaussian_state(g, center, width)
    f_ab = q.fidelity(a, b)
    assert 0.0 <= f_ab <= 1.0
    assert f_ab == pytest.approx(q.fidelity(b, a), abs=1e-12)
