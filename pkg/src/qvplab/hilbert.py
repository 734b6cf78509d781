"""Finite periodic 1-D Hilbert-space substrate.

Grid convention: dim is even, the origin sits at index dim // 2, and the
coordinates q_i = (i - dim//2) * spacing cover [-extent/2, extent/2).
The conjugate representation is reached by a centred unitary DFT with a
negative-exponent forward kernel and symmetric normalisation,

    F[psi](p_m) = dim**-0.5 * sum_j psi(q_j) exp(-i q_j p_m),

where p_m = (m - dim//2) * 2*pi/extent.  Under this convention a Gaussian
of amplitude width w maps to one of width 1/w, and multiplication by
exp(-i*a*p) in the conjugate representation translates coordinate
wavepackets by +a.

The grid is periodic, so every experiment must keep wavepacket mass inside
the central 80% of the extent; ``boundary_mass`` implements the monitor
(limit 1e-6).  Natural units, hbar = 1.  All operations are pure: states
are immutable and every operation returns a new one.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Callable

import numpy as np

BOUNDARY_MASS_LIMIT = 1e-6
CENTRAL_FRACTION = 0.8


class Representation(Enum):
    COORDINATE = "coordinate"
    CONJUGATE = "conjugate"


class BoundaryError(RuntimeError):
    """A wavepacket put non-negligible mass near the periodic edge."""


class RepresentationError(ValueError):
    """A state was supplied in the wrong representation."""


@dataclass(frozen=True, eq=False)
class GridSpace:
    """Periodic 1-D coordinate grid hosting all state vectors."""

    dim: int
    extent: float

    def __post_init__(self):
        if self.dim < 8 or self.dim % 2 != 0:
            raise ValueError(f"dim must be even and >= 8, got {self.dim}")
        if not self.extent > 0:
            raise ValueError(f"extent must be positive, got {self.extent}")

    @property
    def spacing(self) -> float:
        return self.extent / self.dim

    @property
    def origin_index(self) -> int:
        return self.dim // 2

    @cached_property
    def coordinates(self) -> np.ndarray:
        q = (np.arange(self.dim) - self.origin_index) * self.spacing
        q.setflags(write=False)
        return q

    @cached_property
    def conjugate_coordinates(self) -> np.ndarray:
        dp = 2.0 * np.pi / self.extent
        p = (np.arange(self.dim) - self.origin_index) * dp
        p.setflags(write=False)
        return p

    @cached_property
    def _alt_signs(self) -> np.ndarray:
        s = np.where(np.arange(self.dim) % 2 == 0, 1.0, -1.0)
        s.setflags(write=False)
        return s

    @cached_property
    def _center_phase(self) -> float:
        # exp(-i*pi*dim/2) for even dim is +-1
        return 1.0 if (self.dim // 2) % 2 == 0 else -1.0

    def __eq__(self, other):
        return (isinstance(other, GridSpace)
                and self.dim == other.dim and self.extent == other.extent)

    def __hash__(self):
        return hash((self.dim, self.extent))


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex amplitude vector over a GridSpace, in one fixed representation."""

    space: GridSpace
    amplitudes: np.ndarray
    representation: Representation = Representation.COORDINATE

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (self.space.dim,):
            raise ValueError(
                f"amplitude length {amps.shape} does not match dim {self.space.dim}")
        amps = amps.copy()
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.space, self.amplitudes / n, self.representation)

    def density(self) -> np.ndarray:
        """Probability mass per grid point (sums to 1 for a normalized state)."""
        return np.abs(self.amplitudes) ** 2


def make_grid(dim: int, extent: float) -> GridSpace:
    """Create a periodic grid with the origin at index dim//2."""
    return GridSpace(int(dim), float(extent))


def _forward_cdft(space: GridSpace, amps: np.ndarray) -> np.ndarray:
    s = space._alt_signs
    return space._center_phase / np.sqrt(space.dim) * (s * np.fft.fft(s * amps))


def _inverse_cdft(space: GridSpace, amps: np.ndarray) -> np.ndarray:
    s = space._alt_signs
    return space._center_phase * np.sqrt(space.dim) * (s * np.fft.ifft(s * amps))


def conjugate_transform(state: StateVector) -> StateVector:
    """Unitary map to the other representation; applying twice is the identity."""
    if state.representation is Representation.COORDINATE:
        out = _forward_cdft(state.space, state.amplitudes)
        rep = Representation.CONJUGATE
    else:
        out = _inverse_cdft(state.space, state.amplitudes)
        rep = Representation.COORDINATE
    return StateVector(state.space, out, rep)


def gaussian_state(space: GridSpace, center: float, width: float) -> StateVector:
    """Normalized Gaussian amplitude profile exp(-(w-center)^2 / (2 width^2)).

    Requires width >= 2*spacing (resolvable on the grid) and support at
    least 4 widths away from the periodic edge.
    """
    if not width > 0:
        raise ValueError(f"width must be positive, got {width}")
    if width < 2.0 * space.spacing:
        raise ValueError(
            f"width {width} unresolvable: needs >= 2*spacing = {2 * space.spacing}")
    if abs(center) + 4.0 * width >= space.extent / 2.0:
        raise BoundaryError(
            f"gaussian(center={center}, width={width}) clips the grid edge "
            f"(extent {space.extent})")
    q = space.coordinates
    amps = np.exp(-((q - center) ** 2) / (2.0 * width ** 2)).astype(np.complex128)
    amps /= np.linalg.norm(amps)
    return StateVector(space, amps, Representation.COORDINATE)


def apply_diagonal_phase(state: StateVector,
                         phase_fn: Callable[[np.ndarray], np.ndarray],
                         representation: Representation = Representation.COORDINATE,
                         ) -> StateVector:
    """Multiply amplitudes by exp(i*phase_fn(axis)) in the given representation."""
    if state.representation is not representation:
        raise RepresentationError(
            f"state is in {state.representation.value} representation, "
            f"expected {representation.value}")
    axis = (state.space.coordinates
            if representation is Representation.COORDINATE
            else state.space.conjugate_coordinates)
    phase = np.asarray(phase_fn(axis), dtype=float)
    return StateVector(state.space, state.amplitudes * np.exp(1j * phase),
                       state.representation)


def inner(a: StateVector, b: StateVector) -> complex:
    """<a|b> for states on the same grid and representation."""
    if a.space != b.space:
        raise ValueError("states live on different grids")
    if a.representation is not b.representation:
        raise RepresentationError("states are in different representations")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2, clipped to [0, 1]."""
    val = abs(inner(a, b)) ** 2
    return float(min(val, 1.0))


def density_moments(state: StateVector) -> tuple[float, float]:
    """(mean, variance) of the coordinate density of a normalized state."""
    if state.representation is not Representation.COORDINATE:
        raise RepresentationError("density_moments requires the coordinate representation")
    if abs(state.norm() - 1.0) > 1e-9:
        raise ValueError("state must be normalized")
    rho = state.density()
    q = state.space.coordinates
    mean = float(np.sum(q * rho))
    var = float(np.sum((q - mean) ** 2 * rho))
    return mean, var


def boundary_mass(state: StateVector) -> float:
    """Probability mass outside the central 80% of the coordinate extent."""
    if state.representation is not Representation.COORDINATE:
        raise RepresentationError("boundary_mass requires the coordinate representation")
    rho = state.density()
    total = float(np.sum(rho))
    if total == 0.0:
        return 0.0
    q = state.space.coordinates
    edge = CENTRAL_FRACTION * state.space.extent / 2.0
    return float(np.sum(rho[np.abs(q) > edge]) / total)


def check_boundary(state: StateVector, limit: float = BOUNDARY_MASS_LIMIT,
                   context: str = "") -> None:
    """Raise BoundaryError when the edge-mass monitor trips."""
    mass = boundary_mass(state)
    if mass > limit:
        where = f" ({context})" if context else ""
        raise BoundaryError(
            f"boundary mass {mass:.3e} exceeds {limit:.1e}{where}")
