"""Forward/backward generator pairs and their evolutions.

Commuting regime: H_F = H_B = scale * P, where P is the conjugate
coordinate operator, so evolution translates coordinate wavepackets.

Weyl regime with central commutator [H_B, H_F] = i*lam:

    H_F = sqrt(lam) * P,      H_B = sqrt(lam) * (Q + P).

The clock-time axis is t = q / sqrt(lam): forward evolution for a
duration d moves a packet by +sqrt(lam)*d along it, backward evolution
by -sqrt(lam)*d (while also boosting the conjugate coordinate, which is
what makes the pair non-commuting).  Every exponential of these linear
generators reduces to one conjugate-space translation, one coordinate
phase and a scalar phase, so each evolution costs O(dim log dim).

The time-reversal map in the weyl regime is the antiunitary

    (T psi)(q) = exp(-i q^2 / 2) * conj(psi(-q)),

which satisfies T^-1 H_F T = H_B exactly and squares to the identity.
In the commuting regime it reduces to conjugation composed with parity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .hilbert import (GridSpace, Representation, RepresentationError, StateVector,
                      _forward_cdft, _inverse_cdft, check_boundary)

TWO_PI = 2.0 * math.pi


class Regime(Enum):
    COMMUTING = "commuting"
    WEYL = "weyl"


class Direction(Enum):
    FORWARD = "forward"
    BACKWARD = "backward"


@dataclass(frozen=True)
class GeneratorPair:
    """Realization of (H_F, H_B) with declared commutator constant lam."""

    regime: Regime
    lam: float
    scale: float
    space: GridSpace


@dataclass(frozen=True)
class PhenomenologicalPair:
    """Weighted-average generators H_phen_F = a+ H_F - a- H_B and its T-conjugate."""

    a_plus: float
    a_minus: float
    theta: float
    source: GeneratorPair

    def __post_init__(self):
        assert abs((self.a_plus - self.a_minus) - 1.0) < 1e-12
        assert abs((self.a_plus + self.a_minus) - self.theta / TWO_PI) < 1e-12


def build_commuting(space: GridSpace, scale: float) -> GeneratorPair:
    """Commuting pair H_F = H_B = scale * P (lam = 0)."""
    if not scale > 0:
        raise ValueError(f"scale must be positive, got {scale}")
    return GeneratorPair(Regime.COMMUTING, 0.0, float(scale), space)


def build_weyl_pair(space: GridSpace, lam: float) -> GeneratorPair:
    """Weyl pair with [H_B, H_F] = i*lam, lam > 0."""
    if lam == 0:
        raise ValueError("lam = 0 has no T violation; use build_commuting instead")
    if lam < 0:
        raise ValueError(f"lam must be positive, got {lam}")
    return GeneratorPair(Regime.WEYL, float(lam), math.sqrt(lam), space)


def _translate(space: GridSpace, amps: np.ndarray, dq: float) -> np.ndarray:
    """exp(-i dq P): psi(q) -> psi(q - dq), spectral and exact for band-limited states."""
    tilde = _forward_cdft(space, amps)
    tilde *= np.exp(-1j * dq * space.conjugate_coordinates)
    return _inverse_cdft(space, tilde)


def weyl_displace(state: StateVector, dq: float = 0.0, dp: float = 0.0,
                  phase: float = 0.0) -> StateVector:
    """Apply exp(i*phase) * exp(i dp Q) * exp(-i dq P) to a coordinate-rep state."""
    if state.representation is not Representation.COORDINATE:
        raise RepresentationError("weyl_displace requires the coordinate representation")
    amps = state.amplitudes
    if dq != 0.0:
        amps = _translate(state.space, amps, dq)
    factor = np.exp(1j * (dp * state.space.coordinates + phase))
    return StateVector(state.space, amps * factor, Representation.COORDINATE)


def evolve(pair: GeneratorPair, state: StateVector, duration: float,
           direction: Direction) -> StateVector:
    """Directional time evolution.

    forward  applies exp(-i duration H_F),
    backward applies exp(+i duration H_B); duration must be positive,
    the direction is carried entirely by the flag.
    """
    if not duration > 0:
        raise ValueError(f"duration must be positive, got {duration}")
    d = float(duration)
    if pair.regime is Regime.COMMUTING:
        shift = pair.scale * d
        if direction is Direction.FORWARD:
            return weyl_displace(state, dq=+shift)
        return weyl_displace(state, dq=-shift)
    rl = pair.scale  # sqrt(lam)
    if direction is Direction.FORWARD:
        return weyl_displace(state, dq=+rl * d)
    # exp(+i d sqrt(lam) (Q+P)) = e^{i dp Q} e^{-i dq P} e^{i lam d^2 / 2}
    return weyl_displace(state, dq=-rl * d, dp=+rl * d, phase=+0.5 * pair.lam * d * d)


def apply_hf(pair: GeneratorPair, state: StateVector) -> StateVector:
    """Apply the operator H_F itself (not its exponential)."""
    if state.representation is not Representation.COORDINATE:
        raise RepresentationError("apply_hf requires the coordinate representation")
    space = state.space
    tilde = _forward_cdft(space, state.amplitudes)
    tilde *= space.conjugate_coordinates
    p_amps = _inverse_cdft(space, tilde)
    return StateVector(space, pair.scale * p_amps, Representation.COORDINATE)


def apply_hb(pair: GeneratorPair, state: StateVector) -> StateVector:
    """Apply the operator H_B itself."""
    if pair.regime is Regime.COMMUTING:
        return apply_hf(pair, state)
    p_part = apply_hf(pair, state)  # sqrt(lam) * P psi
    q_part = pair.scale * state.space.coordinates * state.amplitudes
    return StateVector(state.space, q_part + p_part.amplitudes,
                       Representation.COORDINATE)


def commutator_check(pair: GeneratorPair, probes: list[StateVector]) -> float:
    """max over probes of |<psi|[H_B, H_F]|psi> - i*lam|.

    Probes must be normalized and respect the boundary-mass guard.
    """
    worst = 0.0
    for probe in probes:
        check_boundary(probe, context="commutator probe")
        hf = apply_hf(pair, probe)
        hb = apply_hb(pair, probe)
        # <psi| H_B H_F - H_F H_B |psi> = <H_B psi|H_F psi> - <H_F psi|H_B psi>
        expct = (np.vdot(hb.amplitudes, hf.amplitudes)
                 - np.vdot(hf.amplitudes, hb.amplitudes))
        worst = max(worst, abs(expct - 1j * pair.lam))
    return worst


def time_reversal(pair: GeneratorPair, state: StateVector) -> StateVector:
    """Antiunitary time-reversal map T with T^-1 exp(-i d H_F) T = exp(+i d H_B).

    Weyl regime: (T psi)(q) = exp(-i q^2/2) conj(psi(-q)); T is an involution.
    Commuting regime: conjugation composed with parity, (T psi)(q) = conj(psi(-q)).
    """
    if state.representation is not Representation.COORDINATE:
        raise RepresentationError("time_reversal requires the coordinate representation")
    amps = state.amplitudes
    flipped = np.roll(amps[::-1], 1)  # q -> -q with the periodic edge fixed
    out = np.conj(flipped)
    if pair.regime is Regime.WEYL:
        q = state.space.coordinates
        out = out * np.exp(-0.5j * q * q)
    return StateVector(state.space, out, Representation.COORDINATE)


def phen_pair(pair: GeneratorPair, theta: float) -> PhenomenologicalPair:
    """Phenomenological coefficients a_pm = theta/(4 pi) +- 1/2 for 2 pi < theta < 4 pi."""
    if pair.regime is not Regime.WEYL:
        raise ValueError("phenomenological pair requires the weyl regime")
    if not (TWO_PI < theta < 2.0 * TWO_PI):
        raise ValueError(f"theta must lie in (2*pi, 4*pi), got {theta}")
    a_plus = theta / (2.0 * TWO_PI) + 0.5
    a_minus = theta / (2.0 * TWO_PI) - 0.5
    return PhenomenologicalPair(a_plus, a_minus, float(theta), pair)


def phen_evolve_forward(pp: PhenomenologicalPair, state: StateVector,
                        duration: float, rewind: bool = False) -> StateVector:
    """exp(-i t H_phen_F) (advance), or exp(+i t H_phen_F) when rewind is set.

    H_phen_F = sqrt(lam) (P - a_minus Q), so an advance by t moves the packet
    by exactly +sqrt(lam)*t along the clock-time axis.
    """
    t = float(duration)
    lam = pp.source.lam
    rl = pp.source.scale
    sign = -1.0 if rewind else 1.0
    return weyl_displace(state,
                         dq=sign * rl * t,
                         dp=sign * pp.a_minus * rl * t,
                         phase=-0.5 * pp.a_minus * lam * t * t)


def phen_evolve_backward(pp: PhenomenologicalPair, state: StateVector,
                         duration: float) -> StateVector:
    """exp(+i t H_phen_B) with H_phen_B = sqrt(lam) (P + a_plus Q).

    Moves the packet by -sqrt(lam)*t along the clock-time axis.
    """
    t = float(duration)
    lam = pp.source.lam
    rl = pp.source.scale
    return weyl_displace(state,
                         dq=-rl * t,
                         dp=+pp.a_plus * rl * t,
                         phase=+0.5 * pp.a_plus * lam * t * t)


def apply_hphen_f(pp: PhenomenologicalPair, state: StateVector) -> StateVector:
    """Apply the operator H_phen_F = sqrt(lam) (P - a_minus Q)."""
    p_part = apply_hf(pp.source, state)  # sqrt(lam) * P psi
    q_part = (pp.source.scale * pp.a_minus) * state.space.coordinates * state.amplitudes
    return StateVector(state.space, p_part.amplitudes - q_part,
                       Representation.COORDINATE)
