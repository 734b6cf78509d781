"""Quantum virtual-path (QVP) state construction.

A QVP over N steps applies the map

    psi  <-  (1/2) * (exp(+i step H_B) + exp(-i step H_F)) psi

exactly N times to a localized seed, with step = sigma / sqrt(N), and
normalizes the result.  In the commuting regime this is iterated
literally (one cosine multiplier per step in the conjugate
representation).

In the weyl regime the product of N step operators collapses, because
the commutator [H_B, H_F] = i*lam is central, to the exact closed form

    (1/2^N) (A + B)^N
        = exp(i N s Q / 2) * U * prod_m cos(s q / 2 + (2m+1) theta / (4N)) * U+

with s = step*sqrt(lam), theta = sigma^2 lam, U = exp(+i P^2) the shear
that diagonalizes Q + 2P, and m = 0..N-1.  This form is evaluated
instead of the iteration: the two are algebraically identical, but the
iteration is numerically hopeless for large N because destructive
interference shrinks the un-normalized state like exp(-c N) (c ~ 0.6)
while rounding noise in the surviving modes does not shrink with it.
The cosine product evaluates each grid point independently and keeps
full relative precision at any N.

The evaluation wraps intermediate states around the periodic grid, so
the extent must be an integer multiple of the cosine-product period
4*pi/s; ``suggest_weyl_grid`` constructs compliant grids.

An independent oracle expands (A + B)^N into ordered words A^k B^(N-k)
weighted by Gaussian-binomial coefficients at q = exp(-i theta / N),
computed with the division-free recurrence

    [n, k]_q = [n-1, k-1]_q + q^k [n-1, k]_q

in extended precision (the recurrence passes through intermediates of
size ~2^n that cancel down to O(1) final values).  Each ordered word
collapses to a single phase-space displacement and a central phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import mpmath
import numpy as np

from .hilbert import (GridSpace, Representation, StateVector, check_boundary,
                      gaussian_state, make_grid, _forward_cdft, _inverse_cdft)
from .generators import (Direction, GeneratorPair, Regime, build_weyl_pair,
                         phen_pair, phen_evolve_backward, phen_evolve_forward,
                         weyl_displace)

TWO_PI = 2.0 * math.pi

ORACLE_CAP_DEFAULT = 64


@dataclass(frozen=True)
class QvpParams:
    """Parameters (N, sigma) of one QVP build plus the derived step and theta."""

    n_steps: int
    sigma: float
    step: float
    theta: float
    initial_center: float = 0.0

    def __post_init__(self):
        if self.n_steps < 1:
            raise ValueError(f"n_steps must be >= 1, got {self.n_steps}")
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        expected = self.sigma / math.sqrt(self.n_steps)
        if abs(self.step - expected) > 1e-12 * max(1.0, abs(expected)):
            raise ValueError(f"step {self.step} != sigma/sqrt(N) = {expected}")


def qvp_params(pair: GeneratorPair, n_steps: int, sigma: float,
               initial_center: float = 0.0) -> QvpParams:
    """Build QvpParams with step = sigma/sqrt(N) and theta = sigma^2 * lam."""
    n_steps = int(n_steps)
    step = sigma / math.sqrt(n_steps)
    theta = sigma * sigma * pair.lam
    return QvpParams(n_steps, float(sigma), step, theta, float(initial_center))


@dataclass(frozen=True)
class ResolutionPolicy:
    """Resolution surrogate dw_min and the smallest admissible step count."""

    dw_min: float
    n_min: int


def resolution_threshold(sigma: float, dw_min: float) -> ResolutionPolicy:
    """Smallest N with sigma/sqrt(N) < dw_min, i.e. floor((sigma/dw_min)^2) + 1."""
    if not (sigma > 0 and dw_min > 0):
        raise ValueError("sigma and dw_min must be positive")
    ratio_sq = (sigma / dw_min) ** 2
    # absorb float rounding so exact-integer ratios land on the strict side
    n_min = int(math.floor(ratio_sq + 1e-9)) + 1
    return ResolutionPolicy(float(dw_min), n_min)


@dataclass(frozen=True)
class ConditionalState:
    """One conditional state |Y_N> with its clock time and interference diagnostic."""

    params: QvpParams
    state: StateVector
    clock_time: Optional[float]
    prenorm: float


def clock_time_of(n_steps: int, sigma: float, lam: float) -> float:
    return TWO_PI * math.sqrt(n_steps) / (sigma * lam)


def step_displacement(pair: GeneratorPair, params: QvpParams) -> float:
    """Coordinate displacement of a single virtual step, s = step * sqrt(lam)."""
    return params.step * pair.scale


def default_seed_width(pair: GeneratorPair, params: QvpParams,
                       space: GridSpace) -> float:
    """Width of the localized seed standing in for the idealized |t0>.

    The weyl walk places seed copies 2*s apart on the coordinate axis, so
    the seed must be narrow against the step displacement s for the copies
    to stay resolved; s/(4*pi) keeps the conjugate envelope spanning two
    interference teeth.  The commuting walk has no such scale and only
    needs width << sigma.
    """
    if pair.regime is Regime.WEYL:
        return max(2.0 * space.spacing, step_displacement(pair, params) / (4.0 * math.pi))
    return max(4.0 * space.spacing, params.sigma / 50.0)


def default_seed(pair: GeneratorPair, params: QvpParams,
                 space: Optional[GridSpace] = None) -> StateVector:
    space = space if space is not None else pair.space
    width = default_seed_width(pair, params, space)
    return gaussian_state(space, params.initial_center, width)


def suggest_weyl_grid(n_steps: int, theta: float, sigma: float = 1.0) -> GridSpace:
    """Grid whose extent is commensurate with the cosine-product period.

    Returns a GridSpace with extent K * 4*pi/s (K >= 2) large enough to hold
    the two lobes at +-2*pi*sqrt(N)/(sigma*sqrt(lam)) inside the central 80%,
    and spacing fine enough to resolve the default seed.
    """
    lam = theta / (sigma * sigma)
    s = sigma * math.sqrt(lam) / math.sqrt(n_steps)
    period = 2.0 * TWO_PI / s
    lobe_q = period / 2.0
    tan = abs(math.tan(theta / 4.0))
    width_q = 4.0 * math.sqrt(2.0 / tan) if tan > 1e-12 else period
    l_min = (lobe_q + width_q + 6.0 * sigma) / 0.4
    k = max(2, int(math.ceil(l_min / period - 1e-9)))
    extent = k * period
    dq_max = s / (8.0 * math.pi)
    dim = 1 << max(8, int(math.ceil(math.log2(extent / dq_max))))
    return make_grid(dim, extent)


def _weyl_product_amplitudes(pair: GeneratorPair, params: QvpParams,
                             seed: StateVector) -> np.ndarray:
    """Evaluate (1/2^N)(A+B)^N seed through the exact cosine-product form."""
    space = seed.space
    n = params.n_steps
    theta = params.theta
    s = step_displacement(pair, params)
    period = 2.0 * TWO_PI / s
    windings = space.extent / period
    if abs(windings - round(windings)) > 1e-6:
        raise ValueError(
            f"extent {space.extent} is not a multiple of the interference period "
            f"{period:.6f}; use suggest_weyl_grid(n={n}, theta={theta})")

    q = space.coordinates
    p = space.conjugate_coordinates

    # unshear: U+ = exp(-i P^2) maps Q + 2P onto Q
    tilde = _forward_cdft(space, seed.amplitudes)
    tilde *= np.exp(-1j * p * p)
    amps = _inverse_cdft(space, tilde)

    base = 0.5 * s * q
    w = np.ones(space.dim)
    for m in range(n):
        w = w * np.cos(base + (2 * m + 1) * theta / (4.0 * n))
    amps *= w

    tilde = _forward_cdft(space, amps)
    tilde *= np.exp(1j * p * p)
    amps = _inverse_cdft(space, tilde)

    amps *= np.exp(1j * (0.5 * n * s) * q)
    return amps


def qvp_step(pair: GeneratorPair, step: float, state: StateVector) -> StateVector:
    """One virtual-path step, (exp(+i step H_B) + exp(-i step H_F)) / 2."""
    space = state.space
    if pair.regime is Regime.COMMUTING:
        tilde = _forward_cdft(space, state.amplitudes)
        tilde *= np.cos(step * pair.scale * space.conjugate_coordinates)
        return StateVector(space, _inverse_cdft(space, tilde), Representation.COORDINATE)
    s = step * pair.scale
    tilde = _forward_cdft(space, state.amplitudes)
    p = space.conjugate_coordinates
    back = _inverse_cdft(space, tilde * np.exp(1j * s * p))
    back *= np.exp(1j * (s * space.coordinates + 0.5 * s * s))
    fwd = _inverse_cdft(space, tilde * np.exp(-1j * s * p))
    return StateVector(space, 0.5 * (back + fwd), Representation.COORDINATE)


def iterate_qvp(pair: GeneratorPair, params: QvpParams,
                seed: StateVector) -> ConditionalState:
    """Literal step-by-step QVP build with the boundary guard after every step.

    In the weyl regime this loses the signal to rounding noise beyond
    N of a few dozen; use build_qvp (exact product form) there.
    """
    check_boundary(seed, context="seed")
    state = seed
    for idx in range(params.n_steps):
        state = qvp_step(pair, params.step, state)
        check_boundary(state, context=f"step {idx + 1} of {params.n_steps}")
    prenorm = state.norm()
    tc = (clock_time_of(params.n_steps, params.sigma, pair.lam)
          if pair.regime is Regime.WEYL else None)
    return ConditionalState(params, state.normalized(), tc, prenorm)


def build_qvp(pair: GeneratorPair, params: QvpParams,
              seed: StateVector) -> ConditionalState:
    """Construct the conditional state |Y_N| from a localized seed.

    Applies the N-step virtual-path map and normalizes; records the
    pre-normalization norm as the destructive-interference diagnostic.
    """
    if seed.representation is not Representation.COORDINATE:
        raise ValueError("seed must be in the coordinate representation")
    if pair.regime is Regime.COMMUTING:
        return iterate_qvp(pair, params, seed)
    check_boundary(seed, context="seed")
    amps = _weyl_product_amplitudes(pair, params, seed)
    prenorm = float(np.linalg.norm(amps))
    if not np.isfinite(prenorm) or prenorm == 0.0:
        raise FloatingPointError(
            f"virtual-path interference underflowed at N={params.n_steps} "
            f"(pre-normalization norm {prenorm})")
    state = StateVector(seed.space, amps / prenorm, Representation.COORDINATE)
    check_boundary(state, context=f"final state N={params.n_steps}")
    tc = clock_time_of(params.n_steps, params.sigma, pair.lam)
    return ConditionalState(params, state, tc, prenorm)


def qbinomial_row(n: int, q_angle: float, dps: Optional[int] = None) -> np.ndarray:
    """Gaussian binomial coefficients [n, k] at q = exp(i*q_angle), k = 0..n.

    Division-free recurrence in extended precision: intermediate rows grow
    like binomials (~2^n) before the root-of-unity cancellation collapses
    them, so double precision is insufficient already near n = 50.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if dps is None:
        dps = max(50, 40 + int(0.35 * n))
    with mpmath.workdps(dps):
        q = mpmath.expjpi(mpmath.mpf(q_angle) / mpmath.pi)
        row = [mpmath.mpc(1)]
        for m in range(1, n + 1):
            prev = row
            row = [mpmath.mpc(1)]
            qk = mpmath.mpc(1)
            for k in range(1, m):
                qk = qk * q
                row.append(prev[k - 1] + qk * prev[k])
            row.append(mpmath.mpc(1))
        return np.array([complex(c) for c in row], dtype=np.complex128)


def qbinomial_oracle(pair: GeneratorPair, params: QvpParams, seed: StateVector,
                     cap: int = ORACLE_CAP_DEFAULT) -> ConditionalState:
    """Independent ordered-word evaluation of the N-step virtual-path map.

    Expands (A + B)^N with A = exp(+i step H_B), B = exp(-i step H_F) and
    AB = BA exp(i theta / N) into words A^k B^(N-k); each word is one
    displacement (dq = (N-2k) s, dp = k s) and one central phase
    k^2 theta / (2N).  Must agree with build_qvp amplitude-wise.
    """
    if pair.regime is not Regime.WEYL:
        raise ValueError("the q-binomial oracle applies to the weyl regime only")
    n = params.n_steps
    if n > cap:
        raise ValueError(f"oracle capped at N <= {cap}, got {n}")
    check_boundary(seed, context="seed")
    theta = params.theta
    s = step_displacement(pair, params)
    space = seed.space
    coeffs = qbinomial_row(n, -theta / n) * (0.5 ** n)

    seed_tilde = _forward_cdft(space, seed.amplitudes)
    p = space.conjugate_coordinates
    q = space.coordinates
    out = np.zeros(space.dim, dtype=np.complex128)
    for k in range(n + 1):
        dq = (n - 2 * k) * s
        dp = k * s
        phase = (k * k) * theta / (2.0 * n)
        word = _inverse_cdft(space, seed_tilde * np.exp(-1j * dq * p))
        word *= np.exp(1j * (dp * q + phase))
        out += coeffs[k] * word
    prenorm = float(np.linalg.norm(out))
    state = StateVector(space, out / prenorm, Representation.COORDINATE)
    check_boundary(state, context=f"oracle state N={n}")
    return ConditionalState(params, state,
                            clock_time_of(n, params.sigma, pair.lam), prenorm)


def limit_ket(space: GridSpace, center: float, sigma: float) -> StateVector:
    """Gaussian-profiled state every equal-status commuting-regime QVP approaches."""
    return gaussian_state(space, center, sigma)


def upsilon_set(pair: GeneratorPair, sigma: float, policy: ResolutionPolicy,
                n_list: Sequence[int]) -> list[ConditionalState]:
    """Conditional states for every admissible N, ascending in N (and clock time).

    Every requested N must satisfy N >= policy.n_min; smaller N are rejected
    because the equal-physical-status argument only covers steps finer than
    the resolution limit.  Each N is built on its own commensurate grid.
    """
    if pair.regime is not Regime.WEYL:
        raise ValueError("the conditional-state set enumeration requires the weyl regime")
    ns = [int(n) for n in n_list]
    if not ns:
        raise ValueError("n_list must be non-empty")
    below = [n for n in ns if n < policy.n_min]
    if below:
        raise ValueError(
            f"N values {below} are below the resolution threshold n_min={policy.n_min}")
    states = []
    for n in sorted(ns):
        theta = sigma * sigma * pair.lam
        space = suggest_weyl_grid(n, theta, sigma)
        pair_n = build_weyl_pair(space, pair.lam)
        params = qvp_params(pair_n, n, sigma)
        seed = default_seed(pair_n, params)
        states.append(build_qvp(pair_n, params, seed))
    return states


def coarse_model(pair: GeneratorPair, theta: float, t_c: float,
                 seed: StateVector) -> StateVector:
    """Two-branch phenomenological model of a conditional state.

    Normalized sum of exp(+i H_phen_B t_c) seed and exp(-i H_phen_F t_c) seed,
    i.e. seed copies displaced to clock times -t_c and +t_c.
    """
    if t_c < 0:
        raise ValueError(f"t_c must be non-negative, got {t_c}")
    pp = phen_pair(pair, theta)
    shift = pair.scale * t_c
    if shift >= 0.4 * seed.space.extent:
        raise ValueError(
            f"t_c = {t_c} displaces by {shift:.1f}, beyond the guarded region "
            f"of extent {seed.space.extent}")
    backward = phen_evolve_backward(pp, seed, t_c) if t_c > 0 else seed
    forward = phen_evolve_forward(pp, seed, t_c) if t_c > 0 else seed
    amps = backward.amplitudes + forward.amplitudes
    state = StateVector(seed.space, amps / np.linalg.norm(amps),
                        Representation.COORDINATE)
    check_boundary(state, context="coarse model")
    return state


class NetDirection:
    ADVANCE = "advance"
    REWIND = "rewind"


def net_evolution(pair: GeneratorPair, theta: float, state: StateVector,
                  delta_tc: float, direction: str) -> StateVector:
    """Net clock-time evolution between conditional states.

    advance applies exp(-i H_phen_F delta), rewind applies exp(+i H_phen_F delta);
    rewind(advance(psi)) is the identity.
    """
    if not delta_tc > 0:
        raise ValueError(f"delta_tc must be positive, got {delta_tc}")
    pp = phen_pair(pair, theta)
    if direction == NetDirection.ADVANCE:
        out = phen_evolve_forward(pp, state, delta_tc)
    elif direction == NetDirection.REWIND:
        out = phen_evolve_forward(pp, state, delta_tc, rewind=True)
    else:
        raise ValueError(f"direction must be 'advance' or 'rewind', got {direction!r}")
    check_boundary(out, context=f"net evolution {direction}")
    return out
