"""Acceptance suite: every verified closed-form consequence, one runner each.

Each criterion returns a CriterionResult and prints a single pass/fail
line; ``run_all`` executes all ten.  Tolerances and parameters are pinned
here, not configurable: this module is the contract the rest of the
package is held to.  The pytest acceptance module and the CLI selftest
both delegate to these runners.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import analysis, generators, hilbert, qvp

PI = math.pi


@dataclass
class CriterionResult:
    cid: str
    name: str
    passed: bool
    details: str
    elapsed: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.cid} {self.name}: {status} ({self.details}; {self.elapsed:.2f}s)"


class EngineCache:
    """Lazily built, shared conditional states keyed by (N, theta/pi)."""

    def __init__(self):
        self._states: dict[tuple[int, float], tuple] = {}

    def weyl_build(self, n: int, theta_pi: float):
        key = (n, theta_pi)
        if key not in self._states:
            theta = theta_pi * PI
            space = qvp.suggest_weyl_grid(n, theta)
            pair = generators.build_weyl_pair(space, theta)  # sigma = 1, lam = theta
            params = qvp.qvp_params(pair, n, 1.0)
            seed = qvp.default_seed(pair, params)
            self._states[key] = (pair, params, seed, qvp.build_qvp(pair, params, seed))
        return self._states[key]

    def lobes(self, n: int, theta_pi: float) -> analysis.PeakReport:
        pair, _, _, cond = self.weyl_build(n, theta_pi)
        axis = pair.space.coordinates / pair.scale
        return analysis.lobe_stats(cond.state.density(), axis)


def _result(cid, name, passed, details, t0) -> CriterionResult:
    res = CriterionResult(cid, name, bool(passed), details, time.time() - t0)
    print(res.line())
    return res


def criterion_1_commuting_limit(cache: EngineCache) -> CriterionResult:
    t0 = time.time()
    space = hilbert.make_grid(4096, 64.0)
    pair = generators.build_commuting(space, 1.0)
    params = qvp.qvp_params(pair, 1024, 1.0)
    seed = qvp.default_seed(pair, params)
    cond = qvp.build_qvp(pair, params, seed)
    fid = hilbert.fidelity(cond.state, qvp.limit_ket(space, 0.0, 1.0))
    elapsed = time.time() - t0
    passed = fid >= 0.999 and elapsed <= 10.0
    return _result("AC1", "commuting limit law", passed,
                   f"fidelity={fid:.6f} >= 0.999 at N=1024", t0)


def criterion_2_oracle_equivalence(cache: EngineCache) -> CriterionResult:
    t0 = time.time()
    worst = 0.0
    for theta_pi in (2.1, 2.23, 3.0, 3.9):
        theta = theta_pi * PI
        for n in (16, 32, 48, 64):
            space = qvp.suggest_weyl_grid(n, theta)
            pair = generators.build_weyl_pair(space, theta)
            params = qvp.qvp_params(pair, n, 1.0)
            seed = qvp.default_seed(pair, params)
            built = qvp.build_qvp(pair, params, seed)
            oracle = qvp.qbinomial_oracle(pair, params, seed)
            diff = float(np.abs(built.state.amplitudes
                                - oracle.state.amplitudes).max())
            worst = max(worst, diff)
    elapsed = time.time() - t0
    passed = worst <= 1e-8 and elapsed <= 30.0
    return _result("AC2", "builder/oracle equivalence", passed,
                   f"max amplitude diff={worst:.2e} <= 1e-8 over N<=64, 4 thetas", t0)


def criterion_3_clock_time_law(cache: EngineCache) -> CriterionResult:
    t0 = time.time()
    ok = True
    worst = 0.0
    for n in (144, 256, 400):
        stats = cache.lobes(n, 2.23)
        tc = analysis.predict_clock_time(n, 1.0, 2.23 * PI)
        for pos in (stats.t_plus, -stats.t_minus):
            ratio = pos / tc
            worst = max(worst, abs(ratio - 1.0))
            ok = ok and 0.95 <= ratio <= 1.05
    small = cache.lobes(100, 2.23)
    big = cache.lobes(400, 2.23)
    quad_ratio = big.t_plus / small.t_plus
    ok = ok and abs(quad_ratio - 2.0) <= 0.1
    elapsed = time.time() - t0
    passed = ok and elapsed <= 120.0
    return _result("AC3", "clock-time law", passed,
                   f"max |pos/tc - 1|={worst:.4f} <= 0.05; pos(4N)/pos(N)={quad_ratio:.4f}",
                   t0)


def criterion_4_spread_law(cache: EngineCache) -> CriterionResult:
    t0 = time.time()
    ok = True
    worst = 0.0
    for theta_pi in (2.23, 3.0):
        stats = cache.lobes(256, theta_pi)
        pred = analysis.predict_spread(theta_pi * PI, theta_pi * PI)
        for var in (stats.var_plus, stats.var_minus):
            err = abs(var / pred - 1.0)
            worst = max(worst, err)
            ok = ok and err <= 0.20
    return _result("AC4", "temporal spread law", ok,
                   f"max |var/pred - 1|={worst:.4f} <= 0.20 at N=256", t0)


def criterion_5_model_match(cache: EngineCache) -> CriterionResult:
    t0 = time.time()
    pair, params, seed, cond = cache.weyl_build(256, 2.23)
    tc = analysis.predict_clock_time(256, 1.0, 2.23 * PI)
    model = qvp.coarse_model(pair, 2.23 * PI, tc, seed)
    kernel = 4.0 * qvp.step_displacement(pair, params)
    match = analysis.model_match(cond.state, model, kernel)
    return _result("AC5", "two-peak model match", match >= 0.9,
                   f"coarse-grained fidelity={match:.4f} >= 0.9", t0)


def criterion_6_schrodinger(cache: EngineCache) -> CriterionResult:
    t0 = time.time()
    theta = 2.23 * PI
    space = hilbert.make_grid(2048, 64.0)
    pair = generators.build_weyl_pair(space, theta)
    pp = generators.phen_pair(pair, theta)
    psi = hilbert.gaussian_state(space, 0.0, 1.0)
    t_eval = 0.4
    base = generators.phen_evolve_forward(pp, psi, t_eval)
    rhs = -1j * generators.apply_hphen_f(pp, base).amplitudes

    def err(h):
        plus = generators.phen_evolve_forward(pp, psi, t_eval + h)
        minus = generators.phen_evolve_forward(pp, psi, t_eval - h)
        return float(np.linalg.norm((plus.amplitudes - minus.amplitudes) / (2 * h)
                                    - rhs))

    h = 0.04
    ratio = err(h) / err(h / 2)
    passed = 3.6 <= ratio <= 4.4
    return _result("AC6", "Schrodinger consistency", passed,
                   f"halving-step error ratio={ratio:.4f} in [3.6, 4.4]", t0)


def criterion_7_net_evolution(cache: EngineCache) -> CriterionResult:
    t0 = time.time()
    theta = 2.23 * PI
    pair_a, params_a, _, cond_a = cache.weyl_build(256, 2.23)
    pair_b, _, _, cond_b = cache.weyl_build(289, 2.23)
    delta = (analysis.predict_clock_time(289, 1.0, theta)
             - analysis.predict_clock_time(256, 1.0, theta))
    advanced = qvp.net_evolution(pair_a, theta, cond_a.state, delta, "advance")
    kernel = 4.0 * qvp.step_displacement(pair_a, params_a)
    dens_a = analysis.coarse_grain(advanced.density(), pair_a.space.spacing, kernel)
    dens_b = analysis.coarse_grain(cond_b.state.density(), pair_b.space.spacing, kernel)
    lobe_fid = analysis.lobe_density_fidelity(
        dens_a, pair_a.space.coordinates / pair_a.scale,
        dens_b, pair_b.space.coordinates / pair_b.scale, side="plus")
    rewound = qvp.net_evolution(pair_a, theta, advanced, delta, "rewind")
    inv_err = 1.0 - hilbert.fidelity(rewound, cond_a.state)
    passed = lobe_fid >= 0.95 and inv_err <= 1e-10
    return _result("AC7", "net-evolution ordering", passed,
                   f"lobe fidelity={lobe_fid:.4f} >= 0.95, rewind error={inv_err:.2e}",
                   t0)


def criterion_8_spacing_overlap(cache: EngineCache) -> CriterionResult:
    t0 = time.time()
    sigma = 1.0
    ok = True
    worst_identity = 0.0
    for n in (1, 7, 100, 4096):
        for theta_pi in (2.1, 3.0):
            lam = theta_pi * PI
            rep = analysis.spacing_report(n, sigma, lam, theta_pi * PI)
            ident = abs(rep.exact_spacing
                        - (analysis.predict_clock_time(n + 1, sigma, lam)
                           - analysis.predict_clock_time(n, sigma, lam)))
            worst_identity = max(worst_identity, ident)
            ok = ok and ident <= 1e-12
    rep4 = analysis.spacing_report(10_000, sigma, 2.0 * PI, 3.0 * PI)
    ratio = rep4.approx_spacing / rep4.exact_spacing
    ok = ok and ratio <= 1.01
    for n in (25, 100, 400, 2500, 10_000):
        for theta_pi in (2.1, 2.5, 3.0, 3.5):
            theta = theta_pi * PI
            lam = theta
            rep = analysis.spacing_report(n, sigma, lam, theta)
            independent = (PI / (sigma * lam * math.sqrt(n))
                           < math.sqrt(2.0 / abs(lam * math.tan(theta / 4.0))))
            ok = ok and rep.overlapping == independent
    return _result("AC8", "spacing and overlap laws", ok,
                   f"identity err={worst_identity:.1e} <= 1e-12, approx/exact={ratio:.6f} "
                   f"<= 1.01, flag consistent on 20-point grid", t0)


def criterion_9_time_reversal(cache: EngineCache) -> CriterionResult:
    t0 = time.time()
    space = hilbert.make_grid(2048, 64.0)
    pair = generators.build_weyl_pair(space, PI)
    delta = 0.1
    worst = 0.0
    for center, width in ((0.0, 1.0), (1.5, 1.0), (-2.0, 0.7)):
        psi = hilbert.gaussian_state(space, center, width)
        inner_state = generators.evolve(pair, generators.time_reversal(pair, psi),
                                        delta, generators.Direction.FORWARD)
        lhs = generators.time_reversal(pair, inner_state)  # T is an involution
        rhs = generators.evolve(pair, psi, delta, generators.Direction.BACKWARD)
        worst = max(worst, float(np.linalg.norm(lhs.amplitudes - rhs.amplitudes)))
    return _result("AC9", "time-reversal conjugation", worst <= 1e-8,
                   f"max ||T^-1 exp(-id H_F) T psi - exp(+id H_B) psi||={worst:.2e} <= 1e-8",
                   t0)


def criterion_10_resolution_policy(cache: EngineCache) -> CriterionResult:
    t0 = time.time()
    theta = 2.23 * PI
    policy = qvp.resolution_threshold(1.0, 0.1)
    ok = policy.n_min == 101
    pair = generators.build_weyl_pair(hilbert.make_grid(512, 64.0), theta)
    rejected = False
    try:
        qvp.upsilon_set(pair, 1.0, policy, [100])
    except ValueError:
        rejected = True
    ok = ok and rejected
    states = qvp.upsilon_set(pair, 1.0, policy, [110, 101])
    tc_min = min(s.clock_time for s in states)
    ident = abs(tc_min - analysis.predict_clock_time(101, 1.0, theta))
    ok = ok and ident <= 1e-12 and states[0].params.n_steps == 101
    return _result("AC10", "resolution policy", ok,
                   f"n_min={policy.n_min} == 101, N<n_min rejected, "
                   f"t_c_min error={ident:.1e} <= 1e-12", t0)


ALL_CRITERIA = [
    criterion_1_commuting_limit,
    criterion_2_oracle_equivalence,
    criterion_3_clock_time_law,
    criterion_4_spread_law,
    criterion_5_model_match,
    criterion_6_schrodinger,
    criterion_7_net_evolution,
    criterion_8_spacing_overlap,
    criterion_9_time_reversal,
    criterion_10_resolution_policy,
]


def run_all(cache: EngineCache | None = None) -> list[CriterionResult]:
    cache = cache or EngineCache()
    return [fn(cache) for fn in ALL_CRITERIA]
