"""Scratch physics validation; not part of the package."""
import math
import time
import numpy as np

import qvplab as q

TWO_PI = 2 * math.pi

print("== transform conventions ==")
g = q.make_grid(1024, 64.0)
psi = q.gaussian_state(g, 0.0, 1.0)
t2 = q.conjugate_transform(q.conjugate_transform(psi))
print("involution err:", np.abs(t2.amplitudes - psi.amplitudes).max())
# translation direction: exp(-i a p) should shift +a
shifted = q.weyl_displace(psi, dq=2.5)
m, v = q.density_moments(shifted)
print("shift +2.5 -> mean", m, "var", v)
# width mapping
tp = q.conjugate_transform(q.gaussian_state(g, 0.0, 2.0))
rho = np.abs(tp.amplitudes) ** 2
p = g.conjugate_coordinates
mv = (p * rho).sum()
vv = ((p - mv) ** 2 * rho).sum()
print("conj var (expect 1/(2*4)=0.125):", vv)

print("\n== commuting convergence ==")
pair = q.build_commuting(g, 1.0)
for n in (16, 64, 256, 1024):
    params = q.qvp_params(pair, n, 1.0)
    seed = q.default_seed(pair, params, g)
    t0 = time.time()
    cs = q.build_qvp(pair, params, seed)
    fid = q.fidelity(cs.state, q.limit_ket(g, 0.0, 1.0))
    print(f"N={n:5d} fidelity={fid:.6f} prenorm={cs.prenorm:.4f} ({time.time()-t0:.2f}s)")

print("\n== weyl: product form vs literal iteration (small N) ==")
theta = 2.23 * math.pi
for n in (1, 2, 3, 8, 16, 24):
    space = q.suggest_weyl_grid(n, theta)
    wp = q.build_weyl_pair(space, theta)
    params = q.qvp_params(wp, n, 1.0)
    seed = q.default_seed(wp, params, space)
    a = q.build_qvp(wp, params, seed)
    b = q.iterate_qvp(wp, params, seed)
    diff = np.abs(a.state.amplitudes - b.state.amplitudes).max()
    print(f"N={n:3d} dim={space.dim} L={space.extent:.1f} maxdiff={diff:.3e} "
          f"prenorm={a.prenorm:.3e} vs {b.prenorm:.3e}")

print("\n== weyl: oracle vs builder ==")
for n, th_pi in [(16, 2.1), (32, 2.23), (64, 2.23), (64, 3.0), (64, 3.9), (64, 2.1)]:
    theta = th_pi * math.pi
    space = q.suggest_weyl_grid(n, theta)
    wp = q.build_weyl_pair(space, theta)
    params = q.qvp_params(wp, n, 1.0)
    seed = q.default_seed(wp, params, space)
    t0 = time.time()
    a = q.build_qvp(wp, params, seed)
    b = q.qbinomial_oracle(wp, params, seed)
    diff = np.abs(a.state.amplitudes - b.state.amplitudes).max()
    print(f"N={n:3d} theta={th_pi}pi dim={space.dim} maxdiff={diff:.3e} "
          f"prenorm={a.prenorm:.3e} ({time.time()-t0:.2f}s)")

print("\n== weyl: lobes at +-t_c, variance vs prediction ==")
for n, th_pi in [(100, 2.23), (144, 2.23), (256, 2.23), (400, 2.23), (256, 3.0)]:
    theta = th_pi * math.pi
    lam = theta
    space = q.suggest_weyl_grid(n, theta)
    wp = q.build_weyl_pair(space, lam)
    params = q.qvp_params(wp, n, 1.0)
    seed = q.default_seed(wp, params, space)
    t0 = time.time()
    cs = q.build_qvp(wp, params, seed)
    axis = space.coordinates / wp.scale
    stats = q.lobe_stats(cs.state.density(), axis)
    tc = q.predict_clock_time(n, 1.0, lam)
    pv = q.predict_spread(lam, theta)
    print(f"N={n} th={th_pi}pi dim={space.dim} L={space.extent:.0f}: "
          f"t+/tc={stats.t_plus/tc:.4f} t-/tc={stats.t_minus/tc:.4f} "
          f"var+/pred={stats.var_plus/pv:.4f} var-/pred={stats.var_minus/pv:.4f} "
          f"m+={stats.mass_plus:.3f} prenorm={cs.prenorm:.2e} ({time.time()-t0:.2f}s)")

print("\n== model match, N=256 theta=2.23pi ==")
theta = 2.23 * math.pi
space = q.suggest_weyl_grid(256, theta)
wp = q.build_weyl_pair(space, theta)
params = q.qvp_params(wp, 256, 1.0)
seed = q.default_seed(wp, params, space)
cs = q.build_qvp(wp, params, seed)
tc = q.predict_clock_time(256, 1.0, theta)
model = q.coarse_model(wp, theta, tc, seed)
s = q.step_displacement(wp, params)
for kmult in (1.0, 2.0, 4.0, 6.0):
    mm = q.model_match(cs.state, model, kmult * s)
    print(f"kernel={kmult}*s={kmult*s:.3f}: match={mm:.4f}")
mm_grid = q.model_match(cs.state, model, 4 * space.spacing)
print(f"kernel=4*grid-spacing={4*space.spacing:.4f}: match={mm_grid:.4f}")

print("\n== net evolution 256 -> 289 ==")
space2 = q.suggest_weyl_grid(289, theta)
wp2 = q.build_weyl_pair(space2, theta)
params2 = q.qvp_params(wp2, 289, 1.0)
cs2 = q.build_qvp(wp2, params2, q.default_seed(wp2, params2, space2))
d_tc = q.predict_clock_time(289, 1.0, theta) - tc
adv = q.net_evolution(wp, theta, cs.state, d_tc, "advance")
ka = 4 * s
ga = q.coarse_grain(adv.density(), space.spacing, ka)
gb = q.coarse_grain(cs2.state.density(), space2.spacing, ka)
lf = q.lobe_density_fidelity(ga, space.coordinates / wp.scale,
                             gb, space2.coordinates / wp2.scale, side="plus")
print("lobe-restricted density fidelity:", lf)
rw = q.net_evolution(wp, theta, adv, d_tc, "rewind")
print("rewind-advance fidelity err:", 1 - q.fidelity(rw, cs.state))

print("\n== time reversal conjugation ==")
g2 = q.make_grid(2048, 64.0)
wp3 = q.build_weyl_pair(g2, math.pi)
for c in (0.0, 1.5, -2.0):
    psi = q.gaussian_state(g2, c, 1.0)
    lhs = q.time_reversal(wp3, q.evolve(wp3, q.time_reversal(wp3, psi), 0.1, q.Direction.FORWARD))
    rhs = q.evolve(wp3, psi, 0.1, q.Direction.BACKWARD)
    print(f"center {c}: ||T^-1 e(-idHF) T - e(+idHB)|| =",
          np.linalg.norm(lhs.amplitudes - rhs.amplitudes))
t2 = q.time_reversal(wp3, q.time_reversal(wp3, q.gaussian_state(g2, 1.0, 1.0)))
print("T^2 = identity err:", np.abs(t2.amplitudes - q.gaussian_state(g2, 1.0, 1.0).amplitudes).max())
