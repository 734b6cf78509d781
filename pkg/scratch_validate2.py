"""Scratch validation, part 2."""
import math
import numpy as np
import qvplab as q

print("== commutator check ==")
g = q.make_grid(512, 64.0)
wp = q.build_weyl_pair(g, math.pi)
probes = [q.gaussian_state(g, c, w) for c, w in [(0, 1), (2, 1.5), (-1, 0.8)]]
print("weyl residual:", q.commutator_check(wp, probes))
cp = q.build_commuting(g, 1.0)
print("commuting residual:", q.commutator_check(cp, probes))

print("\n== commuting limit with dim 4096 ==")
g4 = q.make_grid(4096, 64.0)
pair = q.build_commuting(g4, 1.0)
for n in (16, 64, 256, 1024):
    params = q.qvp_params(pair, n, 1.0)
    cs = q.build_qvp(pair, params, q.default_seed(pair, params, g4))
    print(f"N={n:5d} fidelity={q.fidelity(cs.state, q.limit_ket(g4, 0.0, 1.0)):.6f}")

print("\n== schrodinger ratio ==")
theta = 2.23 * math.pi
g2 = q.make_grid(2048, 64.0)
wp2 = q.build_weyl_pair(g2, theta)
pp = q.phen_pair(wp2, theta)
psi0 = q.gaussian_state(g2, 0.0, 1.0)
t0 = 0.4
base = q.phen_evolve_forward(pp, psi0, t0)
rhs = -1j * q.apply_hphen_f(pp, base).amplitudes
def err(h):
    plus = q.phen_evolve_forward(pp, psi0, t0 + h)
    minus = q.phen_evolve_forward(pp, psi0, t0 - h)
    lhs = (plus.amplitudes - minus.amplitudes) / (2 * h)
    return np.linalg.norm(lhs - rhs)
for h in (0.08, 0.04, 0.02, 0.01):
    print(f"h={h}: err={err(h):.6e} ratio={err(h)/err(h/2):.4f}")

print("\n== coarse model lobes (theta=3pi, tc=5) ==")
theta3 = 3 * math.pi
g3 = q.make_grid(4096, 80.0)
wp3 = q.build_weyl_pair(g3, theta3)
seed = q.gaussian_state(g3, 0.0, 0.05)
cm = q.coarse_model(wp3, theta3, 5.0, seed)
axis = g3.coordinates / wp3.scale
st = q.lobe_stats(cm.density(), axis)
print(f"t+={st.t_plus:.4f} t-={st.t_minus:.4f} (expect +-5) m+={st.mass_plus:.3f}")

print("\n== upsilon set ==")
pol = q.resolution_threshold(1.0, 0.1)
print("n_min:", pol.n_min)
wp_any = q.build_weyl_pair(q.make_grid(512, 64.0), theta)
states = q.upsilon_set(wp_any, 1.0, pol, [110, 101])
print("t_c values:", [f"{s.clock_time:.6f}" for s in states])
print("t_c_min == predict:", abs(states[0].clock_time - q.predict_clock_time(101, 1.0, theta)))
try:
    q.upsilon_set(wp_any, 1.0, pol, [100])
except ValueError as e:
    print("rejection ok:", e)

print("\n== theta scan measured/predicted ==")
def measure(th):
    sp = q.suggest_weyl_grid(256, th)
    w = q.build_weyl_pair(sp, th)
    pr = q.qvp_params(w, 256, 1.0)
    cs = q.build_qvp(w, pr, q.default_seed(w, pr, sp))
    stats = q.lobe_stats(cs.state.density(), sp.coordinates / w.scale)
    return stats.var_plus
for row in q.theta_scan(2.23 * math.pi, [2.23 * math.pi], 256, measure):
    print(f"theta={row['theta']/math.pi:.2f}pi meas/pred={row['measured_var']/row['predicted_var']:.4f}")

print("\n== net evolution composite identity ==")
g5 = q.make_grid(2048, 64.0)
wp5 = q.build_weyl_pair(g5, theta)
pp5 = q.phen_pair(wp5, theta)
psi = q.gaussian_state(g5, 0.0, 1.0)
delta = 0.8
direct = q.phen_evolve_forward(pp5, psi, delta)
comp = q.evolve(wp5, q.evolve(wp5, psi, pp5.a_plus * delta, q.Direction.FORWARD),
                pp5.a_minus * delta, q.Direction.BACKWARD)
print("composite fidelity:", q.fidelity(direct, comp))
print("amp diff up to phase:", np.abs(np.abs(np.vdot(direct.amplitudes, comp.amplitudes)) - 1))

print("\n== weyl fwd-then-back not identity ==")
gp = q.build_weyl_pair(q.make_grid(1024, 64.0), math.pi)
psi = q.gaussian_state(gp.space, 0.0, 1.0)
rt = q.evolve(gp, q.evolve(gp, psi, 0.5, q.Direction.FORWARD), 0.5, q.Direction.BACKWARD)
print("fidelity (expect ~0.675):", q.fidelity(rt, psi))
