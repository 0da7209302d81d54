# Homogeneous Ricci flow dP/dt = -2 ric(P).  With a compact semisimple ideal
# the fibre size k(t) shrinks at least linearly, so the flow dies before
# 2 k(0)/|b|.  Nilpotent and solvable examples live forever with scalar <= 0.

import numpy as np

from homricci import catalog
from homricci.bochner import build_bochner
from homricci.flow import FlowOptions, integrate

# round sphere: P(t) = (1 - t) I, extinction exactly at t = 1
e = catalog.get("su2")
data = build_bochner(e.presentation, np.eye(3), e.compact_ideal)
res = integrate(e.presentation, np.eye(3), FlowOptions(t_max=5.0, sample_dt=0.25), bochner=data)
print("su2:", res.verdict.kind, "at", res.verdict.time, "bound", res.extinction_bound)
for s in res.samples[:5]:
    print(f"  t={s.t:.2f}  k={s.k:.4f}  scalar={s.scalar:.4f}")

# S^3 x R with random metrics: extinct well before the bound
e = catalog.get("su2_r")
for seed in range(5):
    g = catalog.random_metric(e, seed)
    data = build_bochner(e.presentation, g, e.compact_ideal)
    res = integrate(e.presentation, g, FlowOptions(t_max=100.0), bochner=data)
    print(f"su2_r seed {seed}: T_ext {res.verdict.time:.4f} <= bound {res.extinction_bound:.4f}")

# immortal examples: scalar curvature stays non-positive and creeps up to 0
for name in ("heisenberg", "sl2r"):
    p = catalog.get(name).presentation
    res = integrate(p, np.eye(3), FlowOptions(t_max=1000.0, sample_dt=100.0))
    print(name, res.verdict.kind, "scalar", [round(s.scalar, 5) for s in res.samples[::3]])
