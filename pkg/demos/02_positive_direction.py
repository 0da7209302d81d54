# A compact semisimple ideal forces a direction of positive Ricci curvature.
# X is the top eigenvector of the metric on the fibre of the ideal, and
# ric(X, X) >= -B(X, X)/4 > 0 for every invariant metric.

import numpy as np

from homricci import catalog
from homricci.algebra import Subspace
from homricci.bochner import (
    HypothesisError,
    build_bochner,
    mixed_term_audit,
    positive_direction,
    reduce_to_semisimple,
)

for name in ("su2_r", "su2_r2_so2", "su2_su2_r_diag", "so3_e2", "so3_sl2r"):
    entry = catalog.get(name)
    p = entry.presentation
    margins = []
    for seed in range(20):
        g = catalog.random_metric(entry, seed)
        res = positive_direction(p, g, entry.compact_ideal)
        margins.append(res.ric_value - res.bound)
    print(f"{name:16s} min ric(X,X) - bound over 20 metrics: {min(margins):.4f}")

# the two terms dropped from the Bochner formula, audited on one metric
entry = catalog.get("su2_r")
g = catalog.random_metric(entry, 0)
data = build_bochner(entry.presentation, g, entry.compact_ideal)
audit = mixed_term_audit(entry.presentation, g, entry.compact_ideal, data)
print("su2_r seed 0: mean curvature term", audit.mean_curvature_term,
      "mixed term", round(audit.mixed_difference, 6))

# without a compact ideal there is nothing to say: the Levi factor of
# su(2) x R^3 does not give a bound
p = catalog.get("su2_semidirect_r3").presentation
try:
    reduce_to_semisimple(p, Subspace.whole(p.algebra.dim))
except HypothesisError as exc:
    print("su2_semidirect_r3:", exc)
