# Ricci curvature of left-invariant and homogeneous metrics, one catalog entry at a time.

import numpy as np

from homricci import catalog
from homricci.curvature import ricci_oracle, ricci_tensor

np.set_printoptions(precision=4, suppress=True)

# the round 3-sphere: Einstein with constant 1/2 for the unit background
su2 = catalog.get("su2").presentation
print("su2, identity metric")
print(ricci_tensor(su2, np.eye(3)).tensor)

# heisenberg: two negative directions, one positive, scalar -1/2
r = ricci_tensor(catalog.get("heisenberg").presentation, np.eye(3))
print("heisenberg ric diag", np.diag(r.tensor), "scalar", r.scalar)

# a Berger sphere: stretch the fibre direction
g = np.diag([1.0, 1.0, 2.0])
r = ricci_tensor(su2, g)
print("berger sphere ricci operator eigenvalues", np.sort(np.linalg.eigvals(r.operator).real))

# the Levi-Civita oracle agrees with the bracket formula on a random metric
p = catalog.get("so3_sl2r").presentation
g = catalog.random_metric(p, 11)
diff = np.abs(ricci_tensor(p, g).tensor - ricci_oracle(p, g).tensor).max()
print("so3_sl2r seed 11, formula vs oracle", diff)

# flat: every left-invariant metric on the abelian group has ric = 0
a = catalog.get("abelian_3").presentation
print("abelian, random metric", np.abs(ricci_tensor(a, catalog.random_metric(a, 3)).tensor).max())
