"""Classical-nuclei picture: three minima merge into one.

At zero drive the lowest surface has three degenerate minima 120 degrees
apart in the (q2, q3) plane. Driving mixes the electronic states and the
minima slide together until a single symmetric minimum remains.
"""

import numpy as np

from rydjt.born_oppenheimer import collapse_threshold, find_minima, transition_sweep

kappa = 0.5
rep = find_minima(kappa, 1.0, 0.0)
print(f"rabi = 0: {rep.multiplicity} minima at E = {rep.energy:.6f}")
for q, _ in rep.minima:
    print("   q =", np.round(q, 6))

print(f"{'rabi':>6} {'E_min':>10} {'|q_min|':>9} minima")
for row in transition_sweep(kappa, 1.0, np.linspace(0.0, 1.0, 11)):
    print(f"{row.rabi:6.2f} {row.e_min:10.6f} {row.q_min_norm:9.5f} {row.multiplicity:4d}")

print("collapse near rabi =", collapse_threshold(kappa, 1.0, np.linspace(0, 1, 11), refine=True))
