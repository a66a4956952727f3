"""The spin-phonon entangled Jahn-Teller state.

Three displaced branches |1>, |3>, |5> with coherent phonons. Their overlap
g = exp(-3 kappa^2 / 2 trap^2) controls the spin entropy, which climbs to ln 3
once the branches separate. A Rydberg-density measurement picks one branch and
with it one distorted triangle.
"""

import math

import numpy as np

from rydjt import build_jt_ansatz, entanglement_entropy, jt_branch_state, rydberg_density
from rydjt.observables import sample_branch

print("kappa   S (nats)   S / ln3")
for kappa in (0.0, 0.5, 1.0, 2.0, 4.0):
    s = entanglement_entropy(jt_branch_state(kappa, 1.0, 80))
    print(f"{kappa:5.1f}  {s:9.6f}  {s / math.log(3):8.5f}")

psi = build_jt_ansatz(1.0, 1.0, 10)
print("Rydberg density:", np.round(rydberg_density(psi), 6))

labels, disp = sample_branch(psi, seed=11, size=5)
for lab, d in zip(labels, disp):
    print(f"measured |{lab}>  displacement (x_ho):", np.round(d, 3))
