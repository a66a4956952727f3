"""From tweezer parameters to model couplings for 39K.

A 70 kHz trap and 5 um spacing put the vibronic coupling deep in the
Jahn-Teller regime, with a classical distortion of a few hundred nm.
"""

from rydjt.physical import PhysicalParams, report

p = PhysicalParams.from_lab(trap_hz=70e3, spacing_um=5.0, c6_ghz_um6=88.0, species="K39")
for key, value in report(p).items():
    print(f"{key:>24}: {value:.6g}")
