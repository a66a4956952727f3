"""Cross-module oracle checks behind ``rydjt verify``."""

from __future__ import annotations

import math

import numpy as np

from . import born_oppenheimer as bo
from . import observables as obs
from . import perturbation as pt
from .basis import ProductBasis
from .operators import ModelParams, build_h_res, build_ring_hopping
from .spectra import lowest_eigenpairs, sector_decoupling_check


def _ed_ground(kappa, trap, rabi, n_max) -> float:
    h = build_h_res(ModelParams(rabi=rabi, trap=trap, coupling=kappa, n_max=n_max))
    return float(lowest_eigenpairs(h, 1, 1e-12, vectors=False).eigenvalues[0])


def check_dual_path():
    worst = 0.0
    for eta in np.linspace(0.1, 10.0, 25):
        k = math.sqrt(eta / 2)
        a, b = pt.e_jt2_gamma(k, 1.0, 0.1), pt.e_jt2_series(k, 1.0, 0.1)
        worst = max(worst, abs(a - b) / abs(b))
    return worst <= 1e-10, f"max relative gap {worst:.2e} over eta in [0.1, 10]"


def check_gs_scaling():
    r = [abs(_ed_ground(k, 1, 1, 4) - (-2 + pt.e_gs2(k, 1, 1))) for k in (0.1, 0.05)]
    ratio = r[1] / r[0]
    return 1 / 32 <= ratio <= 1 / 8, f"r(0.05)/r(0.1) = {ratio:.4f} (fourth order: 1/16)"


def check_jt_energy():
    e = _ed_ground(0.3, 1, 0.0, 8)
    return abs(e + 0.18) <= 1e-6, f"E_ED = {e:.10f}, expected -0.18"


def check_jt_scaling():
    kappa, n_max = 0.3, 8
    fixed = build_h_res(ModelParams(rabi=0.0, trap=1.0, coupling=kappa, n_max=n_max))
    ring = build_ring_hopping(ProductBasis.resonant(n_max), 1.0)
    r = []
    for rabi in (0.1, 0.05):
        e = lowest_eigenpairs(fixed + ring * rabi, 1, 1e-12, vectors=False).eigenvalues[0]
        r.append(abs(e - (pt.jt_unperturbed_energy(kappa, 1) + pt.e_jt2_gamma(kappa, 1, rabi))))
    ratio = r[0] / r[1]
    return 8 <= ratio <= 32, f"r(0.1)/r(0.05) = {ratio:.2f} (fourth order: 16)"


def exact_symmetric_minimum(kappa: float, trap: float, rabi: float) -> tuple[float, float]:
    """Minimum of E0 along the breathing axis from the two-sublattice closed form."""
    from scipy.optimize import brentq

    def dE(q1):
        c = math.sqrt(2) * kappa * q1
        return trap * q1 + kappa / math.sqrt(2) * (
            1 - (c / 2) / math.sqrt(c * c / 4 + 4 * rabi * rabi)
        )

    def energy(q1):
        c = math.sqrt(2) * kappa * q1
        return 0.5 * trap * q1 * q1 + c / 2 - math.sqrt(c * c / 4 + 4 * rabi * rabi)

    k = abs(kappa) / trap
    lo, hi = (-2 * k - 1.0, 0.0) if kappa > 0 else (0.0, 2 * k + 1.0)
    q1 = brentq(dE, lo, hi, xtol=1e-15)
    return q1, energy(q1)


def check_bo_minima():
    kappa, trap = 0.5, 1.0
    rep0 = bo.find_minima(kappa, trap, 0.0)
    ok0 = (
        rep0.multiplicity == 3
        and all(abs(e + 2 * kappa**2 / trap) <= 1e-9 for _, e in rep0.minima)
        and all(abs(np.linalg.norm(q) - 2 * kappa / trap) <= 1e-6 for q, _ in rep0.minima)
    )
    rabi = 10 * kappa**2 / trap
    rep1 = bo.find_minima(kappa, trap, rabi)
    q1, e1 = exact_symmetric_minimum(kappa, trap, rabi)
    q = rep1.minima[0][0]
    ok1 = rep1.multiplicity == 1 and np.allclose(q, [q1, 0, 0], atol=1e-6) and abs(rep1.energy - e1) < 1e-9
    return ok0 and ok1, (
        f"rabi=0: {rep0.multiplicity} minima at E={rep0.energy:.10f}; "
        f"rabi={rabi}: {rep1.multiplicity} minimum at q1={q[0]:.8f} (closed form {q1:.8f})"
    )


def check_sector_decoupling():
    rows = sector_decoupling_check(ModelParams(rabi=1.0, n_max=0), 1.0, 0.0, [50, 100, 200])
    devs = [d for _, d in rows]
    ok = all(b < a for a, b in zip(devs, devs[1:]))
    return ok, "deviations " + ", ".join(f"{d:.3e}" for d in devs)


def check_kappa_parity():
    a = lowest_eigenpairs(build_h_res(ModelParams(rabi=0.5, coupling=0.3, n_max=3)), 10, 1e-12).eigenvalues
    b = lowest_eigenpairs(build_h_res(ModelParams(rabi=0.5, coupling=-0.3, n_max=3)), 10, 1e-12).eigenvalues
    gap = float(np.abs(a - b).max())
    return gap <= 1e-10, f"max level difference {gap:.2e}"


def check_entropy():
    g = math.exp(-1.5)
    p = np.array([(1 + 2 * g) / 3, (1 - g) / 3, (1 - g) / 3])
    expected = float(-(p * np.log(p)).sum())
    s = obs.entanglement_entropy(obs.jt_branch_state(1.0, 1.0, 40))
    return abs(s - expected) <= 1e-8, f"S = {s:.8f} nats, Gram oracle {expected:.8f}"


CHECKS = [
    ("dual-path weak-driving correction", check_dual_path, False),
    ("weak-coupling PT vs ED (kappa^4 residual)", check_gs_scaling, False),
    ("Jahn-Teller energy at rabi=0, n_max=8", check_jt_energy, True),
    ("weak-driving PT vs ED (rabi^4 residual), n_max=8", check_jt_scaling, True),
    ("Born-Oppenheimer minima", check_bo_minima, False),
    ("sector decoupling", check_sector_decoupling, False),
    ("kappa -> -kappa spectrum", check_kappa_parity, False),
    ("entanglement entropy Gram oracle", check_entropy, False),
]


def run_checks(quick: bool = False) -> list[dict]:
    out = []
    for name, fn, heavy in CHECKS:
        if quick and heavy:
            continue
        try:
            passed, detail = fn()
        except Exception as exc:  # a crashing check is a failed check
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        out.append({"name": name, "passed": bool(passed), "detail": detail})
    return out
