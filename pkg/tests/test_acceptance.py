"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line (printed in the terminal summary) and then
asserts. Wall-clock budgets are part of the criteria and are checked too.
"""

import math
import time

import numpy as np
import pytest

from rydjt import born_oppenheimer as bo
from rydjt import observables as obs
from rydjt import perturbation as pt
from rydjt import physical as phys
from rydjt.basis import ProductBasis
from rydjt.operators import ModelParams, build_h_res, build_ring_hopping
from rydjt.spectra import lowest_eigenpairs, sector_decoupling_check


def _ground(params, tol=1e-12):
    return float(lowest_eigenpairs(build_h_res(params), 1, tol, vectors=False).eigenvalues[0])


def _finish(accept, number, name, ok, detail, t0, budget):
    took = time.perf_counter() - t0
    ok = bool(ok) and took < budget
    accept(number, name, ok, f"{detail}; {took:.1f} s of {budget:.0f} s")
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'} {name}: {detail}; {took:.1f} s")
    assert ok, detail


def test_c01_unperturbed_ground_energy(accept):
    t0 = time.perf_counter()
    e = _ground(ModelParams(rabi=1.0, coupling=0.0, n_max=3))
    _finish(accept, 1, "unperturbed ground energy", abs(e + 2) <= 1e-9, f"E = {e:.12f}", t0, 10)


def test_c02_weak_coupling_fourth_order(accept):
    t0 = time.perf_counter()
    r = [abs(_ground(ModelParams(rabi=1.0, coupling=k, n_max=4)) - (-2 + pt.e_gs2(k, 1, 1)))
         for k in (0.1, 0.05)]
    ratio = r[1] / r[0]
    _finish(accept, 2, "weak-coupling residual scaling", 1 / 32 <= ratio <= 1 / 8,
            f"r(0.05)/r(0.1) = {ratio:.4f}", t0, 120)


@pytest.mark.slow
def test_c03_jahn_teller_energy(accept):
    t0 = time.perf_counter()
    e = _ground(ModelParams(rabi=0.0, coupling=0.3, n_max=8))
    _finish(accept, 3, "Jahn-Teller energy", abs(e + 0.18) <= 1e-6, f"E = {e:.10f}", t0, 120)


@pytest.mark.slow
def test_c04_dual_path_and_rabi_scaling(accept):
    t0 = time.perf_counter()
    gaps = []
    for eta in (0.5, 2.0, 8.0):
        k = math.sqrt(eta / 2)
        a, b = pt.e_jt2_gamma(k, 1.0, 0.1), pt.e_jt2_series(k, 1.0, 0.1)
        gaps.append(abs(a - b) / abs(b))
    kappa, n_max = 0.3, 8
    fixed = build_h_res(ModelParams(rabi=0.0, coupling=kappa, n_max=n_max))
    ring = build_ring_hopping(ProductBasis.resonant(n_max), 1.0)
    r = []
    for rabi in (0.1, 0.05):
        e = lowest_eigenpairs(fixed + ring * rabi, 1, 1e-12, vectors=False).eigenvalues[0]
        r.append(abs(e - (pt.jt_unperturbed_energy(kappa, 1) + pt.e_jt2_gamma(kappa, 1, rabi))))
    ratio = r[0] / r[1]
    ok = max(gaps) <= 1e-10 and 8 <= ratio <= 32
    _finish(accept, 4, "weak-driving dual path and residual scaling", ok,
            f"max dual-path gap {max(gaps):.1e}, r(0.1)/r(0.05) = {ratio:.2f}", t0, 180)


def test_c05_ansatz_fidelity(accept):
    t0 = time.perf_counter()
    kappa, n_max = 0.3, 6
    params = ModelParams(rabi=0.01, coupling=kappa, n_max=n_max)
    gs = lowest_eigenpairs(build_h_res(params), 1, 1e-12).eigenvectors[:, 0]
    ov = obs.overlap(obs.build_jt_ansatz(kappa, 1.0, n_max), gs)
    _finish(accept, 5, "Jahn-Teller ansatz overlap", ov >= 0.99,
            f"|<ansatz|ED>| = {ov:.8f} (squared {ov * ov:.8f})", t0, 60)


def test_c06_born_oppenheimer_limits(accept):
    t0 = time.perf_counter()
    kappa, trap = 0.5, 1.0
    rep0 = bo.find_minima(kappa, trap, 0.0)
    ok0 = rep0.multiplicity == 3 and all(
        abs(e + 2 * kappa**2 / trap) <= 1e-9 and abs(np.linalg.norm(q) - 2 * kappa / trap) <= 1e-6
        for q, e in rep0.minima
    )
    rabi = 10 * kappa**2 / trap
    rep1 = bo.find_minima(kappa, trap, rabi)
    q = rep1.minima[0][0]
    q_target = np.array([-kappa / (math.sqrt(2) * trap), 0.0, 0.0])
    e_target = -2 * rabi - kappa**2 / (4 * trap)
    q_err = float(np.abs(q - q_target).max())
    e_err = abs(rep1.energy - e_target)
    ok1 = rep1.multiplicity == 1 and q_err <= 1e-6 and e_err <= 1e-6
    _finish(accept, 6, "Born-Oppenheimer minima limits", ok0 and ok1,
            f"rabi=0: {rep0.multiplicity} minima ({'ok' if ok0 else 'bad'}); "
            f"rabi={rabi}: {rep1.multiplicity} minimum, |dq|={q_err:.2e}, |dE|={e_err:.2e}",
            t0, 30)


def test_c07_entanglement_saturation(accept):
    t0 = time.perf_counter()
    s0 = obs.entanglement_entropy(obs.jt_branch_state(0.0, 1.0, 4))
    s1 = obs.entanglement_entropy(obs.jt_branch_state(1.0, 1.0, 40))
    s4 = obs.entanglement_entropy(obs.jt_branch_state(4.0, 1.0, 80))
    g = math.exp(-1.5)
    p = np.array([1 + 2 * g, 1 - g, 1 - g]) / 3
    oracle = float(-(p * np.log(p)).sum())
    ok = abs(s0) <= 1e-12 and abs(s1 - oracle) <= 1e-3 and s4 >= 0.999 * math.log(3)
    _finish(accept, 7, "entanglement saturation", ok,
            f"S(0)={s0:.2e}, S(1)={s1:.6f} (oracle {oracle:.6f}), S(4)/ln3={s4 / math.log(3):.6f}",
            t0, 30)


def test_c08_physical_numbers(accept):
    t0 = time.perf_counter()
    p = phys.PhysicalParams.from_lab(trap_hz=70e3, spacing_um=5.0, c6_ghz_um6=88.0, species="K39")
    grad = phys.vdw_gradient(p)
    dist = phys.classical_distortion(p) * 1e9
    ok = abs(grad / 6.76e-3 - 1) <= 0.01 and abs(dist / 350 - 1) <= 0.05
    _finish(accept, 8, "physical numbers", ok,
            f"V' = {grad:.5e} GHz/um, distortion = {dist:.1f} nm", t0, 1)


def test_c09_sector_decoupling(accept):
    t0 = time.perf_counter()
    rows = sector_decoupling_check(ModelParams(rabi=1.0, n_max=0), 1.0, 0.0, [50, 100, 200])
    devs = [d for _, d in rows]
    ok = devs[0] > devs[1] > devs[2]
    _finish(accept, 9, "sector decoupling", ok,
            "deviations " + ", ".join(f"{d:.3e}" for d in devs), t0, 180)


def test_c10_kappa_parity(accept):
    t0 = time.perf_counter()
    levels = [
        lowest_eigenpairs(build_h_res(ModelParams(rabi=0.5, coupling=k, n_max=3)), 10, 1e-12,
                          vectors=False).eigenvalues
        for k in (0.3, -0.3)
    ]
    gap = float(np.abs(levels[0] - levels[1]).max())
    _finish(accept, 10, "kappa parity", gap <= 1e-10, f"max level gap {gap:.2e}", t0, 60)
