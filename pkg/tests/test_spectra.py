import json
import math

import numpy as np
import pytest
import scipy.sparse as sp

from rydjt.operators import ModelParams, SparseOperator, build_h_res
from rydjt.perturbation import e_gs2
from rydjt.spectra import (
    ConvergenceError,
    SweepError,
    degenerate_clusters,
    lowest_eigenpairs,
    nearest_eigenvalues,
    resolve_threads,
    sector_decoupling_check,
    spectrum_sweep,
)


def test_dense_and_lanczos_agree():
    h = build_h_res(ModelParams(rabi=0.7, coupling=0.4, n_max=2))
    a = lowest_eigenpairs(h, 6, 1e-12, method="dense").eigenvalues
    b = lowest_eigenpairs(h, 6, 1e-12, method="lanczos").eigenvalues
    assert np.allclose(a, b, atol=1e-9)


def test_zero_operator():
    res = lowest_eigenpairs(SparseOperator.zeros(5), 3)
    assert np.allclose(res.eigenvalues, 0.0)
    assert res.method == "dense"


def test_ring_levels_at_zero_coupling():
    res = lowest_eigenpairs(build_h_res(ModelParams(rabi=1.0, n_max=0)), 6)
    assert np.allclose(res.eigenvalues, [-2, -1, -1, 1, 1, 2])
    assert res.clusters() == [[0], [1, 2], [3, 4], [5]]


def test_residuals_reported():
    res = lowest_eigenpairs(build_h_res(ModelParams(rabi=1.0, coupling=0.2, n_max=3)), 4, 1e-12)
    assert res.method == "lanczos"
    assert np.all(res.residuals < 1e-8)


def test_bad_arguments():
    h = SparseOperator.zeros(4)
    with pytest.raises(ValueError):
        lowest_eigenpairs(h, 0)
    with pytest.raises(ValueError):
        lowest_eigenpairs(h, 5)
    with pytest.raises(ValueError):
        lowest_eigenpairs(h, 1, tol=0)
    with pytest.raises(ValueError):
        lowest_eigenpairs(h, 1, method="qr")


def test_lanczos_nonconvergence_raises():
    rng = np.random.default_rng(0)
    a = sp.random(3000, 3000, density=1e-3, random_state=1)
    a = a + a.T + sp.diags(rng.standard_normal(3000) * 1e-6)
    with pytest.raises(ConvergenceError) as info:
        lowest_eigenpairs(a, 6, 1e-14, method="lanczos", maxiter=2)
    assert info.value.best_residual > 0


def test_clusters_helper():
    assert degenerate_clusters([-1.0, -1.0 + 1e-13, 0.5]) == [[0, 1], [2]]


def test_nearest_eigenvalues():
    h = build_h_res(ModelParams(rabi=1.0, n_max=0))
    assert np.allclose(nearest_eigenvalues(h, 1.1, 2), [1, 1])


def test_sweep_without_coupling_follows_ring():
    params = ModelParams(rabi=0.0, coupling=0.0, n_max=1)
    grid = np.linspace(0.1, 1.0, 4)
    table = spectrum_sweep(params, grid, k=3, threads=1)
    assert np.allclose(table.levels[:, 0], -2 * grid, atol=1e-9)


def test_sweep_small_rabi_tends_to_jahn_teller_energy():
    kappa = 0.3
    table = spectrum_sweep(ModelParams(rabi=0.0, coupling=kappa, n_max=5), [1e-4], k=3, threads=1)
    assert table.levels[0, 0] == pytest.approx(-2 * kappa**2, abs=1e-6)


def test_rabi_equal_trap_matches_weak_coupling():
    kappa = 0.05
    table = spectrum_sweep(ModelParams(rabi=0.0, coupling=kappa, n_max=3), [1.0], k=1, threads=1)
    assert abs(table.levels[0, 0] - (-2 + e_gs2(kappa, 1, 1))) < 10 * kappa**4


def test_levels_stay_ordered():
    grid = np.linspace(0.0, 1.5, 7)
    table = spectrum_sweep(ModelParams(rabi=0.0, coupling=0.4, n_max=2), grid, k=6, threads=1)
    assert np.all(np.diff(table.levels, axis=1) >= -1e-12)


def test_sweep_rejects_bad_grid():
    with pytest.raises(ValueError):
        spectrum_sweep(ModelParams(rabi=0.0, n_max=0), [0.5, 0.2])
    with pytest.raises(ValueError):
        spectrum_sweep(ModelParams(rabi=0.0, n_max=0), [])


def test_sweep_error_names_rabi():
    with pytest.raises(SweepError) as info:
        spectrum_sweep(ModelParams(rabi=0.0, n_max=0), [0.3], k=7, threads=1)
    assert info.value.rabi == 0.3
    assert "0.3" in str(info.value)


def test_csv_format(tmp_path):
    table = spectrum_sweep(ModelParams(rabi=0.0, n_max=0), [0.5, 1.0], k=2, threads=1)
    path = tmp_path / "s.csv"
    table.to_csv(path)
    lines = path.read_text().splitlines()
    head = json.loads(lines[0][2:])
    assert head["format"] == "rydjt-1" and head["levels"] == 2
    assert lines[1] == "rabi,level_0,level_1"
    assert lines[2] == "0.5,-1,-0.5"


def test_sweep_deterministic_across_threads():
    params = ModelParams(rabi=0.0, coupling=0.3, n_max=3)
    grid = [0.2, 0.4, 0.6]
    a = spectrum_sweep(params, grid, k=3, threads=1).levels
    b = spectrum_sweep(params, grid, k=3, threads=2).levels
    assert np.array_equal(a, b)


def test_thread_env_override(monkeypatch):
    monkeypatch.setenv("RYDJT_THREADS", "3")
    assert resolve_threads(1) == 3
    monkeypatch.delenv("RYDJT_THREADS")
    assert resolve_threads(2) == 2


def test_sector_check_shrinks_with_detuning():
    rows = sector_decoupling_check(ModelParams(rabi=1.0, n_max=0), 1.0, 0.0, [50, 100, 200])
    devs = [d for _, d in rows]
    assert devs[0] > devs[1] > devs[2]
    # second-order leakage: the deviation roughly halves each time
    assert devs[1] / devs[0] == pytest.approx(0.5, rel=0.05)
