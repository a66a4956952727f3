"""Eigensolvers and spectrum sweeps for the vibronic Hamiltonians."""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .operators import (
    ModelParams,
    SparseOperator,
    build_h_full_linearized,
    build_h_res,
    build_ring_hopping,
)
from .basis import ProductBasis

DENSE_MAX_DIM = 2048
DEFAULT_SEED = 1234
FORMAT_VERSION = "rydjt-1"


class ConvergenceError(RuntimeError):
    """Iterative eigensolver failed; carries the best residual reached."""

    def __init__(self, message: str, best_residual: float = float("inf")):
        super().__init__(message)
        self.best_residual = best_residual


class SweepError(RuntimeError):
    def __init__(self, rabi: float, cause: Exception):
        super().__init__(f"eigensolve failed at rabi={rabi!r}: {cause}")
        self.rabi = rabi
        self.cause = cause


@dataclass
class EigenResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None
    residuals: np.ndarray
    method: str
    seed: int | None = None

    def clusters(self, rtol: float = 1e-9) -> list[list[int]]:
        return degenerate_clusters(self.eigenvalues, rtol)


def degenerate_clusters(values, rtol: float = 1e-9) -> list[list[int]]:
    """Group sorted eigenvalues that agree within ``rtol`` (relative, floor 1e-12)."""
    groups: list[list[int]] = []
    for i, v in enumerate(values):
        if groups:
            ref = values[groups[-1][-1]]
            if abs(v - ref) <= rtol * max(abs(v), abs(ref), 1e-3):
                groups[-1].append(i)
                continue
        groups.append([i])
    return groups


def _as_matrix(op) -> sp.csr_matrix:
    return op.matrix if isinstance(op, SparseOperator) else sp.csr_matrix(op)


def _residuals(A, vals, vecs) -> np.ndarray:
    return np.linalg.norm(A @ vecs - vecs * vals, axis=0)


def lowest_eigenpairs(
    op,
    k: int = 1,
    tol: float = 1e-10,
    *,
    method: str = "auto",
    seed: int = DEFAULT_SEED,
    maxiter: int | None = None,
    vectors: bool = True,
) -> EigenResult:
    """The ``k`` smallest eigenpairs of a real symmetric operator.

    ``method`` is ``"dense"``, ``"lanczos"`` or ``"auto"`` (dense up to
    ``DENSE_MAX_DIM``). The Lanczos start vector is drawn from ``seed`` so
    repeated calls are reproducible.
    """
    A = _as_matrix(op)
    dim = A.shape[0]
    if not 1 <= k <= dim:
        raise ValueError(f"need 1 <= k <= dim={dim}, got k={k}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if method == "auto":
        method = "dense" if dim <= DENSE_MAX_DIM else "lanczos"
    if method == "lanczos" and k >= dim - 1:
        method = "dense"

    if method == "dense":
        vals, vecs = np.linalg.eigh(A.toarray())
        vals, vecs = vals[:k], vecs[:, :k]
        res = _residuals(A, vals, vecs)
        return EigenResult(vals, vecs if vectors else None, res, "dense")

    if method != "lanczos":
        raise ValueError(f"unknown method {method!r}")
    rng = np.random.default_rng(seed)
    v0 = rng.standard_normal(dim)
    try:
        vals, vecs = eigsh(
            A, k=k, which="SA", tol=tol, v0=v0, maxiter=maxiter, ncv=min(dim, max(2 * k + 1, 24))
        )
    except ArpackNoConvergence as exc:
        best = np.inf
        if exc.eigenvectors is not None and exc.eigenvectors.size:
            best = float(_residuals(A, exc.eigenvalues, exc.eigenvectors).min())
        raise ConvergenceError(f"Lanczos did not converge for k={k}", best) from exc
    order = np.argsort(vals)
    vals, vecs = vals[order], vecs[:, order]
    res = _residuals(A, vals, vecs)
    scale = max(1.0, float(np.max(np.abs(vals))))
    if np.any(res > max(1e3 * tol, 1e-8) * scale):
        raise ConvergenceError("Lanczos residuals above tolerance", float(res.max()))
    return EigenResult(vals, vecs if vectors else None, res, "lanczos", seed)


def nearest_eigenvalues(op, target: float, k: int, *, seed: int = DEFAULT_SEED) -> np.ndarray:
    """Sorted ``k`` eigenvalues closest to ``target`` (shift-invert above the dense size)."""
    A = _as_matrix(op)
    dim = A.shape[0]
    if dim <= DENSE_MAX_DIM or k >= dim - 1:
        vals = np.linalg.eigvalsh(A.toarray())
        pick = np.argsort(np.abs(vals - target), kind="stable")[:k]
        return np.sort(vals[pick])
    v0 = np.random.default_rng(seed).standard_normal(dim)
    vals = eigsh(A.tocsc(), k=k, sigma=target, which="LM", v0=v0, return_eigenvectors=False)
    return np.sort(vals)


# -- sweeps -----------------------------------------------------------------


def resolve_threads(threads: int | None = None) -> int:
    env = os.environ.get("RYDJT_THREADS")
    if env:
        return max(1, int(env))
    if threads:
        return max(1, int(threads))
    return os.cpu_count() or 1


@dataclass
class SweepTable:
    axis: np.ndarray
    levels: np.ndarray
    params: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def header(self) -> dict:
        return {"format": FORMAT_VERSION, **self.params}

    def to_csv(self, path) -> None:
        k = self.levels.shape[1]
        cols = ["rabi"] + [f"level_{i}" for i in range(k)] + list(self.extra)
        with open(path, "w") as fh:
            fh.write("# " + json.dumps(self.header(), sort_keys=True) + "\n")
            fh.write(",".join(cols) + "\n")
            for i, x in enumerate(self.axis):
                row = [x, *self.levels[i], *(self.extra[c][i] for c in self.extra)]
                fh.write(",".join(f"{v:.12g}" for v in row) + "\n")


def spectrum_sweep(
    params: ModelParams,
    rabi_grid,
    k: int = 6,
    *,
    tol: float = 1e-10,
    seed: int = DEFAULT_SEED,
    threads: int | None = None,
) -> SweepTable:
    """Lowest ``k`` levels of the resonant Hamiltonian along a Rabi-frequency grid."""
    grid = np.asarray(rabi_grid, dtype=float)
    if grid.size == 0:
        raise ValueError("rabi grid is empty")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("rabi grid must be strictly increasing")

    # H(rabi) = H(0) + rabi * ring; both pieces are shared read-only
    fixed = build_h_res(params.with_(rabi=0.0)).matrix
    ring = build_ring_hopping(ProductBasis.resonant(params.n_max), 1.0).matrix

    def solve(rabi):
        try:
            return lowest_eigenpairs(
                fixed + rabi * ring, k, tol, seed=seed, vectors=False
            ).eigenvalues
        except Exception as exc:  # annotate with the failing grid point
            raise SweepError(float(rabi), exc) from exc

    n = resolve_threads(threads)
    if n == 1:
        rows = [solve(r) for r in grid]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            rows = list(pool.map(solve, grid))
    snapshot = {k_: v for k_, v in asdict(params).items() if v is not None}
    snapshot.update(levels=k, seed=seed, tol=tol)
    return SweepTable(grid, np.vstack(rows), snapshot)


def sector_decoupling_check(
    params: ModelParams,
    rabi: float,
    kappa: float,
    detunings,
    k: int = 6,
) -> list[tuple[float, float]]:
    """Deviation of the full-space levels near Δ from Δ + eig(H_res).

    For each detuning Δ the pair energy is set to -Δ (facilitation). Returns
    ``(Δ, max deviation)`` pairs.
    """
    base = params.with_(rabi=rabi, coupling=kappa)
    res_vals = nearest_eigenvalues(build_h_res(base), 0.0, k)
    out = []
    for delta in detunings:
        full = build_h_full_linearized(ModelParams.facilitated(
            delta, rabi=rabi, trap=base.trap, coupling=kappa, n_max=base.n_max
        ))
        centre = delta + float(np.mean(res_vals))
        full_vals = nearest_eigenvalues(full, centre, k)
        out.append((float(delta), float(np.max(np.abs(full_vals - (delta + res_vals))))))
    return out
